#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace aerots::eval {

// Window metrics operate on parallel score/label arrays and require both
// classes to be present (SingleClassError otherwise). AUROC and AP are
// invariant under strictly increasing score transforms.

// Mann-Whitney AUROC with ties counted half.
double auroc(std::span<const double> scores, std::span<const std::uint8_t> labels);

// Average precision: sum of (R_k - R_{k-1}) * P_k over descending-score
// thresholds, equal scores processed as one block.
double average_precision(std::span<const double> scores, std::span<const std::uint8_t> labels);

struct PrPoint {
    double recall = 0.0;
    double precision = 0.0;
    double threshold = 0.0;
};

// PR curve points at each distinct score threshold, descending.
std::vector<PrPoint> pr_curve(std::span<const double> scores,
                              std::span<const std::uint8_t> labels);

struct BestF1 {
    double f1 = 0.0;
    double threshold = 0.0;
};

// Max point-wise F1 over thresholds at midpoints between consecutive
// distinct scores plus +/-inf sentinels; prediction is score >= threshold.
// Returns the smallest threshold achieving the maximum.
BestF1 best_f1(std::span<const double> scores, std::span<const std::uint8_t> labels);

// Identifies a window inside its log's stride-ordered sequence, for event
// extraction over (possibly gappy) window subsets.
struct WindowRef {
    std::size_t log_index = 0;
    std::size_t ordinal = 0;
};

// Inclusive run [first, last] of consecutive ordinals within one log.
struct EventSpan {
    std::size_t log_index = 0;
    std::size_t first = 0;
    std::size_t last = 0;
};

// Maximal runs of flagged windows; runs break at log changes and ordinal
// gaps. `refs` must be sorted by (log_index, ordinal).
std::vector<EventSpan> extract_events(std::span<const WindowRef> refs,
                                      std::span<const std::uint8_t> flags);

struct EventScore {
    double f1 = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    std::size_t truth_events = 0;
    std::size_t predicted_events = 0;
    std::size_t matched_truth = 0;
    std::size_t matched_predicted = 0;
    // No truth and no predicted events: F1 reported as 1.0 with this flag
    // set so vacuous perfection stays visible.
    bool degenerate = false;
};

// Event-level F1: a predicted event matches when it overlaps >=1 truth
// event; each event counts once on its own side. Predictions are
// score >= threshold.
EventScore event_f1(std::span<const double> scores, std::span<const std::uint8_t> labels,
                    std::span<const WindowRef> refs, double threshold);

struct FamilyMetrics {
    std::string family;
    double auprc = 0.0;
    EventScore event;
    std::size_t positive_windows = 0;
};

// Per anomaly family f: AUPRC over family-f positives plus all negatives;
// event F1 against truth events restricted to family f at the global
// threshold (predicted events matching other families count as false
// alarms for f). Families are distinct non-empty window tags.
std::vector<FamilyMetrics> family_breakdown(std::span<const double> scores,
                                            std::span<const std::uint8_t> labels,
                                            std::span<const WindowRef> refs,
                                            std::span<const std::string> families,
                                            double threshold);

struct MeanStd {
    double mean = 0.0;
    double stddev = 0.0;  // sample std (n-1)
};

// Mean and sample standard deviation across seed-level values; needs >= 2.
MeanStd aggregate_seeds(std::span<const double> values);

}  // namespace aerots::eval
