#include "aerots/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "aerots/errors.hpp"

namespace aerots::eval {

namespace {

void check_two_classes(std::span<const std::uint8_t> labels) {
    std::size_t pos = 0;
    for (const auto y : labels) pos += y;
    if (pos == 0 || pos == labels.size()) {
        throw SingleClassError("metric needs both classes present");
    }
}

std::vector<std::size_t> descending_order(std::span<const double> scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    return order;
}

}  // namespace

double auroc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
    check_two_classes(labels);
    const std::size_t n = scores.size();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Rank-sum form of the Mann-Whitney U statistic; tie blocks get their
    // average 1-based rank, which counts tied pos/neg pairs as half.
    double pos_rank_sum = 0.0;
    std::size_t total_pos = 0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // mean of i+1 .. j
        for (std::size_t k = i; k < j; ++k) {
            if (labels[order[k]]) {
                pos_rank_sum += avg_rank;
                ++total_pos;
            }
        }
        i = j;
    }
    const double n_pos = static_cast<double>(total_pos);
    const double n_neg = static_cast<double>(n - total_pos);
    const double u_stat = pos_rank_sum - n_pos * (n_pos + 1.0) / 2.0;
    return u_stat / (n_pos * n_neg);
}

double average_precision(std::span<const double> scores, std::span<const std::uint8_t> labels) {
    check_two_classes(labels);
    const auto order = descending_order(scores);
    const std::size_t n = scores.size();

    std::size_t total_pos = 0;
    for (const auto y : labels) total_pos += y;

    double ap = 0.0;
    double tp = 0.0;
    double fp = 0.0;
    double prev_recall = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        for (std::size_t k = i; k < j; ++k) {
            if (labels[order[k]]) tp += 1.0;
            else fp += 1.0;
        }
        const double recall = tp / static_cast<double>(total_pos);
        const double precision = tp / (tp + fp);
        ap += (recall - prev_recall) * precision;
        prev_recall = recall;
        i = j;
    }
    return ap;
}

std::vector<PrPoint> pr_curve(std::span<const double> scores,
                              std::span<const std::uint8_t> labels) {
    check_two_classes(labels);
    const auto order = descending_order(scores);
    const std::size_t n = scores.size();

    std::size_t total_pos = 0;
    for (const auto y : labels) total_pos += y;

    std::vector<PrPoint> curve;
    double tp = 0.0;
    double fp = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        for (std::size_t k = i; k < j; ++k) {
            if (labels[order[k]]) tp += 1.0;
            else fp += 1.0;
        }
        PrPoint p;
        p.threshold = scores[order[i]];
        p.recall = tp / static_cast<double>(total_pos);
        p.precision = tp / (tp + fp);
        curve.push_back(p);
        i = j;
    }
    return curve;
}

BestF1 best_f1(std::span<const double> scores, std::span<const std::uint8_t> labels) {
    check_two_classes(labels);
    const auto order = descending_order(scores);
    const std::size_t n = scores.size();

    std::size_t total_pos = 0;
    for (const auto y : labels) total_pos += y;

    // Candidate thresholds, ascending: -inf, midpoints between distinct
    // scores, +inf. Walking the descending order from the back gives the
    // ascending sweep; strict ">" keeps the smallest maximizing threshold.
    std::vector<double> distinct;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == 0 || scores[order[i]] != scores[order[i - 1]]) distinct.push_back(scores[order[i]]);
    }
    std::reverse(distinct.begin(), distinct.end());  // ascending

    std::vector<double> thresholds;
    thresholds.push_back(-std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i + 1 < distinct.size(); ++i) {
        thresholds.push_back(distinct[i] + (distinct[i + 1] - distinct[i]) / 2.0);
    }
    thresholds.push_back(std::numeric_limits<double>::infinity());

    BestF1 best;
    best.f1 = -1.0;
    for (const double thr : thresholds) {
        double tp = 0.0;
        double fp = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (scores[i] >= thr) {
                if (labels[i]) tp += 1.0;
                else fp += 1.0;
            }
        }
        const double fn = static_cast<double>(total_pos) - tp;
        const double denom = 2.0 * tp + fp + fn;
        const double f1 = denom > 0.0 ? 2.0 * tp / denom : 0.0;
        if (f1 > best.f1) {
            best.f1 = f1;
            best.threshold = thr;
        }
    }
    return best;
}

std::vector<EventSpan> extract_events(std::span<const WindowRef> refs,
                                      std::span<const std::uint8_t> flags) {
    std::vector<EventSpan> events;
    const std::size_t n = refs.size();
    std::size_t i = 0;
    while (i < n) {
        if (!flags[i]) {
            ++i;
            continue;
        }
        EventSpan ev;
        ev.log_index = refs[i].log_index;
        ev.first = refs[i].ordinal;
        ev.last = refs[i].ordinal;
        std::size_t j = i + 1;
        while (j < n && flags[j] && refs[j].log_index == ev.log_index &&
               refs[j].ordinal == refs[j - 1].ordinal + 1) {
            ev.last = refs[j].ordinal;
            ++j;
        }
        events.push_back(ev);
        i = j;
    }
    return events;
}

namespace {

bool overlaps(const EventSpan& a, const EventSpan& b) {
    return a.log_index == b.log_index && a.first <= b.last && b.first <= a.last;
}

EventScore score_events(const std::vector<EventSpan>& truth,
                        const std::vector<EventSpan>& predicted) {
    EventScore out;
    out.truth_events = truth.size();
    out.predicted_events = predicted.size();

    for (const auto& p : predicted) {
        for (const auto& t : truth) {
            if (overlaps(p, t)) {
                ++out.matched_predicted;
                break;
            }
        }
    }
    for (const auto& t : truth) {
        for (const auto& p : predicted) {
            if (overlaps(t, p)) {
                ++out.matched_truth;
                break;
            }
        }
    }

    if (truth.empty() && predicted.empty()) {
        out.degenerate = true;
        out.f1 = 1.0;
        out.precision = 1.0;
        out.recall = 1.0;
        return out;
    }
    out.precision = predicted.empty()
                        ? 0.0
                        : static_cast<double>(out.matched_predicted) /
                              static_cast<double>(predicted.size());
    out.recall = truth.empty() ? 0.0
                               : static_cast<double>(out.matched_truth) /
                                     static_cast<double>(truth.size());
    out.f1 = (out.precision + out.recall) > 0.0
                 ? 2.0 * out.precision * out.recall / (out.precision + out.recall)
                 : 0.0;
    return out;
}

}  // namespace

EventScore event_f1(std::span<const double> scores, std::span<const std::uint8_t> labels,
                    std::span<const WindowRef> refs, double threshold) {
    std::vector<std::uint8_t> predicted(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) predicted[i] = scores[i] >= threshold ? 1 : 0;
    const auto truth_events = extract_events(refs, labels);
    const auto predicted_events = extract_events(refs, predicted);
    return score_events(truth_events, predicted_events);
}

std::vector<FamilyMetrics> family_breakdown(std::span<const double> scores,
                                            std::span<const std::uint8_t> labels,
                                            std::span<const WindowRef> refs,
                                            std::span<const std::string> families,
                                            double threshold) {
    std::vector<std::string> family_names;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] && !families[i].empty()) family_names.push_back(families[i]);
    }
    std::sort(family_names.begin(), family_names.end());
    family_names.erase(std::unique(family_names.begin(), family_names.end()),
                       family_names.end());

    std::vector<std::uint8_t> predicted(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) predicted[i] = scores[i] >= threshold ? 1 : 0;
    const auto predicted_events = extract_events(refs, predicted);

    std::vector<FamilyMetrics> out;
    for (const auto& family : family_names) {
        FamilyMetrics fm;
        fm.family = family;

        // AUPRC over this family's positives plus every negative window.
        std::vector<double> sub_scores;
        std::vector<std::uint8_t> sub_labels;
        for (std::size_t i = 0; i < scores.size(); ++i) {
            if (labels[i] && families[i] != family) continue;
            sub_scores.push_back(scores[i]);
            sub_labels.push_back(labels[i]);
            fm.positive_windows += labels[i];
        }
        fm.auprc = average_precision(sub_scores, sub_labels);

        // Truth events restricted to this family; predictions unchanged.
        std::vector<std::uint8_t> family_labels(labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i) {
            family_labels[i] = (labels[i] && families[i] == family) ? 1 : 0;
        }
        const auto truth_events = extract_events(refs, family_labels);
        fm.event = score_events(truth_events, predicted_events);
        out.push_back(std::move(fm));
    }
    return out;
}

MeanStd aggregate_seeds(std::span<const double> values) {
    if (values.size() < 2) throw DataError("aggregate_seeds needs at least 2 values");
    MeanStd out;
    for (const double v : values) out.mean += v;
    out.mean /= static_cast<double>(values.size());
    double sq = 0.0;
    for (const double v : values) sq += (v - out.mean) * (v - out.mean);
    out.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
    return out;
}

}  // namespace aerots::eval
