#include "oracles.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

namespace oracles {

double auroc_pairwise(std::span<const double> scores, std::span<const std::uint8_t> labels) {
    double wins = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!labels[i]) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j]) continue;
            ++pairs;
            if (scores[i] > scores[j]) wins += 1.0;
            else if (scores[i] == scores[j]) wins += 0.5;
        }
    }
    return wins / static_cast<double>(pairs);
}

namespace {

struct Counts {
    double tp = 0.0;
    double fp = 0.0;
    double fn = 0.0;
};

Counts counts_at(std::span<const double> scores, std::span<const std::uint8_t> labels,
                 double threshold) {
    Counts c;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool predicted = scores[i] >= threshold;
        if (predicted && labels[i]) c.tp += 1.0;
        else if (predicted && !labels[i]) c.fp += 1.0;
        else if (!predicted && labels[i]) c.fn += 1.0;
    }
    return c;
}

}  // namespace

double average_precision_naive(std::span<const double> scores,
                               std::span<const std::uint8_t> labels) {
    // Thresholds are the distinct scores, descending; precision and recall
    // recomputed from scratch at each one.
    std::set<double, std::greater<double>> thresholds(scores.begin(), scores.end());
    double total_pos = 0.0;
    for (const auto y : labels) total_pos += y;

    double ap = 0.0;
    double prev_recall = 0.0;
    for (const double thr : thresholds) {
        const Counts c = counts_at(scores, labels, thr);
        const double recall = c.tp / total_pos;
        const double precision = c.tp / (c.tp + c.fp);
        ap += (recall - prev_recall) * precision;
        prev_recall = recall;
    }
    return ap;
}

BestF1Naive best_f1_exhaustive(std::span<const double> scores,
                               std::span<const std::uint8_t> labels) {
    std::vector<double> distinct(scores.begin(), scores.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    std::vector<double> thresholds;
    thresholds.push_back(-std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i + 1 < distinct.size(); ++i) {
        thresholds.push_back(distinct[i] + (distinct[i + 1] - distinct[i]) / 2.0);
    }
    thresholds.push_back(std::numeric_limits<double>::infinity());

    BestF1Naive best;
    best.f1 = -1.0;
    for (const double thr : thresholds) {
        const Counts c = counts_at(scores, labels, thr);
        const double denom = 2.0 * c.tp + c.fp + c.fn;
        const double f1 = denom > 0.0 ? 2.0 * c.tp / denom : 0.0;
        if (f1 > best.f1) {
            best.f1 = f1;
            best.threshold = thr;
        }
    }
    return best;
}

double event_f1_naive(std::span<const double> scores, std::span<const std::uint8_t> labels,
                      std::span<const aerots::eval::WindowRef> refs, double threshold) {
    using Event = std::pair<std::size_t, std::pair<std::size_t, std::size_t>>;  // log, [a,b]
    const auto build_events = [&](const std::vector<bool>& flag) {
        std::vector<Event> events;
        for (std::size_t i = 0; i < refs.size(); ++i) {
            if (!flag[i]) continue;
            bool extends = false;
            if (!events.empty()) {
                const auto& [log, span] = events.back();
                if (log == refs[i].log_index && span.second + 1 == refs[i].ordinal) extends = true;
            }
            if (extends) events.back().second.second = refs[i].ordinal;
            else events.push_back({refs[i].log_index, {refs[i].ordinal, refs[i].ordinal}});
        }
        return events;
    };

    std::vector<bool> truth_flag(refs.size());
    std::vector<bool> pred_flag(refs.size());
    for (std::size_t i = 0; i < refs.size(); ++i) {
        truth_flag[i] = labels[i] != 0;
        pred_flag[i] = scores[i] >= threshold;
    }
    const auto truth = build_events(truth_flag);
    const auto predicted = build_events(pred_flag);
    if (truth.empty() && predicted.empty()) return 1.0;
    if (truth.empty() || predicted.empty()) return 0.0;

    const auto overlap = [](const Event& a, const Event& b) {
        return a.first == b.first && a.second.first <= b.second.second &&
               b.second.first <= a.second.second;
    };
    std::size_t matched_pred = 0;
    for (const auto& p : predicted) {
        for (const auto& t : truth) {
            if (overlap(p, t)) {
                ++matched_pred;
                break;
            }
        }
    }
    std::size_t matched_truth = 0;
    for (const auto& t : truth) {
        for (const auto& p : predicted) {
            if (overlap(t, p)) {
                ++matched_truth;
                break;
            }
        }
    }
    const double precision =
        static_cast<double>(matched_pred) / static_cast<double>(predicted.size());
    const double recall = static_cast<double>(matched_truth) / static_cast<double>(truth.size());
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

}  // namespace oracles
