#include "aerots/log_types.hpp"

#include <cmath>
#include <sstream>

namespace aerots {

std::vector<AnomalyInterval> intervals_from_labels(std::span<const std::uint8_t> labels,
                                                   std::span<const std::string> anomaly_types) {
    std::vector<AnomalyInterval> intervals;
    const std::size_t n = labels.size();
    std::size_t t = 0;
    while (t < n) {
        if (labels[t] == 0) {
            ++t;
            continue;
        }
        AnomalyInterval run;
        run.begin = t;
        run.family = t < anomaly_types.size() ? anomaly_types[t] : std::string{};
        while (t < n && labels[t] != 0) ++t;
        run.end = t;
        intervals.push_back(std::move(run));
    }
    return intervals;
}

std::vector<std::uint8_t> labels_from_intervals(const std::vector<AnomalyInterval>& intervals,
                                                std::size_t rows) {
    std::vector<std::uint8_t> labels(rows, 0);
    for (const auto& run : intervals) {
        for (std::size_t t = run.begin; t < run.end && t < rows; ++t) labels[t] = 1;
    }
    return labels;
}

std::vector<std::string> validate_aligned_log(const AlignedLog& log) {
    std::vector<std::string> findings;
    auto add = [&findings](const std::string& msg) { findings.push_back(msg); };

    const std::size_t rows = log.rows();
    const std::size_t cols = log.channel_count();

    if (log.rate_hz <= 0.0) add("rate_hz must be positive");
    if (log.data.size() != rows * cols) {
        std::ostringstream os;
        os << "data size " << log.data.size() << " != rows*channels " << rows * cols;
        add(os.str());
    }
    if (log.anomaly_types.size() != rows) {
        std::ostringstream os;
        os << "anomaly_types length " << log.anomaly_types.size() << " != rows " << rows;
        add(os.str());
    }

    if (log.data.size() == rows * cols) {
        for (std::size_t c = 0; c < cols; ++c) {
            for (std::size_t t = 0; t < rows; ++t) {
                if (!std::isfinite(log.at(t, c))) {
                    std::ostringstream os;
                    os << "non-finite value at (t=" << t << ", c=" << c << ")";
                    add(os.str());
                }
            }
        }
    }

    for (std::size_t t = 0; t < rows; ++t) {
        if (log.labels[t] > 1) {
            std::ostringstream os;
            os << "label out of {0,1} at t=" << t;
            add(os.str());
        }
    }

    const auto expected = intervals_from_labels(log.labels, log.anomaly_types);
    if (expected.size() != log.intervals.size()) {
        std::ostringstream os;
        os << "interval/label mismatch: " << log.intervals.size() << " intervals vs "
           << expected.size() << " label runs";
        add(os.str());
    } else {
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (expected[i].begin != log.intervals[i].begin ||
                expected[i].end != log.intervals[i].end) {
                std::ostringstream os;
                os << "interval/label mismatch at interval " << i << ": stored ["
                   << log.intervals[i].begin << ", " << log.intervals[i].end << ") vs run ["
                   << expected[i].begin << ", " << expected[i].end << ")";
                add(os.str());
            }
        }
    }

    return findings;
}

}  // namespace aerots
