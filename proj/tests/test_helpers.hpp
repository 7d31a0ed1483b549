#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "aerots/log_types.hpp"
#include "aerots/rng.hpp"

namespace test_helpers {

// Aligned log with data filled from f(t, c); labels default to all-zero.
inline aerots::AlignedLog make_log(const std::string& id, std::size_t rows, std::size_t channels,
                                   const std::function<double(std::size_t, std::size_t)>& f,
                                   std::vector<std::uint8_t> labels = {}) {
    aerots::AlignedLog log;
    log.log_id = id;
    log.channels.reserve(channels);
    for (std::size_t c = 0; c < channels; ++c) log.channels.push_back("c" + std::to_string(c));
    log.data.resize(rows * channels);
    for (std::size_t c = 0; c < channels; ++c) {
        for (std::size_t t = 0; t < rows; ++t) log.data[c * rows + t] = f(t, c);
    }
    log.labels = labels.empty() ? std::vector<std::uint8_t>(rows, 0) : std::move(labels);
    log.anomaly_types.assign(rows, "");
    for (std::size_t t = 0; t < rows; ++t) {
        if (log.labels[t]) log.anomaly_types[t] = "fault";
    }
    log.intervals = aerots::intervals_from_labels(log.labels, log.anomaly_types);
    return log;
}

// Random scores with deliberate ties via quantization, plus random labels
// with at least one member of each class.
inline void random_instance(aerots::Rng& rng, std::size_t n, std::vector<double>& scores,
                            std::vector<std::uint8_t>& labels) {
    scores.resize(n);
    labels.resize(n);
    const bool quantize = rng.uniform01() < 0.5;
    for (std::size_t i = 0; i < n; ++i) {
        double s = rng.uniform01();
        if (quantize) s = std::round(s * 8.0) / 8.0;
        scores[i] = s;
        labels[i] = rng.uniform01() < 0.3 ? 1 : 0;
    }
    labels[rng.uniform_index(n)] = 1;
    labels[rng.uniform_index(n)] = 0;
    std::size_t pos = 0;
    for (const auto y : labels) pos += y;
    if (pos == n) labels[0] = 0;
    if (pos == 0) labels[0] = 1;
}

}  // namespace test_helpers
