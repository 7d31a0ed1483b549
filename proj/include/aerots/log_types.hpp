#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace aerots {

// Sliding-window geometry: window length L, start stride r, and the
// look-ahead horizon H included in the labeling span.
struct WindowSpec {
    std::size_t length = 96;
    std::size_t stride = 8;
    std::size_t horizon = 12;
};

// Half-open run [begin, end) of consecutive anomalous samples.
struct AnomalyInterval {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::string family;

    bool operator==(const AnomalyInterval&) const = default;
};

// One flight's table before grid alignment. Values are row-major with NaN
// marking missing entries; timestamps must be strictly increasing.
struct RawLog {
    std::string log_id;
    std::vector<std::string> channels;
    std::vector<double> times;
    std::vector<double> values;  // rows() x channels.size(), row-major
    std::vector<std::uint8_t> labels;
    std::vector<std::string> anomaly_types;  // "" when unlabeled

    std::size_t rows() const { return times.size(); }
    std::size_t channel_count() const { return channels.size(); }
    double value_at(std::size_t row, std::size_t channel) const {
        return values[row * channels.size() + channel];
    }
};

// Fixed-rate multivariate series. Data is column-major (one contiguous run
// per channel) so window slicing per channel is a plain span. Instances are
// immutable after construction and safe to share across workers.
struct AlignedLog {
    std::string log_id;
    double rate_hz = 10.0;
    std::vector<std::string> channels;
    std::vector<double> data;  // column-major: data[c * rows() + t]
    std::vector<std::uint8_t> labels;
    std::vector<std::string> anomaly_types;
    std::vector<AnomalyInterval> intervals;

    std::size_t rows() const { return labels.size(); }
    std::size_t channel_count() const { return channels.size(); }

    double at(std::size_t t, std::size_t c) const { return data[c * rows() + t]; }
    double& at(std::size_t t, std::size_t c) { return data[c * rows() + t]; }

    std::span<const double> channel(std::size_t c) const {
        return {data.data() + c * rows(), rows()};
    }
};

// One labeled slice of an aligned log. `log_index` points into the owning
// WindowSet's log list; values are read through that log, never copied.
struct Window {
    std::size_t log_index = 0;
    std::size_t start = 0;
    std::uint8_t label = 0;
    std::string family;  // empty unless label == 1 and a family tag exists
};

struct LogManifestEntry {
    std::string log_id;
    std::string path;
    std::size_t row_count = 0;
    bool usable = false;
    std::string drop_reason;
};

struct DatasetManifest {
    std::vector<LogManifestEntry> logs;
    std::vector<std::string> retained_channels;
    double coverage_threshold = 0.60;
    double rate_hz = 10.0;
};

// Maximal runs of label==1; each run's family is the anomaly type of its
// first sample.
std::vector<AnomalyInterval> intervals_from_labels(std::span<const std::uint8_t> labels,
                                                   std::span<const std::string> anomaly_types);

std::vector<std::uint8_t> labels_from_intervals(const std::vector<AnomalyInterval>& intervals,
                                                std::size_t rows);

// Checks every AlignedLog invariant and returns one finding per violation
// (empty means the log is consistent). Never throws.
std::vector<std::string> validate_aligned_log(const AlignedLog& log);

}  // namespace aerots
