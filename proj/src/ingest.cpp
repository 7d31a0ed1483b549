#include "aerots/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "aerots/errors.hpp"

namespace aerots::ingest {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
}

AlignedLog resample_to_grid(const RawLog& raw, double rate_hz) {
    if (raw.rows() < 2) {
        throw EmptyLogError("log '" + raw.log_id + "' has fewer than 2 rows");
    }
    if (rate_hz <= 0.0) throw DataError("rate_hz must be positive");

    const double t0 = raw.times.front();
    const double t_last = raw.times.back();
    const double step = 1.0 / rate_hz;
    const double half_step = 0.5 * step;
    const std::size_t grid_rows =
        static_cast<std::size_t>(std::floor((t_last - t0) * rate_hz + 1e-9)) + 1;
    const std::size_t d = raw.channel_count();

    AlignedLog out;
    out.log_id = raw.log_id;
    out.rate_hz = rate_hz;
    out.channels = raw.channels;
    out.data.assign(grid_rows * d, kNan);
    out.labels.assign(grid_rows, 0);
    out.anomaly_types.assign(grid_rows, "");

    // Values: for each grid point, the nearest raw sample strictly within
    // half a step; the earlier sample wins exact-distance ties. Samples
    // within a relative 1e-9 of the half-step boundary count as outside so
    // binary rounding of the grid times cannot flip the exclusion.
    const double boundary = half_step * (1.0 - 1e-9);
    std::size_t cursor = 0;
    for (std::size_t k = 0; k < grid_rows; ++k) {
        const double tk = t0 + static_cast<double>(k) * step;
        while (cursor + 1 < raw.rows() &&
               std::abs(raw.times[cursor + 1] - tk) < std::abs(raw.times[cursor] - tk)) {
            ++cursor;
        }
        if (std::abs(raw.times[cursor] - tk) < boundary) {
            for (std::size_t c = 0; c < d; ++c) {
                out.data[c * grid_rows + k] = raw.value_at(cursor, c);
            }
        }
    }

    // Labels: every raw sample rounds into exactly one grid cell (clamped at
    // the ends), so raw anomaly presence is never dropped.
    for (std::size_t i = 0; i < raw.rows(); ++i) {
        if (raw.labels[i] == 0) continue;
        double cell = std::floor((raw.times[i] - t0) * rate_hz + 0.5);
        if (cell < 0.0) cell = 0.0;
        std::size_t k = static_cast<std::size_t>(cell);
        if (k >= grid_rows) k = grid_rows - 1;
        out.labels[k] = 1;
        if (out.anomaly_types[k].empty()) out.anomaly_types[k] = raw.anomaly_types[i];
    }

    out.intervals = intervals_from_labels(out.labels, out.anomaly_types);
    return out;
}

std::vector<std::string> select_channels(const std::vector<ChannelPresence>& usable_logs,
                                         double threshold) {
    if (usable_logs.empty()) throw DataError("select_channels needs at least one usable log");

    std::map<std::string, std::size_t> presence_count;
    for (const auto& log : usable_logs) {
        for (const auto& channel : log.channels_present) ++presence_count[channel];
    }

    const double required = threshold * static_cast<double>(usable_logs.size());
    std::vector<std::string> retained;
    for (const auto& [channel, count] : presence_count) {
        if (static_cast<double>(count) + 1e-9 >= required) retained.push_back(channel);
    }
    if (retained.empty()) {
        std::ostringstream os;
        os << "no channel present in >= " << threshold * 100.0 << "% of " << usable_logs.size()
           << " usable logs";
        throw NoChannelsRetainedError(os.str());
    }
    // std::map iteration already yields lexicographic order.
    return retained;
}

AlignedLog restrict_channels(const AlignedLog& log, const std::vector<std::string>& channels) {
    AlignedLog out;
    out.log_id = log.log_id;
    out.rate_hz = log.rate_hz;
    out.channels = channels;
    out.labels = log.labels;
    out.anomaly_types = log.anomaly_types;
    out.intervals = log.intervals;

    const std::size_t rows = log.rows();
    out.data.assign(rows * channels.size(), kNan);
    for (std::size_t c = 0; c < channels.size(); ++c) {
        const auto it = std::find(log.channels.begin(), log.channels.end(), channels[c]);
        if (it == log.channels.end()) continue;
        const std::size_t src = static_cast<std::size_t>(it - log.channels.begin());
        std::copy_n(log.data.data() + src * rows, rows, out.data.data() + c * rows);
    }
    return out;
}

AlignedLog impute(AlignedLog log) {
    const std::size_t rows = log.rows();
    for (std::size_t c = 0; c < log.channel_count(); ++c) {
        double* v = log.data.data() + c * rows;

        std::size_t first_finite = rows;
        for (std::size_t t = 0; t < rows; ++t) {
            if (std::isfinite(v[t])) {
                first_finite = t;
                break;
            }
        }
        if (first_finite == rows) {
            std::fill_n(v, rows, 0.0);
            continue;
        }

        std::fill_n(v, first_finite, v[first_finite]);

        std::size_t prev = first_finite;
        for (std::size_t t = first_finite + 1; t < rows; ++t) {
            if (!std::isfinite(v[t])) continue;
            if (t > prev + 1) {
                const double lo = v[prev];
                const double hi = v[t];
                const double span = static_cast<double>(t - prev);
                for (std::size_t k = prev + 1; k < t; ++k) {
                    v[k] = lo + (hi - lo) * (static_cast<double>(k - prev) / span);
                }
            }
            prev = t;
        }

        if (prev + 1 < rows) std::fill(v + prev + 1, v + rows, v[prev]);
    }
    return log;
}

StandardizationStats fit_standardizer(std::span<const AlignedLog> logs,
                                      const std::vector<std::vector<std::uint8_t>>& sample_mask) {
    if (logs.empty()) throw DataError("fit_standardizer needs at least one log");
    if (sample_mask.size() != logs.size()) {
        throw DataError("sample_mask count does not match log count");
    }

    const auto& channels = logs[0].channels;
    const std::size_t d = channels.size();
    for (const auto& log : logs) {
        if (log.channels != channels) {
            throw ChannelMismatchError("logs passed to fit_standardizer differ in channels");
        }
    }

    StandardizationStats stats;
    stats.channels = channels;
    stats.mean.assign(d, 0.0);
    stats.stddev.assign(d, 0.0);

    std::size_t count = 0;
    for (std::size_t i = 0; i < logs.size(); ++i) {
        const auto& mask = sample_mask[i];
        if (mask.size() != logs[i].rows()) {
            throw DataError("sample_mask length does not match log rows");
        }
        for (std::size_t t = 0; t < mask.size(); ++t) {
            if (!mask[t]) continue;
            ++count;
            for (std::size_t c = 0; c < d; ++c) stats.mean[c] += logs[i].at(t, c);
        }
    }
    if (count == 0) throw DataError("no training samples selected for standardization");
    for (std::size_t c = 0; c < d; ++c) stats.mean[c] /= static_cast<double>(count);

    for (std::size_t i = 0; i < logs.size(); ++i) {
        const auto& mask = sample_mask[i];
        for (std::size_t t = 0; t < mask.size(); ++t) {
            if (!mask[t]) continue;
            for (std::size_t c = 0; c < d; ++c) {
                const double dev = logs[i].at(t, c) - stats.mean[c];
                stats.stddev[c] += dev * dev;
            }
        }
    }
    for (std::size_t c = 0; c < d; ++c) {
        stats.stddev[c] =
            std::max(std::sqrt(stats.stddev[c] / static_cast<double>(count)),
                     StandardizationStats::kStdFloor);
    }
    return stats;
}

AlignedLog apply_standardizer(const AlignedLog& log, const StandardizationStats& stats) {
    if (log.channels != stats.channels) {
        throw ChannelMismatchError("standardizer channels do not match log '" + log.log_id + "'");
    }
    AlignedLog out = log;
    const std::size_t rows = out.rows();
    for (std::size_t c = 0; c < out.channel_count(); ++c) {
        double* v = out.data.data() + c * rows;
        const double m = stats.mean[c];
        const double inv = 1.0 / stats.stddev[c];
        for (std::size_t t = 0; t < rows; ++t) v[t] = (v[t] - m) * inv;
    }
    return out;
}

}  // namespace aerots::ingest
