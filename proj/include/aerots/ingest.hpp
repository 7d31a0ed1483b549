#pragma once

#include <span>
#include <string>
#include <vector>

#include "aerots/log_types.hpp"

namespace aerots::ingest {

// Per-channel affine normalization fitted on training-partition samples only.
struct StandardizationStats {
    std::vector<std::string> channels;
    std::vector<double> mean;
    std::vector<double> stddev;  // population std, floored at kStdFloor

    static constexpr double kStdFloor = 1e-8;
};

// Snaps a raw log onto a fixed-rate grid spanning [t_first, t_last]. Each
// grid point takes the nearest raw sample strictly within half a grid step
// (ties and gaps stay missing); a grid cell is labeled 1 when any raw
// label==1 sample rounds into it, so anomaly presence survives resampling.
// The output may still contain NaN and is meant to go through impute().
// Throws EmptyLogError for logs with fewer than 2 rows.
AlignedLog resample_to_grid(const RawLog& raw, double rate_hz);

struct ChannelPresence {
    std::string log_id;
    std::vector<std::string> channels_present;  // channels with >=1 non-missing value
};

// Keeps channels present in >= threshold * (usable log count) logs, the
// comparison being inclusive. The result is sorted lexicographically.
// Throws NoChannelsRetainedError when nothing survives.
std::vector<std::string> select_channels(const std::vector<ChannelPresence>& usable_logs,
                                         double threshold);

// Projects a log onto the target channel list. Channels missing from the
// source become all-NaN columns (and later impute() turns them into zeros).
AlignedLog restrict_channels(const AlignedLog& log, const std::vector<std::string>& channels);

// Per channel: linear interpolation across interior gaps, nearest-edge fill
// for leading/trailing gaps, all-zero for channels with no finite value at
// all. Idempotent; never touches finite entries.
AlignedLog impute(AlignedLog log);

// Two-pass mean/population-std over the samples flagged in `sample_mask`
// (one mask per log, aligned with `logs`), accumulated in fixed log-then-time
// order so the result does not depend on worker count.
StandardizationStats fit_standardizer(std::span<const AlignedLog> logs,
                                      const std::vector<std::vector<std::uint8_t>>& sample_mask);

// v -> (v - mean_c) / stddev_c. Throws ChannelMismatchError when the channel
// lists differ.
AlignedLog apply_standardizer(const AlignedLog& log, const StandardizationStats& stats);

}  // namespace aerots::ingest
