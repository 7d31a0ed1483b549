#pragma once

#include <filesystem>

#include "aerots/log_types.hpp"

namespace aerots {

// Log file contract: one CSV per log, header `time,label,anomaly_type,<channel...>`,
// time in seconds, missing values as empty fields, UTF-8, LF line endings.
// Fields must not contain commas; anomaly family tags are plain tokens.

// Throws DataError on malformed input (bad header, field-count mismatch,
// non-increasing timestamps, labels outside {0,1}).
RawLog read_log_csv(const std::filesystem::path& path);

void write_aligned_csv(const AlignedLog& log, const std::filesystem::path& path);

// Reads a file written by write_aligned_csv. The grid rate is recovered from
// the time column (snapped to the nearest 1e-6 Hz); anomaly intervals are
// rebuilt from the label column.
AlignedLog read_aligned_csv(const std::filesystem::path& path);

// RawLog serialization for generated datasets; same contract, arbitrary times.
void write_raw_csv(const RawLog& log, const std::filesystem::path& path);

}  // namespace aerots
