#pragma once

#include <filesystem>
#include <nlohmann/json_fwd.hpp>

#include "aerots/descriptors.hpp"

namespace aerots::feature_io {

// Feature matrices persist as a columnar binary file (little-endian doubles,
// column-major after a small header) plus a JSON sidecar carrying column
// names, descriptor groups, the channel map, and any caller-provided extras
// (window index, labels, split partitions).

void write_features(const descriptors::FeatureMatrix& fm, const std::filesystem::path& bin_path,
                    const std::filesystem::path& sidecar_path, const nlohmann::json& extra);

descriptors::FeatureMatrix read_features(const std::filesystem::path& bin_path,
                                         const std::filesystem::path& sidecar_path,
                                         nlohmann::json* sidecar_out = nullptr);

// CSV emission for small runs: header row of column names, then values.
void write_features_csv(const descriptors::FeatureMatrix& fm,
                        const std::filesystem::path& path);

}  // namespace aerots::feature_io
