#pragma once

#include <filesystem>
#include <nlohmann/json_fwd.hpp>

#include "aerots/baselines.hpp"
#include "aerots/gbdt.hpp"

namespace aerots::model_io {

// All detectors share one JSON schema family: a top-level "schema_version"
// and "detector_kind" tag ("gbdt" | "pca" | "linear_sgd"), then kind-specific
// payload. Tree nodes serialize as fixed-order arrays
// [left, right, feature, threshold_bin, threshold, leaf_value, gain, count].

nlohmann::json to_json(const gbdt::BoostedModel& model);
gbdt::BoostedModel gbdt_from_json(const nlohmann::json& j);

nlohmann::json to_json(const baselines::PcaDetector& det);
baselines::PcaDetector pca_from_json(const nlohmann::json& j);

nlohmann::json to_json(const baselines::LinearSgdModel& model);
baselines::LinearSgdModel sgd_from_json(const nlohmann::json& j);

void save_json(const nlohmann::json& j, const std::filesystem::path& path);

// Throws MissingArtifactError when the file does not exist and DataError on
// unparsable content.
nlohmann::json load_json(const std::filesystem::path& path);

// detector_kind of a saved model file.
std::string detector_kind(const nlohmann::json& j);

}  // namespace aerots::model_io
