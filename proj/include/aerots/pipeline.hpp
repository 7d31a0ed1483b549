#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "aerots/config.hpp"
#include "aerots/descriptors.hpp"
#include "aerots/gbdt.hpp"
#include "aerots/metrics.hpp"
#include "aerots/splits.hpp"

namespace aerots::pipeline {

// Filesystem layout under run.out_dir. Every artifact a command writes is
// reproducible byte-for-byte from the frozen config, so reruns are no-ops.
struct RunPaths {
    std::filesystem::path out;

    std::filesystem::path frozen_config() const { return out / "config_frozen.toml"; }
    std::filesystem::path data_dir() const { return out / "data"; }
    std::filesystem::path truth_dir() const { return out / "truth"; }
    std::filesystem::path manifest() const { return out / "manifest.json"; }
    std::filesystem::path aligned_dir() const { return out / "aligned"; }
    std::filesystem::path features_dir(const std::string& protocol, std::uint64_t seed) const;
    std::filesystem::path model_file(const std::string& method, const std::string& protocol,
                                     std::uint64_t seed) const;
    std::filesystem::path report_file(const std::string& method, const std::string& protocol,
                                      std::uint64_t seed) const;
    std::filesystem::path pr_curve_file(const std::string& method, const std::string& protocol,
                                        std::uint64_t seed) const;
    std::filesystem::path aggregate_csv() const { return out / "reports" / "aggregate.csv"; }
    std::filesystem::path ablation_table() const { return out / "ablation" / "table.csv"; }
    std::filesystem::path importance_json() const { return out / "importance" / "gain_shares.json"; }
    std::filesystem::path importance_csv() const { return out / "importance" / "gain_shares.csv"; }
};

// Method specs: "aerotsboost" (boosted detector, configured groups),
// "moments_only" (boosted detector on the moments group), "aerotsboost:<v>"
// with v in {full,moments_only,no_dynamics,no_autocorr,no_quantiles,
// no_endpoints}, "pca", "linear_sgd".
struct MethodSpec {
    std::string name;  // literal method string, also used in file paths
    enum class Kind { gbdt, pca, linear_sgd } kind = Kind::gbdt;
    descriptors::GroupSet groups = descriptors::GroupSet::all();
};

MethodSpec parse_method(const std::string& name);

descriptors::GroupSet parse_groups(const std::vector<std::string>& names);

// One protocol/seed feature file with its window bookkeeping.
struct FeatureBundle {
    descriptors::FeatureMatrix features;
    std::vector<std::uint8_t> labels;
    std::vector<eval::Partition> partitions;
    std::vector<eval::WindowRef> refs;
    std::vector<std::string> families;
    std::string protocol;
    std::uint64_t seed = 0;
};

FeatureBundle load_feature_bundle(const RunPaths& paths, const std::string& protocol,
                                  std::uint64_t seed);

// Commands; each throws ConfigError/DataError/MissingArtifactError on
// failure and writes its artifacts under run.out_dir.
void run_synth(const cfg::Config& config);
void run_prepare(const cfg::Config& config);
void run_featurize(const cfg::Config& config);
void run_train(const cfg::Config& config);
void run_evaluate(const cfg::Config& config);
void run_ablate(const cfg::Config& config);
void run_importance(const cfg::Config& config);

// Honors run.workers (config) or the AEROTS_WORKERS environment variable.
void apply_worker_config(const cfg::Config& config);

}  // namespace aerots::pipeline
