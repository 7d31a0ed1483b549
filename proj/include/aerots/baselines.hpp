#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "aerots/descriptors.hpp"

namespace aerots::baselines {

// Reconstruction-error detector over a low-dimensional PCA subspace.
struct PcaDetector {
    std::vector<double> mean;   // feature means from the training rows
    std::vector<double> basis;  // components x dim, row-major, orthonormal rows
    std::size_t components = 0;
    std::size_t dim = 0;
    std::vector<double> explained_ratio;  // per retained component
};

// Keeps the smallest component count whose cumulative explained variance
// reaches `variance_target`. Throws DegenerateDataError when the training
// rows carry no variance at all.
PcaDetector pca_fit(const descriptors::FeatureMatrix& train, double variance_target = 0.95);

// L2 reconstruction error per row; higher means more anomalous. Throws
// WidthMismatchError.
std::vector<double> pca_scores(const PcaDetector& det, const descriptors::FeatureMatrix& rows);

// Min-max rescale to [0,1] for report files; rank metrics are unaffected.
std::vector<double> minmax_normalize(std::span<const double> scores);

struct SgdConfig {
    std::size_t epochs = 30;
    double alpha = 1e-4;     // elastic-net strength
    double l1_ratio = 0.15;
    double eta0 = 0.01;      // inverse-scaling step: eta0 / t^power_t
    double power_t = 0.5;
    bool class_balanced = true;
    std::uint64_t seed = 0;
    std::vector<double> initial_weights;  // empty = zeros
};

struct LinearSgdModel {
    SgdConfig config;
    std::vector<double> weights;
    double bias = 0.0;
    double valid_ap = 0.0;  // diagnostic, computed once after the last epoch
};

// Logistic loss plus elastic-net penalty minimized by seeded epoch-shuffled
// SGD with the same class-weight rule as the boosted detector.
// Bit-deterministic for a fixed seed. Throws DegenerateLabelsError.
LinearSgdModel sgd_fit(const descriptors::FeatureMatrix& train,
                       std::span<const std::uint8_t> y_train,
                       const descriptors::FeatureMatrix& valid,
                       std::span<const std::uint8_t> y_valid, const SgdConfig& cfg);

// sigmoid(w.x + b) per row.
std::vector<double> sgd_scores(const LinearSgdModel& model,
                               const descriptors::FeatureMatrix& rows);

}  // namespace aerots::baselines
