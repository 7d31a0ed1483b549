#include "aerots/baselines.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "aerots/errors.hpp"
#include "aerots/metrics.hpp"
#include "aerots/rng.hpp"

namespace aerots::baselines {

PcaDetector pca_fit(const descriptors::FeatureMatrix& train, double variance_target) {
    const std::size_t n = train.rows;
    const std::size_t d = train.cols;
    if (n < 2) throw DegenerateDataError("pca_fit needs at least 2 rows");

    PcaDetector det;
    det.dim = d;
    det.mean.assign(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < d; ++c) det.mean[c] += train.at(i, c);
    }
    for (double& m : det.mean) m /= static_cast<double>(n);

    Eigen::MatrixXd centered(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < d; ++c) centered(i, c) = train.at(i, c) - det.mean[c];
    }
    const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw DegenerateDataError("eigendecomposition failed");
    const Eigen::VectorXd eigenvalues = solver.eigenvalues();  // ascending
    const double total = std::max(eigenvalues.sum(), 0.0);
    if (total <= 0.0) throw DegenerateDataError("training rows have zero variance");

    const std::size_t max_k = d;
    double cumulative = 0.0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < max_k; ++i) {
        const double ev = std::max(eigenvalues(static_cast<Eigen::Index>(d - 1 - i)), 0.0);
        cumulative += ev;
        det.explained_ratio.push_back(ev / total);
        ++k;
        if (cumulative / total + 1e-12 >= variance_target) break;
    }
    det.components = k;

    det.basis.resize(k * d);
    for (std::size_t i = 0; i < k; ++i) {
        const auto v = solver.eigenvectors().col(static_cast<Eigen::Index>(d - 1 - i));
        for (std::size_t c = 0; c < d; ++c) det.basis[i * d + c] = v(static_cast<Eigen::Index>(c));
    }
    return det;
}

std::vector<double> pca_scores(const PcaDetector& det, const descriptors::FeatureMatrix& rows) {
    if (rows.cols != det.dim) throw WidthMismatchError("feature width does not match detector");
    std::vector<double> scores(rows.rows, 0.0);
    const std::int64_t n = static_cast<std::int64_t>(rows.rows);
#pragma omp parallel
    {
        // Explicit residual vector; the ||r||^2 - ||proj||^2 shortcut loses
        // too many digits for points near the subspace.
        std::vector<double> residual(det.dim);
#pragma omp for schedule(static)
        for (std::int64_t i = 0; i < n; ++i) {
            const auto row = rows.row(static_cast<std::size_t>(i));
            for (std::size_t c = 0; c < det.dim; ++c) residual[c] = row[c] - det.mean[c];
            for (std::size_t k = 0; k < det.components; ++k) {
                const double* b = det.basis.data() + k * det.dim;
                double dot = 0.0;
                for (std::size_t c = 0; c < det.dim; ++c) dot += residual[c] * b[c];
                for (std::size_t c = 0; c < det.dim; ++c) residual[c] -= dot * b[c];
            }
            double norm_sq = 0.0;
            for (std::size_t c = 0; c < det.dim; ++c) norm_sq += residual[c] * residual[c];
            scores[static_cast<std::size_t>(i)] = std::sqrt(norm_sq);
        }
    }
    return scores;
}

std::vector<double> minmax_normalize(std::span<const double> scores) {
    std::vector<double> out(scores.begin(), scores.end());
    if (out.empty()) return out;
    const auto [mn, mx] = std::minmax_element(out.begin(), out.end());
    const double lo = *mn;
    const double span = *mx - lo;
    for (double& s : out) s = span > 0.0 ? (s - lo) / span : 0.0;
    return out;
}

LinearSgdModel sgd_fit(const descriptors::FeatureMatrix& train,
                       std::span<const std::uint8_t> y_train,
                       const descriptors::FeatureMatrix& valid,
                       std::span<const std::uint8_t> y_valid, const SgdConfig& cfg) {
    const std::size_t n = train.rows;
    const std::size_t d = train.cols;
    {
        std::size_t pos = 0;
        for (const auto y : y_train) pos += y;
        if (pos == 0 || pos == n) throw DegenerateLabelsError("sgd_fit needs both classes");
    }

    LinearSgdModel model;
    model.config = cfg;
    model.weights.assign(d, 0.0);
    if (!cfg.initial_weights.empty()) {
        if (cfg.initial_weights.size() != d) {
            throw WidthMismatchError("initial_weights length does not match feature count");
        }
        model.weights = cfg.initial_weights;
    }

    double w_pos = 1.0;
    double w_neg = 1.0;
    if (cfg.class_balanced) {
        std::size_t n_pos = 0;
        for (const auto y : y_train) n_pos += y;
        w_pos = static_cast<double>(n) / (2.0 * static_cast<double>(n_pos));
        w_neg = static_cast<double>(n) / (2.0 * static_cast<double>(n - n_pos));
    }

    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    Rng rng = Rng::derive(cfg.seed, 0x59d);

    const double l1 = cfg.alpha * cfg.l1_ratio;
    const double l2 = cfg.alpha * (1.0 - cfg.l1_ratio);
    std::size_t t = 0;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order);
        for (const std::uint32_t i : order) {
            ++t;
            const double eta = cfg.eta0 / std::pow(static_cast<double>(t), cfg.power_t);
            const auto row = train.row(i);
            double margin = model.bias;
            for (std::size_t c = 0; c < d; ++c) margin += model.weights[c] * row[c];
            const double p = 1.0 / (1.0 + std::exp(-margin));
            const double cw = y_train[i] ? w_pos : w_neg;
            const double residual = cw * (p - static_cast<double>(y_train[i]));
            for (std::size_t c = 0; c < d; ++c) {
                double w = model.weights[c];
                w -= eta * (residual * row[c] + l2 * w + l1 * (w > 0.0 ? 1.0 : (w < 0.0 ? -1.0 : 0.0)));
                model.weights[c] = w;
            }
            model.bias -= eta * residual;  // no penalty on the intercept
        }
    }

    if (valid.rows > 0) {
        const auto scores = sgd_scores(model, valid);
        model.valid_ap = eval::average_precision(scores, y_valid);
    }
    return model;
}

std::vector<double> sgd_scores(const LinearSgdModel& model,
                               const descriptors::FeatureMatrix& rows) {
    if (rows.cols != model.weights.size()) {
        throw WidthMismatchError("feature width does not match linear model");
    }
    std::vector<double> scores(rows.rows, 0.0);
    const std::int64_t n = static_cast<std::int64_t>(rows.rows);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto row = rows.row(static_cast<std::size_t>(i));
        double margin = model.bias;
        for (std::size_t c = 0; c < row.size(); ++c) margin += model.weights[c] * row[c];
        scores[static_cast<std::size_t>(i)] = 1.0 / (1.0 + std::exp(-margin));
    }
    return scores;
}

}  // namespace aerots::baselines
