#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "aerots/descriptors.hpp"

namespace aerots::gbdt {

struct BoostConfig {
    std::size_t max_trees = 1600;
    double learning_rate = 0.025;
    std::size_t max_leaves = 64;
    std::size_t min_child_samples = 80;
    double subsample = 0.9;
    double colsample = 0.75;
    double l1 = 0.2;
    double l2 = 8.0;
    bool class_balanced = true;
    std::size_t early_stopping_patience = 80;
    std::size_t histogram_bins = 255;
    std::uint64_t seed = 0;
};

struct TreeNode {
    std::int32_t left = -1;  // -1 on both children marks a leaf
    std::int32_t right = -1;
    std::int32_t feature = -1;
    std::int32_t threshold_bin = -1;  // left branch takes bin <= threshold_bin
    double threshold = 0.0;           // same split in value space: v <= threshold
    double leaf_value = 0.0;          // log-odds increment, learning rate folded in
    double gain = 0.0;
    std::uint32_t sample_count = 0;   // sampled rows routed through this node

    bool is_leaf() const { return left < 0; }
};

struct Tree {
    std::vector<TreeNode> nodes;  // node 0 is the root
};

struct BoostedModel {
    BoostConfig config;
    double base_score = 0.0;  // prior log-odds under the training class weights
    std::size_t best_iteration = 0;
    std::size_t trained_rounds = 0;
    double best_valid_ap = 0.0;
    std::vector<Tree> trees;  // truncated to best_iteration + 1
    std::vector<std::vector<double>> bin_upper_bounds;  // inner bin edges per feature
    std::vector<std::string> feature_names;
    std::vector<double> feature_gain;  // summed split gain over kept trees
    std::vector<double> train_loss;    // weighted mean logistic loss per round
    std::vector<double> valid_ap;      // validation average precision per round
};

// Histogram gradient boosting with leaf-wise growth, class-balanced logistic
// loss, per-tree row/column subsampling, L1 soft-thresholded leaf values with
// L2 shrinkage, and average-precision early stopping on the validation set.
// Bit-deterministic for fixed (data, config, seed) at any OpenMP worker
// count: parallel loops write disjoint ranges and reductions run over
// fixed-order chunks. Throws DegenerateLabelsError when either partition
// lacks a class and NonFiniteInputError on non-finite features.
BoostedModel fit(const descriptors::FeatureMatrix& train, std::span<const std::uint8_t> y_train,
                 const descriptors::FeatureMatrix& valid, std::span<const std::uint8_t> y_valid,
                 const BoostConfig& cfg);

// sigmoid(base + sum of kept-tree leaf values). Ranking scores, not
// calibrated posteriors. Throws WidthMismatchError.
std::vector<double> predict_scores(const BoostedModel& model,
                                   const descriptors::FeatureMatrix& features);

// Raw log-odds margins, same traversal as predict_scores.
std::vector<double> predict_margins(const BoostedModel& model,
                                    const descriptors::FeatureMatrix& features);

// Splits total split gain across user-defined families. `family_of_feature`
// maps each model feature to a family tag. Shares sum to 1; throws
// NoSplitsError when the model has no splits.
std::map<std::string, double> gain_shares(const BoostedModel& model,
                                          const std::vector<std::string>& family_of_feature);

// Cross-run aggregation: each run's shares are already normalized, so the
// combined share is the plain mean (absent families count as 0).
std::map<std::string, double> average_shares(
    const std::vector<std::map<std::string, double>>& runs);

}  // namespace aerots::gbdt
