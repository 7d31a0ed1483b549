#include "aerots/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "aerots/errors.hpp"
#include "aerots/metrics.hpp"
#include "aerots/rng.hpp"

namespace aerots::gbdt {

namespace {

constexpr std::size_t kHistStride = 256;  // bin ids are uint8, bins <= 255

double soft_threshold(double g, double alpha) {
    if (g > alpha) return g - alpha;
    if (g < -alpha) return g + alpha;
    return 0.0;
}

double split_score(double g, double h, double l1, double l2) {
    const double t = soft_threshold(g, l1);
    return t * t / (h + l2);
}

double stable_sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// log(1 + exp(x)) without overflow.
double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

// Fixed-order chunked reduction: per-chunk partials are computed in
// parallel, then combined serially in chunk order, so the result is
// independent of the OpenMP worker count.
template <typename Term>
double chunked_sum(std::size_t n, Term&& term) {
    constexpr std::size_t kChunk = 8192;
    const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
    std::vector<double> partial(n_chunks, 0.0);
    const std::int64_t nc = static_cast<std::int64_t>(n_chunks);
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < nc; ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
        const std::size_t hi = std::min(lo + kChunk, n);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += term(i);
        partial[static_cast<std::size_t>(c)] = s;
    }
    double total = 0.0;
    for (const double p : partial) total += p;
    return total;
}

// Equal-frequency inner bin edges (bin i covers v <= edges[i]); bin count is
// edges.size() + 1 and bin 0 holds the smallest values.
std::vector<double> equal_frequency_edges(std::vector<double> values, std::size_t max_bins) {
    std::sort(values.begin(), values.end());

    std::vector<double> distinct;
    std::vector<std::size_t> cum_count;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (distinct.empty() || values[i] != distinct.back()) {
            distinct.push_back(values[i]);
            cum_count.push_back(i + 1);
        } else {
            cum_count.back() = i + 1;
        }
    }

    auto midpoint = [](double lo, double hi) {
        double mid = lo + (hi - lo) / 2.0;
        if (!(mid < hi)) mid = lo;  // adjacent doubles: keep the edge inclusive of lo only
        return mid;
    };

    std::vector<double> edges;
    if (distinct.size() <= max_bins) {
        for (std::size_t i = 0; i + 1 < distinct.size(); ++i) {
            edges.push_back(midpoint(distinct[i], distinct[i + 1]));
        }
        return edges;
    }

    const double per_bin = static_cast<double>(values.size()) / static_cast<double>(max_bins);
    double next_target = per_bin;
    for (std::size_t i = 0; i + 1 < distinct.size(); ++i) {
        if (static_cast<double>(cum_count[i]) + 1e-9 >= next_target) {
            edges.push_back(midpoint(distinct[i], distinct[i + 1]));
            while (next_target <= static_cast<double>(cum_count[i]) + 1e-9) next_target += per_bin;
            if (edges.size() + 1 >= max_bins) break;
        }
    }
    return edges;
}

std::uint8_t bin_of(double v, const std::vector<double>& edges) {
    const auto it = std::lower_bound(edges.begin(), edges.end(), v);
    return static_cast<std::uint8_t>(it - edges.begin());
}

struct ClassWeights {
    double pos = 1.0;
    double neg = 1.0;
};

ClassWeights class_weights(std::span<const std::uint8_t> y, bool balanced) {
    ClassWeights w;
    if (!balanced) return w;
    std::size_t n_pos = 0;
    for (const auto v : y) n_pos += v;
    const double n = static_cast<double>(y.size());
    w.pos = n / (2.0 * static_cast<double>(n_pos));
    w.neg = n / (2.0 * static_cast<double>(y.size() - n_pos));
    return w;
}

// One pending leaf during leaf-wise growth. Histograms stay alive until the
// leaf is split (children reuse them via subtraction) or the tree ends.
struct BuildLeaf {
    std::int32_t node = -1;
    std::vector<std::uint32_t> rows;
    double sum_g = 0.0;
    double sum_h = 0.0;
    std::vector<double> hist_g;
    std::vector<double> hist_h;
    std::vector<std::uint32_t> hist_n;
    double best_gain = 0.0;
    std::int32_t best_feature_pos = -1;  // position in the chosen-feature list
    std::int32_t best_bin = -1;
    bool alive = true;
};

struct TrainContext {
    std::size_t n_rows = 0;
    std::size_t n_features = 0;
    const std::vector<std::uint8_t>* binned = nullptr;  // column-major [f * n_rows + i]
    const std::vector<std::size_t>* bin_count = nullptr;
    std::vector<double> grad;
    std::vector<double> hess;
    const BoostConfig* cfg = nullptr;
};

void build_histogram(const TrainContext& ctx, const std::vector<std::uint32_t>& chosen,
                     BuildLeaf& leaf) {
    leaf.hist_g.assign(chosen.size() * kHistStride, 0.0);
    leaf.hist_h.assign(chosen.size() * kHistStride, 0.0);
    leaf.hist_n.assign(chosen.size() * kHistStride, 0);
    const std::int64_t k = static_cast<std::int64_t>(chosen.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t fpos = 0; fpos < k; ++fpos) {
        const std::uint8_t* bins =
            ctx.binned->data() + static_cast<std::size_t>(chosen[fpos]) * ctx.n_rows;
        double* hg = leaf.hist_g.data() + static_cast<std::size_t>(fpos) * kHistStride;
        double* hh = leaf.hist_h.data() + static_cast<std::size_t>(fpos) * kHistStride;
        std::uint32_t* hn = leaf.hist_n.data() + static_cast<std::size_t>(fpos) * kHistStride;
        for (const std::uint32_t row : leaf.rows) {
            const std::uint8_t b = bins[row];
            hg[b] += ctx.grad[row];
            hh[b] += ctx.hess[row];
            ++hn[b];
        }
    }
}

void subtract_histogram(const BuildLeaf& parent, const BuildLeaf& small, BuildLeaf& out,
                        std::size_t k) {
    out.hist_g.resize(k * kHistStride);
    out.hist_h.resize(k * kHistStride);
    out.hist_n.resize(k * kHistStride);
    for (std::size_t i = 0; i < k * kHistStride; ++i) {
        out.hist_g[i] = parent.hist_g[i] - small.hist_g[i];
        out.hist_h[i] = parent.hist_h[i] - small.hist_h[i];
        out.hist_n[i] = parent.hist_n[i] - small.hist_n[i];
    }
}

// Best split for one leaf over the chosen features. Ties keep the lowest
// feature index, then the lowest bin (features are scanned in ascending
// order with strict improvement).
void find_best_split(const TrainContext& ctx, const std::vector<std::uint32_t>& chosen,
                     BuildLeaf& leaf) {
    leaf.best_gain = 0.0;
    leaf.best_feature_pos = -1;
    leaf.best_bin = -1;

    const double parent_score =
        split_score(leaf.sum_g, leaf.sum_h, ctx.cfg->l1, ctx.cfg->l2);
    const std::size_t total_count = leaf.rows.size();
    const std::size_t k = chosen.size();

    std::vector<double> gains(k, 0.0);
    std::vector<std::int32_t> bins_out(k, -1);
    const std::int64_t kk = static_cast<std::int64_t>(k);
#pragma omp parallel for schedule(static)
    for (std::int64_t fpos = 0; fpos < kk; ++fpos) {
        const std::size_t f = chosen[static_cast<std::size_t>(fpos)];
        const std::size_t n_bins = (*ctx.bin_count)[f];
        const double* hg = leaf.hist_g.data() + static_cast<std::size_t>(fpos) * kHistStride;
        const double* hh = leaf.hist_h.data() + static_cast<std::size_t>(fpos) * kHistStride;
        const std::uint32_t* hn = leaf.hist_n.data() + static_cast<std::size_t>(fpos) * kHistStride;

        double best_gain = 0.0;
        std::int32_t best_bin = -1;
        double gl = 0.0;
        double hl = 0.0;
        std::size_t cl = 0;
        for (std::size_t b = 0; b + 1 < n_bins; ++b) {
            gl += hg[b];
            hl += hh[b];
            cl += hn[b];
            const std::size_t cr = total_count - cl;
            if (cl < ctx.cfg->min_child_samples) continue;
            if (cr < ctx.cfg->min_child_samples) break;  // counts only shrink from here
            const double gr = leaf.sum_g - gl;
            const double hr = leaf.sum_h - hl;
            const double gain = 0.5 * (split_score(gl, hl, ctx.cfg->l1, ctx.cfg->l2) +
                                       split_score(gr, hr, ctx.cfg->l1, ctx.cfg->l2) -
                                       parent_score);
            if (gain > best_gain) {
                best_gain = gain;
                best_bin = static_cast<std::int32_t>(b);
            }
        }
        gains[static_cast<std::size_t>(fpos)] = best_gain;
        bins_out[static_cast<std::size_t>(fpos)] = best_bin;
    }

    for (std::size_t fpos = 0; fpos < k; ++fpos) {
        if (bins_out[fpos] >= 0 && gains[fpos] > leaf.best_gain) {
            leaf.best_gain = gains[fpos];
            leaf.best_feature_pos = static_cast<std::int32_t>(fpos);
            leaf.best_bin = bins_out[fpos];
        }
    }
}

double leaf_value(double g, double h, const BoostConfig& cfg) {
    return -cfg.learning_rate * soft_threshold(g, cfg.l1) / (h + cfg.l2);
}

// Routes one row through a tree using pre-binned features.
double tree_output_binned(const Tree& tree, const std::vector<std::uint8_t>& binned,
                          std::size_t n_rows, std::size_t row) {
    std::int32_t node = 0;
    while (!tree.nodes[static_cast<std::size_t>(node)].is_leaf()) {
        const TreeNode& nd = tree.nodes[static_cast<std::size_t>(node)];
        const std::uint8_t b = binned[static_cast<std::size_t>(nd.feature) * n_rows + row];
        node = b <= nd.threshold_bin ? nd.left : nd.right;
    }
    return tree.nodes[static_cast<std::size_t>(node)].leaf_value;
}

}  // namespace

BoostedModel fit(const descriptors::FeatureMatrix& train, std::span<const std::uint8_t> y_train,
                 const descriptors::FeatureMatrix& valid, std::span<const std::uint8_t> y_valid,
                 const BoostConfig& cfg) {
    const std::size_t n = train.rows;
    const std::size_t n_valid = valid.rows;
    const std::size_t n_features = train.cols;
    if (valid.cols != n_features) throw WidthMismatchError("train/valid feature width mismatch");
    if (y_train.size() != n || y_valid.size() != n_valid) {
        throw DataError("label length does not match feature rows");
    }
    if (cfg.histogram_bins < 2 || cfg.histogram_bins > 255) {
        throw ConfigError("histogram_bins must be in [2, 255]");
    }
    for (const double v : train.values) {
        if (!std::isfinite(v)) throw NonFiniteInputError("non-finite training feature");
    }
    for (const double v : valid.values) {
        if (!std::isfinite(v)) throw NonFiniteInputError("non-finite validation feature");
    }
    for (std::span<const std::uint8_t> y : {y_train, y_valid}) {
        std::size_t pos = 0;
        for (const auto v : y) pos += v;
        if (pos == 0 || pos == y.size()) {
            throw DegenerateLabelsError("train and valid each need both classes");
        }
    }

    BoostedModel model;
    model.config = cfg;
    model.feature_names.reserve(n_features);
    for (const auto& col : train.columns) model.feature_names.push_back(col.name);
    if (model.feature_names.empty()) {
        for (std::size_t f = 0; f < n_features; ++f) {
            model.feature_names.push_back("f" + std::to_string(f));
        }
    }

    // Equal-frequency bins from the training partition only.
    model.bin_upper_bounds.resize(n_features);
    std::vector<std::size_t> bin_count(n_features);
    {
        const std::int64_t nf = static_cast<std::int64_t>(n_features);
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t f = 0; f < nf; ++f) {
            std::vector<double> column(n);
            for (std::size_t i = 0; i < n; ++i) {
                column[i] = train.values[i * n_features + static_cast<std::size_t>(f)];
            }
            model.bin_upper_bounds[static_cast<std::size_t>(f)] =
                equal_frequency_edges(std::move(column), cfg.histogram_bins);
            bin_count[static_cast<std::size_t>(f)] =
                model.bin_upper_bounds[static_cast<std::size_t>(f)].size() + 1;
        }
    }

    auto bin_matrix = [&](const descriptors::FeatureMatrix& fm) {
        std::vector<std::uint8_t> binned(fm.rows * n_features);
        const std::int64_t nf = static_cast<std::int64_t>(n_features);
#pragma omp parallel for schedule(static)
        for (std::int64_t f = 0; f < nf; ++f) {
            const auto& edges = model.bin_upper_bounds[static_cast<std::size_t>(f)];
            for (std::size_t i = 0; i < fm.rows; ++i) {
                binned[static_cast<std::size_t>(f) * fm.rows + i] =
                    bin_of(fm.values[i * n_features + static_cast<std::size_t>(f)], edges);
            }
        }
        return binned;
    };
    const std::vector<std::uint8_t> binned_train = bin_matrix(train);
    const std::vector<std::uint8_t> binned_valid = bin_matrix(valid);

    const ClassWeights w = class_weights(y_train, cfg.class_balanced);
    std::vector<double> row_weight(n);
    for (std::size_t i = 0; i < n; ++i) row_weight[i] = y_train[i] ? w.pos : w.neg;
    const double weight_sum = chunked_sum(n, [&](std::size_t i) { return row_weight[i]; });
    const double weighted_pos =
        chunked_sum(n, [&](std::size_t i) { return y_train[i] ? row_weight[i] : 0.0; });
    const double prior = weighted_pos / weight_sum;
    model.base_score = std::log(prior / (1.0 - prior));

    std::vector<double> margin_train(n, model.base_score);
    std::vector<double> margin_valid(n_valid, model.base_score);

    TrainContext ctx;
    ctx.n_rows = n;
    ctx.n_features = n_features;
    ctx.binned = &binned_train;
    ctx.bin_count = &bin_count;
    ctx.grad.resize(n);
    ctx.hess.resize(n);
    ctx.cfg = &cfg;

    const std::size_t n_sub = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(cfg.subsample * static_cast<double>(n))), 1, n);
    const std::size_t k_features = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(cfg.colsample * static_cast<double>(n_features))),
        1, n_features);

    std::size_t best_round = 0;
    double best_ap = -1.0;

    for (std::size_t round = 0; round < cfg.max_trees; ++round) {
        {
            const std::int64_t nn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
            for (std::int64_t i = 0; i < nn; ++i) {
                const std::size_t ii = static_cast<std::size_t>(i);
                const double p = stable_sigmoid(margin_train[ii]);
                ctx.grad[ii] = row_weight[ii] * (p - static_cast<double>(y_train[ii]));
                ctx.hess[ii] = row_weight[ii] * p * (1.0 - p);
            }
        }

        Rng rng = Rng::derive(cfg.seed, 0x7ee5 + round);
        std::vector<std::uint32_t> rows = n_sub == n
                                              ? [&] {
                                                    std::vector<std::uint32_t> all(n);
                                                    std::iota(all.begin(), all.end(), 0u);
                                                    return all;
                                                }()
                                              : rng.sample_indices(n, n_sub);
        std::vector<std::uint32_t> chosen = k_features == n_features
                                                ? [&] {
                                                      std::vector<std::uint32_t> all(n_features);
                                                      std::iota(all.begin(), all.end(), 0u);
                                                      return all;
                                                  }()
                                                : rng.sample_indices(n_features, k_features);

        // Grow one tree leaf-wise.
        Tree tree;
        std::vector<BuildLeaf> leaves;
        {
            BuildLeaf root;
            root.node = 0;
            root.rows = std::move(rows);
            root.sum_g = chunked_sum(root.rows.size(),
                                     [&](std::size_t i) { return ctx.grad[root.rows[i]]; });
            root.sum_h = chunked_sum(root.rows.size(),
                                     [&](std::size_t i) { return ctx.hess[root.rows[i]]; });
            TreeNode root_node;
            root_node.sample_count = static_cast<std::uint32_t>(root.rows.size());
            tree.nodes.push_back(root_node);
            build_histogram(ctx, chosen, root);
            find_best_split(ctx, chosen, root);
            leaves.push_back(std::move(root));
        }

        std::size_t leaf_count = 1;
        while (leaf_count < cfg.max_leaves) {
            // Split the live leaf with the highest positive gain; earliest
            // created wins ties.
            std::int32_t pick = -1;
            double pick_gain = 0.0;
            for (std::size_t i = 0; i < leaves.size(); ++i) {
                if (!leaves[i].alive || leaves[i].best_feature_pos < 0) continue;
                if (leaves[i].best_gain > pick_gain) {
                    pick_gain = leaves[i].best_gain;
                    pick = static_cast<std::int32_t>(i);
                }
            }
            if (pick < 0) break;

            BuildLeaf& parent = leaves[static_cast<std::size_t>(pick)];
            const std::size_t feature = chosen[static_cast<std::size_t>(parent.best_feature_pos)];
            const std::uint8_t split_bin = static_cast<std::uint8_t>(parent.best_bin);
            const std::uint8_t* bins = binned_train.data() + feature * n;

            BuildLeaf left;
            BuildLeaf right;
            for (const std::uint32_t row : parent.rows) {
                (bins[row] <= split_bin ? left.rows : right.rows).push_back(row);
            }
            left.sum_g = chunked_sum(left.rows.size(),
                                     [&](std::size_t i) { return ctx.grad[left.rows[i]]; });
            left.sum_h = chunked_sum(left.rows.size(),
                                     [&](std::size_t i) { return ctx.hess[left.rows[i]]; });
            right.sum_g = parent.sum_g - left.sum_g;
            right.sum_h = parent.sum_h - left.sum_h;

            TreeNode& parent_node = tree.nodes[static_cast<std::size_t>(parent.node)];
            parent_node.feature = static_cast<std::int32_t>(feature);
            parent_node.threshold_bin = parent.best_bin;
            parent_node.threshold =
                model.bin_upper_bounds[feature][static_cast<std::size_t>(parent.best_bin)];
            parent_node.gain = parent.best_gain;
            parent_node.left = static_cast<std::int32_t>(tree.nodes.size());
            parent_node.right = static_cast<std::int32_t>(tree.nodes.size() + 1);

            left.node = parent_node.left;
            right.node = parent_node.right;
            TreeNode left_node;
            left_node.sample_count = static_cast<std::uint32_t>(left.rows.size());
            TreeNode right_node;
            right_node.sample_count = static_cast<std::uint32_t>(right.rows.size());
            tree.nodes.push_back(left_node);
            tree.nodes.push_back(right_node);

            // Build the smaller child's histogram; the sibling follows by
            // subtraction from the parent.
            if (left.rows.size() <= right.rows.size()) {
                build_histogram(ctx, chosen, left);
                subtract_histogram(parent, left, right, chosen.size());
            } else {
                build_histogram(ctx, chosen, right);
                subtract_histogram(parent, right, left, chosen.size());
            }
            parent.alive = false;
            parent.hist_g.clear();
            parent.hist_g.shrink_to_fit();
            parent.hist_h.clear();
            parent.hist_h.shrink_to_fit();
            parent.hist_n.clear();
            parent.hist_n.shrink_to_fit();
            parent.rows.clear();
            parent.rows.shrink_to_fit();

            find_best_split(ctx, chosen, left);
            find_best_split(ctx, chosen, right);
            leaves.push_back(std::move(left));
            leaves.push_back(std::move(right));
            ++leaf_count;
        }

        if (tree.nodes.size() == 1) {
            // No positive-gain split at the root; later rounds would see the
            // same gradients, so training stops here.
            break;
        }

        for (const BuildLeaf& leaf : leaves) {
            if (!leaf.alive) continue;
            tree.nodes[static_cast<std::size_t>(leaf.node)].leaf_value =
                leaf_value(leaf.sum_g, leaf.sum_h, cfg);
        }

        {
            const std::int64_t nn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
            for (std::int64_t i = 0; i < nn; ++i) {
                margin_train[static_cast<std::size_t>(i)] +=
                    tree_output_binned(tree, binned_train, n, static_cast<std::size_t>(i));
            }
            const std::int64_t nv = static_cast<std::int64_t>(n_valid);
#pragma omp parallel for schedule(static)
            for (std::int64_t i = 0; i < nv; ++i) {
                margin_valid[static_cast<std::size_t>(i)] +=
                    tree_output_binned(tree, binned_valid, n_valid, static_cast<std::size_t>(i));
            }
        }
        model.trees.push_back(std::move(tree));

        const double loss_sum = chunked_sum(n, [&](std::size_t i) {
            const double m = margin_train[i];
            return row_weight[i] * (y_train[i] ? softplus(-m) : softplus(m));
        });
        model.train_loss.push_back(loss_sum / weight_sum);

        const double ap = eval::average_precision(margin_valid, y_valid);
        model.valid_ap.push_back(ap);
        if (ap > best_ap) {
            best_ap = ap;
            best_round = model.trees.size() - 1;
        } else if (model.trees.size() - 1 - best_round >= cfg.early_stopping_patience) {
            break;
        }
    }

    model.trained_rounds = model.trees.size();
    if (!model.trees.empty()) {
        model.best_iteration = best_round;
        model.best_valid_ap = best_ap;
        model.trees.resize(best_round + 1);
    }

    model.feature_gain.assign(n_features, 0.0);
    for (const Tree& tree : model.trees) {
        for (const TreeNode& node : tree.nodes) {
            if (!node.is_leaf()) {
                model.feature_gain[static_cast<std::size_t>(node.feature)] += node.gain;
            }
        }
    }
    return model;
}

namespace {

double tree_output_values(const Tree& tree, std::span<const double> row) {
    std::int32_t node = 0;
    while (!tree.nodes[static_cast<std::size_t>(node)].is_leaf()) {
        const TreeNode& nd = tree.nodes[static_cast<std::size_t>(node)];
        node = row[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
    }
    return tree.nodes[static_cast<std::size_t>(node)].leaf_value;
}

}  // namespace

std::vector<double> predict_margins(const BoostedModel& model,
                                    const descriptors::FeatureMatrix& features) {
    if (features.cols != model.bin_upper_bounds.size()) {
        throw WidthMismatchError("feature width does not match model");
    }
    std::vector<double> margins(features.rows, model.base_score);
    const std::int64_t nr = static_cast<std::int64_t>(features.rows);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < nr; ++i) {
        double m = model.base_score;
        const auto row = features.row(static_cast<std::size_t>(i));
        for (const Tree& tree : model.trees) m += tree_output_values(tree, row);
        margins[static_cast<std::size_t>(i)] = m;
    }
    return margins;
}

std::vector<double> predict_scores(const BoostedModel& model,
                                   const descriptors::FeatureMatrix& features) {
    std::vector<double> scores = predict_margins(model, features);
    for (double& s : scores) s = stable_sigmoid(s);
    return scores;
}

std::map<std::string, double> gain_shares(const BoostedModel& model,
                                          const std::vector<std::string>& family_of_feature) {
    if (family_of_feature.size() != model.feature_gain.size()) {
        throw WidthMismatchError("family map length does not match feature count");
    }
    double total = 0.0;
    for (const double g : model.feature_gain) total += g;
    if (total <= 0.0) throw NoSplitsError("model has no splits, gain shares undefined");

    std::map<std::string, double> shares;
    for (std::size_t f = 0; f < model.feature_gain.size(); ++f) {
        shares[family_of_feature[f]] += model.feature_gain[f] / total;
    }
    return shares;
}

std::map<std::string, double> average_shares(
    const std::vector<std::map<std::string, double>>& runs) {
    std::map<std::string, double> mean;
    if (runs.empty()) return mean;
    for (const auto& run : runs) {
        for (const auto& [family, share] : run) mean[family] += share;
    }
    for (auto& [family, share] : mean) share /= static_cast<double>(runs.size());
    return mean;
}

}  // namespace aerots::gbdt
