#include "aerots/model_io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

#include "aerots/errors.hpp"

namespace aerots::model_io {

using nlohmann::json;

namespace {

json config_to_json(const gbdt::BoostConfig& c) {
    return json{{"max_trees", c.max_trees},
                {"learning_rate", c.learning_rate},
                {"max_leaves", c.max_leaves},
                {"min_child_samples", c.min_child_samples},
                {"subsample", c.subsample},
                {"colsample", c.colsample},
                {"l1", c.l1},
                {"l2", c.l2},
                {"class_balanced", c.class_balanced},
                {"early_stopping_patience", c.early_stopping_patience},
                {"histogram_bins", c.histogram_bins},
                {"seed", c.seed}};
}

gbdt::BoostConfig config_from_json(const json& j) {
    gbdt::BoostConfig c;
    c.max_trees = j.at("max_trees").get<std::size_t>();
    c.learning_rate = j.at("learning_rate").get<double>();
    c.max_leaves = j.at("max_leaves").get<std::size_t>();
    c.min_child_samples = j.at("min_child_samples").get<std::size_t>();
    c.subsample = j.at("subsample").get<double>();
    c.colsample = j.at("colsample").get<double>();
    c.l1 = j.at("l1").get<double>();
    c.l2 = j.at("l2").get<double>();
    c.class_balanced = j.at("class_balanced").get<bool>();
    c.early_stopping_patience = j.at("early_stopping_patience").get<std::size_t>();
    c.histogram_bins = j.at("histogram_bins").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    return c;
}

}  // namespace

json to_json(const gbdt::BoostedModel& model) {
    json trees = json::array();
    for (const auto& tree : model.trees) {
        json nodes = json::array();
        for (const auto& n : tree.nodes) {
            nodes.push_back(json::array({n.left, n.right, n.feature, n.threshold_bin, n.threshold,
                                         n.leaf_value, n.gain, n.sample_count}));
        }
        trees.push_back(std::move(nodes));
    }
    return json{{"schema_version", 1},
                {"detector_kind", "gbdt"},
                {"config", config_to_json(model.config)},
                {"base_score", model.base_score},
                {"best_iteration", model.best_iteration},
                {"trained_rounds", model.trained_rounds},
                {"best_valid_ap", model.best_valid_ap},
                {"feature_names", model.feature_names},
                {"bin_upper_bounds", model.bin_upper_bounds},
                {"trees", std::move(trees)},
                {"feature_gain", model.feature_gain},
                {"train_loss", model.train_loss},
                {"valid_ap", model.valid_ap}};
}

gbdt::BoostedModel gbdt_from_json(const json& j) {
    gbdt::BoostedModel model;
    model.config = config_from_json(j.at("config"));
    model.base_score = j.at("base_score").get<double>();
    model.best_iteration = j.at("best_iteration").get<std::size_t>();
    model.trained_rounds = j.at("trained_rounds").get<std::size_t>();
    model.best_valid_ap = j.at("best_valid_ap").get<double>();
    model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    model.bin_upper_bounds = j.at("bin_upper_bounds").get<std::vector<std::vector<double>>>();
    model.feature_gain = j.at("feature_gain").get<std::vector<double>>();
    model.train_loss = j.at("train_loss").get<std::vector<double>>();
    model.valid_ap = j.at("valid_ap").get<std::vector<double>>();
    for (const auto& tree_json : j.at("trees")) {
        gbdt::Tree tree;
        for (const auto& n : tree_json) {
            gbdt::TreeNode node;
            node.left = n.at(0).get<std::int32_t>();
            node.right = n.at(1).get<std::int32_t>();
            node.feature = n.at(2).get<std::int32_t>();
            node.threshold_bin = n.at(3).get<std::int32_t>();
            node.threshold = n.at(4).get<double>();
            node.leaf_value = n.at(5).get<double>();
            node.gain = n.at(6).get<double>();
            node.sample_count = n.at(7).get<std::uint32_t>();
            tree.nodes.push_back(node);
        }
        model.trees.push_back(std::move(tree));
    }
    return model;
}

json to_json(const baselines::PcaDetector& det) {
    return json{{"schema_version", 1},
                {"detector_kind", "pca"},
                {"mean", det.mean},
                {"basis", det.basis},
                {"components", det.components},
                {"dim", det.dim},
                {"explained_ratio", det.explained_ratio}};
}

baselines::PcaDetector pca_from_json(const json& j) {
    baselines::PcaDetector det;
    det.mean = j.at("mean").get<std::vector<double>>();
    det.basis = j.at("basis").get<std::vector<double>>();
    det.components = j.at("components").get<std::size_t>();
    det.dim = j.at("dim").get<std::size_t>();
    det.explained_ratio = j.at("explained_ratio").get<std::vector<double>>();
    return det;
}

json to_json(const baselines::LinearSgdModel& model) {
    return json{{"schema_version", 1},
                {"detector_kind", "linear_sgd"},
                {"config",
                 {{"epochs", model.config.epochs},
                  {"alpha", model.config.alpha},
                  {"l1_ratio", model.config.l1_ratio},
                  {"eta0", model.config.eta0},
                  {"power_t", model.config.power_t},
                  {"class_balanced", model.config.class_balanced},
                  {"seed", model.config.seed}}},
                {"weights", model.weights},
                {"bias", model.bias},
                {"valid_ap", model.valid_ap}};
}

baselines::LinearSgdModel sgd_from_json(const json& j) {
    baselines::LinearSgdModel model;
    const auto& c = j.at("config");
    model.config.epochs = c.at("epochs").get<std::size_t>();
    model.config.alpha = c.at("alpha").get<double>();
    model.config.l1_ratio = c.at("l1_ratio").get<double>();
    model.config.eta0 = c.at("eta0").get<double>();
    model.config.power_t = c.at("power_t").get<double>();
    model.config.class_balanced = c.at("class_balanced").get<bool>();
    model.config.seed = c.at("seed").get<std::uint64_t>();
    model.weights = j.at("weights").get<std::vector<double>>();
    model.bias = j.at("bias").get<double>();
    model.valid_ap = j.at("valid_ap").get<double>();
    return model;
}

void save_json(const json& j, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw DataError("cannot write " + path.string());
    f << j.dump(1, '\t') << '\n';
}

json load_json(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw MissingArtifactError("missing file: " + path.string());
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw DataError("bad JSON in " + path.string() + ": " + e.what());
    }
    return j;
}

std::string detector_kind(const nlohmann::json& j) {
    return j.at("detector_kind").get<std::string>();
}

}  // namespace aerots::model_io
