#include "aerots/pipeline.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "aerots/baselines.hpp"
#include "aerots/errors.hpp"
#include "aerots/feature_io.hpp"
#include "aerots/ingest.hpp"
#include "aerots/log_csv.hpp"
#include "aerots/model_io.hpp"
#include "aerots/synth.hpp"

namespace aerots::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string sanitize(const std::string& name) {
    std::string out = name;
    for (char& c : out) {
        if (c == ':' || c == '/' || c == '\\') c = '_';
    }
    return out;
}

std::string seed_tag(std::uint64_t seed) { return "seed" + std::to_string(seed); }

void append_number(std::string& out, double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

void write_text(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw DataError("cannot write " + path.string());
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
}

}  // namespace

fs::path RunPaths::features_dir(const std::string& protocol, std::uint64_t seed) const {
    return out / "features" / protocol / seed_tag(seed);
}

fs::path RunPaths::model_file(const std::string& method, const std::string& protocol,
                              std::uint64_t seed) const {
    return out / "models" / sanitize(method) / protocol / (seed_tag(seed) + ".json");
}

fs::path RunPaths::report_file(const std::string& method, const std::string& protocol,
                               std::uint64_t seed) const {
    return out / "reports" / sanitize(method) / protocol / (seed_tag(seed) + ".json");
}

fs::path RunPaths::pr_curve_file(const std::string& method, const std::string& protocol,
                                 std::uint64_t seed) const {
    return out / "reports" / "pr_curves" /
           (sanitize(method) + "__" + protocol + "__" + seed_tag(seed) + ".csv");
}

MethodSpec parse_method(const std::string& name) {
    MethodSpec spec;
    spec.name = name;
    if (name == "pca") {
        spec.kind = MethodSpec::Kind::pca;
        return spec;
    }
    if (name == "linear_sgd") {
        spec.kind = MethodSpec::Kind::linear_sgd;
        return spec;
    }
    spec.kind = MethodSpec::Kind::gbdt;
    std::string variant = "full";
    if (name == "moments_only") {
        variant = "moments_only";
    } else if (name.rfind("aerotsboost", 0) == 0) {
        if (name.size() > 11) {
            if (name[11] != ':') throw ConfigError("unknown method '" + name + "'");
            variant = name.substr(12);
        }
    } else {
        throw ConfigError("unknown method '" + name + "'");
    }

    using descriptors::Group;
    using descriptors::GroupSet;
    if (variant == "full") spec.groups = GroupSet::all();
    else if (variant == "moments_only") spec.groups = GroupSet::only(Group::moments);
    else if (variant == "no_dynamics") spec.groups = GroupSet::all().without(Group::dynamics);
    else if (variant == "no_autocorr") spec.groups = GroupSet::all().without(Group::autocorr);
    else if (variant == "no_quantiles") spec.groups = GroupSet::all().without(Group::quantiles);
    else if (variant == "no_endpoints")
        spec.groups = GroupSet::all().without(Group::endpoints_drift);
    else throw ConfigError("unknown descriptor variant '" + variant + "'");
    return spec;
}

descriptors::GroupSet parse_groups(const std::vector<std::string>& names) {
    descriptors::GroupSet set = descriptors::GroupSet::none();
    for (const auto& name : names) set = set.with(descriptors::parse_group(name));
    if (set.empty()) throw ConfigError("features.groups must select at least one group");
    return set;
}

void apply_worker_config(const cfg::Config& config) {
    std::int64_t workers = config.get_int("run.workers", 0);
    if (workers <= 0) {
        if (const char* env = std::getenv("AEROTS_WORKERS")) {
            workers = std::atoll(env);
        }
    }
    if (workers > 0) omp_set_num_threads(static_cast<int>(workers));
}

namespace {

RunPaths paths_from(const cfg::Config& config) {
    RunPaths paths;
    paths.out = config.get_string("run.out_dir");
    return paths;
}

void freeze_config(const RunPaths& paths, const cfg::Config& config) {
    write_text(paths.frozen_config(), config.serialize());
}

WindowSpec window_spec_from(const cfg::Config& config) {
    WindowSpec spec;
    spec.length = static_cast<std::size_t>(config.get_int("window.length", 96));
    spec.stride = static_cast<std::size_t>(config.get_int("window.stride", 8));
    spec.horizon = static_cast<std::size_t>(config.get_int("window.horizon", 12));
    if (spec.length < 2 || spec.stride < 1) throw ConfigError("window: need length >= 2, stride >= 1");
    return spec;
}

eval::SplitFractions fractions_from(const cfg::Config& config) {
    eval::SplitFractions f;
    f.train = config.get_double("split.train_fraction", 0.70);
    f.valid = config.get_double("split.valid_fraction", 0.15);
    return f;
}

std::vector<std::uint64_t> seeds_from(const cfg::Config& config) {
    const auto raw = config.get_int_list("eval.seeds", {0, 1, 2, 3, 4});
    std::vector<std::uint64_t> seeds;
    for (const auto s : raw) {
        if (s < 0) throw ConfigError("eval.seeds must be non-negative");
        seeds.push_back(static_cast<std::uint64_t>(s));
    }
    if (seeds.empty()) throw ConfigError("eval.seeds must not be empty");
    return seeds;
}

std::vector<std::string> protocols_from(const cfg::Config& config) {
    const auto protocols = config.get_string_list("split.protocols", {"chronological"});
    for (const auto& p : protocols) {
        if (p != "chronological" && p != "purged_chronological" && p != "leave_log_out") {
            throw ConfigError("unknown protocol '" + p + "'");
        }
    }
    return protocols;
}

gbdt::BoostConfig gbdt_config_from(const cfg::Config& config, std::uint64_t seed) {
    gbdt::BoostConfig c;
    c.max_trees = static_cast<std::size_t>(config.get_int("gbdt.max_trees", 1600));
    c.learning_rate = config.get_double("gbdt.learning_rate", 0.025);
    c.max_leaves = static_cast<std::size_t>(config.get_int("gbdt.max_leaves", 64));
    c.min_child_samples = static_cast<std::size_t>(config.get_int("gbdt.min_child_samples", 80));
    c.subsample = config.get_double("gbdt.subsample", 0.9);
    c.colsample = config.get_double("gbdt.colsample", 0.75);
    c.l1 = config.get_double("gbdt.l1", 0.2);
    c.l2 = config.get_double("gbdt.l2", 8.0);
    c.class_balanced = config.get_bool("gbdt.class_balanced", true);
    c.early_stopping_patience =
        static_cast<std::size_t>(config.get_int("gbdt.early_stopping_patience", 80));
    c.histogram_bins = static_cast<std::size_t>(config.get_int("gbdt.histogram_bins", 255));
    c.seed = seed;
    return c;
}

baselines::SgdConfig sgd_config_from(const cfg::Config& config, std::uint64_t seed) {
    baselines::SgdConfig c;
    c.epochs = static_cast<std::size_t>(config.get_int("sgd.epochs", 30));
    c.alpha = config.get_double("sgd.alpha", 1e-4);
    c.l1_ratio = config.get_double("sgd.l1_ratio", 0.15);
    c.eta0 = config.get_double("sgd.eta0", 0.01);
    c.power_t = config.get_double("sgd.power_t", 0.5);
    c.class_balanced = config.get_bool("sgd.class_balanced", true);
    c.seed = seed;
    return c;
}

eval::SplitAssignment make_split(const WindowSet& ws, const std::string& protocol,
                                 std::uint64_t seed, const cfg::Config& config) {
    const eval::SplitFractions fractions = fractions_from(config);
    if (protocol == "chronological") return eval::split_chronological(ws, fractions);
    if (protocol == "purged_chronological") {
        const std::int64_t embargo_key = config.get_int("split.embargo", -1);
        const std::size_t embargo = embargo_key < 0
                                        ? ws.spec.length + ws.spec.horizon
                                        : static_cast<std::size_t>(embargo_key);
        return eval::split_purged(ws, fractions, embargo);
    }
    return eval::split_leave_log_out(ws, fractions, seed);
}

std::vector<AlignedLog> load_aligned_logs(const RunPaths& paths) {
    const json manifest = model_io::load_json(paths.manifest());
    std::vector<AlignedLog> logs;
    for (const auto& entry : manifest.at("logs")) {
        if (!entry.at("usable").get<bool>()) continue;
        const fs::path path = paths.aligned_dir() / (entry.at("log_id").get<std::string>() + ".csv");
        logs.push_back(read_aligned_csv(path));
    }
    if (logs.empty()) throw DataError("manifest lists no usable logs");
    std::sort(logs.begin(), logs.end(),
              [](const AlignedLog& a, const AlignedLog& b) { return a.log_id < b.log_id; });
    return logs;
}

eval::Partition partition_from_name(const std::string& name) {
    for (const auto p : {eval::Partition::train, eval::Partition::valid, eval::Partition::test,
                         eval::Partition::purged}) {
        if (name == eval::partition_name(p)) return p;
    }
    throw DataError("unknown partition tag '" + name + "'");
}

// Row subset of a feature matrix, preserving column metadata.
descriptors::FeatureMatrix select_rows(const descriptors::FeatureMatrix& fm,
                                       const std::vector<std::size_t>& rows) {
    descriptors::FeatureMatrix out;
    out.rows = rows.size();
    out.cols = fm.cols;
    out.columns = fm.columns;
    out.channel_names = fm.channel_names;
    out.values.resize(out.rows * out.cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::copy_n(fm.values.data() + rows[i] * fm.cols, fm.cols,
                    out.values.data() + i * fm.cols);
    }
    return out;
}

descriptors::FeatureMatrix slice_groups(const descriptors::FeatureMatrix& fm,
                                        const descriptors::GroupSet& groups) {
    std::vector<std::size_t> keep;
    for (std::size_t c = 0; c < fm.columns.size(); ++c) {
        if (groups.contains(fm.columns[c].group())) keep.push_back(c);
    }
    if (keep.size() == fm.cols) return fm;
    if (keep.empty()) throw DataError("feature file has no columns in the requested groups");
    return fm.select_columns(keep);
}

}  // namespace

FeatureBundle load_feature_bundle(const RunPaths& paths, const std::string& protocol,
                                  std::uint64_t seed) {
    const fs::path dir = paths.features_dir(protocol, seed);
    json sidecar;
    FeatureBundle bundle;
    bundle.features =
        feature_io::read_features(dir / "features.bin", dir / "features.json", &sidecar);
    bundle.protocol = protocol;
    bundle.seed = seed;
    bundle.labels = sidecar.at("labels").get<std::vector<std::uint8_t>>();
    bundle.families = sidecar.at("families").get<std::vector<std::string>>();
    const auto log_index = sidecar.at("window_log_index").get<std::vector<std::size_t>>();
    const auto ordinal = sidecar.at("window_ordinal").get<std::vector<std::size_t>>();
    for (std::size_t i = 0; i < log_index.size(); ++i) {
        bundle.refs.push_back({log_index[i], ordinal[i]});
    }
    for (const auto& tag : sidecar.at("partitions").get<std::vector<std::string>>()) {
        bundle.partitions.push_back(partition_from_name(tag));
    }
    if (bundle.labels.size() != bundle.features.rows ||
        bundle.partitions.size() != bundle.features.rows) {
        throw DataError("feature sidecar row bookkeeping does not match matrix");
    }
    return bundle;
}

void run_synth(const cfg::Config& config) {
    const RunPaths paths = paths_from(config);

    synth::SynthConfig sc;
    sc.seed = static_cast<std::uint64_t>(config.get_int("synth.seed", 0));
    sc.log_count = static_cast<std::size_t>(config.get_int("synth.log_count", 20));
    sc.samples_per_log = static_cast<std::size_t>(config.get_int("synth.samples_per_log", 3000));
    sc.channels = static_cast<std::size_t>(config.get_int("synth.channels", 12));
    sc.rate_hz = config.get_double("data.rate_hz", 10.0);
    sc.anomaly_rate = config.get_double("synth.anomaly_rate", 0.03);
    sc.ar_coeff = config.get_double("synth.ar_coeff", 0.8);
    sc.noise_scale = config.get_double("synth.noise_scale", 1.0);
    sc.missing_rate = config.get_double("synth.missing_rate", 0.0);
    sc.min_event_length = static_cast<std::size_t>(config.get_int("synth.min_event_length", 48));
    sc.max_event_length = static_cast<std::size_t>(config.get_int("synth.max_event_length", 128));
    sc.causal_channels = static_cast<std::size_t>(config.get_int("synth.causal_channels", 3));
    if (config.has("synth.families")) {
        const auto families = config.get_string_list("synth.families");
        const auto weights = config.get_int_list("synth.family_weights",
                                                 std::vector<std::int64_t>(families.size(), 1));
        if (weights.size() != families.size()) {
            throw ConfigError("synth.family_weights length must match synth.families");
        }
        for (std::size_t i = 0; i < families.size(); ++i) {
            sc.family_mix[families[i]] = static_cast<double>(weights[i]);
        }
    }

    const auto logs = synth::generate(sc);

    fs::create_directories(paths.data_dir());
    fs::create_directories(paths.truth_dir());
    for (const auto& entry : logs) {
        write_raw_csv(entry.log, paths.data_dir() / (entry.log.log_id + ".csv"));
        json truth;
        truth["log_id"] = entry.log.log_id;
        json events = json::array();
        for (const auto& ev : entry.events) {
            events.push_back(json{{"begin", ev.begin},
                                  {"end", ev.end},
                                  {"family", ev.family},
                                  {"channels", ev.channels}});
        }
        truth["events"] = std::move(events);
        model_io::save_json(truth, paths.truth_dir() / (entry.log.log_id + ".json"));
    }
    freeze_config(paths, config);
}

void run_prepare(const cfg::Config& config) {
    const RunPaths paths = paths_from(config);
    const WindowSpec spec = window_spec_from(config);
    const double rate_hz = config.get_double("data.rate_hz", 10.0);
    const double threshold = config.get_double("data.coverage_threshold", 0.60);
    const fs::path raw_dir = config.has("data.raw_dir") ? fs::path(config.get_string("data.raw_dir"))
                                                        : paths.data_dir();
    if (!fs::is_directory(raw_dir)) {
        throw MissingArtifactError("raw log directory not found: " + raw_dir.string());
    }

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(raw_dir)) {
        if (entry.path().extension() == ".csv") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw DataError("no .csv logs in " + raw_dir.string());

    DatasetManifest manifest;
    manifest.coverage_threshold = threshold;
    manifest.rate_hz = rate_hz;

    struct Prepared {
        RawLog raw;
        AlignedLog aligned;  // pre channel restriction, pre imputation
    };
    std::vector<Prepared> usable;
    std::vector<ingest::ChannelPresence> presence;

    for (const auto& file : files) {
        LogManifestEntry entry;
        entry.path = file.string();
        entry.log_id = file.stem().string();
        try {
            RawLog raw = read_log_csv(file);
            AlignedLog aligned = ingest::resample_to_grid(raw, rate_hz);
            entry.row_count = aligned.rows();
            if (aligned.rows() < spec.length + spec.horizon) {
                entry.drop_reason = "too short after alignment";
            } else {
                entry.usable = true;
                ingest::ChannelPresence p;
                p.log_id = raw.log_id;
                for (std::size_t c = 0; c < raw.channel_count(); ++c) {
                    for (std::size_t t = 0; t < raw.rows(); ++t) {
                        if (std::isfinite(raw.value_at(t, c))) {
                            p.channels_present.push_back(raw.channels[c]);
                            break;
                        }
                    }
                }
                presence.push_back(std::move(p));
                usable.push_back({std::move(raw), std::move(aligned)});
            }
        } catch (const DataError& e) {
            entry.drop_reason = e.what();
        }
        manifest.logs.push_back(std::move(entry));
    }
    if (usable.empty()) throw DataError("no usable logs in " + raw_dir.string());

    manifest.retained_channels = ingest::select_channels(presence, threshold);

    fs::create_directories(paths.aligned_dir());
    for (auto& entry : usable) {
        AlignedLog log = ingest::impute(
            ingest::restrict_channels(entry.aligned, manifest.retained_channels));
        const auto findings = validate_aligned_log(log);
        if (!findings.empty()) {
            throw DataError("prepared log '" + log.log_id + "' failed validation: " + findings[0]);
        }
        write_aligned_csv(log, paths.aligned_dir() / (log.log_id + ".csv"));
    }

    json mj;
    mj["schema_version"] = 1;
    mj["coverage_threshold"] = manifest.coverage_threshold;
    mj["rate_hz"] = manifest.rate_hz;
    mj["retained_channels"] = manifest.retained_channels;
    json logs = json::array();
    for (const auto& entry : manifest.logs) {
        logs.push_back(json{{"log_id", entry.log_id},
                            {"path", entry.path},
                            {"row_count", entry.row_count},
                            {"usable", entry.usable},
                            {"drop_reason", entry.drop_reason}});
    }
    mj["logs"] = std::move(logs);
    model_io::save_json(mj, paths.manifest());
    freeze_config(paths, config);
}

void run_featurize(const cfg::Config& config) {
    const RunPaths paths = paths_from(config);
    const WindowSpec spec = window_spec_from(config);
    const descriptors::GroupSet groups = parse_groups(config.get_string_list(
        "features.groups", {"moments", "extrema_range", "quantiles", "endpoints_drift",
                            "dynamics", "autocorr"}));

    const std::vector<AlignedLog> logs = load_aligned_logs(paths);
    const WindowSet windows = make_windows(std::span<const AlignedLog>(logs), spec);
    if (windows.size() == 0) throw DataError("no windows produced; logs shorter than L");

    for (const auto& protocol : protocols_from(config)) {
        for (const auto seed : seeds_from(config)) {
            const eval::SplitAssignment split = make_split(windows, protocol, seed, config);
            const auto masks = eval::sample_mask(windows, split, eval::Partition::train);
            const ingest::StandardizationStats stats = ingest::fit_standardizer(logs, masks);

            std::vector<AlignedLog> standardized;
            standardized.reserve(logs.size());
            for (const auto& log : logs) {
                standardized.push_back(ingest::apply_standardizer(log, stats));
            }
            const WindowSet std_windows =
                make_windows(std::span<const AlignedLog>(standardized), spec);

            const descriptors::FeatureMatrix fm = descriptors::featurize(std_windows, groups);

            json extra;
            extra["protocol"] = protocol;
            extra["seed"] = seed;
            extra["window_spec"] = {{"length", spec.length},
                                    {"stride", spec.stride},
                                    {"horizon", spec.horizon}};
            extra["fractions"] = {{"train", split.fractions.train},
                                  {"valid", split.fractions.valid}};
            extra["groups"] = groups.names();
            json log_ids = json::array();
            for (const AlignedLog* log : std_windows.logs) log_ids.push_back(log->log_id);
            extra["logs"] = std::move(log_ids);
            {
                std::vector<std::size_t> log_index;
                std::vector<std::size_t> start;
                std::vector<std::size_t> ordinal;
                std::vector<std::uint8_t> labels;
                std::vector<std::string> families;
                std::vector<std::string> partitions;
                for (std::size_t i = 0; i < std_windows.size(); ++i) {
                    const Window& w = std_windows.windows[i];
                    log_index.push_back(w.log_index);
                    start.push_back(w.start);
                    ordinal.push_back(std_windows.ordinal(i));
                    labels.push_back(w.label);
                    families.push_back(w.family);
                    partitions.push_back(eval::partition_name(split.partition[i]));
                }
                extra["window_log_index"] = log_index;
                extra["window_start"] = start;
                extra["window_ordinal"] = ordinal;
                extra["labels"] = labels;
                extra["families"] = families;
                extra["partitions"] = partitions;
            }
            extra["standardizer"] = {{"channels", stats.channels},
                                     {"mean", stats.mean},
                                     {"stddev", stats.stddev}};

            const fs::path dir = paths.features_dir(protocol, seed);
            fs::create_directories(dir);
            feature_io::write_features(fm, dir / "features.bin", dir / "features.json", extra);
            if (config.get_bool("features.write_window_index", false)) {
                write_window_index_csv(std_windows, dir / "windows.csv");
            }
            if (config.get_bool("features.write_csv", false)) {
                feature_io::write_features_csv(fm, dir / "features.csv");
            }
        }
    }
    freeze_config(paths, config);
}

namespace {

std::vector<std::size_t> rows_in_partition(const FeatureBundle& bundle, eval::Partition p) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < bundle.partitions.size(); ++i) {
        if (bundle.partitions[i] == p) rows.push_back(i);
    }
    return rows;
}

std::vector<std::uint8_t> labels_at(const FeatureBundle& bundle,
                                    const std::vector<std::size_t>& rows) {
    std::vector<std::uint8_t> out;
    out.reserve(rows.size());
    for (const auto r : rows) out.push_back(bundle.labels[r]);
    return out;
}

void train_one(const RunPaths& paths, const cfg::Config& config, const MethodSpec& method,
               const std::string& protocol, std::uint64_t seed) {
    const FeatureBundle bundle = load_feature_bundle(paths, protocol, seed);
    const auto train_rows = rows_in_partition(bundle, eval::Partition::train);
    const auto valid_rows = rows_in_partition(bundle, eval::Partition::valid);
    if (train_rows.empty() || valid_rows.empty()) {
        throw DataError("empty train or valid partition for " + protocol);
    }

    json model_json;
    if (method.kind == MethodSpec::Kind::gbdt) {
        const auto sliced = slice_groups(bundle.features, method.groups);
        const auto train_fm = select_rows(sliced, train_rows);
        const auto valid_fm = select_rows(sliced, valid_rows);
        const auto model = gbdt::fit(train_fm, labels_at(bundle, train_rows), valid_fm,
                                     labels_at(bundle, valid_rows),
                                     gbdt_config_from(config, seed));
        model_json = model_io::to_json(model);
    } else if (method.kind == MethodSpec::Kind::pca) {
        const auto train_fm = select_rows(bundle.features, train_rows);
        const auto det =
            baselines::pca_fit(train_fm, config.get_double("pca.variance_target", 0.95));
        model_json = model_io::to_json(det);
    } else {
        const auto train_fm = select_rows(bundle.features, train_rows);
        const auto valid_fm = select_rows(bundle.features, valid_rows);
        const auto model = baselines::sgd_fit(train_fm, labels_at(bundle, train_rows), valid_fm,
                                              labels_at(bundle, valid_rows),
                                              sgd_config_from(config, seed));
        model_json = model_io::to_json(model);
    }
    model_json["method"] = method.name;
    model_json["protocol"] = protocol;
    model_json["seed"] = seed;

    const fs::path path = paths.model_file(method.name, protocol, seed);
    fs::create_directories(path.parent_path());
    model_io::save_json(model_json, path);
}

struct SeedReport {
    double auroc = 0.0;
    double auprc = 0.0;
    double best_f1 = 0.0;
    double event_f1 = 0.0;
};

SeedReport evaluate_one(const RunPaths& paths, const cfg::Config& config, const MethodSpec& method,
                        const std::string& protocol, std::uint64_t seed) {
    (void)config;
    const FeatureBundle bundle = load_feature_bundle(paths, protocol, seed);
    const fs::path model_path = paths.model_file(method.name, protocol, seed);
    if (!fs::exists(model_path)) {
        throw MissingArtifactError("missing model for method '" + method.name + "', protocol '" +
                                   protocol + "', seed " + std::to_string(seed) +
                                   "; run the train command first");
    }
    const json model_json = model_io::load_json(model_path);

    const auto test_rows = rows_in_partition(bundle, eval::Partition::test);
    if (test_rows.empty()) throw DataError("empty test partition for " + protocol);

    std::vector<double> scores;
    if (model_io::detector_kind(model_json) == "gbdt") {
        const auto model = model_io::gbdt_from_json(model_json);
        const auto sliced = slice_groups(bundle.features, method.groups);
        scores = gbdt::predict_scores(model, select_rows(sliced, test_rows));
    } else if (model_io::detector_kind(model_json) == "pca") {
        const auto det = model_io::pca_from_json(model_json);
        const auto raw = baselines::pca_scores(det, select_rows(bundle.features, test_rows));
        scores = baselines::minmax_normalize(raw);
    } else {
        const auto model = model_io::sgd_from_json(model_json);
        scores = baselines::sgd_scores(model, select_rows(bundle.features, test_rows));
    }

    const auto labels = labels_at(bundle, test_rows);
    std::vector<eval::WindowRef> refs;
    std::vector<std::string> families;
    for (const auto r : test_rows) {
        refs.push_back(bundle.refs[r]);
        families.push_back(bundle.families[r]);
    }

    const double roc = eval::auroc(scores, labels);
    const double ap = eval::average_precision(scores, labels);
    const auto best = eval::best_f1(scores, labels);
    const auto event = eval::event_f1(scores, labels, refs, best.threshold);
    const auto curve = eval::pr_curve(scores, labels);
    const auto by_family = eval::family_breakdown(scores, labels, refs, families, best.threshold);

    json report;
    report["schema_version"] = 1;
    report["method"] = method.name;
    report["protocol"] = protocol;
    report["seed"] = seed;
    {
        json counts;
        counts["train"] = rows_in_partition(bundle, eval::Partition::train).size();
        counts["valid"] = rows_in_partition(bundle, eval::Partition::valid).size();
        counts["test"] = test_rows.size();
        counts["purged"] = rows_in_partition(bundle, eval::Partition::purged).size();
        std::size_t positives = 0;
        for (const auto y : labels) positives += y;
        counts["test_positives"] = positives;
        counts["test_events"] = event.truth_events;
        report["counts"] = std::move(counts);
    }
    {
        json metrics;
        metrics["auroc"] = roc;
        metrics["auprc"] = ap;
        metrics["best_f1"] = best.f1;
        // Threshold swept on test labels: a diagnostic upper-bound operating
        // point, not a deployment threshold.
        metrics["best_threshold"] = best.threshold;
        metrics["threshold_rule"] = "diagnostic_upper_bound";
        metrics["event_f1"] = event.f1;
        metrics["event_precision"] = event.precision;
        metrics["event_recall"] = event.recall;
        metrics["event_degenerate"] = event.degenerate;
        metrics["predicted_events"] = event.predicted_events;
        report["metrics"] = std::move(metrics);
    }
    {
        json families_json = json::array();
        for (const auto& fam : by_family) {
            families_json.push_back(json{{"family", fam.family},
                                         {"auprc", fam.auprc},
                                         {"event_f1", fam.event.f1},
                                         {"event_degenerate", fam.event.degenerate},
                                         {"positive_windows", fam.positive_windows},
                                         {"truth_events", fam.event.truth_events}});
        }
        report["per_family"] = std::move(families_json);
    }
    {
        json curve_json = json::array();
        for (const auto& p : curve) curve_json.push_back(json::array({p.recall, p.precision}));
        report["pr_curve"] = std::move(curve_json);
    }

    const fs::path report_path = paths.report_file(method.name, protocol, seed);
    fs::create_directories(report_path.parent_path());
    model_io::save_json(report, report_path);

    std::string pr_text = "recall,precision\n";
    for (const auto& p : curve) {
        append_number(pr_text, p.recall);
        pr_text += ',';
        append_number(pr_text, p.precision);
        pr_text += '\n';
    }
    write_text(paths.pr_curve_file(method.name, protocol, seed), pr_text);

    SeedReport out;
    out.auroc = roc;
    out.auprc = ap;
    out.best_f1 = best.f1;
    out.event_f1 = event.f1;
    return out;
}

struct AggregateRow {
    std::string method;
    std::string protocol;
    std::string metric;
    double mean = 0.0;
    double stddev = 0.0;
    std::size_t seeds = 0;
};

std::vector<AggregateRow> aggregate_rows(const std::string& method, const std::string& protocol,
                                         const std::vector<SeedReport>& reports) {
    const std::vector<std::pair<std::string, std::vector<double>>> metric_values = {
        {"auroc", {}}, {"auprc", {}}, {"best_f1", {}}, {"event_f1", {}}};
    std::vector<AggregateRow> rows;
    for (const auto& [metric, unused] : metric_values) {
        std::vector<double> values;
        for (const auto& r : reports) {
            if (metric == "auroc") values.push_back(r.auroc);
            else if (metric == "auprc") values.push_back(r.auprc);
            else if (metric == "best_f1") values.push_back(r.best_f1);
            else values.push_back(r.event_f1);
        }
        AggregateRow row;
        row.method = method;
        row.protocol = protocol;
        row.metric = metric;
        row.seeds = values.size();
        if (values.size() >= 2) {
            const auto agg = eval::aggregate_seeds(values);
            row.mean = agg.mean;
            row.stddev = agg.stddev;
        } else {
            row.mean = values[0];
            row.stddev = 0.0;  // sample std undefined for one seed
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_aggregate_csv(const fs::path& path, const std::vector<AggregateRow>& rows) {
    std::string text = "method,protocol,metric,mean,std,seeds\n";
    for (const auto& row : rows) {
        text += row.method;
        text += ',';
        text += row.protocol;
        text += ',';
        text += row.metric;
        text += ',';
        append_number(text, row.mean);
        text += ',';
        append_number(text, row.stddev);
        text += ',';
        text += std::to_string(row.seeds);
        text += '\n';
    }
    write_text(path, text);
}

std::vector<MethodSpec> methods_from(const cfg::Config& config) {
    std::vector<MethodSpec> methods;
    for (const auto& name : config.get_string_list("train.methods", {"aerotsboost"})) {
        methods.push_back(parse_method(name));
    }
    return methods;
}

}  // namespace

void run_train(const cfg::Config& config) {
    const RunPaths paths = paths_from(config);
    for (const auto& method : methods_from(config)) {
        for (const auto& protocol : protocols_from(config)) {
            for (const auto seed : seeds_from(config)) {
                train_one(paths, config, method, protocol, seed);
            }
        }
    }
    freeze_config(paths, config);
}

void run_evaluate(const cfg::Config& config) {
    const RunPaths paths = paths_from(config);
    std::vector<AggregateRow> rows;
    for (const auto& method : methods_from(config)) {
        for (const auto& protocol : protocols_from(config)) {
            std::vector<SeedReport> reports;
            for (const auto seed : seeds_from(config)) {
                reports.push_back(evaluate_one(paths, config, method, protocol, seed));
            }
            const auto agg = aggregate_rows(method.name, protocol, reports);
            rows.insert(rows.end(), agg.begin(), agg.end());
        }
    }
    write_aggregate_csv(paths.aggregate_csv(), rows);
    freeze_config(paths, config);
}

void run_ablate(const cfg::Config& config) {
    const RunPaths paths = paths_from(config);
    const std::vector<std::string> variants = config.get_string_list(
        "ablate.variants", {"full", "moments_only", "no_dynamics", "no_autocorr", "no_quantiles",
                            "no_endpoints"});
    std::vector<MethodSpec> methods;
    for (const auto& variant : variants) {
        if (variant == "full") methods.push_back(parse_method("aerotsboost"));
        else if (variant == "moments_only") methods.push_back(parse_method("moments_only"));
        else methods.push_back(parse_method("aerotsboost:" + variant));
    }

    std::vector<AggregateRow> rows;
    for (std::size_t i = 0; i < methods.size(); ++i) {
        for (const auto& protocol : protocols_from(config)) {
            std::vector<SeedReport> reports;
            for (const auto seed : seeds_from(config)) {
                train_one(paths, config, methods[i], protocol, seed);
                reports.push_back(evaluate_one(paths, config, methods[i], protocol, seed));
            }
            auto agg = aggregate_rows(methods[i].name, protocol, reports);
            for (auto& row : agg) row.method = variants[i] + " (" + methods[i].name + ")";
            rows.insert(rows.end(), agg.begin(), agg.end());
        }
    }

    std::string text = "variant,protocol,metric,mean,std,seeds\n";
    for (const auto& row : rows) {
        text += row.method;
        text += ',';
        text += row.protocol;
        text += ',';
        text += row.metric;
        text += ',';
        append_number(text, row.mean);
        text += ',';
        append_number(text, row.stddev);
        text += ',';
        text += std::to_string(row.seeds);
        text += '\n';
    }
    write_text(paths.ablation_table(), text);
    freeze_config(paths, config);
}

void run_importance(const cfg::Config& config) {
    const RunPaths paths = paths_from(config);
    const std::string method_name = config.get_string("importance.method", "aerotsboost");
    const MethodSpec method = parse_method(method_name);
    if (method.kind != MethodSpec::Kind::gbdt) {
        throw ConfigError("importance requires a boosted-tree method");
    }

    const fs::path map_path = config.get_string("importance.channel_family_map");
    const json family_map = model_io::load_json(map_path);

    auto family_of_channel = [&family_map](const std::string& channel) -> std::string {
        if (family_map.contains(channel)) return family_map.at(channel).get<std::string>();
        if (family_map.contains("*")) return family_map.at("*").get<std::string>();
        return "other";
    };

    std::vector<std::map<std::string, double>> runs;
    json per_run = json::array();
    for (const auto& protocol : protocols_from(config)) {
        for (const auto seed : seeds_from(config)) {
            const fs::path model_path = paths.model_file(method.name, protocol, seed);
            if (!fs::exists(model_path)) {
                throw MissingArtifactError("missing model " + model_path.string() +
                                           "; run the train command first");
            }
            const auto model = model_io::gbdt_from_json(model_io::load_json(model_path));
            std::vector<std::string> family_of_feature;
            for (const auto& name : model.feature_names) {
                const std::size_t sep = name.rfind("__");
                const std::string channel = sep == std::string::npos ? name : name.substr(0, sep);
                family_of_feature.push_back(family_of_channel(channel));
            }
            const auto shares = gbdt::gain_shares(model, family_of_feature);
            runs.push_back(shares);
            per_run.push_back(json{{"protocol", protocol}, {"seed", seed}, {"shares", shares}});
        }
    }
    const auto mean_shares = gbdt::average_shares(runs);

    json out;
    out["schema_version"] = 1;
    out["method"] = method.name;
    out["runs"] = std::move(per_run);
    out["mean_shares"] = mean_shares;
    fs::create_directories(paths.importance_json().parent_path());
    model_io::save_json(out, paths.importance_json());

    std::string csv = "family,mean_share\n";
    for (const auto& [family, share] : mean_shares) {
        csv += family;
        csv += ',';
        append_number(csv, share);
        csv += '\n';
    }
    write_text(paths.importance_csv(), csv);
    freeze_config(paths, config);
}

}  // namespace aerots::pipeline
