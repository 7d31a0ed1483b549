#include <CLI11.hpp>
#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include "aerots/config.hpp"
#include "aerots/errors.hpp"
#include "aerots/pipeline.hpp"

namespace {

struct CliOptions {
    std::string config_path;
    std::int64_t seed = -1;
    std::string protocol;
    std::string out_dir;
};

aerots::cfg::Config effective_config(const CliOptions& opts) {
    auto config = aerots::cfg::Config::parse_file(opts.config_path);
    if (opts.seed >= 0) config.set_int_list("eval.seeds", {opts.seed});
    if (!opts.protocol.empty()) config.set_string_list("split.protocols", {opts.protocol});
    if (!opts.out_dir.empty()) config.set_string("run.out_dir", opts.out_dir);
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"AeroTSBoost telemetry anomaly-mining pipeline"};
    app.require_subcommand(1);

    CliOptions opts;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", opts.config_path, "Config file (TOML-like key/value)")
            ->required();
        cmd->add_option("--seed", opts.seed, "Run a single seed instead of eval.seeds");
        cmd->add_option("--protocol", opts.protocol,
                        "Run a single protocol instead of split.protocols");
        cmd->add_option("--out", opts.out_dir, "Override run.out_dir");
    };

    using Runner = void (*)(const aerots::cfg::Config&);
    const std::pair<const char*, Runner> commands[] = {
        {"synth", &aerots::pipeline::run_synth},
        {"prepare", &aerots::pipeline::run_prepare},
        {"featurize", &aerots::pipeline::run_featurize},
        {"train", &aerots::pipeline::run_train},
        {"evaluate", &aerots::pipeline::run_evaluate},
        {"ablate", &aerots::pipeline::run_ablate},
        {"importance", &aerots::pipeline::run_importance},
    };

    for (const auto& [name, runner] : commands) {
        CLI::App* cmd = app.add_subcommand(name);
        add_common(cmd);
        cmd->callback([&opts, runner] {
            const auto config = effective_config(opts);
            aerots::pipeline::apply_worker_config(config);
            runner(config);
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const aerots::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const aerots::MissingArtifactError& e) {
        std::cerr << "missing artifact: " << e.what() << "\n";
        return 4;
    } catch (const aerots::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
