#include <doctest.h>

#include <cmath>

#include "aerots/errors.hpp"
#include "aerots/ingest.hpp"
#include "aerots/log_types.hpp"
#include "aerots/synth.hpp"

using namespace aerots;
using namespace aerots::synth;

TEST_CASE("zero anomaly rate yields all-normal logs") {
    SynthConfig cfg;
    cfg.seed = 4;
    cfg.log_count = 3;
    cfg.samples_per_log = 1000;
    cfg.channels = 4;
    cfg.anomaly_rate = 0.0;
    for (const auto& entry : generate(cfg)) {
        CHECK(entry.events.empty());
        for (const auto y : entry.log.labels) CHECK(y == 0);
    }
}

TEST_CASE("generation is deterministic per seed") {
    SynthConfig cfg;
    cfg.seed = 9;
    cfg.log_count = 4;
    cfg.samples_per_log = 800;
    cfg.channels = 5;
    cfg.anomaly_rate = 0.04;
    cfg.missing_rate = 0.02;
    const auto a = generate(cfg);
    const auto b = generate(cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].log.values.size() == b[i].log.values.size());
        for (std::size_t j = 0; j < a[i].log.values.size(); ++j) {
            const double x = a[i].log.values[j];
            const double y = b[i].log.values[j];
            CHECK(((std::isnan(x) && std::isnan(y)) || x == y));
        }
        CHECK(a[i].log.labels == b[i].log.labels);
        REQUIRE(a[i].events.size() == b[i].events.size());
        for (std::size_t e = 0; e < a[i].events.size(); ++e) {
            CHECK(a[i].events[e].begin == b[i].events[e].begin);
            CHECK(a[i].events[e].family == b[i].events[e].family);
            CHECK(a[i].events[e].channels == b[i].events[e].channels);
        }
    }

    SynthConfig other = cfg;
    other.seed = 10;
    const auto c = generate(other);
    CHECK(a[0].log.values != c[0].log.values);
}

TEST_CASE("label runs equal injected intervals exactly") {
    SynthConfig cfg;
    cfg.seed = 12;
    cfg.log_count = 10;
    cfg.samples_per_log = 2000;
    cfg.channels = 6;
    cfg.anomaly_rate = 0.05;
    for (const auto& entry : generate(cfg)) {
        const auto runs = intervals_from_labels(entry.log.labels, entry.log.anomaly_types);
        REQUIRE(runs.size() == entry.events.size());
        for (std::size_t i = 0; i < runs.size(); ++i) {
            CHECK(runs[i].begin == entry.events[i].begin);
            CHECK(runs[i].end == entry.events[i].end);
            CHECK(runs[i].family == entry.events[i].family);
        }
    }
}

TEST_CASE("realized anomaly fraction tracks the target within 20 percent") {
    SynthConfig cfg;
    cfg.seed = 14;
    cfg.log_count = 50;
    cfg.samples_per_log = 3000;
    cfg.channels = 4;
    cfg.anomaly_rate = 0.03;
    std::size_t anomalous = 0;
    std::size_t total = 0;
    for (const auto& entry : generate(cfg)) {
        for (const auto y : entry.log.labels) anomalous += y;
        total += entry.log.labels.size();
    }
    const double realized = static_cast<double>(anomalous) / static_cast<double>(total);
    CHECK(realized > 0.8 * cfg.anomaly_rate);
    CHECK(realized < 1.2 * cfg.anomaly_rate);
}

TEST_CASE("family mix restricts injected families") {
    SynthConfig cfg;
    cfg.seed = 15;
    cfg.log_count = 12;
    cfg.samples_per_log = 1500;
    cfg.channels = 5;
    cfg.anomaly_rate = 0.05;
    cfg.family_mix = {{"drift", 1.0}, {"volatility", 2.0}};
    bool saw_any = false;
    for (const auto& entry : generate(cfg)) {
        for (const auto& ev : entry.events) {
            saw_any = true;
            CHECK((ev.family == "drift" || ev.family == "volatility"));
        }
    }
    CHECK(saw_any);
}

TEST_CASE("normal-segment statistics are stationary across logs") {
    SynthConfig cfg;
    cfg.seed = 16;
    cfg.log_count = 8;
    cfg.samples_per_log = 2500;
    cfg.channels = 3;
    cfg.anomaly_rate = 0.0;
    cfg.ar_coeff = 0.8;
    cfg.noise_scale = 1.0;
    // Per-log channel means stay within a tolerance band around zero and
    // standard deviations within the jitter range of the stationary AR std.
    for (const auto& entry : generate(cfg)) {
        for (std::size_t c = 0; c < cfg.channels; ++c) {
            double sum = 0.0;
            for (std::size_t t = 0; t < entry.log.rows(); ++t) sum += entry.log.value_at(t, c);
            const double mean = sum / static_cast<double>(entry.log.rows());
            double sq = 0.0;
            for (std::size_t t = 0; t < entry.log.rows(); ++t) {
                sq += (entry.log.value_at(t, c) - mean) * (entry.log.value_at(t, c) - mean);
            }
            const double stddev = std::sqrt(sq / static_cast<double>(entry.log.rows()));
            CHECK(std::abs(mean) < 1.5);
            CHECK(stddev > 0.4);
            CHECK(stddev < 8.0);
        }
    }
}

TEST_CASE("invalid config raises ConfigInvalid") {
    SynthConfig cfg;
    cfg.anomaly_rate = 1.5;
    CHECK_THROWS_AS(generate(cfg), ConfigError);
    cfg.anomaly_rate = 0.05;
    cfg.family_mix = {{"not_a_family", 1.0}};
    CHECK_THROWS_AS(generate(cfg), ConfigError);
    cfg.family_mix.clear();
    cfg.channels = 1;
    CHECK_THROWS_AS(generate(cfg), ConfigError);
}

TEST_CASE("each family leaves its signature on the affected channel") {
    SynthConfig cfg;
    cfg.seed = 18;
    cfg.log_count = 30;
    cfg.samples_per_log = 1200;
    cfg.channels = 4;
    cfg.anomaly_rate = 0.08;
    cfg.min_event_length = 64;
    cfg.max_event_length = 96;

    std::size_t checked = 0;
    for (const auto& entry : generate(cfg)) {
        for (const auto& ev : entry.events) {
            if (ev.family != "level_shift" && ev.family != "volatility") continue;
            const std::size_t c = ev.channels[0];
            // Compare the event span against the preceding normal span.
            if (ev.begin < 200) continue;
            double mean_event = 0.0;
            double mean_before = 0.0;
            for (std::size_t t = ev.begin; t < ev.end; ++t) {
                mean_event += entry.log.value_at(t, c);
            }
            mean_event /= static_cast<double>(ev.end - ev.begin);
            for (std::size_t t = ev.begin - 150; t < ev.begin; ++t) {
                mean_before += entry.log.value_at(t, c);
            }
            mean_before /= 150.0;
            if (ev.family == "level_shift") {
                CHECK(std::abs(mean_event - mean_before) > 1.0);
                ++checked;
            } else {  // volatility: spread grows
                double sq_event = 0.0;
                for (std::size_t t = ev.begin; t < ev.end; ++t) {
                    const double d = entry.log.value_at(t, c) - mean_event;
                    sq_event += d * d;
                }
                double sq_before = 0.0;
                for (std::size_t t = ev.begin - 150; t < ev.begin; ++t) {
                    const double d = entry.log.value_at(t, c) - mean_before;
                    sq_before += d * d;
                }
                CHECK(sq_event / static_cast<double>(ev.end - ev.begin) >
                      1.5 * sq_before / 150.0);
                ++checked;
            }
        }
    }
    CHECK(checked >= 5);  // enough events actually exercised the assertions
}
