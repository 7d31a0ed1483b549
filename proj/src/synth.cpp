#include "aerots/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "aerots/errors.hpp"
#include "aerots/rng.hpp"

namespace aerots::synth {

namespace {

void check_config(const SynthConfig& cfg) {
    if (cfg.log_count == 0) throw ConfigError("synth: log_count must be positive");
    if (cfg.channels < 2) throw ConfigError("synth: needs at least 2 channels");
    if (cfg.anomaly_rate < 0.0 || cfg.anomaly_rate > 1.0) {
        throw ConfigError("synth: anomaly_rate must be in [0,1]");
    }
    if (cfg.missing_rate < 0.0 || cfg.missing_rate > 1.0) {
        throw ConfigError("synth: missing_rate must be in [0,1]");
    }
    if (cfg.rate_hz <= 0.0) throw ConfigError("synth: rate_hz must be positive");
    if (cfg.min_event_length < 4 || cfg.max_event_length < cfg.min_event_length) {
        throw ConfigError("synth: bad event length range");
    }
    if (cfg.samples_per_log < 4 * cfg.max_event_length) {
        throw ConfigError("synth: samples_per_log too small for the event length range");
    }
    for (const auto& [family, weight] : cfg.family_mix) {
        if (weight < 0.0) throw ConfigError("synth: negative family weight");
        bool known = false;
        for (const char* f : kFamilies) known = known || family == f;
        if (!known) throw ConfigError("synth: unknown anomaly family '" + family + "'");
    }
}

std::string draw_family(const SynthConfig& cfg, Rng& rng) {
    // family_mix is a std::map, so iteration order is fixed.
    std::vector<std::pair<std::string, double>> mix;
    if (cfg.family_mix.empty()) {
        for (const char* f : kFamilies) mix.emplace_back(f, 1.0);
    } else {
        for (const auto& [family, weight] : cfg.family_mix) {
            if (weight > 0.0) mix.emplace_back(family, weight);
        }
    }
    double total = 0.0;
    for (const auto& [family, weight] : mix) total += weight;
    double draw = rng.uniform01() * total;
    for (const auto& [family, weight] : mix) {
        draw -= weight;
        if (draw <= 0.0) return family;
    }
    return mix.back().first;
}

SynthLog generate_log(const SynthConfig& cfg, std::size_t log_index) {
    Rng rng = Rng::derive(cfg.seed, log_index);
    const std::size_t T = cfg.samples_per_log;
    const std::size_t d = cfg.channels;

    SynthLog out;
    RawLog& log = out.log;
    {
        char id[32];
        std::snprintf(id, sizeof(id), "synth-%04zu", log_index);
        log.log_id = id;
    }
    log.channels.reserve(d);
    for (std::size_t c = 0; c < d; ++c) {
        char name[32];
        std::snprintf(name, sizeof(name), "ch%02zu", c);
        log.channels.emplace_back(name);
    }

    // Base dynamics: per-channel AR(1) coefficient and noise scale jittered
    // around the configured values.
    std::vector<double> phi(d);
    std::vector<double> sigma(d);
    std::vector<double> stationary_std(d);
    for (std::size_t c = 0; c < d; ++c) {
        phi[c] = std::clamp(cfg.ar_coeff * rng.uniform(0.75, 1.15), 0.05, 0.98);
        sigma[c] = cfg.noise_scale * rng.uniform(0.6, 1.5);
        stationary_std[c] = sigma[c] / std::sqrt(1.0 - phi[c] * phi[c]);
    }

    // Event plan: lengths drawn until the per-log sample budget is met, the
    // final one truncated to the remaining budget. Leftovers below half the
    // minimum length extend the previous event instead of spawning a blip.
    // Placement keeps a >= 2 sample gap so label runs stay distinct.
    std::vector<std::size_t> lengths;
    if (cfg.anomaly_rate > 0.0) {
        const double target =
            cfg.anomaly_rate * static_cast<double>(T) * rng.uniform(0.6, 1.4);
        std::size_t planned = 0;
        const std::size_t budget = std::max<std::size_t>(8, static_cast<std::size_t>(target));
        while (planned < budget && lengths.size() < 64) {
            std::size_t len = cfg.min_event_length +
                              rng.uniform_index(cfg.max_event_length - cfg.min_event_length + 1);
            const std::size_t remaining = budget - planned;
            if (len > remaining) {
                if (remaining >= cfg.min_event_length / 2 || lengths.empty()) {
                    len = std::max<std::size_t>(8, remaining);
                } else {
                    lengths.back() += remaining;
                    planned = budget;
                    break;
                }
            }
            lengths.push_back(len);
            planned += len;
        }
    }

    for (const std::size_t len : lengths) {
        for (int attempt = 0; attempt < 200; ++attempt) {
            const std::size_t begin = rng.uniform_index(T - len);
            const std::size_t end = begin + len;
            bool clash = false;
            for (const auto& ev : out.events) {
                if (begin < ev.end + 2 && ev.begin < end + 2) {
                    clash = true;
                    break;
                }
            }
            if (clash) continue;
            InjectedEvent ev;
            ev.begin = begin;
            ev.end = end;
            out.events.push_back(ev);
            break;
        }
    }
    std::sort(out.events.begin(), out.events.end(),
              [](const InjectedEvent& a, const InjectedEvent& b) { return a.begin < b.begin; });

    // Per-event family, affected channels and injection profile. Injections
    // act through time-varying phi/sigma plus an additive offset track.
    std::vector<double> phi_t(T * d);
    std::vector<double> sigma_t(T * d);
    std::vector<double> offset(T * d, 0.0);
    for (std::size_t c = 0; c < d; ++c) {
        std::fill_n(phi_t.data() + c * T, T, phi[c]);
        std::fill_n(sigma_t.data() + c * T, T, sigma[c]);
    }

    // Each family injects into a fixed channel of the causal set (faults
    // recur on their own telemetry streams), so family signatures seen in a
    // training split recur in later windows even at small log counts.
    const std::size_t causal = std::min(std::max<std::size_t>(cfg.causal_channels, 1), d);
    for (std::size_t e = 0; e < out.events.size(); ++e) {
        InjectedEvent& ev = out.events[e];
        ev.family = draw_family(cfg, rng);
        const double sign = rng.uniform01() < 0.5 ? -1.0 : 1.0;
        if (ev.family == "multi_channel") {
            for (std::size_t c = 0; c < std::min<std::size_t>(3, causal); ++c) {
                ev.channels.push_back(c);
            }
        } else {
            std::size_t family_rank = 0;
            for (std::size_t f = 0; f < 5; ++f) {
                if (ev.family == kFamilies[f]) family_rank = f;
            }
            ev.channels.push_back(family_rank % causal);
        }
        std::sort(ev.channels.begin(), ev.channels.end());

        for (const std::size_t c : ev.channels) {
            double* off = offset.data() + c * T;
            double* ph = phi_t.data() + c * T;
            double* sg = sigma_t.data() + c * T;
            if (ev.family == "level_shift") {
                const double delta = sign * (3.5 + 1.5 * rng.uniform01()) * stationary_std[c];
                for (std::size_t t = ev.begin; t < ev.end; ++t) off[t] += delta;
            } else if (ev.family == "drift") {
                const double delta = sign * (4.5 + 2.0 * rng.uniform01()) * stationary_std[c];
                const double len = static_cast<double>(ev.end - ev.begin);
                for (std::size_t t = ev.begin; t < ev.end; ++t) {
                    off[t] += delta * static_cast<double>(t - ev.begin + 1) / len;
                }
            } else if (ev.family == "volatility") {
                const double factor = 3.5 + 2.0 * rng.uniform01();
                for (std::size_t t = ev.begin; t < ev.end; ++t) sg[t] *= factor;
            } else if (ev.family == "autocorr_break") {
                for (std::size_t t = ev.begin; t < ev.end; ++t) ph[t] = -phi[c];
            } else {  // multi_channel: correlated shifts, independent magnitude
                const double delta = sign * (3.0 + 1.5 * rng.uniform01()) * stationary_std[c];
                for (std::size_t t = ev.begin; t < ev.end; ++t) off[t] += delta;
            }
        }
    }

    // Generate the series channel-by-channel in fixed order.
    log.times.resize(T);
    for (std::size_t t = 0; t < T; ++t) log.times[t] = static_cast<double>(t) / cfg.rate_hz;
    log.values.assign(T * d, 0.0);
    for (std::size_t c = 0; c < d; ++c) {
        double x = stationary_std[c] * rng.normal();
        log.values[0 * d + c] = x + offset[c * T + 0];
        for (std::size_t t = 1; t < T; ++t) {
            x = phi_t[c * T + t] * x + sigma_t[c * T + t] * rng.normal();
            log.values[t * d + c] = x + offset[c * T + t];
        }
    }

    log.labels.assign(T, 0);
    log.anomaly_types.assign(T, "");
    for (const auto& ev : out.events) {
        for (std::size_t t = ev.begin; t < ev.end; ++t) {
            log.labels[t] = 1;
            log.anomaly_types[t] = ev.family;
        }
    }

    if (cfg.missing_rate > 0.0) {
        for (std::size_t t = 0; t < T; ++t) {
            for (std::size_t c = 0; c < d; ++c) {
                if (rng.uniform01() < cfg.missing_rate) {
                    log.values[t * d + c] = std::numeric_limits<double>::quiet_NaN();
                }
            }
        }
    }
    return out;
}

}  // namespace

std::vector<SynthLog> generate(const SynthConfig& cfg) {
    check_config(cfg);
    std::vector<SynthLog> logs(cfg.log_count);
    const std::int64_t n = static_cast<std::int64_t>(cfg.log_count);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i) {
        logs[static_cast<std::size_t>(i)] = generate_log(cfg, static_cast<std::size_t>(i));
    }
    return logs;
}

}  // namespace aerots::synth
