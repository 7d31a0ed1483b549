#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "aerots/log_types.hpp"

namespace aerots::synth {

// The five injected anomaly families.
inline constexpr const char* kFamilies[] = {"level_shift", "drift", "volatility",
                                            "autocorr_break", "multi_channel"};

struct SynthConfig {
    std::uint64_t seed = 0;
    std::size_t log_count = 20;
    std::size_t samples_per_log = 3000;
    std::size_t channels = 12;
    double rate_hz = 10.0;
    double anomaly_rate = 0.03;  // target fraction of anomalous samples
    std::map<std::string, double> family_mix;  // empty = uniform over kFamilies
    double ar_coeff = 0.8;       // base AR(1) coefficient, jittered per channel
    double noise_scale = 1.0;
    double missing_rate = 0.0;
    std::size_t min_event_length = 48;
    std::size_t max_event_length = 128;
    // Injections touch only the first `causal_channels` channels, so fault
    // signatures recur across logs (and gain-share checks have a ground
    // truth). Clamped to [3, channels].
    std::size_t causal_channels = 3;
};

struct InjectedEvent {
    std::size_t begin = 0;  // half-open sample interval
    std::size_t end = 0;
    std::string family;
    std::vector<std::size_t> channels;  // channels the injection touches
};

struct SynthLog {
    RawLog log;
    std::vector<InjectedEvent> events;
};

// Seeded AR(1) channels with per-family injections: additive step, linear
// ramp, noise-scale multiplier, AR-coefficient flip, and a correlated shift
// across three channels. Labels mark exactly the injected samples; events
// never touch, so label runs equal injected intervals. Each log draws from
// Rng::derive(seed, log_index), making generation order-independent and
// byte-identical per seed. Throws ConfigError on invalid settings.
std::vector<SynthLog> generate(const SynthConfig& cfg);

}  // namespace aerots::synth
