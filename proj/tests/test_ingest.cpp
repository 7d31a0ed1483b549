#include <doctest.h>

#include <cmath>
#include <limits>

#include "aerots/errors.hpp"
#include "aerots/ingest.hpp"
#include "aerots/rng.hpp"
#include "test_helpers.hpp"

using namespace aerots;
using namespace aerots::ingest;

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

RawLog raw_with_times(const std::vector<double>& times, const std::vector<double>& values,
                      const std::vector<std::uint8_t>& labels = {}) {
    RawLog raw;
    raw.log_id = "raw";
    raw.channels = {"c0"};
    raw.times = times;
    raw.values = values;
    raw.labels = labels.empty() ? std::vector<std::uint8_t>(times.size(), 0) : labels;
    raw.anomaly_types.assign(times.size(), "");
    return raw;
}

}  // namespace

TEST_CASE("resample copies on-grid samples") {
    const auto raw = raw_with_times({0.0, 0.1, 0.2}, {1.0, 2.0, 3.0});
    const AlignedLog aligned = resample_to_grid(raw, 10.0);
    REQUIRE(aligned.rows() == 3);
    CHECK(aligned.at(0, 0) == 1.0);
    CHECK(aligned.at(1, 0) == 2.0);
    CHECK(aligned.at(2, 0) == 3.0);
}

TEST_CASE("resample leaves far grid points missing") {
    // Nearest-sample table by hand: grid {0.0, 0.1, 0.2}; sample 0.25 is
    // 0.15 from 0.1 and exactly half a step from 0.2, so both stay missing.
    const auto raw = raw_with_times({0.0, 0.25}, {1.0, 9.0});
    const AlignedLog aligned = resample_to_grid(raw, 10.0);
    REQUIRE(aligned.rows() == 3);
    CHECK(aligned.at(0, 0) == 1.0);
    CHECK(std::isnan(aligned.at(1, 0)));
    CHECK(std::isnan(aligned.at(2, 0)));
}

TEST_CASE("resample maps anomalous samples into their grid cell") {
    const auto raw = raw_with_times({0.0, 0.12, 0.3}, {1.0, 2.0, 3.0}, {0, 1, 0});
    const AlignedLog aligned = resample_to_grid(raw, 10.0);
    REQUIRE(aligned.rows() == 4);
    CHECK(aligned.labels[1] == 1);
    CHECK(aligned.labels[0] == 0);
    CHECK(aligned.labels[2] == 0);
}

TEST_CASE("resample preserves label positivity on random logs") {
    Rng rng(21);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 5 + rng.uniform_index(60);
        std::vector<double> times(n);
        double t = 0.0;
        for (auto& x : times) {
            t += 0.02 + 0.3 * rng.uniform01();
            x = t;
        }
        std::vector<double> values(n, 1.0);
        std::vector<std::uint8_t> labels(n, 0);
        bool any = false;
        for (auto& y : labels) {
            y = rng.uniform01() < 0.2 ? 1 : 0;
            any = any || y;
        }
        const AlignedLog aligned = resample_to_grid(raw_with_times(times, values, labels), 10.0);
        bool aligned_any = false;
        for (const auto y : aligned.labels) aligned_any = aligned_any || y;
        CHECK(aligned_any == any);
    }
}

TEST_CASE("resample rejects logs with fewer than 2 rows") {
    CHECK_THROWS_AS(resample_to_grid(raw_with_times({0.0}, {1.0}), 10.0), EmptyLogError);
}

TEST_CASE("channel coverage threshold is inclusive") {
    std::vector<ChannelPresence> logs(10);
    for (std::size_t i = 0; i < 10; ++i) {
        logs[i].log_id = "l" + std::to_string(i);
        if (i < 6) logs[i].channels_present.push_back("in_six");
        if (i < 5) logs[i].channels_present.push_back("in_five");
        logs[i].channels_present.push_back("everywhere");
    }
    const auto retained = select_channels(logs, 0.60);
    CHECK(retained == std::vector<std::string>{"everywhere", "in_six"});
}

TEST_CASE("channel selection matches brute-force presence counting") {
    // 5 logs x 4 channels with a fixed presence pattern.
    const bool present[5][4] = {{true, false, true, false},
                                {true, true, false, false},
                                {true, false, false, true},
                                {false, true, true, false},
                                {true, true, false, false}};
    const char* names[4] = {"a", "b", "c", "d"};
    std::vector<ChannelPresence> logs(5);
    for (std::size_t i = 0; i < 5; ++i) {
        logs[i].log_id = "l" + std::to_string(i);
        for (std::size_t c = 0; c < 4; ++c) {
            if (present[i][c]) logs[i].channels_present.push_back(names[c]);
        }
    }
    for (const double threshold : {0.2, 0.4, 0.6, 0.8}) {
        std::vector<std::string> expected;
        for (std::size_t c = 0; c < 4; ++c) {
            int count = 0;
            for (std::size_t i = 0; i < 5; ++i) count += present[i][c] ? 1 : 0;
            if (count >= threshold * 5 - 1e-9) expected.push_back(names[c]);
        }
        CHECK(select_channels(logs, threshold) == expected);
    }
    CHECK_THROWS_AS(select_channels(logs, 1.01), NoChannelsRetainedError);
}

TEST_CASE("impute interpolates, extends edges, zeros empty channels") {
    AlignedLog log;
    log.log_id = "g";
    log.channels = {"a", "b", "c"};
    log.labels.assign(4, 0);
    log.anomaly_types.assign(4, "");
    log.data = {
        1.0, kNan, 3.0, kNan,   // a: interior gap + trailing gap
        kNan, kNan, 5.0, kNan,  // b: edge extension both ways
        kNan, kNan, kNan, kNan, // c: all missing
    };
    const AlignedLog filled = impute(log);
    CHECK(filled.at(0, 0) == 1.0);
    CHECK(filled.at(1, 0) == 2.0);
    CHECK(filled.at(2, 0) == 3.0);
    CHECK(filled.at(3, 0) == 3.0);
    for (std::size_t t = 0; t < 4; ++t) CHECK(filled.at(t, 1) == 5.0);
    for (std::size_t t = 0; t < 4; ++t) CHECK(filled.at(t, 2) == 0.0);
}

TEST_CASE("impute is idempotent and never touches finite values") {
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        AlignedLog log;
        log.log_id = "r";
        log.channels = {"a", "b"};
        const std::size_t rows = 30;
        log.labels.assign(rows, 0);
        log.anomaly_types.assign(rows, "");
        log.data.resize(rows * 2);
        for (auto& v : log.data) {
            v = rng.uniform01() < 0.3 ? kNan : rng.normal();
        }
        const auto original = log.data;
        const AlignedLog once = impute(log);
        const AlignedLog twice = impute(once);
        CHECK(once.data == twice.data);
        for (std::size_t i = 0; i < original.size(); ++i) {
            if (std::isfinite(original[i])) CHECK(once.data[i] == original[i]);
            else CHECK(std::isfinite(once.data[i]));
        }
    }
}

TEST_CASE("standardizer uses population std with a floor") {
    // Train samples {1,2,3}: mean 2, population std sqrt(2/3).
    const auto log = test_helpers::make_log("s", 3, 1,
                                            [](std::size_t t, std::size_t) { return t + 1.0; });
    const std::vector<std::vector<std::uint8_t>> mask = {{1, 1, 1}};
    const auto stats = fit_standardizer(std::span<const AlignedLog>(&log, 1), mask);
    CHECK(stats.mean[0] == doctest::Approx(2.0));
    CHECK(stats.stddev[0] == doctest::Approx(std::sqrt(2.0 / 3.0)));

    const AlignedLog out = apply_standardizer(log, stats);
    CHECK(out.at(2, 0) == doctest::Approx((3.0 - 2.0) / std::sqrt(2.0 / 3.0)));  // ~1.2247
}

TEST_CASE("constant channel standardizes to zero via the floor") {
    const auto log =
        test_helpers::make_log("c", 10, 1, [](std::size_t, std::size_t) { return 7.5; });
    const std::vector<std::vector<std::uint8_t>> mask = {std::vector<std::uint8_t>(10, 1)};
    const auto stats = fit_standardizer(std::span<const AlignedLog>(&log, 1), mask);
    CHECK(stats.stddev[0] == StandardizationStats::kStdFloor);
    const AlignedLog out = apply_standardizer(log, stats);
    for (std::size_t t = 0; t < 10; ++t) CHECK(out.at(t, 0) == 0.0);
}

TEST_CASE("standardized training samples have mean 0 and std 1") {
    Rng rng(77);
    std::vector<AlignedLog> logs;
    std::vector<std::vector<std::uint8_t>> masks;
    for (int i = 0; i < 3; ++i) {
        logs.push_back(test_helpers::make_log(
            "m" + std::to_string(i), 50, 2,
            [&rng](std::size_t, std::size_t c) { return rng.normal() * (c + 1.0) + 4.0; }));
        std::vector<std::uint8_t> mask(50, 0);
        for (std::size_t t = 0; t < 35; ++t) mask[t] = 1;  // training span only
        masks.push_back(std::move(mask));
    }
    const auto stats = fit_standardizer(logs, masks);
    std::vector<AlignedLog> out;
    for (const auto& log : logs) out.push_back(apply_standardizer(log, stats));

    for (std::size_t c = 0; c < 2; ++c) {
        double sum = 0.0;
        double sq = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < out.size(); ++i) {
            for (std::size_t t = 0; t < 50; ++t) {
                if (!masks[i][t]) continue;
                sum += out[i].at(t, c);
                ++count;
            }
        }
        const double mean = sum / count;
        for (std::size_t i = 0; i < out.size(); ++i) {
            for (std::size_t t = 0; t < 50; ++t) {
                if (masks[i][t]) sq += (out[i].at(t, c) - mean) * (out[i].at(t, c) - mean);
            }
        }
        CHECK(std::abs(mean) < 1e-6);
        CHECK(std::abs(std::sqrt(sq / count) - 1.0) < 1e-6);
    }
}

TEST_CASE("apply_standardizer rejects mismatched channel lists") {
    const auto log = test_helpers::make_log("x", 5, 2, [](std::size_t, std::size_t) { return 1.0; });
    StandardizationStats stats;
    stats.channels = {"other"};
    stats.mean = {0.0};
    stats.stddev = {1.0};
    CHECK_THROWS_AS(apply_standardizer(log, stats), ChannelMismatchError);
}
