#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "aerots/errors.hpp"
#include "aerots/log_csv.hpp"
#include "aerots/log_types.hpp"
#include "aerots/rng.hpp"
#include "test_helpers.hpp"

using namespace aerots;

TEST_CASE("intervals from labels and back") {
    std::vector<std::uint8_t> labels = {0, 1, 1, 0, 0, 1, 0, 1};
    std::vector<std::string> types = {"", "a", "a", "", "", "b", "", "c"};
    const auto intervals = intervals_from_labels(labels, types);
    REQUIRE(intervals.size() == 3);
    CHECK(intervals[0].begin == 1);
    CHECK(intervals[0].end == 3);
    CHECK(intervals[0].family == "a");
    CHECK(intervals[1].begin == 5);
    CHECK(intervals[2].family == "c");
    CHECK(labels_from_intervals(intervals, labels.size()) == labels);
}

TEST_CASE("intervals round trip on random label sequences") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::uint8_t> labels(40);
        for (auto& y : labels) y = rng.uniform01() < 0.3 ? 1 : 0;
        std::vector<std::string> types(labels.size(), "x");
        const auto intervals = intervals_from_labels(labels, types);
        CHECK(labels_from_intervals(intervals, labels.size()) == labels);
    }
}

TEST_CASE("validator flags non-finite values") {
    auto log = test_helpers::make_log("l", 10, 3, [](std::size_t, std::size_t) { return 1.0; });
    log.at(3, 2) = std::numeric_limits<double>::quiet_NaN();
    const auto findings = validate_aligned_log(log);
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].find("non-finite") != std::string::npos);
    CHECK(findings[0].find("t=3") != std::string::npos);
    CHECK(findings[0].find("c=2") != std::string::npos);
}

TEST_CASE("validator flags interval/label mismatch") {
    auto log = test_helpers::make_log("l", 20, 2, [](std::size_t, std::size_t) { return 0.5; });
    log.labels[4] = 1;
    log.anomaly_types[4] = "fault";  // intervals left stale
    const auto findings = validate_aligned_log(log);
    REQUIRE(!findings.empty());
    CHECK(findings[0].find("interval/label mismatch") != std::string::npos);
}

TEST_CASE("validator passes a consistent log") {
    std::vector<std::uint8_t> labels(100, 0);
    for (std::size_t t = 30; t < 40; ++t) labels[t] = 1;
    const auto log = test_helpers::make_log(
        "l", 100, 4, [](std::size_t t, std::size_t c) { return std::sin(0.1 * t + c); }, labels);
    CHECK(validate_aligned_log(log).empty());
}

TEST_CASE("aligned CSV round trip is field-for-field") {
    Rng rng(5);
    std::vector<std::uint8_t> labels(57, 0);
    for (std::size_t t = 10; t < 21; ++t) labels[t] = 1;
    auto log = test_helpers::make_log(
        "roundtrip", 57, 3,
        [&rng](std::size_t, std::size_t) { return rng.normal() * 1e3; }, labels);

    // Stem is the log id by contract.
    const auto path = std::filesystem::temp_directory_path() / "roundtrip.csv";
    write_aligned_csv(log, path);
    const AlignedLog back = read_aligned_csv(path);

    CHECK(back.log_id == log.log_id);
    CHECK(back.rate_hz == log.rate_hz);
    CHECK(back.channels == log.channels);
    CHECK(back.labels == log.labels);
    CHECK(back.anomaly_types == log.anomaly_types);
    CHECK(back.data == log.data);  // exact: shortest round-trip formatting
    REQUIRE(back.intervals.size() == log.intervals.size());
    CHECK(back.intervals[0] == log.intervals[0]);
    std::filesystem::remove(path);
}

TEST_CASE("raw CSV reader rejects malformed input") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path();

    const auto write = [&](const std::string& name, const std::string& text) {
        const auto path = dir / name;
        std::ofstream f(path, std::ios::binary);
        f << text;
        return path;
    };

    const auto bad_header = write("aerots_bad1.csv", "time,value\n0,1\n");
    CHECK_THROWS_AS(read_log_csv(bad_header), DataError);

    const auto bad_times = write("aerots_bad2.csv",
                                 "time,label,anomaly_type,c0\n0,0,,1\n0,0,,2\n");
    CHECK_THROWS_AS(read_log_csv(bad_times), DataError);

    const auto bad_label = write("aerots_bad3.csv", "time,label,anomaly_type,c0\n0,2,,1\n");
    CHECK_THROWS_AS(read_log_csv(bad_label), DataError);

    const auto missing_ok = write("aerots_ok.csv",
                                  "time,label,anomaly_type,c0,c1\n0,0,,1,\n0.1,1,glitch,,2\n");
    const RawLog log = read_log_csv(missing_ok);
    CHECK(log.rows() == 2);
    CHECK(std::isnan(log.value_at(0, 1)));
    CHECK(std::isnan(log.value_at(1, 0)));
    CHECK(log.anomaly_types[1] == "glitch");

    for (const auto& p : {bad_header, bad_times, bad_label, missing_ok}) fs::remove(p);
}
