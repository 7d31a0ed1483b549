#include <doctest.h>

#include "aerots/config.hpp"
#include "aerots/errors.hpp"
#include "aerots/pipeline.hpp"

using namespace aerots;
using namespace aerots::cfg;

TEST_CASE("parses sections, scalars, lists and comments") {
    const std::string text = R"(
# top comment
workers = 2

[run]
out_dir = "runs/demo"   # trailing comment

[window]
length = 96
stride = 8

[eval]
seeds = [0, 1, 2]

[features]
groups = ["moments", "dynamics"]

[gbdt]
learning_rate = 0.025
class_balanced = true
)";
    const auto config = Config::parse_string(text);
    CHECK(config.get_int("workers") == 2);
    CHECK(config.get_string("run.out_dir") == "runs/demo");
    CHECK(config.get_int("window.length") == 96);
    CHECK(config.get_int_list("eval.seeds") == std::vector<std::int64_t>{0, 1, 2});
    CHECK(config.get_string_list("features.groups") ==
          std::vector<std::string>{"moments", "dynamics"});
    CHECK(config.get_double("gbdt.learning_rate") == 0.025);
    CHECK(config.get_bool("gbdt.class_balanced"));
    CHECK(config.get_int("window.horizon", 12) == 12);  // fallback
    CHECK(!config.has("window.horizon"));
}

TEST_CASE("integers promote to double but not the reverse") {
    const auto config = Config::parse_string("a = 3\nb = 2.5\n");
    CHECK(config.get_double("a") == 3.0);
    CHECK(config.get_double("b") == 2.5);
    CHECK_THROWS_AS(config.get_int("b"), ConfigError);
}

TEST_CASE("parse errors carry the origin and line") {
    CHECK_THROWS_WITH_AS(Config::parse_string("key value\n", "x.toml"),
                         doctest::Contains("x.toml:1"), ConfigError);
    CHECK_THROWS_AS(Config::parse_string("[sec\nk = 1\n"), ConfigError);
    CHECK_THROWS_AS(Config::parse_string("k = [1, 2\n"), ConfigError);
    CHECK_THROWS_AS(Config::parse_string("k = \n"), ConfigError);
    CHECK_THROWS_AS(Config::parse_string("k = what\n"), ConfigError);
}

TEST_CASE("missing and mistyped keys throw ConfigError naming the key") {
    const auto config = Config::parse_string("a = 1\n");
    CHECK_THROWS_WITH_AS(config.get_string("b"), doctest::Contains("'b'"), ConfigError);
    CHECK_THROWS_WITH_AS(config.get_string("a"), doctest::Contains("'a'"), ConfigError);
}

TEST_CASE("serialize produces a canonical sorted document that reparses") {
    auto config = Config::parse_string(
        "[z]\nk = 1\n[a]\nname = \"v\"\nflags = [true, false]\nx = 1.5\n");
    config.set_int_list("eval.seeds", {3, 4});
    const std::string text = config.serialize();
    CHECK(text.find("a.flags = [true, false]") != std::string::npos);
    CHECK(text.find("eval.seeds = [3, 4]") != std::string::npos);
    const auto reparsed = Config::parse_string(text);
    CHECK(reparsed.serialize() == text);
    CHECK(reparsed.get_int("z.k") == 1);
    CHECK(reparsed.get_string("a.name") == "v");
}

TEST_CASE("method specs parse to the right detector kinds and groups") {
    using pipeline::MethodSpec;
    const auto boost = pipeline::parse_method("aerotsboost");
    CHECK(boost.kind == MethodSpec::Kind::gbdt);
    CHECK(boost.groups == descriptors::GroupSet::all());

    const auto moments = pipeline::parse_method("moments_only");
    CHECK(moments.kind == MethodSpec::Kind::gbdt);
    CHECK(moments.groups == descriptors::GroupSet::only(descriptors::Group::moments));

    const auto nodyn = pipeline::parse_method("aerotsboost:no_dynamics");
    CHECK(nodyn.groups ==
          descriptors::GroupSet::all().without(descriptors::Group::dynamics));

    CHECK(pipeline::parse_method("pca").kind == MethodSpec::Kind::pca);
    CHECK(pipeline::parse_method("linear_sgd").kind == MethodSpec::Kind::linear_sgd);
    CHECK_THROWS_AS(pipeline::parse_method("random_forest"), ConfigError);
    CHECK_THROWS_AS(pipeline::parse_method("aerotsboost:everything"), ConfigError);
}
