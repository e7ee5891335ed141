#include <doctest.h>

#include "core/config.hpp"
#include "core/error.hpp"

using namespace hybridchain;

TEST_SUITE_BEGIN("config");

TEST_CASE("defaults load from an empty object and round-trip canonically") {
    RunConfig cfg = load_config_text("{}");
    CHECK(cfg.protocol.M == 60);
    CHECK(cfg.protocol.f == 4);
    CHECK(cfg.protocol.cadence == 20);
    CHECK(cfg.workload.n_users == 100);
    CHECK(cfg.net.round_time_ms == 500.0);
    CHECK(cfg.seed == 1);

    const std::string dumped = dump_config(cfg);
    RunConfig back = load_config_text(dumped);
    CHECK(dump_config(back) == dumped);
}

TEST_CASE("unknown keys are rejected everywhere") {
    CHECK_THROWS_AS(load_config_text(R"({"bogus": 1})"), ConfigError);
    CHECK_THROWS_AS(load_config_text(R"({"workload": {"gamma": 10, "shape": 2}})"), ConfigError);
    CHECK_THROWS_AS(load_config_text(R"({"protocol": {"fudge": 1}})"), ConfigError);
    CHECK_THROWS_AS(load_config_text("not json at all"), ConfigError);
}

TEST_CASE("the Byzantine bound on f is enforced with a named message") {
    try {
        load_config_text(R"({"protocol": {"M": 60, "f": 30}})");
        FAIL("expected rejection");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("floor(M/2)-1") != std::string::npos);
    }
    // f = floor(M/2)-1 is the largest admissible value
    CHECK_NOTHROW(load_config_text(R"({"protocol": {"M": 60, "f": 29}})"));
}

TEST_CASE("module invariants are re-checked on load") {
    CHECK_THROWS_AS(load_config_text(R"({"workload": {"gamma": 0}})"), ConfigError);
    CHECK_THROWS_AS(load_config_text(R"({"workload": {"invalid_fraction": 1.5}})"), ConfigError);
    CHECK_THROWS_AS(load_config_text(R"({"protocol": {"mu1": 0.4, "mu2": 0.5}})"), ConfigError);
    CHECK_THROWS_AS(load_config_text(R"({"protocol": {"zeta1": 1.0}})"), ConfigError);
    CHECK_THROWS_AS(load_config_text(R"({"net": {"link_latency_ms": 600}})"), ConfigError);
    CHECK_THROWS_AS(load_config_text(R"({"adversary": {"tau": -0.1}})"), ConfigError);
    CHECK_THROWS_AS(load_config_text(R"({"adversary": {"behavior": "eclipse"}})"), ConfigError);
    CHECK_THROWS_AS(load_config_text(R"({"adversary": {"replay_count": 5}})"), ConfigError);
    CHECK_THROWS_AS(load_config_text(R"({"protocol": {"forced_tie": "accept"}})"), ConfigError);
    CHECK_THROWS_AS(load_config_text(R"({"bootstrap": {"training_size": 0}})"), ConfigError);
}

TEST_CASE("over-f adversary populations warn instead of failing") {
    RunConfig cfg = load_config_text(R"({"adversary": {"tau": 0.4}})");
    const std::string warning = validate_config(cfg);
    CHECK(warning.find("stress") != std::string::npos);
    CHECK(validate_config(load_config_text("{}")).empty());
}

TEST_CASE("presets") {
    RunConfig desk = preset_config("desk");
    CHECK(desk.protocol.M == 60);
    CHECK(desk.workload.gamma == 600.0);
    CHECK(desk.workload.n_users == 25);
    RunConfig paper = preset_config("paper");
    CHECK(paper.protocol.M == 1000);
    CHECK(paper.workload.gamma == 6000.0);
    CHECK(paper.protocol.lambda() == 10);
    CHECK_THROWS_AS(preset_config("galaxy"), ConfigError);
}

TEST_CASE("sweep specs parse, validate, and apply their axis") {
    SweepSpec spec = load_sweep_text(R"({"axis": "gamma", "points": [600, 1200], "repeats": 3})");
    CHECK(spec.axis == "gamma");
    CHECK(spec.points.size() == 2);
    CHECK(spec.repeats == 3);
    CHECK(apply_axis(spec.base, "gamma", 1200).workload.gamma == 1200.0);
    CHECK(apply_axis(spec.base, "tau", 0.3).adversary.tau == 0.3);
    CHECK(apply_axis(spec.base, "M", 100).protocol.M == 100);

    CHECK_THROWS_AS(load_sweep_text(R"({"axis": "users", "points": [1]})"), ConfigError);
    CHECK_THROWS_AS(load_sweep_text(R"({"axis": "tau", "points": []})"), ConfigError);
    CHECK_THROWS_AS(load_sweep_text(R"({"axis": "tau", "points": [0.1], "repeats": 0})"), ConfigError);
}

TEST_SUITE_END();
