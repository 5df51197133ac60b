#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "eomsim/config.hpp"
#include "eomsim/network.hpp"

using namespace eomsim;

namespace {

const char* baseline = R"({
    "g_em_hz": 2.0e6,
    "g_om0_hz": 5.5e3,
    "c_om": 1.0,
    "kappa_o_i_hz": 0.24e9,
    "kappa_o_c_hz": 0.24e9,
    "kappa_e_i_hz": 100e3,
    "kappa_e_c_hz": 15.0e6,
    "kappa_m_hz": 20e3,
    "omega_m_hz": 10e9,
    "omega_e_hz": 10e9,
    "omega_o_hz": 195e12,
    "temperature_k": 1.0,
    "n_ba_override": 1.67,
    "detectors": {
        "optical": {"eta": 0.5, "transmissivity": 1.0, "dark_rate_hz": 0.0},
        "microwave": {"eta": 0.5, "transmissivity": 1.0, "dark_rate_hz": 0.0},
        "window_s": 1.0e-6
    }
})";

std::string with_replacement(const std::string& from, const std::string& to) {
    std::string text = baseline;
    const auto at = text.find(from);
    REQUIRE(at != std::string::npos);
    text.replace(at, from.size(), to);
    return text;
}

} // namespace

TEST_CASE("baseline config parses with angular conversion") {
    const RunConfig config = parse_run_config(baseline);
    CHECK(config.params.g_em == doctest::Approx(constants::two_pi * 2.0e6));
    CHECK(config.params.delta_p == config.params.omega_m); // blue-sideband default
    CHECK(config.params.n_ba_override.value() == 1.67);

    const DerivedParams d = derive(config.params);
    CHECK(d.c_om == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.c_em == doctest::Approx(52.98013245).epsilon(1e-8));

    REQUIRE(config.detectors.has_value());
    CHECK(config.detectors->optical.eta == 0.5);
    CHECK(config.detectors->microwave.window == 1.0e-6);
}

TEST_CASE("unknown keys are rejected by name") {
    const std::string text = with_replacement("\"c_om\": 1.0", "\"c_om\": 1.0, \"bogus\": 3");
    try {
        parse_run_config(text);
        FAIL("expected config_error");
    } catch (const config_error& e) {
        CHECK(std::string(e.what()).find("bogus") != std::string::npos);
    }

    const std::string nested = with_replacement("\"eta\": 0.5, \"transmissivity\": 1.0",
                                                "\"eta\": 0.5, \"gain\": 2.0");
    try {
        parse_run_config(nested);
        FAIL("expected config_error");
    } catch (const config_error& e) {
        CHECK(std::string(e.what()).find("gain") != std::string::npos);
    }
}

TEST_CASE("pump specification must be unambiguous") {
    CHECK_THROWS_AS(parse_run_config(with_replacement("\"c_om\": 1.0", "\"temperature_k\": 1.0")),
                    config_error);
    const std::string both =
        with_replacement("\"c_om\": 1.0", "\"c_om\": 1.0, \"n_pump\": 100.0");
    CHECK_THROWS_AS(parse_run_config(both), config_error);
    const RunConfig direct =
        parse_run_config(with_replacement("\"c_om\": 1.0", "\"n_pump\": 79338.8"));
    CHECK(derive(direct.params).c_om == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("missing required keys are named") {
    const std::string text = with_replacement("\"kappa_m_hz\": 20e3,\n", "");
    try {
        parse_run_config(text);
        FAIL("expected config_error");
    } catch (const config_error& e) {
        CHECK(std::string(e.what()).find("kappa_m_hz") != std::string::npos);
    }
}

TEST_CASE("invalid values surface as config errors") {
    CHECK_THROWS_AS(parse_run_config("not json"), config_error);
    CHECK_THROWS_AS(parse_run_config("[1, 2]"), config_error);
    CHECK_THROWS_AS(parse_run_config(with_replacement("\"kappa_m_hz\": 20e3",
                                                      "\"kappa_m_hz\": -1.0")),
                    config_error);
    CHECK_THROWS_AS(parse_run_config(with_replacement("\"eta\": 0.5", "\"eta\": 1.5")),
                    config_error);
    CHECK_THROWS_AS(parse_run_config(with_replacement("\"window_s\": 1.0e-6",
                                                      "\"window_s\": 0.0")),
                    config_error);
}

TEST_CASE("detectors block is optional but complete when present") {
    std::string text = baseline;
    const auto at = text.find(",\n    \"detectors\"");
    REQUIRE(at != std::string::npos);
    const auto end = text.rfind('}');
    std::string without = text.substr(0, at) + "\n" + text.substr(end - 1);
    const RunConfig config = parse_run_config(without);
    CHECK_FALSE(config.detectors.has_value());

    const std::string incomplete = with_replacement(
        "\"microwave\": {\"eta\": 0.5, \"transmissivity\": 1.0, \"dark_rate_hz\": 0.0},\n", "");
    CHECK_THROWS_AS(parse_run_config(incomplete), config_error);
}

TEST_CASE("missing file reports a config error") {
    CHECK_THROWS_AS(load_run_config("/nonexistent/config.json"), config_error);
}
