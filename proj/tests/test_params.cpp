#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "eomsim/network.hpp"
#include "eomsim/params.hpp"
#include "test_support.hpp"

using namespace eomsim;
using test_support::device_params;

TEST_CASE("thermal occupancy limits and reference values") {
    const double omega = constants::two_pi * 10e9;
    CHECK(thermal_occupancy(omega, 0.0) == 0.0);
    // direct Planck evaluation at 10 GHz, 1 K
    CHECK(thermal_occupancy(omega, 1.0) == doctest::Approx(1.6235027).epsilon(1e-6));
    // hbar w / kB T = ln 2 gives exactly one quantum
    const double t_ln2 = constants::hbar * omega / (constants::k_boltzmann * std::log(2.0));
    CHECK(thermal_occupancy(omega, t_ln2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(thermal_occupancy(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(thermal_occupancy(omega, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(thermal_occupancy(std::nan(""), 1.0), std::invalid_argument);
}

TEST_CASE("thermal occupancy is monotone in temperature and frequency") {
    const double omega = constants::two_pi * 10e9;
    double previous = 0.0;
    for (double t = 0.1; t < 6.0; t += 0.3) {
        const double n = thermal_occupancy(omega, t);
        CHECK(n > previous);
        previous = n;
    }
    previous = thermal_occupancy(constants::two_pi * 1e9, 1.0);
    for (double f = 2e9; f < 40e9; f *= 1.7) {
        const double n = thermal_occupancy(constants::two_pi * f, 1.0);
        CHECK(n < previous);
        previous = n;
    }
}

TEST_CASE("derived quantities at the feasible device point") {
    const SystemParams p = device_params(150.0, 1.0, 1.67);
    const DerivedParams d = derive(p);
    CHECK(d.kappa_e == doctest::Approx(constants::two_pi * 15.1e6).epsilon(1e-12));
    CHECK(d.c_em == doctest::Approx(52.98013245).epsilon(1e-8));
    CHECK(d.zeta_e == doctest::Approx(150.0 / 151.0).epsilon(1e-12));
    CHECK(d.zeta_o == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(d.c_om == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.n_ba == 1.67);
    CHECK(d.pdc_margin == doctest::Approx(52.98013245).epsilon(1e-8));
}

TEST_CASE("bath occupancy falls back to the Planck value") {
    SystemParams p = device_params();
    p.n_ba_override.reset();
    CHECK(derive(p).n_ba == doctest::Approx(1.6235027).epsilon(1e-6));
}

TEST_CASE("required pump photons inverts the cooperativity") {
    SystemParams p = device_params();
    CHECK(required_pump_photons(p, 0.0) == 0.0);
    // g_om for unit cooperativity is 2 pi x 1.549 MHz
    const double n = required_pump_photons(p, 1.0);
    CHECK(std::sqrt(n) * p.g_om0 ==
          doctest::Approx(constants::two_pi * 1.5491933e6).epsilon(1e-7));
    CHECK(n == doctest::Approx(7.93e4).epsilon(2e-3));

    p.n_pump = 0.0;
    CHECK(derive(p).c_om == 0.0);
}

TEST_CASE("derive and required_pump_photons round-trip") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        SystemParams p = test_support::random_stable_params(rng);
        const double target = 50.0 * uni(rng);
        p.n_pump = required_pump_photons(p, target);
        CHECK(derive(p).c_om == doctest::Approx(target).epsilon(1e-12));
    }
}

TEST_CASE("unreachable cooperativity target is rejected") {
    SystemParams p = device_params();
    p.g_om0 = 0.0;
    CHECK_THROWS_AS(required_pump_photons(p, 1.0), std::invalid_argument);
}

TEST_CASE("validation rejects non-positive rates") {
    SystemParams p = device_params();
    p.kappa_m = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = device_params();
    p.n_pump = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = device_params();
    p.temperature = -0.1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("closed forms blow up as the pdc margin closes") {
    // evaluating u at margin -> 0 grows without bound
    const SystemParams base = device_params();
    DerivedParams d = derive(base);
    double previous = 0.0;
    for (double margin : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
        d.c_om = 1.0 + d.c_em - margin;
        d.pdc_margin = margin;
        const StandardFormState s = closed_form_uvw(d, 1.67);
        CHECK(s.u > previous);
        previous = s.u;
    }
    CHECK(previous > 1e10);
}
