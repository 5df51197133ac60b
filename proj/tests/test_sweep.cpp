#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "eomsim/io.hpp"
#include "eomsim/sweep.hpp"
#include "test_support.hpp"

using namespace eomsim;

TEST_CASE("axis values respect linear and log scales") {
    const Axis lin{"x", false, 0.0, 10.0, 11};
    CHECK(lin.value(0) == 0.0);
    CHECK(lin.value(5) == doctest::Approx(5.0));
    CHECK(lin.value(10) == 10.0);
    const Axis log{"y", true, 1.0, 1000.0, 4};
    CHECK(log.value(0) == doctest::Approx(1.0));
    CHECK(log.value(1) == doctest::Approx(10.0));
    CHECK(log.value(3) == doctest::Approx(1000.0));
    Axis bad{"z", true, 0.0, 1.0, 5};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("entanglement map structure") {
    const SystemParams base = test_support::device_params(150.0, 1.0, 1.67);
    const Axis x{"c_om", true, 0.1, 60.0, 40};
    const Axis y{"kappa_ec_over_ei", true, 1.0, 1000.0, 36};
    const SweepGrid grid = map_entanglement(base, x, y);

    CHECK(grid.any_stable());
    CHECK(grid.fields.at("e_f").size() == 40u * 36u);
    CHECK(grid.contours.count("pdc_boundary") == 1);

    int unstable_cells = 0;
    for (int iy = 0; iy < y.count; ++iy) {
        const double ratio = y.value(iy);
        const double kappa_e = base.kappa_e_i * (1.0 + ratio);
        const double c_em = 4.0 * base.g_em * base.g_em / (kappa_e * base.kappa_m);
        for (int ix = 0; ix < x.count; ++ix) {
            const std::size_t at = grid.cell(ix, iy);
            const bool expect_stable = 1.0 + c_em - x.value(ix) > 1e-9;
            CHECK(static_cast<bool>(grid.stable[at]) == expect_stable);
            if (!grid.stable[at]) {
                ++unstable_cells;
                continue;
            }
            // entanglement present wherever correlations are
            if (grid.fields.at("w")[at] > 1e-12) CHECK(grid.fields.at("e_f")[at] > 0.0);
            CHECK(grid.fields.at("purity")[at] <= 1.0 + 1e-12);
        }
    }
    CHECK(unstable_cells > 0); // the axis range crosses the instability line

    // along a fixed-ratio column, E_F grows and purity falls as the
    // cooperativity approaches the strong-PDC boundary from below
    const int iy = 20;
    double previous_ef = -1.0;
    double previous_purity = 2.0;
    for (int ix = 0; ix < x.count && grid.stable[grid.cell(ix, iy)]; ++ix) {
        const std::size_t at = grid.cell(ix, iy);
        CHECK(grid.fields.at("e_f")[at] >= previous_ef - 1e-12);
        CHECK(grid.fields.at("purity")[at] <= previous_purity + 1e-12);
        previous_ef = grid.fields.at("e_f")[at];
        previous_purity = grid.fields.at("purity")[at];
    }
}

TEST_CASE("zero-cooperativity column carries no entanglement") {
    const SystemParams base = test_support::device_params(150.0, 1.0, 1.67);
    const Axis x{"c_om", false, 0.0, 5.0, 11};
    const Axis y{"kappa_ec_over_ei", true, 10.0, 300.0, 6};
    const SweepGrid grid = map_entanglement(base, x, y);
    for (int iy = 0; iy < y.count; ++iy) {
        const std::size_t at = grid.cell(0, iy);
        CHECK(grid.stable[at] == 1);
        CHECK(grid.fields.at("e_f")[at] == 0.0);
        CHECK(grid.fields.at("w")[at] == 0.0);
    }
}

TEST_CASE("heralded normalization cancels the efficiency at low eta") {
    // Raw coincidences lose their setting dependence as eta -> 0, but the
    // heralded (coincidence-normalized) quantities do not: the limit of
    // |S|_max is 2 sqrt(2) w^2 / (w^2 + 2 (u-1)(v-1)).
    const SystemParams base = test_support::device_params(150.0, 1.0, 1.67);
    const DerivedParams derived = derive(base);
    for (double n_ba : {0.0, 1.67, 4.0}) {
        const StandardFormState s = closed_form_uvw(derived, n_ba);
        const double limit = 2.0 * std::sqrt(2.0) * s.w * s.w /
                             (s.w * s.w + 2.0 * (s.u - 1.0) * (s.v - 1.0));
        const double tiny = chsh_max_analytic(s, 1e-5, 1e-5);
        CHECK(tiny == doctest::Approx(limit).epsilon(1e-3));
        CHECK(tiny <= 2.0 * std::sqrt(2.0) + 1e-12);
    }
}

TEST_CASE("threshold map: CHSH region nests inside the fidelity region") {
    const SystemParams base = test_support::device_params(150.0, 1.0, 1.67);
    const Axis x{"c_om", true, 0.1, 60.0, 50};
    const Axis y{"kappa_ec_over_ei", true, 1.0, 1000.0, 50};
    const SweepGrid grid = map_thresholds(base, x, y, 1.67, 0.5, 0.5);

    int fidelity_cells = 0;
    int chsh_cells = 0;
    for (std::size_t at = 0; at < grid.stable.size(); ++at) {
        if (!grid.stable[at]) continue;
        const double f = grid.fields.at("f_lb")[at];
        const double s = grid.fields.at("s_max")[at];
        if (f > 0.5) ++fidelity_cells;
        if (s > 2.0) {
            ++chsh_cells;
            CHECK(f > 0.5);
        }
    }
    CHECK(fidelity_cells > 0);
    CHECK(chsh_cells > 0);
    CHECK(fidelity_cells >= chsh_cells);
    CHECK(grid.contours.at("f_lb_half").size() > 0);
    CHECK(grid.contours.at("s_max_two").size() > 0);
}

TEST_CASE("chsh curves: period, odd symmetry, thermal degradation") {
    const SystemParams base = test_support::device_params(150.0, 1.0, 1.67);
    std::vector<double> phi(721);
    const double two_pi = constants::two_pi;
    for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = two_pi * i / (phi.size() - 1);
    const auto curves = chsh_curve(base, phi, {0.0, 0.5, 1.0, 1.67, 3.0}, 0.5, 0.5);
    REQUIRE(curves.size() == 5);

    double previous_max = 1e9;
    for (const auto& curve : curves) {
        CHECK(curve.max_abs_s < previous_max);
        previous_max = curve.max_abs_s;
        // periodic: endpoints coincide
        CHECK(curve.s.front() == doctest::Approx(curve.s.back()).epsilon(1e-9));
        // argmax modulo pi sits at pi/4 within one grid step
        const double step = two_pi / (phi.size() - 1);
        const double reduced = std::fmod(curve.argmax_phi, 3.14159265358979323846);
        CHECK(std::abs(reduced - 3.14159265358979323846 / 4.0) < step + 1e-12);
    }
    CHECK(curves.front().max_abs_s > 2.0); // cold bath violates the inequality
    CHECK(curves.back().max_abs_s < 2.0);  // hot bath does not

    // odd symmetry about the zero crossing at phi_e = 3 pi / 4
    const auto& cold = curves.front();
    const StandardFormState state = closed_form_uvw(derive(base), 0.0);
    const double zero_phi = 0.75 * 3.14159265358979323846;
    for (double d : {0.1, 0.3, 0.7}) {
        const double left = chsh_s_curve_analytic(state, zero_phi - d, 0.5, 0.5);
        const double right = chsh_s_curve_analytic(state, zero_phi + d, 0.5, 0.5);
        CHECK(left == doctest::Approx(-right).epsilon(1e-9));
    }
    CHECK(std::abs(chsh_s_curve_analytic(state, zero_phi, 0.5, 0.5)) < 1e-9);
    (void)cold;
}

TEST_CASE("contour extraction on synthetic fields") {
    const Axis x{"x", false, 0.0, 1.0, 21};
    const Axis y{"y", false, 0.0, 1.0, 17};
    const std::size_t cells = 21u * 17u;
    std::vector<std::uint8_t> valid(cells, 1);

    // constant field: no contour
    std::vector<double> constant(cells, 3.0);
    CHECK(extract_contour(x, y, constant, valid, 5.0).empty());

    // f(x, y) = x crossing at level c: single vertical polyline at x = c
    std::vector<double> ramp(cells);
    for (int iy = 0; iy < 17; ++iy)
        for (int ix = 0; ix < 21; ++ix) ramp[iy * 21 + ix] = x.value(ix);
    const double level = 0.3123;
    const auto lines = extract_contour(x, y, ramp, valid, level);
    REQUIRE(lines.size() == 1);
    CHECK(lines.front().size() == 17u);
    for (const auto& p : lines.front()) CHECK(p.x == doctest::Approx(level).epsilon(1e-9));

    // a tilted plane yields the analytic straight line x + y = level
    std::vector<double> plane(cells);
    for (int iy = 0; iy < 17; ++iy)
        for (int ix = 0; ix < 21; ++ix) plane[iy * 21 + ix] = x.value(ix) + y.value(iy);
    const auto tilted = extract_contour(x, y, plane, valid, 0.77);
    REQUIRE(tilted.size() == 1);
    for (const auto& p : tilted.front())
        CHECK(p.x + p.y == doctest::Approx(0.77).epsilon(1e-9));

    // invalid cells are excluded
    std::vector<std::uint8_t> masked = valid;
    for (int iy = 0; iy < 17; ++iy) masked[iy * 21 + 10] = 0;
    const auto gapped = extract_contour(x, y, ramp, masked, 0.5);
    CHECK(gapped.empty()); // the crossing column is masked out

    std::vector<double> wrong_size(5, 0.0);
    CHECK_THROWS_AS(extract_contour(x, y, wrong_size, valid, 0.5), std::invalid_argument);
}

TEST_CASE("sweep serialization is deterministic and carries metadata") {
    const SystemParams base = test_support::device_params(150.0, 1.0, 1.67);
    const Axis x{"c_om", true, 0.5, 10.0, 8};
    const Axis y{"kappa_ec_over_ei", true, 10.0, 400.0, 7};
    const SweepGrid grid = map_thresholds(base, x, y, 1.67, 0.5, 0.5);
    const nlohmann::json resolved = params_json(base, derive(base));

    std::ostringstream first, second;
    write_sweep_csv(first, grid, resolved);
    write_sweep_csv(second, grid, resolved);
    CHECK(first.str() == second.str());
    CHECK(first.str().rfind("# {", 0) == 0);
    const std::string header = first.str().substr(first.str().find('\n') + 1, 100);
    CHECK(header.rfind("c_om,kappa_ec_over_ei,f_lb,s_max,status", 0) == 0);

    const nlohmann::json j = sweep_json(grid, resolved);
    CHECK(j.at("fields").at("f_lb").size() == 56u);
    CHECK(j.at("stable").size() == 56u);
}

TEST_CASE("shortest round-trip formatting") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(1e300) == "1e+300");
    const double value = 0.12345678901234567;
    CHECK(std::stod(format_double(value)) == value);
}
