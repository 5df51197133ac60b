#include "eomsim/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <map>
#include <stdexcept>
#include <thread>

#include "eomsim/entanglement.hpp"
#include "eomsim/network.hpp"

namespace eomsim {

namespace {

constexpr double stability_fence = 1e-9;

void evaluate_rows(int ny, const std::function<void(int)>& row_fn) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = std::min<unsigned>(hw, static_cast<unsigned>(ny));
    if (workers <= 1) {
        for (int iy = 0; iy < ny; ++iy) row_fn(iy);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) {
        pool.emplace_back([&, t] {
            for (int iy = static_cast<int>(t); iy < ny; iy += static_cast<int>(workers)) row_fn(iy);
        });
    }
    for (auto& th : pool) th.join();
}

// Derived quantities of a sweep cell: the readout ratio resizes the
// microwave coupling rate, the cooperativity axis replaces the pump knob.
DerivedParams cell_derived(const SystemParams& base, const DerivedParams& base_derived,
                           double c_om, double ratio) {
    DerivedParams d = base_derived;
    const double kappa_e = base.kappa_e_i * (1.0 + ratio);
    d.kappa_e = kappa_e;
    d.zeta_e = ratio / (1.0 + ratio);
    d.c_em = 4.0 * base.g_em * base.g_em / (kappa_e * base.kappa_m);
    d.c_om = c_om;
    d.g_om = 0.5 * std::sqrt(c_om * d.kappa_o * base.kappa_m);
    d.pdc_margin = 1.0 + d.c_em - d.c_om;
    return d;
}

struct SegmentKey {
    std::uint64_t a;
    std::uint64_t b;
    bool operator<(const SegmentKey& o) const { return a < o.a || (a == o.a && b < o.b); }
};

SegmentKey key_of(const ContourPoint& p) {
    SegmentKey k{};
    std::memcpy(&k.a, &p.x, sizeof(double));
    std::memcpy(&k.b, &p.y, sizeof(double));
    return k;
}

struct Segment {
    ContourPoint p1;
    ContourPoint p2;
};

ContourPoint interpolate(double xa, double ya, double fa, double xb, double yb, double fb,
                         double level) {
    const double t = (level - fa) / (fb - fa);
    return {xa + t * (xb - xa), ya + t * (yb - ya)};
}

} // namespace

double Axis::value(int i) const {
    if (count == 1 || i == 0) return min;
    if (i == count - 1) return max;
    const double t = static_cast<double>(i) / (count - 1);
    if (log_scale) return std::exp(std::log(min) + t * (std::log(max) - std::log(min)));
    return min + t * (max - min);
}

void Axis::validate() const {
    if (count < 1) throw std::invalid_argument("axis '" + name + "': count must be >= 1");
    if (!(max >= min)) throw std::invalid_argument("axis '" + name + "': max must be >= min");
    if (log_scale && !(min > 0.0))
        throw std::invalid_argument("axis '" + name + "': log scale requires min > 0");
}

bool SweepGrid::any_stable() const {
    return std::any_of(stable.begin(), stable.end(), [](std::uint8_t s) { return s != 0; });
}

SweepGrid map_entanglement(const SystemParams& base, const Axis& c_om_axis,
                           const Axis& ratio_axis) {
    c_om_axis.validate();
    ratio_axis.validate();
    const DerivedParams base_derived = derive(base);

    SweepGrid grid;
    grid.x = c_om_axis;
    grid.y = ratio_axis;
    grid.field_names = {"e_f", "purity", "u", "v", "w"};
    const std::size_t cells = static_cast<std::size_t>(c_om_axis.count) * ratio_axis.count;
    for (const auto& name : grid.field_names) grid.fields[name].assign(cells, 0.0);
    grid.stable.assign(cells, 0);

    auto& e_f = grid.fields["e_f"];
    auto& mu = grid.fields["purity"];
    auto& u = grid.fields["u"];
    auto& v = grid.fields["v"];
    auto& w = grid.fields["w"];

    evaluate_rows(ratio_axis.count, [&](int iy) {
        const double ratio = ratio_axis.value(iy);
        for (int ix = 0; ix < c_om_axis.count; ++ix) {
            const std::size_t at = grid.cell(ix, iy);
            const DerivedParams d = cell_derived(base, base_derived, c_om_axis.value(ix), ratio);
            if (!(d.pdc_margin > stability_fence)) continue;
            const StandardFormState s = closed_form_uvw(d, base_derived.n_ba);
            const EntanglementReport report = entanglement_of_formation(s);
            e_f[at] = report.e_f;
            mu[at] = report.purity;
            u[at] = s.u;
            v[at] = s.v;
            w[at] = s.w;
            grid.stable[at] = 1;
        }
    });

    // Strong-PDC boundary C_om = 1 + C_em, one point per ratio row.
    Polyline boundary;
    for (int iy = 0; iy < ratio_axis.count; ++iy) {
        const double ratio = ratio_axis.value(iy);
        const DerivedParams d = cell_derived(base, base_derived, 1.0, ratio);
        const double c_om_line = 1.0 + d.c_em;
        if (c_om_line >= c_om_axis.min && c_om_line <= c_om_axis.max)
            boundary.push_back({c_om_line, ratio});
    }
    if (!boundary.empty()) grid.contours["pdc_boundary"].push_back(std::move(boundary));
    return grid;
}

SweepGrid map_thresholds(const SystemParams& base, const Axis& c_om_axis, const Axis& ratio_axis,
                         double n_ba, double eta_o, double eta_e) {
    c_om_axis.validate();
    ratio_axis.validate();
    const DerivedParams base_derived = derive(base);

    SweepGrid grid;
    grid.x = c_om_axis;
    grid.y = ratio_axis;
    grid.field_names = {"f_lb", "s_max"};
    const std::size_t cells = static_cast<std::size_t>(c_om_axis.count) * ratio_axis.count;
    for (const auto& name : grid.field_names) grid.fields[name].assign(cells, 0.0);
    grid.stable.assign(cells, 0);

    auto& f_lb = grid.fields["f_lb"];
    auto& s_max = grid.fields["s_max"];

    evaluate_rows(ratio_axis.count, [&](int iy) {
        const double ratio = ratio_axis.value(iy);
        for (int ix = 0; ix < c_om_axis.count; ++ix) {
            const std::size_t at = grid.cell(ix, iy);
            const DerivedParams d = cell_derived(base, base_derived, c_om_axis.value(ix), ratio);
            if (!(d.pdc_margin > stability_fence)) continue;
            const StandardFormState s = closed_form_uvw(d, n_ba);
            f_lb[at] = fidelity_lower_bound_analytic(s, eta_o, eta_e);
            s_max[at] = chsh_max_analytic(s, eta_o, eta_e);
            grid.stable[at] = 1;
        }
    });

    grid.contours["f_lb_half"] = extract_contour(grid.x, grid.y, f_lb, grid.stable, 0.5);
    grid.contours["s_max_two"] = extract_contour(grid.x, grid.y, s_max, grid.stable, 2.0);
    return grid;
}

std::vector<ChshCurve> chsh_curve(const SystemParams& base, const std::vector<double>& phi_grid,
                                  const std::vector<double>& n_ba_list, double eta_o,
                                  double eta_e) {
    if (phi_grid.empty()) throw std::invalid_argument("chsh_curve: empty phase grid");
    const DerivedParams derived = derive(base);
    if (!(derived.pdc_margin > stability_fence))
        throw std::runtime_error("chsh_curve: operating point is unstable");

    std::vector<ChshCurve> curves;
    curves.reserve(n_ba_list.size());
    for (double n_ba : n_ba_list) {
        const StandardFormState state = closed_form_uvw(derived, n_ba);
        ChshCurve curve;
        curve.n_ba = n_ba;
        curve.phi_e = phi_grid;
        curve.s.resize(phi_grid.size());
        for (std::size_t i = 0; i < phi_grid.size(); ++i) {
            curve.s[i] = chsh_s_curve_analytic(state, phi_grid[i], eta_o, eta_e);
            if (std::abs(curve.s[i]) > curve.max_abs_s) {
                curve.max_abs_s = std::abs(curve.s[i]);
                curve.argmax_phi = phi_grid[i];
            }
        }
        curves.push_back(std::move(curve));
    }
    return curves;
}

std::vector<Polyline> extract_contour(const Axis& x, const Axis& y,
                                      const std::vector<double>& field,
                                      const std::vector<std::uint8_t>& valid, double level) {
    x.validate();
    y.validate();
    const std::size_t cells = static_cast<std::size_t>(x.count) * y.count;
    if (field.size() != cells || valid.size() != cells)
        throw std::invalid_argument("extract_contour: field does not match the axes");

    const auto at = [&](int ix, int iy) { return static_cast<std::size_t>(iy) * x.count + ix; };
    std::vector<Segment> segments;

    for (int iy = 0; iy + 1 < y.count; ++iy) {
        for (int ix = 0; ix + 1 < x.count; ++ix) {
            if (!valid[at(ix, iy)] || !valid[at(ix + 1, iy)] || !valid[at(ix, iy + 1)] ||
                !valid[at(ix + 1, iy + 1)])
                continue;
            const double x0 = x.value(ix), x1 = x.value(ix + 1);
            const double y0 = y.value(iy), y1 = y.value(iy + 1);
            const double f00 = field[at(ix, iy)], f10 = field[at(ix + 1, iy)];
            const double f01 = field[at(ix, iy + 1)], f11 = field[at(ix + 1, iy + 1)];

            int code = 0;
            if (f00 >= level) code |= 1;
            if (f10 >= level) code |= 2;
            if (f11 >= level) code |= 4;
            if (f01 >= level) code |= 8;
            if (code == 0 || code == 15) continue;

            // Edge crossings: bottom, right, top, left.
            ContourPoint pb, pr, pt, pl;
            const bool eb = (f00 >= level) != (f10 >= level);
            const bool er = (f10 >= level) != (f11 >= level);
            const bool et = (f01 >= level) != (f11 >= level);
            const bool el = (f00 >= level) != (f01 >= level);
            if (eb) pb = interpolate(x0, y0, f00, x1, y0, f10, level);
            if (er) pr = interpolate(x1, y0, f10, x1, y1, f11, level);
            if (et) pt = interpolate(x0, y1, f01, x1, y1, f11, level);
            if (el) pl = interpolate(x0, y0, f00, x0, y1, f01, level);

            switch (code) {
                case 1: case 14: segments.push_back({pl, pb}); break;
                case 2: case 13: segments.push_back({pb, pr}); break;
                case 3: case 12: segments.push_back({pl, pr}); break;
                case 4: case 11: segments.push_back({pr, pt}); break;
                case 6: case 9:  segments.push_back({pb, pt}); break;
                case 7: case 8:  segments.push_back({pl, pt}); break;
                case 5: case 10: {
                    // saddle: split by the cell-center value
                    const double center = 0.25 * (f00 + f10 + f01 + f11);
                    const bool center_high = center >= level;
                    if ((code == 5) == center_high) {
                        segments.push_back({pl, pt});
                        segments.push_back({pb, pr});
                    } else {
                        segments.push_back({pl, pb});
                        segments.push_back({pr, pt});
                    }
                    break;
                }
                default: break;
            }
        }
    }

    // Chain segments that share exact endpoints into polylines.
    std::multimap<SegmentKey, std::size_t> by_end;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        by_end.emplace(key_of(segments[i].p1), i);
        by_end.emplace(key_of(segments[i].p2), i);
    }
    std::vector<bool> used(segments.size(), false);
    std::vector<Polyline> polylines;

    const auto take_next = [&](const ContourPoint& tip, ContourPoint& next) -> bool {
        const SegmentKey tip_key = key_of(tip);
        auto [lo, hi] = by_end.equal_range(tip_key);
        for (auto it = lo; it != hi; ++it) {
            const std::size_t i = it->second;
            if (used[i]) continue;
            used[i] = true;
            const SegmentKey p1_key = key_of(segments[i].p1);
            const bool p1_is_tip = !(p1_key < tip_key) && !(tip_key < p1_key);
            next = p1_is_tip ? segments[i].p2 : segments[i].p1;
            return true;
        }
        return false;
    };

    for (std::size_t i = 0; i < segments.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        std::vector<ContourPoint> chain{segments[i].p1, segments[i].p2};
        ContourPoint next;
        while (take_next(chain.back(), next)) chain.push_back(next);
        while (take_next(chain.front(), next)) chain.insert(chain.begin(), next);
        polylines.push_back(std::move(chain));
    }
    return polylines;
}

} // namespace eomsim
