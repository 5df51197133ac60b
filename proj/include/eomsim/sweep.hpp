#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "eomsim/params.hpp"

namespace eomsim {

/// One sweep axis; log axes require min > 0.
struct Axis {
    std::string name;
    bool log_scale = false;
    double min = 0.0;
    double max = 0.0;
    int count = 0;

    double value(int i) const;
    void validate() const;
};

struct ContourPoint {
    double x = 0.0;
    double y = 0.0;
};

using Polyline = std::vector<ContourPoint>;

/// Rectangular sweep result: named observable fields over an x-y grid,
/// per-cell stability flags, and named level-set polylines.
struct SweepGrid {
    Axis x;
    Axis y;
    std::vector<std::string> field_names; // serialization order
    std::map<std::string, std::vector<double>> fields; // row-major, index = iy*nx + ix
    std::vector<std::uint8_t> stable;
    std::map<std::string, std::vector<Polyline>> contours;

    std::size_t cell(int ix, int iy) const { return static_cast<std::size_t>(iy) * x.count + ix; }
    bool any_stable() const;
};

/// Entanglement of formation and purity over cooperativity x readout-ratio,
/// evaluated on resonance. Emits the strong-PDC boundary C_om = 1 + C_em as
/// the "pdc_boundary" contour.
SweepGrid map_entanglement(const SystemParams& base, const Axis& c_om_axis,
                           const Axis& ratio_axis);

/// Fidelity lower bound and |S|_max over the same plane, with contours at
/// f_lb = 1/2 and s_max = 2.
SweepGrid map_thresholds(const SystemParams& base, const Axis& c_om_axis, const Axis& ratio_axis,
                         double n_ba, double eta_o, double eta_e);

struct ChshCurve {
    double n_ba = 0.0;
    std::vector<double> phi_e;
    std::vector<double> s;
    double max_abs_s = 0.0;
    double argmax_phi = 0.0;
};

/// S(0, phi_e; pi/2, phi_e + pi/2) for each thermal occupancy.
std::vector<ChshCurve> chsh_curve(const SystemParams& base, const std::vector<double>& phi_grid,
                                  const std::vector<double>& n_ba_list, double eta_o,
                                  double eta_e);

/// Marching-squares level set of a row-major field; cells touching invalid
/// points are skipped. Segments are chained into polylines.
std::vector<Polyline> extract_contour(const Axis& x, const Axis& y,
                                      const std::vector<double>& field,
                                      const std::vector<std::uint8_t>& valid, double level);

} // namespace eomsim
