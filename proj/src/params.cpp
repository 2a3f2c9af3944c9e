#include "shev/params.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace shev {

namespace {

double lerp(double x0, double x1, double y0, double y1, double x) {
    if (x1 == x0) return y0;
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

size_t lower_cell(const std::vector<double>& axis, double x) {
    // index i with axis[i] <= x < axis[i+1], clamped to valid cells
    auto it = std::upper_bound(axis.begin(), axis.end(), x);
    size_t i = static_cast<size_t>(std::distance(axis.begin(), it));
    if (i == 0) return 0;
    if (i >= axis.size()) return axis.size() - 2;
    return i - 1;
}

}  // namespace

double FuelCurve::at(double p_w) const {
    if (empty()) throw std::logic_error("FuelCurve::at on empty table");
    if (p_w <= power_w.front()) return mdot_kgps.front();
    if (p_w >= power_w.back()) return mdot_kgps.back();
    size_t i = lower_cell(power_w, p_w);
    return lerp(power_w[i], power_w[i + 1], mdot_kgps[i], mdot_kgps[i + 1], p_w);
}

double MotorEffMap::at(double v, double p_w) const {
    if (empty()) throw std::logic_error("MotorEffMap::at on empty map");
    if (v_mps.size() < 2 || p_drive_w.size() < 2) {
        return eta.front();
    }
    const double vc = std::clamp(v, v_mps.front(), v_mps.back());
    const double pc = std::clamp(p_w, p_drive_w.front(), p_drive_w.back());
    const size_t i = lower_cell(v_mps, vc);
    const size_t j = lower_cell(p_drive_w, pc);
    const size_t np = p_drive_w.size();
    const double e00 = eta[i * np + j];
    const double e01 = eta[i * np + j + 1];
    const double e10 = eta[(i + 1) * np + j];
    const double e11 = eta[(i + 1) * np + j + 1];
    const double lo = lerp(p_drive_w[j], p_drive_w[j + 1], e00, e01, pc);
    const double hi = lerp(p_drive_w[j], p_drive_w[j + 1], e10, e11, pc);
    return lerp(v_mps[i], v_mps[i + 1], lo, hi, vc);
}

void VehicleParams::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("VehicleParams: ") + what);
    };
    auto eff = [&](double e, const char* name) {
        require(e > 0.0 && e <= 1.0, name);
    };
    require(mass_kg > 0.0, "mass must be positive");
    require(rolling_coef >= 0.0 && aero_coef >= 0.0, "resistance coefficients must be non-negative");
    require(gravity > 0.0, "gravity must be positive");
    eff(eta_t, "eta_t must be in (0,1]");
    eff(eta_i, "eta_i must be in (0,1]");
    eff(eta_r, "eta_r must be in (0,1]");
    eff(eta_dc, "eta_dc must be in (0,1]");
    eff(eta_m, "eta_m must be in (0,1]");
    require(q_f0 > 0.0, "q_f0 must be positive");
    require(alpha_f > 0.0, "alpha_f must be positive");
    require(q_max_c > 0.0 && r_b > 0.0 && v_oc > 0.0, "battery constants must be positive");
    require(soc_min > 0.0 && soc_max < 1.0 && soc_min < soc_max,
            "SOC limits must satisfy 0 < soc_min < soc_max < 1");
    require(p_ss_min < 0.0 && p_ss_max > 0.0, "p_ss limits must straddle zero");
    require(p_ps_max > 0.0, "p_ps_max must be positive");
    // discharging must stay below the battery discriminant limit
    require(p_ss_max < v_oc * v_oc * eta_dc / (4.0 * r_b),
            "p_ss_max must be below V_oc^2*eta_dc/(4*R_b)");
    require(restart_k >= 0.0, "restart coefficient K must be non-negative");
    require(q_hv > 0.0, "q_hv must be positive");
    if (!fcm_table.empty()) {
        require(fcm_table.power_w.size() == fcm_table.mdot_kgps.size() &&
                    fcm_table.power_w.size() >= 2,
                "fuel table needs >= 2 matching rows");
        require(std::is_sorted(fcm_table.power_w.begin(), fcm_table.power_w.end()),
                "fuel table power column must be ascending");
    }
    if (!eta_m_map.empty()) {
        require(eta_m_map.eta.size() ==
                    eta_m_map.v_mps.size() * eta_m_map.p_drive_w.size(),
                "efficiency map grid size mismatch");
    }
}

VehicleParams VehicleParams::table1() {
    VehicleParams p;
    p.validate();
    return p;
}

}  // namespace shev
