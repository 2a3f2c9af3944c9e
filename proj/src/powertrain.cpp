#include "shev/powertrain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shev/errors.hpp"

namespace shev {

double drive_power(double v_mps, double accel_mps2, double slope_rad,
                   const VehicleParams& p) {
    const double f_roll = p.rolling_coef * p.mass_kg * p.gravity;
    const double f_aero = p.aero_coef * v_mps * v_mps;
    const double f_grade = p.mass_kg * p.gravity * std::sin(slope_rad);
    return v_mps * (p.mass_kg * accel_mps2 + f_roll + f_aero + f_grade);
}

double motor_eta(const VehicleParams& p, double v_mps, double p_drive_w) {
    if (p.eta_m_map.empty()) return p.eta_m;
    return p.eta_m_map.at(v_mps, p_drive_w);
}

double load_power(double p_drive_w, double v_mps, const VehicleParams& p) {
    const double chain = p.eta_i * motor_eta(p, v_mps, p_drive_w) * p.eta_t;
    if (p_drive_w >= 0.0) return p_drive_w / chain;
    return std::max(p_drive_w * chain, p.p_ss_min);
}

double load_power(double p_drive_w, const VehicleParams& p) {
    return load_power(p_drive_w, 0.0, p);
}

double battery_power(double p_ss_w, const VehicleParams& p) {
    return p_ss_w > 0.0 ? p_ss_w / p.eta_dc
         : p_ss_w < 0.0 ? p_ss_w * p.eta_dc
                        : 0.0;
}

double battery_current(double p_ss_w, const VehicleParams& p) {
    const double p_b = battery_power(p_ss_w, p);
    const double disc = p.v_oc * p.v_oc - 4.0 * p_b * p.r_b;
    if (disc < 0.0) throw DiscriminantNegative(p_b);
    return (p.v_oc - std::sqrt(disc)) / (2.0 * p.r_b);
}

double soc_rate(double p_ss_w, const VehicleParams& p) {
    return -battery_current(p_ss_w, p) / p.q_max_c;
}

double max_feasible_discharge(const VehicleParams& p) {
    return p.eta_dc * p.v_oc * p.v_oc / (4.0 * p.r_b);
}

double fuel_rate(double p_ps_w, int engine, const VehicleParams& p) {
    constexpr double kPowerTol = 1e-6;  // W
    if (p_ps_w < -kPowerTol || p_ps_w > p.p_ps_max + kPowerTol) {
        throw PowerOutOfRange("P_PS = " + std::to_string(p_ps_w) +
                              " W outside [0, P_PS_max]");
    }
    if (engine == 0) {
        if (std::abs(p_ps_w) > kPowerTol) {
            throw PowerOutOfRange("engine off but P_PS nonzero");
        }
        return 0.0;
    }
    if (!p.fcm_table.empty()) return p.fcm_table.at(p_ps_w);
    return p.q_f0 + p.alpha_f * std::max(p_ps_w, 0.0);
}

PowertrainState step(const PowertrainState& state, double p_ps_w,
                     double p_ss_w, int engine_cmd, double dt,
                     const VehicleParams& p) {
    PowertrainState next = state;
    if (state.engine == 0 && engine_cmd == 1) {
        next.fuel_kg += p.restart_fuel_kg();
        next.restarts += 1;
    }
    next.engine = engine_cmd;
    next.fuel_kg += fuel_rate(p_ps_w, engine_cmd, p) * dt;
    next.soc += soc_rate(p_ss_w, p) * dt;
    return next;
}

}  // namespace shev
