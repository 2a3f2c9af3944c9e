#pragma once

#include <optional>
#include <string>
#include <vector>

namespace shev {

// Tabulated fuel curve: mass rate [kg/s] vs engine-branch output power [W].
// Linear interpolation inside the table, clamped extrapolation outside.
struct FuelCurve {
    std::vector<double> power_w;
    std::vector<double> mdot_kgps;

    bool empty() const { return power_w.empty(); }
    double at(double p_w) const;
};

// Motor/generator efficiency on a regular (speed x drive power) grid,
// bilinear interpolation with edge clamping. Rows must enumerate the grid
// as v-major blocks.
struct MotorEffMap {
    std::vector<double> v_mps;      // ascending axis
    std::vector<double> p_drive_w;  // ascending axis
    std::vector<double> eta;        // size v_mps.size() * p_drive_w.size()

    bool empty() const { return eta.empty(); }
    double at(double v, double p_w) const;
};

// All vehicle/battery/fuel constants in SI units (W, J, kg, C, s, V).
struct VehicleParams {
    double mass_kg = 1500.0;
    double rolling_coef = 0.01;    // f_T
    double aero_coef = 0.47;       // f_D [N s^2/m^2]
    double gravity = 9.81;

    double eta_t = 0.96;           // transmission
    double eta_i = 0.96;           // propulsion inverter
    double eta_r = 0.96;           // rectifier (PS branch side)
    double eta_dc = 0.96;          // DC/DC converter
    double eta_m = 0.90;           // constant motor efficiency (map optional)

    double q_f0 = 1.2e-4;          // idling fuel mass rate [kg/s]
    double alpha_f = 5.9e-8;       // fuel slope [kg/J]

    double q_max_c = 18000.0;      // battery capacity [C] (5 Ah)
    double r_b = 0.2056;           // internal resistance [ohm]
    double v_oc = 300.0;           // open circuit voltage [V]

    double soc_min = 0.5;
    double soc_max = 0.8;

    double p_ss_min = -15e3;       // max charging power [W]
    double p_ss_max = 30e3;        // max discharging power [W]
    double p_ps_max = 70e3;        // engine branch power limit [W]

    double restart_k = 0.8;        // restart penalty m_p = K * q_f0
    double q_hv = 42.5e6;          // fuel lower heating value [J/kg]

    FuelCurve fcm_table;           // empty -> linear FCM
    MotorEffMap eta_m_map;         // empty -> constant eta_m

    // Fuel consumed per engine restart, m_p [kg].
    double restart_fuel_kg() const { return restart_k * q_f0; }

    // Throws std::invalid_argument on any violated invariant.
    void validate() const;

    // Built-in defaults (the values above) after validation.
    static VehicleParams table1();
};

}  // namespace shev
