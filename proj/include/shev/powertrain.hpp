#pragma once

#include "shev/params.hpp"

namespace shev {

// Longitudinal state of the hybrid powertrain over a simulation.
struct PowertrainState {
    double soc = 0.65;
    int engine = 0;        // s in {0,1}
    double fuel_kg = 0.0;  // cumulative, includes restart penalties
    int restarts = 0;      // N_r
};

// Tractive power at the wheels from the longitudinal force balance [W].
double drive_power(double v_mps, double accel_mps2, double slope_rad,
                   const VehicleParams& p);

// Motor efficiency at an operating point (constant unless a map is loaded).
double motor_eta(const VehicleParams& p, double v_mps, double p_drive_w);

// DC-link load power for a given wheel power demand. Negative wheel power
// is regenerated through the motor chain and clamped at p_ss_min; the
// remainder is assumed dissipated by mechanical braking.
double load_power(double p_drive_w, const VehicleParams& p);
double load_power(double p_drive_w, double v_mps, const VehicleParams& p);

// Battery-side power behind the DC/DC converter: P_b = P_SS / eta_dc^sign.
double battery_power(double p_ss_w, const VehicleParams& p);

// Battery current [A], positive while discharging.
// Throws DiscriminantNegative when |P_b| exceeds V_oc^2/(4 R_b).
double battery_current(double p_ss_w, const VehicleParams& p);

// dSOC/dt [1/s] for a given secondary-source power.
double soc_rate(double p_ss_w, const VehicleParams& p);

// Largest feasible discharging P_SS (battery discriminant limit) [W].
double max_feasible_discharge(const VehicleParams& p);

// Fuel mass rate [kg/s] for engine state s and branch power P_PS.
// Throws PowerOutOfRange unless 0 <= P_PS <= p_ps_max and P_PS == 0 when
// the engine is off.
double fuel_rate(double p_ps_w, int engine, const VehicleParams& p);

// One explicit-Euler step of the hybrid dynamics. `engine_cmd` is the
// engine state applied over [t, t+dt); a 0->1 transition books the restart
// penalty m_p and increments the restart counter.
PowertrainState step(const PowertrainState& state, double p_ps_w,
                     double p_ss_w, int engine_cmd, double dt,
                     const VehicleParams& p);

}  // namespace shev
