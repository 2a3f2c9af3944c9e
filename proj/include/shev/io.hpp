#pragma once

#include <map>
#include <string>
#include <vector>

#include "shev/analytic_pmp.hpp"
#include "shev/params.hpp"
#include "shev/trajectory.hpp"

namespace shev {

// Flat `key = value [unit]` file; '#' starts a comment.
std::map<std::string, std::string> read_config_file(const std::string& path);

// "0.059 g/kW/s" -> 5.9e-8 and so on; a bare number passes through.
double parse_quantity(const std::string& text);

// Applies Table I symbol names (m, f_T, alpha_f, Q_max, ...) onto params.
void apply_config(VehicleParams& p,
                  const std::map<std::string, std::string>& kv);

VehicleParams load_vehicle_params(const std::string& path);

// 2-column CSV `P_PS_W,mdot_kgps`.
FuelCurve load_fuel_curve(const std::string& path);

// 3-column CSV `v_mps,P_drive_W,eta` enumerating a regular grid.
MotorEffMap load_motor_map(const std::string& path);

// Key/value provenance block embedded at the top of every artifact.
using Provenance = std::vector<std::pair<std::string, std::string>>;

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const Provenance& prov,
                          const CostateSolution* costate = nullptr);

void write_summary_json(const std::string& path, const Trajectory& traj,
                        const Provenance& prov);

}  // namespace shev
