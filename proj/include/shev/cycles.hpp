#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "shev/params.hpp"

namespace shev {

// Uniformly sampled speed trace, optional road slope.
struct DrivingCycle {
    std::string name;
    double dt = 1.0;               // [s]
    std::vector<double> v_mps;
    std::vector<double> theta_rad;  // empty or same length as v_mps

    size_t size() const { return v_mps.size(); }
    double duration_s() const { return dt * static_cast<double>(v_mps.size()); }
    double distance_m() const;
};

// DC-link power demand series for the decoupled power-split problem.
// Negative entries are already clamped at p_ss_min.
struct LoadProfile {
    std::string name;
    double dt = 1.0;
    std::vector<double> p_pl_w;

    size_t size() const { return p_pl_w.size(); }
    double duration_s() const { return dt * static_cast<double>(p_pl_w.size()); }

    std::vector<size_t> propulsion_steps() const;  // Phi: P_PL >= 0
    std::vector<size_t> regen_steps() const;       // Psi: P_PL < 0

    LoadProfile slice(size_t first, size_t last) const;  // [first, last)
};

enum class WltpStage : uint8_t { Low, Medium, High, ExtraHigh };

WltpStage parse_stage(const std::string& tag);  // "L","M","H","E"

// Reads a `t_s,v_mps[,theta_rad]` CSV. Non-uniform time bases are resampled
// to `dt` by linear interpolation.
DrivingCycle load_cycle(const std::string& path, double dt = 1.0);

// Resample to a new uniform period by linear interpolation.
DrivingCycle resample(const DrivingCycle& c, double dt);

// Extract one stage of a full 1800 s WLTP class 3 trace.
DrivingCycle wltp_stage(const DrivingCycle& full, WltpStage stage);

// Acceleration by central differences, then the wheel -> DC-link chain.
LoadProfile derive_load(const DrivingCycle& c, const VehicleParams& p);

// Deterministic 70 s three-level staircase load (6/20/35 kW plus a -10 kW
// regeneration tail) used by the power-split solver examples and tests.
LoadProfile pulse_profile();

// Seeded synthetic urban/rural speed blend, ~1200 s, v <= 27 m/s.
DrivingCycle synth_mixed_rural(uint32_t seed);

}  // namespace shev
