#pragma once

#include <optional>
#include <vector>

#include "shev/cycles.hpp"
#include "shev/params.hpp"
#include "shev/rulebased.hpp"

namespace shev {

struct TuneSpec {
    double upper_lo_w = 5e3;     // P_PS,th upper-threshold grid
    double upper_hi_w = 40e3;
    double step_w = 1.25e3;      // grid pitch for both thresholds
    double offset_lo_w = -10e3;  // bracket for the charge-offset root
    double offset_hi_w = 30e3;
    double cs_tol = 1e-3;        // |dSOC| accepted as charge sustaining
    bool sweep_offset = false;   // evaluate an explicit offset grid instead
    double sweep_step_w = 2.5e3;
    int threads = 0;             // 0 -> hardware_concurrency
};

// Solves dSOC(offset) = 0 for fixed thresholds by bracketed bisection.
// Throws Infeasible when the bracket has no sign change and NoConvergence
// when the root stalls outside the CS tolerance.
double cs_shoot(const LoadProfile& profile, double upper_w, double lower_w,
                double soc0, const VehicleParams& p, const TuneSpec& spec);

struct TuneCell {
    double upper_w;
    double lower_w;
    double offset_w;
    double fuel_g;
    double dsoc;
    bool feasible;
};

struct TuneResult {
    HptsParams best;
    double fuel_g = 0.0;
    double dsoc = 0.0;
    Trajectory traj;
    std::vector<TuneCell> surface;
};

// Grid search over threshold pairs with the offset pinned per cell by
// cs_shoot (or swept explicitly). Deterministic argmin: lower fuel wins,
// ties resolved by smaller upper then smaller lower threshold.
TuneResult tune(const LoadProfile& profile, const TuneSpec& spec, double soc0,
                const VehicleParams& p);

struct XosTuneResult {
    double threshold_w = 0.0;
    double fuel_g = 0.0;
    double dsoc = 0.0;
    Trajectory traj;
};

// Picks the single XOS threshold closest to charge sustaining operation.
// dSOC is a step function of the threshold, so the residual may exceed the
// HPTS tolerance; the smallest attainable |dSOC| wins, fuel breaks ties.
XosTuneResult tune_xos(const LoadProfile& profile, double soc0,
                       const VehicleParams& p, double lo_w = 0.0,
                       double hi_w = 40e3);

}  // namespace shev
