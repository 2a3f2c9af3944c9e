#pragma once

#include <vector>

#include "shev/cycles.hpp"
#include "shev/params.hpp"
#include "shev/trajectory.hpp"

namespace shev {

// The costate regions of the closed-form power-split law. Boundaries:
//   b1 = -alpha_f * Q_max * eta_dc * V_oc   (upper, closer to zero)
//   b2 = -alpha_f * Q_max * V_oc / eta_dc   (lower)
struct RegimeBounds {
    double b1;
    double b2;
};

RegimeBounds regime_bounds(const VehicleParams& p);

enum class Regime { MaxDischarge, InteriorDischarge, EngineOnly, InteriorCharge };

Regime regime_of(double lambda, const VehicleParams& p);

// Unconstrained stationary points of the Hamiltonian on each converter
// branch (valid for lambda < 0).
double interior_discharge_pss(double lambda, const VehicleParams& p);
double interior_charge_pss(double lambda, const VehicleParams& p);

// Closed-form optimal P_SS for the engine-always-on model, box-clamped to
// max(P_PL - P_PS_max, P_SS_min) <= P_SS <= min(P_SS_max, P_PL).
double regime_control(double lambda, double p_pl_w, const VehicleParams& p);

// Reduced Hamiltonian -alpha_f*P_SS + lambda*dSOC/dt (engine-on running
// cost terms that do not depend on P_SS are dropped).
double hamiltonian(double lambda, double p_ss_w, const VehicleParams& p);

struct SssControl {
    double p_ss_w;
    int engine;
};

// Pointwise minimizer of the switching Hamiltonian for the lossless
// start-stop model. Ties are resolved in favor of keeping the engine on.
SssControl sss_control(double lambda, double p_pl_w, const VehicleParams& p);

// Positive-load interval where full-electric operation is optimal.
struct ElectricRegion {
    bool empty = true;
    double lo_w = 0.0;
    double hi_w = 0.0;

    bool contains(double p_w) const { return !empty && p_w >= lo_w && p_w <= hi_w; }
};

ElectricRegion sss_electric_region(double lambda, const VehicleParams& p);

enum class SssMode { Off, Lossless };

struct CostateArc {
    size_t first = 0;   // step index range [first, last)
    size_t last = 0;
    double lambda = 0.0;
};

struct CostateSolution {
    std::vector<CostateArc> arcs;
    std::vector<size_t> junctions;  // split step indices
    Trajectory traj;

    double lambda_at_step(size_t k) const;
};

struct ShootOptions {
    double tol_soc = 1e-4;
    int max_iter = 200;
    int recursion_limit = 32;
};

// Forward rollout of the closed-form law at a fixed costate.
Trajectory simulate_costate(const LoadProfile& profile, double soc0,
                            double lambda, SssMode mode,
                            const VehicleParams& p);

// Finds the constant costate that steers SOC(T) to soc_t (bisection on a
// geometrically expanded bracket). Throws TargetUnreachable/NoConvergence.
CostateSolution shoot_costate(const LoadProfile& profile, double soc0,
                              double soc_t, SssMode mode,
                              const VehicleParams& p,
                              const ShootOptions& opt = {});

// Shooting plus the recursive constrained-arc scheme: whenever the
// unconstrained trajectory leaves [soc_min, soc_max], the problem is split
// at the worst violation with the state pinned to the violated bound.
CostateSolution solve_constrained(const LoadProfile& profile, double soc0,
                                  double soc_t, SssMode mode,
                                  const VehicleParams& p,
                                  const ShootOptions& opt = {});

}  // namespace shev
