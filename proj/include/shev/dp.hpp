#pragma once

#include <cstddef>
#include <vector>

#include "shev/cycles.hpp"
#include "shev/params.hpp"
#include "shev/trajectory.hpp"

namespace shev {

enum class DpMode { NoSss, Lossless, Penalized };

struct DpGrid {
    int n_soc = 601;               // SOC nodes over [soc_min, soc_max]
    int n_u = 301;                 // P_SS candidates per step
    double terminal_band = -1.0;   // < 0 -> half a SOC cell
    bool keep_values = false;      // retain V for dp_value_slice

    double soc_cell(const VehicleParams& p) const {
        return (p.soc_max - p.soc_min) / static_cast<double>(n_soc - 1);
    }
    double band(const VehicleParams& p) const {
        return terminal_band >= 0.0 ? terminal_band : 0.5 * soc_cell(p);
    }
};

struct DpSolution {
    Trajectory traj;
    double soc_target = 0.0;
    double achieved_soc_t = 0.0;
    DpGrid grid;
    // value tables: values[k][i*2 + s], k = 0..N, only when keep_values
    std::vector<std::vector<double>> values;
    std::vector<double> soc_nodes;
};

// P_SS candidates at one step: n_u uniform points over the control box,
// plus 0 and P_PL when they are interior. The same set drives the solver
// and the brute-force oracle used in the tests.
std::vector<double> dp_control_candidates(double p_pl_w, int n_u,
                                          const VehicleParams& p);

// Backward value iteration over (SOC x engine state) with linear value
// interpolation in SOC, then a forward rollout from soc0. Throws
// Infeasible when no control sequence can reach the terminal band.
DpSolution dp_solve(const LoadProfile& profile, double soc0, double soc_t,
                    DpMode mode, const DpGrid& grid, const VehicleParams& p);

// Value function over the SOC nodes at step k (pairs for s=0 and s=1).
// Requires the solve to have kept its tables.
std::vector<double> dp_value_slice(const DpSolution& sol, size_t k);

}  // namespace shev
