#pragma once

#include <vector>

#include "shev/cycles.hpp"
#include "shev/dp.hpp"
#include "shev/params.hpp"
#include "shev/trajectory.hpp"

namespace shev {

struct EquivalenceFactors {
    double s_d = 0.0;   // applied when the mission nets a discharge
    double s_c = 0.0;   // applied when the mission nets a charge
    double r2_d = 0.0;  // fit quality of each branch
    double r2_c = 0.0;
    double du = 0.0;    // half-width of the u_efc sweep actually used
};

struct IdentifyOptions {
    int points_per_side = 21;
    double du0 = 0.3;
    double du_min = 1e-3;
};

// Sweeps the power-sharing factor u = P_PS/P_PL over the propulsion set,
// shrinking the sweep half-width until the SOC window is respected, and
// fits the fuel-vs-electrical-energy line on each side of u = 1.
EquivalenceFactors identify_factors(const LoadProfile& profile, double soc0,
                                    const VehicleParams& p,
                                    const IdentifyOptions& opt = {});

// Equivalent fuel consumption of a mission summary [kg].
double efc_of(double fuel_kg, double delta_soc, const EquivalenceFactors& f,
              const VehicleParams& p);
double efc_of(const Trajectory& traj, const EquivalenceFactors& f,
              const VehicleParams& p);

struct CsScanPoint {
    double soc_t;
    double fuel_g;
    double efc_g;
};

// DP ladder over terminal targets around soc0; the EFC minimum should sit
// at the charge-sustaining rung.
std::vector<CsScanPoint> cs_necessity_scan(const LoadProfile& profile,
                                           double soc0,
                                           const std::vector<double>& offsets,
                                           const DpGrid& grid,
                                           const VehicleParams& p);

}  // namespace shev
