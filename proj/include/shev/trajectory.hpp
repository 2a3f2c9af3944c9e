#pragma once

#include <cstdint>
#include <vector>

namespace shev {

struct TrajectorySummary {
    double fuel_g = 0.0;
    double delta_soc = 0.0;   // SOC(0) - SOC(T), positive = net discharge
    int n_restarts = 0;
    double engine_on_s = 0.0;
};

// Per-step record of a simulated mission. soc[k] is the state at the
// beginning of step k; soc_final closes the series.
struct Trajectory {
    double dt = 1.0;
    std::vector<double> p_pl_w;
    std::vector<double> p_ps_w;
    std::vector<double> p_ss_w;
    std::vector<int> engine;
    std::vector<double> soc;          // size() entries, state before step k
    std::vector<double> fuel_kg;      // cumulative at end of step k
    std::vector<uint8_t> emergency;   // step used an emergency override
    std::vector<double> residual_w;   // unbalanced power, dissipated
    double soc_final = 0.0;
    int n_restarts = 0;

    size_t size() const { return p_pl_w.size(); }
    double total_fuel_kg() const { return fuel_kg.empty() ? 0.0 : fuel_kg.back(); }
    TrajectorySummary summary() const;

    void reserve(size_t n);
    void push(double p_pl, double p_ps, double p_ss, int s, double soc_before,
              double fuel_cum, bool emerg = false, double residual = 0.0);
};

}  // namespace shev
