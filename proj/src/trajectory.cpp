#include "shev/trajectory.hpp"

namespace shev {

TrajectorySummary Trajectory::summary() const {
    TrajectorySummary s;
    s.fuel_g = total_fuel_kg() * 1e3;
    s.delta_soc = soc.empty() ? 0.0 : soc.front() - soc_final;
    s.n_restarts = n_restarts;
    for (int e : engine) s.engine_on_s += e ? dt : 0.0;
    return s;
}

void Trajectory::reserve(size_t n) {
    p_pl_w.reserve(n);
    p_ps_w.reserve(n);
    p_ss_w.reserve(n);
    engine.reserve(n);
    soc.reserve(n);
    fuel_kg.reserve(n);
    emergency.reserve(n);
    residual_w.reserve(n);
}

void Trajectory::push(double p_pl, double p_ps, double p_ss, int s,
                      double soc_before, double fuel_cum, bool emerg,
                      double residual) {
    p_pl_w.push_back(p_pl);
    p_ps_w.push_back(p_ps);
    p_ss_w.push_back(p_ss);
    engine.push_back(s);
    soc.push_back(soc_before);
    fuel_kg.push_back(fuel_cum);
    emergency.push_back(emerg ? 1 : 0);
    residual_w.push_back(residual);
}

}  // namespace shev
