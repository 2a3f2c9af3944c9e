#include "shev/dp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "shev/errors.hpp"
#include "shev/powertrain.hpp"

namespace shev {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Candidate {
    double p_ss;
    double p_ps;
    double fuel_step;  // kg over dt, engine on
    double d_soc;      // SOC increment over dt
};

double interp_value(const std::vector<double>& table, int n_soc, int s,
                    double soc, double soc_min, double cell) {
    const double x = (soc - soc_min) / cell;
    if (x < -1e-9 || x > static_cast<double>(n_soc - 1) + 1e-9) return kInf;
    const double xc = std::clamp(x, 0.0, static_cast<double>(n_soc - 1));
    const int i = std::min(static_cast<int>(xc), n_soc - 2);
    const double w = xc - static_cast<double>(i);
    const double v0 = table[static_cast<size_t>(i) * 2 + static_cast<size_t>(s)];
    const double v1 = table[static_cast<size_t>(i + 1) * 2 + static_cast<size_t>(s)];
    if (w <= 0.0) return v0;
    if (w >= 1.0) return v1;
    if (std::isinf(v0) || std::isinf(v1)) return kInf;
    return v0 + w * (v1 - v0);
}

}  // namespace

std::vector<double> dp_control_candidates(double p_pl_w, int n_u,
                                          const VehicleParams& p) {
    const double lo = std::max(p_pl_w - p.p_ps_max, p.p_ss_min);
    const double hi = std::min(p.p_ss_max, p_pl_w);
    std::vector<double> u;
    if (lo > hi) return u;
    if (n_u <= 1 || hi - lo < 1e-12) {
        u.push_back(hi);
    } else {
        u.reserve(static_cast<size_t>(n_u) + 2);
        for (int i = 0; i < n_u; ++i)
            u.push_back(lo + (hi - lo) * static_cast<double>(i) /
                                 static_cast<double>(n_u - 1));
    }
    if (lo < 0.0 && hi > 0.0) u.push_back(0.0);
    if (p_pl_w > lo && p_pl_w < hi) u.push_back(p_pl_w);
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    return u;
}

DpSolution dp_solve(const LoadProfile& profile, double soc0, double soc_t,
                    DpMode mode, const DpGrid& grid, const VehicleParams& p) {
    const size_t n_steps = profile.size();
    const int n_soc = grid.n_soc;
    const double cell = grid.soc_cell(p);
    const double band = grid.band(p);
    const double dt = profile.dt;
    const double m_p = (mode == DpMode::Penalized) ? p.restart_fuel_kg() : 0.0;
    const bool allow_off = mode != DpMode::NoSss;

    std::vector<double> soc_nodes(static_cast<size_t>(n_soc));
    for (int i = 0; i < n_soc; ++i)
        soc_nodes[static_cast<size_t>(i)] = p.soc_min + cell * static_cast<double>(i);

    // per-step candidate tables (shared by value iteration and rollout)
    std::vector<std::vector<Candidate>> cands(n_steps);
    std::vector<double> off_dsoc(n_steps, 0.0);
    std::vector<char> off_ok(n_steps, 0);
    for (size_t k = 0; k < n_steps; ++k) {
        const double p_pl = profile.p_pl_w[k];
        for (double u : dp_control_candidates(p_pl, grid.n_u, p)) {
            const double p_ps = std::max(p_pl - u, 0.0);
            cands[k].push_back(
                {u, p_ps, fuel_rate(p_ps, 1, p) * dt, soc_rate(u, p) * dt});
        }
        if (allow_off && p_pl >= p.p_ss_min && p_pl <= p.p_ss_max) {
            off_ok[k] = 1;
            off_dsoc[k] = soc_rate(p_pl, p) * dt;
        }
    }

    // V[k][i*2 + s]; s is the engine state carried into step k
    std::vector<std::vector<double>> values(n_steps + 1);
    values[n_steps].assign(static_cast<size_t>(n_soc) * 2, kInf);
    for (int i = 0; i < n_soc; ++i) {
        if (std::abs(soc_nodes[static_cast<size_t>(i)] - soc_t) <= band) {
            values[n_steps][static_cast<size_t>(i) * 2 + 0] = 0.0;
            values[n_steps][static_cast<size_t>(i) * 2 + 1] = 0.0;
        }
    }

    // The final stage scores the terminal band analytically: a hard 0/inf
    // terminal table would lose the band between nodes under interpolation
    // (an isolated finite node interpolates to inf on both sides and the
    // backward recursion collapses). A steep finite miss penalty keeps the
    // value field smooth while still dominating any fuel difference.
    constexpr double kMissPenalty = 1e4;  // kg per unit SOC beyond the band
    auto continuation = [&](const std::vector<double>& vn, size_t k, int s,
                            double soc_next) {
        if (soc_next < p.soc_min - 1e-12 || soc_next > p.soc_max + 1e-12)
            return kInf;
        if (k + 1 == n_steps) {
            const double miss = std::abs(soc_next - soc_t) - band;
            return miss <= 1e-12 ? 0.0 : kMissPenalty * miss;
        }
        return interp_value(vn, n_soc, s, soc_next, p.soc_min, cell);
    };

    for (size_t k = n_steps; k-- > 0;) {
        auto& vk = values[k];
        vk.assign(static_cast<size_t>(n_soc) * 2, kInf);
        const auto& vn = values[k + 1];
        for (int i = 0; i < n_soc; ++i) {
            const double soc = soc_nodes[static_cast<size_t>(i)];
            double on_cost = kInf;
            for (const auto& c : cands[k]) {
                const double v = continuation(vn, k, 1, soc + c.d_soc);
                if (std::isinf(v)) continue;
                const double total = c.fuel_step + v;
                if (total < on_cost) on_cost = total;
            }
            double off_cost = kInf;
            if (off_ok[k]) off_cost = continuation(vn, k, 0, soc + off_dsoc[k]);
            vk[static_cast<size_t>(i) * 2 + 1] = std::min(on_cost, off_cost);
            vk[static_cast<size_t>(i) * 2 + 0] =
                allow_off ? std::min(on_cost + m_p, off_cost)
                          : std::min(on_cost, off_cost);
        }
    }

    const int s0 = allow_off ? 0 : 1;

    // forward rollout along the value tables
    DpSolution sol;
    sol.soc_target = soc_t;
    sol.grid = grid;
    sol.soc_nodes = soc_nodes;
    Trajectory& traj = sol.traj;
    traj.dt = dt;
    traj.reserve(n_steps);

    double soc = soc0;
    int s_prev = s0;
    double fuel = 0.0;
    for (size_t k = 0; k < n_steps; ++k) {
        const auto& vn = values[k + 1];
        double best = kInf;
        int best_idx = -1;  // candidate index, or -2 for engine off
        for (size_t ci = 0; ci < cands[k].size(); ++ci) {
            const auto& c = cands[k][ci];
            const double v = continuation(vn, k, 1, soc + c.d_soc);
            if (std::isinf(v)) continue;
            const double total =
                c.fuel_step + (s_prev == 0 ? m_p : 0.0) + v;
            if (total < best) {
                best = total;
                best_idx = static_cast<int>(ci);
            }
        }
        if (off_ok[k]) {
            const double v = continuation(vn, k, 0, soc + off_dsoc[k]);
            if (v < best) {
                best = v;
                best_idx = -2;
            }
        }
        if (best_idx == -1) {
            std::ostringstream os;
            os << "rollout dead-end at step " << k << " (SOC " << soc << ")";
            throw Infeasible(os.str());
        }
        if (best_idx >= 0) {
            const auto& c = cands[k][static_cast<size_t>(best_idx)];
            if (s_prev == 0) {
                fuel += m_p;
                traj.n_restarts += 1;
            }
            fuel += c.fuel_step;
            traj.push(profile.p_pl_w[k], c.p_ps, c.p_ss, 1, soc, fuel);
            soc += c.d_soc;
            s_prev = 1;
        } else {
            traj.push(profile.p_pl_w[k], 0.0, profile.p_pl_w[k], 0, soc, fuel);
            soc += off_dsoc[k];
            s_prev = 0;
        }
    }
    traj.soc_final = soc;
    sol.achieved_soc_t = soc;

    if (std::abs(soc - soc_t) > band + 1e-12) {
        std::ostringstream os;
        os << "no feasible control sequence from SOC " << soc0 << " to " << soc_t
           << " +/- " << band << " (closest terminal " << soc << ")";
        throw Infeasible(os.str());
    }

    if (grid.keep_values) values.swap(sol.values);
    return sol;
}

std::vector<double> dp_value_slice(const DpSolution& sol, size_t k) {
    if (sol.values.empty())
        throw NotSolved("dp_value_slice: solve did not keep value tables");
    if (k >= sol.values.size())
        throw NotSolved("dp_value_slice: step index out of range");
    return sol.values[k];
}

}  // namespace shev
