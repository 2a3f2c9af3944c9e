#include "shev/analytic_pmp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "shev/errors.hpp"
#include "shev/powertrain.hpp"

namespace shev {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double box_lo(double p_pl, const VehicleParams& p) {
    return std::max(p_pl - p.p_ps_max, p.p_ss_min);
}

double box_hi(double p_pl, const VehicleParams& p) {
    return std::min(p.p_ss_max, p_pl);
}

}  // namespace

RegimeBounds regime_bounds(const VehicleParams& p) {
    const double core = p.alpha_f * p.q_max_c * p.v_oc;
    return {-core * p.eta_dc, -core / p.eta_dc};
}

Regime regime_of(double lambda, const VehicleParams& p) {
    const auto [b1, b2] = regime_bounds(p);
    if (lambda >= 0.0) return Regime::MaxDischarge;
    if (lambda > b1) return Regime::InteriorDischarge;
    if (lambda >= b2) return Regime::EngineOnly;
    return Regime::InteriorCharge;
}

double interior_discharge_pss(double lambda, const VehicleParams& p) {
    const double r = lambda / (p.alpha_f * p.q_max_c);
    return (p.eta_dc * p.v_oc * p.v_oc - r * r / p.eta_dc) / (4.0 * p.r_b);
}

double interior_charge_pss(double lambda, const VehicleParams& p) {
    const double r = lambda / (p.alpha_f * p.q_max_c);
    return (p.v_oc * p.v_oc / p.eta_dc - r * r * p.eta_dc) / (4.0 * p.r_b);
}

double regime_control(double lambda, double p_pl_w, const VehicleParams& p) {
    double raw;
    switch (regime_of(lambda, p)) {
        case Regime::MaxDischarge:      raw = kInf; break;
        case Regime::InteriorDischarge: raw = interior_discharge_pss(lambda, p); break;
        case Regime::EngineOnly:        raw = 0.0; break;
        case Regime::InteriorCharge:    raw = interior_charge_pss(lambda, p); break;
    }
    return std::min(std::max(raw, box_lo(p_pl_w, p)), box_hi(p_pl_w, p));
}

double hamiltonian(double lambda, double p_ss_w, const VehicleParams& p) {
    return -p.alpha_f * p_ss_w + lambda * soc_rate(p_ss_w, p);
}

SssControl sss_control(double lambda, double p_pl_w, const VehicleParams& p) {
    const double p_on = regime_control(lambda, p_pl_w, p);
    // engine-off requires the SS to carry the whole load
    const bool off_feasible = p_pl_w >= p.p_ss_min && p_pl_w <= p.p_ss_max;
    if (!off_feasible) return {p_on, 1};
    if (lambda >= 0.0) {
        // engine is only needed when the load exceeds the SS limit
        return {p_pl_w, 0};
    }
    const double h_on = p.q_f0 + p.alpha_f * (p_pl_w - p_on) +
                        lambda * soc_rate(p_on, p);
    const double h_off = lambda * soc_rate(p_pl_w, p);
    // ties keep the engine on to avoid needless switching
    if (h_on <= h_off) return {p_on, 1};
    return {p_pl_w, 0};
}

namespace {

// H1* - H2* as a function of the load level; positive means full-electric
// operation is optimal.
double electric_gap(double lambda, double p_pl, const VehicleParams& p) {
    const double p_on = regime_control(lambda, p_pl, p);
    const double h_on = p.q_f0 + p.alpha_f * (p_pl - p_on) + lambda * soc_rate(p_on, p);
    const double h_off = lambda * soc_rate(p_pl, p);
    return h_on - h_off;
}

double bisect_gap_root(double lambda, double a, double b, bool rising,
                       const VehicleParams& p) {
    // sign change is guaranteed by the caller; rising = gap goes -,+ on [a,b]
    for (int i = 0; i < 80; ++i) {
        const double m = 0.5 * (a + b);
        const double g = electric_gap(lambda, m, p);
        if ((g > 0.0) == rising) b = m; else a = m;
    }
    return 0.5 * (a + b);
}

}  // namespace

ElectricRegion sss_electric_region(double lambda, const VehicleParams& p) {
    const double cap = p.p_ss_max;
    if (lambda >= 0.0) return {false, 0.0, cap};

    // the gap is concave in P_PL with its maximum at the interior discharge
    // optimum; search each side of it
    const double peak = std::clamp(interior_discharge_pss(lambda, p), 0.0, cap);
    if (electric_gap(lambda, peak, p) <= 0.0) return {};

    ElectricRegion region;
    region.empty = false;
    if (electric_gap(lambda, 0.0, p) > 0.0) {
        region.lo_w = 0.0;
    } else {
        region.lo_w = bisect_gap_root(lambda, 0.0, peak, true, p);
    }
    if (electric_gap(lambda, cap, p) > 0.0) {
        region.hi_w = cap;
    } else {
        region.hi_w = bisect_gap_root(lambda, peak, cap, false, p);
    }
    return region;
}

Trajectory simulate_costate(const LoadProfile& profile, double soc0,
                            double lambda, SssMode mode,
                            const VehicleParams& p) {
    Trajectory traj;
    traj.dt = profile.dt;
    traj.reserve(profile.size());
    PowertrainState st;
    st.soc = soc0;
    st.engine = (mode == SssMode::Off) ? 1 : 0;
    for (size_t k = 0; k < profile.size(); ++k) {
        const double p_pl = profile.p_pl_w[k];
        double p_ss;
        int s;
        if (mode == SssMode::Off) {
            p_ss = regime_control(lambda, p_pl, p);
            s = 1;
        } else {
            const SssControl c = sss_control(lambda, p_pl, p);
            p_ss = c.p_ss_w;
            s = c.engine;
        }
        const double p_ps = s ? p_pl - p_ss : 0.0;
        const PowertrainState prev = st;
        st = step(st, p_ps, p_ss, s, profile.dt, p);
        if (mode == SssMode::Lossless && prev.engine == 0 && s == 1) {
            st.fuel_kg -= p.restart_fuel_kg();  // ideal SSS: restarts are free
        }
        traj.push(p_pl, p_ps, p_ss, s, prev.soc, st.fuel_kg);
    }
    traj.soc_final = st.soc;
    traj.n_restarts = st.restarts;
    return traj;
}

double CostateSolution::lambda_at_step(size_t k) const {
    for (const auto& a : arcs)
        if (k >= a.first && k < a.last) return a.lambda;
    return arcs.empty() ? 0.0 : arcs.back().lambda;
}

namespace {

double terminal_soc(const LoadProfile& profile, double soc0, double lambda,
                    SssMode mode, const VehicleParams& p) {
    return simulate_costate(profile, soc0, lambda, mode, p).soc_final;
}

}  // namespace

CostateSolution shoot_costate(const LoadProfile& profile, double soc0,
                              double soc_t, SssMode mode,
                              const VehicleParams& p, const ShootOptions& opt) {
    const auto [b1, b2] = regime_bounds(p);

    std::vector<std::pair<double, double>> probes;  // (lambda, soc_T)
    auto eval = [&](double lam) {
        const double s = terminal_soc(profile, soc0, lam, mode, p);
        probes.emplace_back(lam, s);
        return s;
    };

    // reachability at the extreme laws: lambda >= 0 discharges the most,
    // a very negative lambda charges the most
    const double lam_hi0 = 1.0;
    const double soc_min_reach = eval(lam_hi0);
    const double lam_lo_floor = b2 * std::pow(2.0, 24);
    const double soc_max_reach = eval(lam_lo_floor);
    if (soc_t < soc_min_reach - opt.tol_soc || soc_t > soc_max_reach + opt.tol_soc) {
        std::ostringstream os;
        os << "target SOC(T)=" << soc_t << " outside reachable ["
           << soc_min_reach << ", " << soc_max_reach << "]";
        throw TargetUnreachable(os.str());
    }

    // expand a bracket outward from the central regime boundaries;
    // SOC(T; lambda) is non-increasing in lambda
    double hi = b1;  // discharging side
    double lo = b2;  // charging side
    int iters = 0;
    while (eval(hi) > soc_t && iters++ < opt.max_iter) {
        hi = (hi > -1e-12) ? lam_hi0 : hi * 0.5;
        if (hi == lam_hi0) break;
    }
    iters = 0;
    while (eval(lo) < soc_t && iters++ < opt.max_iter) {
        lo *= 2.0;
        if (lo <= lam_lo_floor) { lo = lam_lo_floor; break; }
    }

    double best_lam = 0.5 * (lo + hi);
    double best_err = kInf;
    for (int i = 0; i < opt.max_iter; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double s = eval(mid);
        const double err = std::abs(s - soc_t);
        if (err < best_err) {
            best_err = err;
            best_lam = mid;
        }
        if (err <= opt.tol_soc) break;
        if (s > soc_t) lo = mid; else hi = mid;
    }

    // empirical monotonicity audit of every probe made on this run
    std::sort(probes.begin(), probes.end());
    for (size_t i = 1; i < probes.size(); ++i) {
        if (probes[i].second > probes[i - 1].second + 10.0 * opt.tol_soc) {
            std::ostringstream os;
            os << "SOC(T; lambda) not monotone: soc(" << probes[i - 1].first
               << ")=" << probes[i - 1].second << " < soc(" << probes[i].first
               << ")=" << probes[i].second;
            throw NoConvergence(os.str());
        }
    }
    if (best_err > opt.tol_soc) {
        std::ostringstream os;
        os << "costate search stalled; best |SOC(T)-target| = " << best_err;
        throw NoConvergence(os.str());
    }

    CostateSolution sol;
    sol.traj = simulate_costate(profile, soc0, best_lam, mode, p);
    sol.arcs.push_back({0, profile.size(), best_lam});
    return sol;
}

namespace {

CostateSolution solve_constrained_rec(const LoadProfile& profile, double soc0,
                                      double soc_t, SssMode mode,
                                      const VehicleParams& p,
                                      const ShootOptions& opt, int depth) {
    if (depth > opt.recursion_limit)
        throw RecursionLimit("constrained-arc recursion exceeded depth limit");

    CostateSolution sol = shoot_costate(profile, soc0, soc_t, mode, p, opt);

    // locate the worst state-constraint violation (interior samples only)
    const double viol_tol = 1e-7;
    double worst = viol_tol;
    size_t split = 0;
    double pinned = 0.0;
    for (size_t k = 1; k < sol.traj.size(); ++k) {
        const double s = sol.traj.soc[k];
        if (s - p.soc_max > worst) {
            worst = s - p.soc_max;
            split = k;
            pinned = p.soc_max;
        }
        if (p.soc_min - s > worst) {
            worst = p.soc_min - s;
            split = k;
            pinned = p.soc_min;
        }
    }
    if (split == 0) return sol;  // feasible

    CostateSolution left = solve_constrained_rec(profile.slice(0, split), soc0,
                                                 pinned, mode, p, opt, depth + 1);
    CostateSolution right = solve_constrained_rec(
        profile.slice(split, profile.size()), pinned, soc_t, mode, p, opt,
        depth + 1);

    CostateSolution merged;
    merged.arcs = left.arcs;
    for (auto a : right.arcs) {
        a.first += split;
        a.last += split;
        merged.arcs.push_back(a);
    }
    merged.junctions = left.junctions;
    merged.junctions.push_back(split);
    for (size_t j : right.junctions) merged.junctions.push_back(j + split);

    Trajectory& t = merged.traj;
    t = left.traj;
    const Trajectory& r = right.traj;
    for (size_t k = 0; k < r.size(); ++k) {
        t.push(r.p_pl_w[k], r.p_ps_w[k], r.p_ss_w[k], r.engine[k], r.soc[k],
               left.traj.total_fuel_kg() + r.fuel_kg[k], r.emergency[k],
               r.residual_w[k]);
    }
    t.soc_final = r.soc_final;
    t.n_restarts = left.traj.n_restarts + r.n_restarts;
    return merged;
}

}  // namespace

CostateSolution solve_constrained(const LoadProfile& profile, double soc0,
                                  double soc_t, SssMode mode,
                                  const VehicleParams& p,
                                  const ShootOptions& opt) {
    return solve_constrained_rec(profile, soc0, soc_t, mode, p, opt, 0);
}

}  // namespace shev
