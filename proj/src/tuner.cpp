#include "shev/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

#include "shev/errors.hpp"
#include "shev/parallel.hpp"

namespace shev {

namespace {

double dsoc_for_offset(const LoadProfile& profile, double upper_w,
                       double lower_w, double offset_w, double soc0,
                       const VehicleParams& p) {
    HptsParams hp{upper_w, lower_w, offset_w};
    const Trajectory t = simulate(profile, Controller::make_hpts(hp), soc0, p);
    return t.summary().delta_soc;  // soc0 - socT, decreasing in offset
}

}  // namespace

double cs_shoot(const LoadProfile& profile, double upper_w, double lower_w,
                double soc0, const VehicleParams& p, const TuneSpec& spec) {
    if (lower_w > upper_w)
        throw std::invalid_argument("cs_shoot: lower threshold above upper");

    const double tight = 0.02 * spec.cs_tol;
    double a = spec.offset_lo_w;
    double b = spec.offset_hi_w;

    // smallest-magnitude root wins when a whole family sustains charge
    if (a < 0.0 && b > 0.0 &&
        std::abs(dsoc_for_offset(profile, upper_w, lower_w, 0.0, soc0, p)) <= tight)
        return 0.0;

    double fa = dsoc_for_offset(profile, upper_w, lower_w, a, soc0, p);
    double fb = dsoc_for_offset(profile, upper_w, lower_w, b, soc0, p);
    if (fa * fb > 0.0) {
        if (std::min(std::abs(fa), std::abs(fb)) <= spec.cs_tol)
            return std::abs(fa) <= std::abs(fb) ? a : b;
        std::ostringstream os;
        os << "no charge-sustaining offset in [" << a << ", " << b
           << "] W (dSOC " << fa << " / " << fb << ")";
        throw Infeasible(os.str());
    }
    // dSOC is monotone non-increasing in the offset, so fa >= 0 >= fb
    double best = a;
    double best_err = std::abs(fa);
    if (std::abs(fb) < best_err) {
        best = b;
        best_err = std::abs(fb);
    }
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (a + b);
        const double fm = dsoc_for_offset(profile, upper_w, lower_w, m, soc0, p);
        if (std::abs(fm) < best_err) {
            best = m;
            best_err = std::abs(fm);
        }
        if (best_err <= tight) break;
        if ((fm > 0.0) == (fa > 0.0)) a = m; else b = m;
    }
    if (best_err > spec.cs_tol) {
        std::ostringstream os;
        os << "offset root stalled, |dSOC| = " << best_err;
        throw NoConvergence(os.str());
    }
    return best;
}

TuneResult tune(const LoadProfile& profile, const TuneSpec& spec, double soc0,
                const VehicleParams& p) {
    std::vector<std::pair<double, double>> pairs;
    for (double up = spec.upper_lo_w; up <= spec.upper_hi_w + 1e-9;
         up += spec.step_w) {
        for (double lo = 0.0; lo <= up + 1e-9; lo += spec.step_w) {
            pairs.emplace_back(up, std::min(lo, up));
        }
    }
    if (pairs.empty()) throw AllInfeasible("tune: empty threshold grid");

    std::vector<std::vector<TuneCell>> cell_rows(pairs.size());
    parallel_for(
        pairs.size(),
        [&](size_t i) {
            const auto [up, lo] = pairs[i];
            auto eval_offset = [&](double off) {
                HptsParams hp{up, lo, off};
                const Trajectory t =
                    simulate(profile, Controller::make_hpts(hp), soc0, p);
                const auto s = t.summary();
                return TuneCell{up, lo, off, s.fuel_g, s.delta_soc, true};
            };
            if (spec.sweep_offset) {
                for (double off = spec.offset_lo_w; off <= spec.offset_hi_w + 1e-9;
                     off += spec.sweep_step_w) {
                    TuneCell c = eval_offset(off);
                    c.feasible = std::abs(c.dsoc) <= spec.cs_tol;
                    cell_rows[i].push_back(c);
                }
                return;
            }
            try {
                const double off = cs_shoot(profile, up, lo, soc0, p, spec);
                cell_rows[i].push_back(eval_offset(off));
            } catch (const SimError&) {
                cell_rows[i].push_back({up, lo, 0.0, 0.0, 0.0, false});
            }
        },
        spec.threads);

    TuneResult result;
    result.surface.reserve(pairs.size());
    bool found = false;
    for (const auto& row : cell_rows) {
        for (const TuneCell& c : row) {
            result.surface.push_back(c);
            if (!c.feasible || std::abs(c.dsoc) > spec.cs_tol) continue;
            const bool better =
                !found || c.fuel_g < result.fuel_g - 1e-12 ||
                (std::abs(c.fuel_g - result.fuel_g) <= 1e-12 &&
                 (c.upper_w < result.best.on_threshold_w ||
                  (c.upper_w == result.best.on_threshold_w &&
                   c.lower_w < result.best.off_threshold_w)));
            if (better) {
                found = true;
                result.best = HptsParams{c.upper_w, c.lower_w, c.offset_w};
                result.fuel_g = c.fuel_g;
                result.dsoc = c.dsoc;
            }
        }
    }
    if (!found)
        throw AllInfeasible("tune: no grid cell satisfied charge sustaining");
    result.traj = simulate(profile, Controller::make_hpts(result.best), soc0, p);
    return result;
}

XosTuneResult tune_xos(const LoadProfile& profile, double soc0,
                       const VehicleParams& p, double lo_w, double hi_w) {
    auto dsoc_at = [&](double thr) {
        const Trajectory t =
            simulate(profile, Controller::make_xos(thr), soc0, p);
        return t.summary().delta_soc;
    };

    // coarse scan to bracket the sign change, then bisect onto the step
    const int n_scan = 161;
    double prev_thr = lo_w;
    double prev_val = dsoc_at(lo_w);
    double best_thr = lo_w;
    double best_err = std::abs(prev_val);
    double bracket_a = lo_w, bracket_b = lo_w;
    bool have_bracket = false;
    for (int i = 1; i < n_scan; ++i) {
        const double thr =
            lo_w + (hi_w - lo_w) * static_cast<double>(i) /
                       static_cast<double>(n_scan - 1);
        const double val = dsoc_at(thr);
        if (std::abs(val) < best_err) {
            best_err = std::abs(val);
            best_thr = thr;
        }
        if (!have_bracket && val * prev_val < 0.0) {
            bracket_a = prev_thr;
            bracket_b = thr;
            have_bracket = true;
        }
        prev_thr = thr;
        prev_val = val;
    }
    if (have_bracket) {
        double a = bracket_a, b = bracket_b;
        double fa = dsoc_at(a);
        for (int i = 0; i < 60; ++i) {
            const double m = 0.5 * (a + b);
            const double fm = dsoc_at(m);
            if (std::abs(fm) < best_err) {
                best_err = std::abs(fm);
                best_thr = m;
            }
            if ((fm > 0.0) == (fa > 0.0)) { a = m; fa = fm; } else { b = m; }
        }
        // dSOC steps at discrete load levels; compare both edge candidates
        for (double edge : {a, b}) {
            const double v = std::abs(dsoc_at(edge));
            if (v < best_err) {
                best_err = v;
                best_thr = edge;
            }
        }
    }

    XosTuneResult out;
    out.threshold_w = best_thr;
    out.traj = simulate(profile, Controller::make_xos(best_thr), soc0, p);
    const auto s = out.traj.summary();
    out.fuel_g = s.fuel_g;
    out.dsoc = s.delta_soc;
    return out;
}

}  // namespace shev
