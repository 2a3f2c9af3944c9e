#include "shev/efc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "shev/errors.hpp"
#include "shev/powertrain.hpp"

namespace shev {

namespace {

struct SweepPoint {
    double e_e;  // electrical energy, integral of i_b*V_oc [J]
    double e_f;  // fuel energy q_HV * m_f [J]
    double soc_lo, soc_hi;
};

// Plant response to a fixed power-sharing factor: P_PS = u*P_PL on the
// propulsion set, pure regeneration elsewhere, engine on whenever P_PL > 0.
// Restart fuel stays out; the sweep characterizes the plant, not a policy.
SweepPoint run_sweep(const LoadProfile& profile, double soc0, double u,
                     const VehicleParams& p) {
    SweepPoint out{0.0, 0.0, soc0, soc0};
    double soc = soc0;
    for (double p_pl : profile.p_pl_w) {
        double p_ps = 0.0, p_ss = p_pl;
        int s = 0;
        if (p_pl > 0.0) {
            s = 1;
            p_ss = std::clamp((1.0 - u) * p_pl, p.p_ss_min, p.p_ss_max);
            p_ps = std::clamp(p_pl - p_ss, 0.0, p.p_ps_max);
        }
        const double i_b = battery_current(p_ss, p);
        out.e_e += i_b * p.v_oc * profile.dt;
        out.e_f += p.q_hv * fuel_rate(p_ps, s, p) * profile.dt;
        soc += -i_b / p.q_max_c * profile.dt;
        out.soc_lo = std::min(out.soc_lo, soc);
        out.soc_hi = std::max(out.soc_hi, soc);
    }
    return out;
}

struct LineFit {
    double slope;
    double r2;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    const double vxx = sxx - sx * sx / n;
    const double vxy = sxy - sx * sy / n;
    const double vyy = syy - sy * sy / n;
    if (vxx <= 0.0) return {0.0, 0.0};
    const double slope = vxy / vxx;
    const double r2 = vyy > 0.0 ? (vxy * vxy) / (vxx * vyy) : 1.0;
    return {slope, r2};
}

}  // namespace

EquivalenceFactors identify_factors(const LoadProfile& profile, double soc0,
                                    const VehicleParams& p,
                                    const IdentifyOptions& opt) {
    bool any_positive = false;
    for (double v : profile.p_pl_w) any_positive = any_positive || v > 0.0;
    if (!any_positive)
        throw DegenerateSweep("cycle has no positive load to share");

    double du = opt.du0;
    std::vector<double> us;
    std::vector<SweepPoint> pts;
    while (true) {
        us.clear();
        pts.clear();
        const int n = opt.points_per_side;
        for (int i = -n; i <= n; ++i) {
            us.push_back(1.0 + du * static_cast<double>(i) / static_cast<double>(n));
        }
        bool violated = false;
        for (double u : us) {
            const SweepPoint sp = run_sweep(profile, soc0, u, p);
            if (sp.soc_lo < p.soc_min || sp.soc_hi > p.soc_max) {
                violated = true;
                break;
            }
            pts.push_back(sp);
        }
        if (!violated) break;
        du *= 0.5;
        if (du < opt.du_min)
            throw DegenerateSweep("u_efc sweep collapsed before the SOC window fit");
    }

    std::vector<double> xd, yd, xc, yc;
    for (size_t i = 0; i < us.size(); ++i) {
        if (us[i] <= 1.0 + 1e-12) {  // discharging branch, u <= 1
            xc.push_back(pts[i].e_e);
            yc.push_back(pts[i].e_f);
        }
        if (us[i] >= 1.0 - 1e-12) {  // charging branch, u >= 1
            xd.push_back(pts[i].e_e);
            yd.push_back(pts[i].e_f);
        }
    }
    const LineFit fit_d = fit_line(xd, yd);
    const LineFit fit_c = fit_line(xc, yc);

    EquivalenceFactors f;
    f.s_d = -fit_d.slope;  // refilling a net discharge costs charge-side fuel
    f.s_c = -fit_c.slope;  // a net surplus is credited at discharge value
    f.r2_d = fit_d.r2;
    f.r2_c = fit_c.r2;
    f.du = du;
    return f;
}

double efc_of(double fuel_kg, double delta_soc, const EquivalenceFactors& f,
              const VehicleParams& p) {
    const double factor = delta_soc >= 0.0 ? f.s_d : f.s_c;
    return fuel_kg + factor * delta_soc * p.q_max_c * p.v_oc / p.q_hv;
}

double efc_of(const Trajectory& traj, const EquivalenceFactors& f,
              const VehicleParams& p) {
    const auto s = traj.summary();
    return efc_of(s.fuel_g * 1e-3, s.delta_soc, f, p);
}

std::vector<CsScanPoint> cs_necessity_scan(const LoadProfile& profile,
                                           double soc0,
                                           const std::vector<double>& offsets,
                                           const DpGrid& grid,
                                           const VehicleParams& p) {
    const EquivalenceFactors f = identify_factors(profile, soc0, p);
    std::vector<CsScanPoint> scan;
    scan.reserve(offsets.size());
    for (double off : offsets) {
        const double soc_t = soc0 + off;
        const DpSolution sol =
            dp_solve(profile, soc0, soc_t, DpMode::Penalized, grid, p);
        const double fuel_kg = sol.traj.total_fuel_kg();
        // charge the EFC with the target, not the rollout's residual miss
        const double efc_kg = efc_of(fuel_kg, soc0 - soc_t, f, p);
        scan.push_back({soc_t, fuel_kg * 1e3, efc_kg * 1e3});
    }
    return scan;
}

}  // namespace shev
