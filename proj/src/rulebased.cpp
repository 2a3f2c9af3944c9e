#include "shev/rulebased.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "shev/errors.hpp"
#include "shev/powertrain.hpp"

namespace shev {

void HptsParams::validate(const VehicleParams& p) const {
    if (off_threshold_w > on_threshold_w)
        throw std::invalid_argument("HptsParams: lower threshold above upper");
    if (off_threshold_w < 0.0 || on_threshold_w < 0.0)
        throw std::invalid_argument("HptsParams: thresholds must be non-negative");
    if (on_threshold_w > p.p_ps_max)
        throw std::invalid_argument("HptsParams: upper threshold above P_PS_max");
}

namespace {

RuleStep balance_engine_on(double p_pl, double p_ps_raw,
                           const VehicleParams& p) {
    RuleStep out;
    out.engine = 1;
    out.p_ps_w = std::clamp(p_ps_raw, 0.0, p.p_ps_max);
    out.p_ss_w = std::clamp(p_pl - out.p_ps_w, p.p_ss_min, p.p_ss_max);
    out.residual_w = p_pl - out.p_ps_w - out.p_ss_w;
    return out;
}

RuleStep balance_engine_off(double p_pl, const VehicleParams& p) {
    RuleStep out;
    out.engine = 0;
    out.p_ss_w = std::clamp(p_pl, p.p_ss_min, p.p_ss_max);
    out.residual_w = p_pl - out.p_ss_w;
    return out;
}

}  // namespace

RuleStep hpts_step(double p_pl_w, double soc, int engine_prev,
                   const HptsParams& hp, const VehicleParams& p) {
    // emergency handling outside the SOC window
    if (soc >= p.soc_max) {
        RuleStep out;
        if (p_pl_w <= 0.0) {
            // battery is full: no regeneration, braking goes mechanical
            out = balance_engine_off(0.0, p);
            out.residual_w = p_pl_w;
        } else {
            const double p_ss = std::min(p.p_ss_max, p_pl_w);
            out = (p_pl_w - p_ss > 1e-9) ? balance_engine_on(p_pl_w, p_pl_w - p_ss, p)
                                         : balance_engine_off(p_pl_w, p);
        }
        out.emergency = true;
        return out;
    }
    if (soc <= p.soc_min) {
        // force maximum charging; the engine covers the gap even while braking
        const double p_ss = std::max(p_pl_w - p.p_ps_max, p.p_ss_min);
        RuleStep out = balance_engine_on(p_pl_w, p_pl_w - p_ss, p);
        out.emergency = true;
        return out;
    }

    int s = engine_prev;
    if (p_pl_w <= hp.off_threshold_w) s = 0;
    else if (p_pl_w > hp.on_threshold_w) s = 1;

    if (s == 1) return balance_engine_on(p_pl_w, p_pl_w + hp.offset_w, p);
    return balance_engine_off(p_pl_w, p);
}

Controller Controller::make_hpts(const HptsParams& hp) {
    Controller c;
    c.kind = Kind::Hpts;
    c.hpts = hp;
    return c;
}

Controller Controller::make_xos(double threshold_w) {
    Controller c;
    c.kind = Kind::Xos;
    c.xos_threshold_w = threshold_w;
    return c;
}

Controller Controller::make_ecms(double s_d, double s_c) {
    Controller c;
    c.kind = Kind::Ecms;
    c.ecms_s_d = s_d;
    c.ecms_s_c = s_c;
    return c;
}

namespace {

RuleStep ecms_step(double p_pl, double soc, int engine_prev, double s_d,
                   double s_c, const VehicleParams& p) {
    // emergencies reuse the HPTS rules (thresholds are irrelevant there)
    if (soc >= p.soc_max || soc <= p.soc_min)
        return hpts_step(p_pl, soc, engine_prev, HptsParams{}, p);

    if (p_pl <= 0.0) return balance_engine_off(p_pl, p);

    const double lo = std::max(p_pl - p.p_ps_max, p.p_ss_min);
    const double hi = std::min(p.p_ss_max, p_pl);
    const int n = 601;
    double best = std::numeric_limits<double>::infinity();
    RuleStep pick;
    for (int i = 0; i < n; ++i) {
        const double p_ss = lo + (hi - lo) * static_cast<double>(i) /
                                     static_cast<double>(n - 1);
        const double p_ps = std::max(p_pl - p_ss, 0.0);
        const int s = p_ps > 1e-9 ? 1 : 0;
        const double factor = p_ss >= 0.0 ? s_d : s_c;
        const double m_eq = fuel_rate(p_ps, s, p) + factor * p_ss / p.q_hv;
        if (m_eq < best) {
            best = m_eq;
            pick.p_ss_w = p_ss;
            pick.p_ps_w = p_ps;
            pick.engine = s;
        }
    }
    return pick;
}

}  // namespace

Trajectory simulate(const LoadProfile& profile, const Controller& ctrl,
                    double soc0, const VehicleParams& p) {
    Trajectory traj;
    traj.dt = profile.dt;
    traj.reserve(profile.size());
    PowertrainState st;
    st.soc = soc0;
    st.engine = 0;

    HptsParams xos;
    if (ctrl.kind == Controller::Kind::Xos) {
        xos.on_threshold_w = ctrl.xos_threshold_w;
        xos.off_threshold_w = ctrl.xos_threshold_w;
        xos.offset_w = 0.0;
    }

    for (size_t k = 0; k < profile.size(); ++k) {
        const double p_pl = profile.p_pl_w[k];
        RuleStep rs;
        switch (ctrl.kind) {
            case Controller::Kind::Hpts:
                rs = hpts_step(p_pl, st.soc, st.engine, ctrl.hpts, p);
                break;
            case Controller::Kind::Xos:
                rs = hpts_step(p_pl, st.soc, st.engine, xos, p);
                break;
            case Controller::Kind::Ecms:
                rs = ecms_step(p_pl, st.soc, st.engine, ctrl.ecms_s_d,
                               ctrl.ecms_s_c, p);
                break;
        }
        const PowertrainState prev = st;
        try {
            st = step(st, rs.p_ps_w, rs.p_ss_w, rs.engine, profile.dt, p);
        } catch (const SimError& e) {
            std::ostringstream os;
            os << e.what() << " at step " << k;
            throw SimError(os.str());
        }
        traj.push(p_pl, rs.p_ps_w, rs.p_ss_w, rs.engine, prev.soc, st.fuel_kg,
                  rs.emergency, rs.residual_w);
    }
    traj.soc_final = st.soc;
    traj.n_restarts = st.restarts;
    return traj;
}

SwitchStats count_switches(const Trajectory& traj) {
    // only 0->1 transitions inside the record count; a mission that begins
    // with the engine already running is not a restart
    SwitchStats stats;
    double on_time = 0.0;
    for (size_t k = 0; k < traj.engine.size(); ++k) {
        if (traj.engine[k] == 1) on_time += traj.dt;
        if (k > 0 && traj.engine[k - 1] == 0 && traj.engine[k] == 1)
            stats.n_restarts += 1;
    }
    const double total = traj.dt * static_cast<double>(traj.size());
    stats.engine_on_duty = total > 0.0 ? on_time / total : 0.0;
    return stats;
}

}  // namespace shev
