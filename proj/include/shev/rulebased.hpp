#pragma once

#include "shev/cycles.hpp"
#include "shev/params.hpp"
#include "shev/trajectory.hpp"

namespace shev {

// The three tunable HPTS decision parameters.
struct HptsParams {
    double on_threshold_w = 18.5e3;   // engine turns on above this load
    double off_threshold_w = 6.5e3;   // engine turns off at or below this load
    double offset_w = 9.5e3;          // battery charge power while engine on

    void validate(const VehicleParams& p) const;
};

struct RuleStep {
    double p_ps_w = 0.0;
    double p_ss_w = 0.0;
    int engine = 0;
    bool emergency = false;
    double residual_w = 0.0;  // load not served / dissipated mechanically
};

// One HPTS decision: hysteresis engine switching in the primary zone and
// forced charge/discharge outside the SOC window.
RuleStep hpts_step(double p_pl_w, double soc, int engine_prev,
                   const HptsParams& hp, const VehicleParams& p);

struct Controller {
    enum class Kind { Hpts, Xos, Ecms } kind = Kind::Hpts;
    HptsParams hpts;
    double xos_threshold_w = 10e3;
    double ecms_s_d = 2.3;
    double ecms_s_c = 2.0;

    static Controller make_hpts(const HptsParams& hp);
    static Controller make_xos(double threshold_w);
    static Controller make_ecms(double s_d, double s_c);
};

// Forward simulation of a rule-based controller over a load profile.
// Engine starts off; restart penalties are included in the fuel total.
Trajectory simulate(const LoadProfile& profile, const Controller& ctrl,
                    double soc0, const VehicleParams& p);

struct SwitchStats {
    int n_restarts = 0;
    double engine_on_duty = 0.0;  // fraction of mission time
};

SwitchStats count_switches(const Trajectory& traj);

}  // namespace shev
