#include "shev/cycles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "shev/errors.hpp"
#include "shev/powertrain.hpp"

namespace shev {

double DrivingCycle::distance_m() const {
    double d = 0.0;
    for (double v : v_mps) d += v * dt;
    return d;
}

std::vector<size_t> LoadProfile::propulsion_steps() const {
    std::vector<size_t> idx;
    for (size_t k = 0; k < p_pl_w.size(); ++k)
        if (p_pl_w[k] >= 0.0) idx.push_back(k);
    return idx;
}

std::vector<size_t> LoadProfile::regen_steps() const {
    std::vector<size_t> idx;
    for (size_t k = 0; k < p_pl_w.size(); ++k)
        if (p_pl_w[k] < 0.0) idx.push_back(k);
    return idx;
}

LoadProfile LoadProfile::slice(size_t first, size_t last) const {
    LoadProfile out;
    out.name = name + "[" + std::to_string(first) + ":" + std::to_string(last) + ")";
    out.dt = dt;
    out.p_pl_w.assign(p_pl_w.begin() + static_cast<long>(first),
                      p_pl_w.begin() + static_cast<long>(last));
    return out;
}

WltpStage parse_stage(const std::string& tag) {
    if (tag == "L" || tag == "low") return WltpStage::Low;
    if (tag == "M" || tag == "medium") return WltpStage::Medium;
    if (tag == "H" || tag == "high") return WltpStage::High;
    if (tag == "E" || tag == "extra-high") return WltpStage::ExtraHigh;
    throw UnknownStage("unknown WLTP stage '" + tag + "'");
}

namespace {

struct RawRow {
    double t, v, theta;
    bool has_theta;
};

std::vector<RawRow> read_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open cycle file: " + path);
    std::vector<RawRow> rows;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        // skip a header row
        if (line.find_first_not_of("0123456789+-.eE, \t\r") != std::string::npos) {
            if (lineno == 1) continue;
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": unparsable row '" + line + "'");
        }
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ss, cell, ',')) {
            if (cell.find_first_not_of(" \t\r") == std::string::npos) continue;
            try {
                vals.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ParseError(path + ":" + std::to_string(lineno) +
                                 ": bad number '" + cell + "'");
            }
        }
        if (vals.size() < 2)
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": expected t_s,v_mps[,theta_rad]");
        rows.push_back({vals[0], vals[1], vals.size() > 2 ? vals[2] : 0.0,
                        vals.size() > 2});
    }
    if (rows.size() < 2) throw ParseError(path + ": needs at least two samples");
    return rows;
}

double interp_at(const std::vector<double>& ts, const std::vector<double>& ys,
                 double t) {
    if (t <= ts.front()) return ys.front();
    if (t >= ts.back()) return ys.back();
    auto it = std::upper_bound(ts.begin(), ts.end(), t);
    size_t i = static_cast<size_t>(std::distance(ts.begin(), it)) - 1;
    const double w = (t - ts[i]) / (ts[i + 1] - ts[i]);
    return ys[i] + w * (ys[i + 1] - ys[i]);
}

}  // namespace

DrivingCycle load_cycle(const std::string& path, double dt) {
    const auto rows = read_rows(path);
    std::vector<double> ts, vs, ths;
    bool any_theta = false;
    for (const auto& r : rows) {
        ts.push_back(r.t);
        vs.push_back(std::max(r.v, 0.0));
        ths.push_back(r.theta);
        any_theta = any_theta || r.has_theta;
    }
    for (size_t i = 1; i < ts.size(); ++i)
        if (ts[i] <= ts[i - 1])
            throw NonMonotonicTime(path + ": time not strictly increasing at row " +
                                   std::to_string(i + 1));

    DrivingCycle c;
    c.name = path;
    c.dt = dt;

    bool uniform = true;
    for (size_t i = 1; i < ts.size(); ++i)
        if (std::abs((ts[i] - ts[i - 1]) - dt) > 1e-9) uniform = false;

    if (uniform) {
        c.v_mps = vs;
        if (any_theta) c.theta_rad = ths;
        return c;
    }
    // ceil so the grid spans the whole record; interp clamps past the end
    const size_t n =
        static_cast<size_t>(std::ceil((ts.back() - ts.front()) / dt - 1e-9)) + 1;
    c.v_mps.resize(n);
    if (any_theta) c.theta_rad.resize(n);
    for (size_t k = 0; k < n; ++k) {
        const double t = ts.front() + static_cast<double>(k) * dt;
        c.v_mps[k] = interp_at(ts, vs, t);
        if (any_theta) c.theta_rad[k] = interp_at(ts, ths, t);
    }
    return c;
}

DrivingCycle resample(const DrivingCycle& c, double dt) {
    if (dt <= 0.0) throw std::invalid_argument("resample: dt must be positive");
    std::vector<double> ts(c.size());
    for (size_t i = 0; i < c.size(); ++i) ts[i] = static_cast<double>(i) * c.dt;
    DrivingCycle out;
    out.name = c.name;
    out.dt = dt;
    const size_t n = static_cast<size_t>(std::floor(ts.back() / dt)) + 1;
    out.v_mps.resize(n);
    if (!c.theta_rad.empty()) out.theta_rad.resize(n);
    for (size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * dt;
        out.v_mps[k] = interp_at(ts, c.v_mps, t);
        if (!c.theta_rad.empty()) out.theta_rad[k] = interp_at(ts, c.theta_rad, t);
    }
    return out;
}

DrivingCycle wltp_stage(const DrivingCycle& full, WltpStage stage) {
    // Class 3 phase boundaries at 1 Hz: 589/433/455/323 s.
    if (std::abs(full.dt - 1.0) > 1e-9 || full.size() != 1800)
        throw std::invalid_argument("wltp_stage: expected the full 1800-sample 1 Hz trace");
    size_t a = 0, b = 0;
    std::string tag;
    switch (stage) {
        case WltpStage::Low:       a = 0;    b = 589;  tag = "WL-L"; break;
        case WltpStage::Medium:    a = 589;  b = 1022; tag = "WL-M"; break;
        case WltpStage::High:      a = 1022; b = 1477; tag = "WL-H"; break;
        case WltpStage::ExtraHigh: a = 1477; b = 1800; tag = "WL-E"; break;
    }
    DrivingCycle c;
    c.name = tag;
    c.dt = full.dt;
    c.v_mps.assign(full.v_mps.begin() + static_cast<long>(a),
                   full.v_mps.begin() + static_cast<long>(b));
    if (!full.theta_rad.empty())
        c.theta_rad.assign(full.theta_rad.begin() + static_cast<long>(a),
                           full.theta_rad.begin() + static_cast<long>(b));
    return c;
}

LoadProfile derive_load(const DrivingCycle& c, const VehicleParams& p) {
    LoadProfile out;
    out.name = c.name;
    out.dt = c.dt;
    const size_t n = c.size();
    out.p_pl_w.resize(n);
    for (size_t k = 0; k < n; ++k) {
        double a;
        if (n == 1) {
            a = 0.0;
        } else if (k == 0) {
            a = (c.v_mps[1] - c.v_mps[0]) / c.dt;
        } else if (k + 1 == n) {
            a = (c.v_mps[k] - c.v_mps[k - 1]) / c.dt;
        } else {
            a = (c.v_mps[k + 1] - c.v_mps[k - 1]) / (2.0 * c.dt);
        }
        const double th = c.theta_rad.empty() ? 0.0 : c.theta_rad[k];
        const double pd = drive_power(c.v_mps[k], a, th, p);
        out.p_pl_w[k] = load_power(pd, c.v_mps[k], p);
    }
    return out;
}

LoadProfile pulse_profile() {
    // 10 s dwells; kW levels: 35, 6, 20, 35, 6, 20, then a 35 kW burst and
    // a -10 kW regeneration tail. Documented in the README.
    LoadProfile out;
    out.name = "pulse";
    out.dt = 1.0;
    auto dwell = [&](double kw, int secs) {
        for (int i = 0; i < secs; ++i) out.p_pl_w.push_back(kw * 1e3);
    };
    dwell(35.0, 5);
    dwell(6.0, 10);
    dwell(20.0, 10);
    dwell(35.0, 10);
    dwell(6.0, 10);
    dwell(20.0, 10);
    dwell(35.0, 5);
    dwell(-10.0, 10);
    return out;
}

DrivingCycle synth_mixed_rural(uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    DrivingCycle c;
    c.name = "mixed-rural-" + std::to_string(seed);
    c.dt = 1.0;

    const double target_s = 1200.0;
    const double v_cap = 26.9;
    double v = 0.0;
    // alternate urban blocks (low cruise, frequent stops) and rural blocks
    bool rural = false;
    while (c.v_mps.size() < static_cast<size_t>(target_s)) {
        const double cruise = rural ? 16.0 + 10.0 * uni(rng) : 6.0 + 8.0 * uni(rng);
        const double hold_s = rural ? 40.0 + 60.0 * uni(rng) : 15.0 + 30.0 * uni(rng);
        const double a_up = 0.6 + 1.2 * uni(rng);
        const double a_dn = 0.8 + 1.2 * uni(rng);
        // ramp up
        while (v < cruise - 1e-9) {
            v = std::min(cruise, v + a_up);
            c.v_mps.push_back(std::min(v, v_cap));
        }
        // hold with mild jitter
        for (int i = 0; i < static_cast<int>(hold_s); ++i) {
            const double jitter = 0.8 * std::sin(0.35 * i + 6.28 * uni(rng) * 0.05) +
                                  0.5 * (uni(rng) - 0.5);
            c.v_mps.push_back(std::clamp(cruise + jitter, 0.0, v_cap));
        }
        v = c.v_mps.back();
        // slow down, sometimes to a full stop
        const double v_end = (uni(rng) < (rural ? 0.3 : 0.8)) ? 0.0 : 0.4 * cruise;
        while (v > v_end + 1e-9) {
            v = std::max(v_end, v - a_dn);
            c.v_mps.push_back(v);
        }
        if (v_end == 0.0) {
            const int idle = 3 + static_cast<int>(10.0 * uni(rng));
            for (int i = 0; i < idle; ++i) c.v_mps.push_back(0.0);
        }
        rural = uni(rng) < 0.5 ? rural : !rural;
    }
    c.v_mps.resize(static_cast<size_t>(target_s));
    // finish at rest
    for (size_t k = c.v_mps.size() - 1; k > 0 && c.v_mps[k] > 0.0; --k) {
        const double limit = static_cast<double>(c.v_mps.size() - 1 - k) * 1.5;
        if (c.v_mps[k] > limit) c.v_mps[k] = limit;
        else break;
    }
    return c;
}

}  // namespace shev
