#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "shev/cycles.hpp"
#include "shev/errors.hpp"
#include "shev/powertrain.hpp"

using namespace shev;

namespace {
const VehicleParams P = VehicleParams::table1();
const std::string kWltpCsv = std::string(SHEV_DATA_DIR) + "/wltp_class3b_1hz.csv";

std::string write_temp(const std::string& name, const std::string& body) {
    const std::string path = "/tmp/shev_test_" + name;
    std::ofstream out(path);
    out << body;
    return path;
}
}  // namespace

TEST_CASE("load_cycle parses the basic format") {
    const auto path = write_temp("basic.csv", "t_s,v_mps\n0,0\n1,0\n");
    const auto c = load_cycle(path);
    REQUIRE(c.size() == 2);
    CHECK(c.v_mps[0] == 0.0);
    CHECK(c.v_mps[1] == 0.0);
    CHECK(c.theta_rad.empty());
}

TEST_CASE("load_cycle rejects non-monotonic time") {
    const auto path = write_temp("backwards.csv", "t_s,v_mps\n0,1\n2,2\n1,3\n");
    CHECK_THROWS_AS(load_cycle(path), NonMonotonicTime);
}

TEST_CASE("load_cycle rejects garbage") {
    const auto path = write_temp("garbage.csv", "t_s,v_mps\n0,1\nnope,zip\n");
    CHECK_THROWS_AS(load_cycle(path), ParseError);
}

TEST_CASE("non-uniform input is resampled and keeps distance") {
    std::string body = "t_s,v_mps\n";
    double t = 0.0;
    double dist = 0.0;
    double prev_t = 0.0, prev_v = 0.0;
    for (int i = 0; i <= 60; ++i) {
        const double v = 8.0 + 5.0 * std::sin(0.21 * t);
        body += std::to_string(t) + "," + std::to_string(v) + "\n";
        if (i > 0) dist += 0.5 * (v + prev_v) * (t - prev_t);
        prev_t = t;
        prev_v = v;
        t += (i % 3 == 0) ? 0.5 : 1.25;  // jittered sampling
        if (i == 59) t = 60.0;           // close on the grid
    }
    const auto path = write_temp("nonuniform.csv", body);
    const auto c = load_cycle(path, 1.0);
    CHECK(c.dt == 1.0);
    // trapezoid on the resampled series must preserve total distance
    double dist2 = 0.0;
    for (size_t k = 1; k < c.size(); ++k)
        dist2 += 0.5 * (c.v_mps[k] + c.v_mps[k - 1]) * c.dt;
    CHECK(dist2 == doctest::Approx(dist).epsilon(1e-3));
}

TEST_CASE("bundled WLTP trace: duration and stage boundaries") {
    const auto full = load_cycle(kWltpCsv);
    REQUIRE(full.size() == 1800);
    CHECK(full.dt == 1.0);

    const auto low = wltp_stage(full, WltpStage::Low);
    const auto med = wltp_stage(full, WltpStage::Medium);
    const auto high = wltp_stage(full, WltpStage::High);
    const auto extra = wltp_stage(full, WltpStage::ExtraHigh);
    // class 3 stage durations
    CHECK(low.size() == 589);
    CHECK(med.size() == 433);
    CHECK(high.size() == 455);
    CHECK(extra.size() == 323);
    CHECK(low.v_mps.front() == full.v_mps.front());
    CHECK(extra.v_mps.back() == full.v_mps.back());
    // stages are ordered by their peak speed
    auto vmax = [](const DrivingCycle& c) {
        double m = 0.0;
        for (double v : c.v_mps) m = std::max(m, v);
        return m;
    };
    CHECK(vmax(low) < vmax(med));
    CHECK(vmax(med) < vmax(high));
    CHECK(vmax(high) < vmax(extra));

    CHECK_THROWS_AS(parse_stage("X"), UnknownStage);
    CHECK_THROWS_AS(wltp_stage(low, WltpStage::Low), std::invalid_argument);
}

TEST_CASE("derive_load basics") {
    SUBCASE("all-zero speed gives all-zero load") {
        DrivingCycle c;
        c.dt = 1.0;
        c.v_mps.assign(20, 0.0);
        const auto lp = derive_load(c, P);
        for (double p : lp.p_pl_w) CHECK(p == 0.0);
    }
    SUBCASE("constant 10 m/s matches the hand value") {
        DrivingCycle c;
        c.dt = 1.0;
        c.v_mps.assign(20, 10.0);
        const auto lp = derive_load(c, P);
        CHECK(lp.p_pl_w[10] == doctest::Approx(1941.5 / 0.82944));
    }
    SUBCASE("hard braking clamps at P_SS_min") {
        DrivingCycle c;
        c.dt = 1.0;
        // 25 -> 5 m/s at -4 m/s^2: far beyond the battery's charge limit
        for (int i = 0; i < 10; ++i) c.v_mps.push_back(25.0);
        for (int i = 0; i < 5; ++i) c.v_mps.push_back(25.0 - 4.0 * (i + 1));
        for (int i = 0; i < 5; ++i) c.v_mps.push_back(5.0);
        const auto lp = derive_load(c, P);
        double lowest = 0.0;
        for (double p : lp.p_pl_w) lowest = std::min(lowest, p);
        CHECK(lowest == doctest::Approx(P.p_ss_min));
    }
    SUBCASE("doubling the mass doubles inertial and rolling terms") {
        VehicleParams heavy = P;
        heavy.mass_kg *= 2.0;
        const double v = 14.0, a = 0.8;
        const double base = drive_power(v, a, 0.0, P);
        const double aero = P.aero_coef * v * v * v;
        CHECK(drive_power(v, a, 0.0, heavy) ==
              doctest::Approx(2.0 * (base - aero) + aero));
    }
}

TEST_CASE("load profile partitions cover every step") {
    const auto lp = pulse_profile();
    const auto phi = lp.propulsion_steps();
    const auto psi = lp.regen_steps();
    CHECK(phi.size() + psi.size() == lp.size());
    for (size_t k : phi) CHECK(lp.p_pl_w[k] >= 0.0);
    for (size_t k : psi) CHECK(lp.p_pl_w[k] < 0.0);
}

TEST_CASE("pulse profile is the documented 70 s staircase") {
    const auto lp = pulse_profile();
    REQUIRE(lp.size() == 70);
    CHECK(lp.dt == 1.0);
    CHECK(lp.p_pl_w[0] == 35e3);
    CHECK(lp.p_pl_w[10] == 6e3);
    CHECK(lp.p_pl_w[20] == 20e3);
    CHECK(lp.p_pl_w[69] == -10e3);
    // deterministic by definition
    const auto again = pulse_profile();
    CHECK(again.p_pl_w == lp.p_pl_w);
}

TEST_CASE("mixed-rural generator contract") {
    const auto a = synth_mixed_rural(1);
    const auto b = synth_mixed_rural(1);
    const auto c = synth_mixed_rural(2);
    CHECK(a.v_mps == b.v_mps);       // same seed, same cycle
    CHECK(a.v_mps != c.v_mps);       // different seed differs
    CHECK(a.duration_s() == doctest::Approx(1200.0).epsilon(0.1));
    double vmax = 0.0;
    for (double v : a.v_mps) {
        CHECK(v >= 0.0);
        vmax = std::max(vmax, v);
    }
    CHECK(vmax <= 27.0);
    CHECK(vmax > 10.0);  // actually drives somewhere
}
