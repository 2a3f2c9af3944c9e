#include "shev/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "shev/errors.hpp"

namespace shev {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// multiplier to SI for the unit suffixes used by the parameter files
double unit_factor(const std::string& unit) {
    static const std::map<std::string, double> table = {
        {"", 1.0},         {"-", 1.0},        {"1", 1.0},
        {"kg", 1.0},       {"g", 1e-3},
        {"m/s^2", 1.0},    {"m/s2", 1.0},
        {"N*s^2/m^2", 1.0},{"N.s^2/m^2", 1.0},
        {"s", 1.0},        {"h", 3600.0},
        {"W", 1.0},        {"kW", 1e3},       {"MW", 1e6},
        {"J", 1.0},        {"kJ", 1e3},       {"MJ", 1e6},
        {"V", 1.0},        {"ohm", 1.0},      {"Ohm", 1.0},
        {"C", 1.0},        {"Ah", 3600.0},    {"kC", 1e3},
        {"kg/s", 1.0},     {"g/s", 1e-3},
        {"kg/J", 1.0},     {"g/kW/s", 1e-6},  {"g/kWs", 1e-6},
        {"J/kg", 1.0},     {"MJ/kg", 1e6},    {"kJ/kg", 1e3},
    };
    const auto it = table.find(unit);
    if (it == table.end()) throw ParseError("unknown unit '" + unit + "'");
    return it->second;
}

}  // namespace

double parse_quantity(const std::string& text) {
    std::istringstream ss(trim(text));
    double value;
    if (!(ss >> value)) throw ParseError("bad quantity '" + text + "'");
    std::string unit;
    ss >> unit;
    return value * unit_factor(trim(unit));
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": expected key = value");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

void apply_config(VehicleParams& p,
                  const std::map<std::string, std::string>& kv) {
    const std::map<std::string, double*> fields = {
        {"m", &p.mass_kg},         {"f_T", &p.rolling_coef},
        {"f_D", &p.aero_coef},     {"g", &p.gravity},
        {"eta_t", &p.eta_t},       {"eta_i", &p.eta_i},
        {"eta_r", &p.eta_r},       {"eta_dc", &p.eta_dc},
        {"eta_m", &p.eta_m},       {"q_f0", &p.q_f0},
        {"alpha_f", &p.alpha_f},   {"Q_max", &p.q_max_c},
        {"R_b", &p.r_b},           {"V_oc", &p.v_oc},
        {"SOC_min", &p.soc_min},   {"SOC_max", &p.soc_max},
        {"P_SS_min", &p.p_ss_min}, {"P_SS_max", &p.p_ss_max},
        {"P_PS_max", &p.p_ps_max}, {"K", &p.restart_k},
        {"q_HV", &p.q_hv},
    };
    for (const auto& [key, text] : kv) {
        if (key == "g_t") continue;  // drive ratio: carried but unused
        const auto it = fields.find(key);
        if (it == fields.end())
            throw ParseError("unknown vehicle parameter '" + key + "'");
        *it->second = parse_quantity(text);
    }
}

VehicleParams load_vehicle_params(const std::string& path) {
    VehicleParams p;
    apply_config(p, read_config_file(path));
    p.validate();
    return p;
}

namespace {

std::vector<std::vector<double>> read_numeric_csv(const std::string& path,
                                                  size_t n_cols) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open csv: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> vals;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            try {
                vals.push_back(std::stod(cell));
            } catch (const std::exception&) {
                numeric = false;
                break;
            }
        }
        if (!numeric) {
            if (rows.empty() && lineno <= 2) continue;  // header
            throw ParseError(path + ":" + std::to_string(lineno) + ": bad row");
        }
        if (vals.size() != n_cols)
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected " +
                             std::to_string(n_cols) + " columns");
        rows.push_back(vals);
    }
    return rows;
}

}  // namespace

FuelCurve load_fuel_curve(const std::string& path) {
    FuelCurve fc;
    for (const auto& row : read_numeric_csv(path, 2)) {
        fc.power_w.push_back(row[0]);
        fc.mdot_kgps.push_back(row[1]);
    }
    if (fc.power_w.size() < 2) throw ParseError(path + ": fuel table too short");
    return fc;
}

MotorEffMap load_motor_map(const std::string& path) {
    MotorEffMap map;
    std::vector<std::array<double, 3>> rows;
    for (const auto& row : read_numeric_csv(path, 3))
        rows.push_back({row[0], row[1], row[2]});
    for (const auto& r : rows) {
        if (map.v_mps.empty() || map.v_mps.back() != r[0])
            if (std::find(map.v_mps.begin(), map.v_mps.end(), r[0]) ==
                map.v_mps.end())
                map.v_mps.push_back(r[0]);
    }
    for (const auto& r : rows) {
        if (std::find(map.p_drive_w.begin(), map.p_drive_w.end(), r[1]) ==
            map.p_drive_w.end())
            map.p_drive_w.push_back(r[1]);
    }
    std::sort(map.v_mps.begin(), map.v_mps.end());
    std::sort(map.p_drive_w.begin(), map.p_drive_w.end());
    map.eta.assign(map.v_mps.size() * map.p_drive_w.size(), 0.0);
    for (const auto& r : rows) {
        const size_t i = static_cast<size_t>(
            std::find(map.v_mps.begin(), map.v_mps.end(), r[0]) -
            map.v_mps.begin());
        const size_t j = static_cast<size_t>(
            std::find(map.p_drive_w.begin(), map.p_drive_w.end(), r[1]) -
            map.p_drive_w.begin());
        map.eta[i * map.p_drive_w.size() + j] = r[2];
    }
    if (rows.size() != map.eta.size())
        throw ParseError(path + ": efficiency map rows do not form a grid");
    return map;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const Provenance& prov,
                          const CostateSolution* costate) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    for (const auto& [k, v] : prov) out << "# " << k << "=" << v << "\n";
    out << "t_s,P_PL_W,P_PS_W,P_SS_W,s,SOC,lambda_kg\n";
    out.precision(10);
    for (size_t k = 0; k < traj.size(); ++k) {
        out << traj.dt * static_cast<double>(k) << "," << traj.p_pl_w[k] << ","
            << traj.p_ps_w[k] << "," << traj.p_ss_w[k] << "," << traj.engine[k]
            << "," << traj.soc[k] << ",";
        if (costate) out << costate->lambda_at_step(k);
        else out << "nan";
        out << "\n";
    }
}

void write_summary_json(const std::string& path, const Trajectory& traj,
                        const Provenance& prov) {
    const auto s = traj.summary();
    nlohmann::json j;
    j["fuel_g"] = s.fuel_g;
    j["dsoc"] = s.delta_soc;
    j["n_restarts"] = s.n_restarts;
    j["engine_on_s"] = s.engine_on_s;
    j["soc_final"] = traj.soc_final;
    nlohmann::json cfg;
    for (const auto& [k, v] : prov) cfg[k] = v;
    j["config"] = cfg;
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace shev
