#include "nd/experiment_config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace nd {

namespace {

std::string fmt_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("bad number '" + s + "'");
    return v;
}

bool parse_bool(const std::string& s) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw std::invalid_argument("bad boolean '" + s + "'");
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

void validate(const ExperimentConfig& c) {
    const auto fail = [](const std::string& key, const std::string& why) {
        throw std::invalid_argument("config key '" + key + "': " + why);
    };
    if (c.scenario != "random" && c.scenario != "deploy1" && c.scenario != "deploy2" &&
        c.scenario != "three_node")
        fail("scenario", "must be random, deploy1, deploy2, or three_node");
    if (c.nodes < 0) fail("nodes", "must be >= 0");
    if (!(c.region_radius_m > 0.0)) fail("region_radius_m", "must be positive");
    if (!(c.discovery_radius_m > 0.0)) fail("discovery_radius_m", "must be positive");
    if (!(c.bandwidth_hz > 0.0)) fail("bandwidth_hz", "must be positive");
    if (!(c.path_loss_eta > 0.0)) fail("path_loss_eta", "must be positive");
    if (c.fading != "none" && c.fading != "rayleigh") fail("fading", "must be none or rayleigh");
    if (c.power_law != "bounded" && c.power_law != "unbounded")
        fail("power_law", "must be bounded or unbounded");
    if (c.p_tx < 0.0 || c.p_tx > 1.0) fail("p_tx", "must be in [0,1]");
    if (!(c.tau > 0.0)) fail("tau", "must be positive");
    if (c.slots < 1) fail("slots", "must be >= 1");
    if (c.trials < 1) fail("trials", "must be >= 1");
    if (c.detector != "mf" && c.detector != "rst" && c.detector != "oracle")
        fail("detector", "must be mf, rst, or oracle");
    if (c.grid_points < 1) fail("grid_points", "must be >= 1");
}

}  // namespace

double dbm_to_watts(double dbm) {
    if (std::isinf(dbm) && dbm < 0) return 0.0;
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

ExperimentConfig ExperimentConfig::preset(const std::string& scenario) {
    ExperimentConfig c;
    if (scenario == "random") return c;
    if (scenario == "deploy1" || scenario == "deploy2") {
        // Fixed fixtures default to a single 20-slot table-style run.
        c.scenario = scenario;
        c.trials = 1;
        return c;
    }
    if (scenario == "three_node") {
        c.scenario = "three_node";
        c.nodes = 2;
        c.region_radius_m = 1.0;
        c.discovery_radius_m = 1.0;
        c.power_law = "unbounded";
        c.noise_density_dbm_hz = -std::numeric_limits<double>::infinity();
        c.bandwidth_hz = 1.0;
        c.p_tx = 0.4226;
        c.tau = 1.0;
        c.slots = 1;
        c.trials = 100000;
        c.detector = "oracle";
        c.reference_always_listens = false;
        return c;
    }
    throw std::invalid_argument("unknown scenario preset '" + scenario + "'");
}

ExperimentConfig ExperimentConfig::parse_text(const std::string& text, ExperimentConfig base) {
    using Setter = std::function<void(ExperimentConfig&, const std::string&)>;
    static const std::map<std::string, Setter> setters = {
        {"scenario", [](auto& c, const auto& v) { c.scenario = v; }},
        {"nodes", [](auto& c, const auto& v) { c.nodes = std::stoi(v); }},
        {"region_radius_m", [](auto& c, const auto& v) { c.region_radius_m = parse_double(v); }},
        {"discovery_radius_m",
         [](auto& c, const auto& v) { c.discovery_radius_m = parse_double(v); }},
        {"tx_power_dbm", [](auto& c, const auto& v) { c.tx_power_dbm = parse_double(v); }},
        {"noise_density_dbm_hz",
         [](auto& c, const auto& v) { c.noise_density_dbm_hz = parse_double(v); }},
        {"bandwidth_hz", [](auto& c, const auto& v) { c.bandwidth_hz = parse_double(v); }},
        {"path_loss_eta", [](auto& c, const auto& v) { c.path_loss_eta = parse_double(v); }},
        {"fading", [](auto& c, const auto& v) { c.fading = v; }},
        {"power_law", [](auto& c, const auto& v) { c.power_law = v; }},
        {"p_tx", [](auto& c, const auto& v) { c.p_tx = parse_double(v); }},
        {"tau", [](auto& c, const auto& v) { c.tau = parse_double(v); }},
        {"include_noise_in_sinr",
         [](auto& c, const auto& v) { c.include_noise_in_sinr = parse_bool(v); }},
        {"reference_always_listens",
         [](auto& c, const auto& v) { c.reference_always_listens = parse_bool(v); }},
        {"slots", [](auto& c, const auto& v) { c.slots = std::stoi(v); }},
        {"trials", [](auto& c, const auto& v) { c.trials = std::stoi(v); }},
        {"early_stop_window", [](auto& c, const auto& v) { c.early_stop_window = std::stoi(v); }},
        {"detector", [](auto& c, const auto& v) { c.detector = v; }},
        {"grid_points", [](auto& c, const auto& v) { c.grid_points = std::stoi(v); }},
        {"seed", [](auto& c, const auto& v) { c.seed = std::stoull(v); }},
    };

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end())
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": unknown key '" + key + "'");
        try {
            it->second(base, value);
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception&) {
            throw std::invalid_argument("config key '" + key + "': bad value '" + value + "'");
        }
    }
    validate(base);
    return base;
}

ExperimentConfig ExperimentConfig::load_file(const std::string& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str(), std::move(base));
}

std::string ExperimentConfig::to_text() const {
    std::ostringstream out;
    out << "scenario = " << scenario << '\n';
    out << "nodes = " << nodes << '\n';
    out << "region_radius_m = " << fmt_double(region_radius_m) << '\n';
    out << "discovery_radius_m = " << fmt_double(discovery_radius_m) << '\n';
    out << "tx_power_dbm = " << fmt_double(tx_power_dbm) << '\n';
    out << "noise_density_dbm_hz = " << fmt_double(noise_density_dbm_hz) << '\n';
    out << "bandwidth_hz = " << fmt_double(bandwidth_hz) << '\n';
    out << "path_loss_eta = " << fmt_double(path_loss_eta) << '\n';
    out << "fading = " << fading << '\n';
    out << "power_law = " << power_law << '\n';
    out << "p_tx = " << fmt_double(p_tx) << '\n';
    out << "tau = " << fmt_double(tau) << '\n';
    out << "include_noise_in_sinr = " << (include_noise_in_sinr ? "true" : "false") << '\n';
    out << "reference_always_listens = " << (reference_always_listens ? "true" : "false") << '\n';
    out << "slots = " << slots << '\n';
    out << "trials = " << trials << '\n';
    out << "early_stop_window = " << early_stop_window << '\n';
    out << "detector = " << detector << '\n';
    out << "grid_points = " << grid_points << '\n';
    out << "seed = " << seed << '\n';
    return out.str();
}

double ExperimentConfig::tx_power_w() const { return dbm_to_watts(tx_power_dbm); }

double ExperimentConfig::noise_density_w_hz() const { return dbm_to_watts(noise_density_dbm_hz); }

ChannelParams ExperimentConfig::channel_params() const {
    ChannelParams p;
    p.tx_power_w = tx_power_w();
    p.path_loss_eta = path_loss_eta;
    p.fading = fading == "rayleigh" ? Fading::Rayleigh : Fading::None;
    p.noise_density_w_hz = noise_density_w_hz();
    p.bandwidth_hz = bandwidth_hz;
    p.power_law =
        power_law == "unbounded" ? PowerLawKind::Unbounded : PowerLawKind::Bounded;
    return p;
}

ProtocolConfig ExperimentConfig::protocol() const {
    ProtocolConfig p;
    p.p_tx = p_tx;
    p.tau = tau;
    p.include_noise_in_sinr = include_noise_in_sinr;
    p.reference_always_listens = reference_always_listens;
    return p;
}

std::string ExperimentConfig::summary_json() const {
    nlohmann::json j;
    j["scenario"] = scenario;
    j["nodes"] = nodes;
    j["region_radius_m"] = region_radius_m;
    j["discovery_radius_m"] = discovery_radius_m;
    j["tx_power_dbm"] = std::isinf(tx_power_dbm) ? nlohmann::json("-inf")
                                                 : nlohmann::json(tx_power_dbm);
    j["tx_power_w"] = tx_power_w();
    j["noise_density_dbm_hz"] = std::isinf(noise_density_dbm_hz)
                                    ? nlohmann::json("-inf")
                                    : nlohmann::json(noise_density_dbm_hz);
    j["noise_density_w_hz"] = noise_density_w_hz();
    j["noise_power_w"] = noise_power_w();
    j["bandwidth_hz"] = bandwidth_hz;
    j["path_loss_eta"] = path_loss_eta;
    j["fading"] = fading;
    j["power_law"] = power_law;
    j["p_tx"] = p_tx;
    j["tau"] = tau;
    j["include_noise_in_sinr"] = include_noise_in_sinr;
    j["reference_always_listens"] = reference_always_listens;
    j["slots"] = slots;
    j["trials"] = trials;
    j["early_stop_window"] = early_stop_window;
    j["detector"] = detector;
    j["grid_points"] = grid_points;
    j["seed"] = seed;
    return j.dump(2);
}

}  // namespace nd
