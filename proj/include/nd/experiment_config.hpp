#pragma once

#include <cstdint>
#include <string>

#include "nd/channel.hpp"
#include "nd/sim_engine.hpp"

namespace nd {

// Flat, typed key=value experiment description. Unknown keys are rejected;
// parse(to_text()) reproduces the config exactly. Powers are written in dBm
// ("-inf" allowed for a noise-free channel) and converted to watts at parse.
struct ExperimentConfig {
    std::string scenario = "random";  // random | deploy1 | deploy2 | three_node
    int nodes = 8;
    double region_radius_m = 1000.0;
    double discovery_radius_m = 1000.0;
    double tx_power_dbm = -24.0;
    double noise_density_dbm_hz = -173.0;
    double bandwidth_hz = 100.0;
    double path_loss_eta = 4.0;
    std::string fading = "none";      // none | rayleigh
    std::string power_law = "bounded";  // bounded | unbounded
    double p_tx = 0.5;
    double tau = 1.0;
    bool include_noise_in_sinr = false;
    bool reference_always_listens = true;
    int slots = 20;
    int trials = 100;
    int early_stop_window = 0;
    std::string detector = "rst";  // mf | rst | oracle
    int grid_points = 7;
    std::uint64_t seed = 1;

    static ExperimentConfig preset(const std::string& scenario);

    // Parse a key=value document over the given base (preset defaults).
    static ExperimentConfig parse_text(const std::string& text, ExperimentConfig base);
    static ExperimentConfig load_file(const std::string& path, ExperimentConfig base);

    std::string to_text() const;

    double tx_power_w() const;
    double noise_density_w_hz() const;
    double noise_power_w() const { return noise_density_w_hz() * bandwidth_hz; }

    ChannelParams channel_params() const;
    ProtocolConfig protocol() const;
    DiskRegion region() const { return DiskRegion{region_radius_m}; }

    // Resolved-parameter echo (dBm inputs plus derived watts) for summaries.
    std::string summary_json() const;

    bool operator==(const ExperimentConfig&) const = default;
};

double dbm_to_watts(double dbm);

}  // namespace nd
