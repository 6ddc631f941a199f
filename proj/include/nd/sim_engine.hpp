#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nd/channel.hpp"
#include "nd/deployment.hpp"
#include "nd/detectors.hpp"
#include "nd/signals.hpp"

namespace nd {

enum class Role : std::uint8_t { Transmit, Listen };

// Roles per slot, outer index = slot, inner index = node id (0 = reference).
using RolePattern = std::vector<std::vector<Role>>;

// Rows are nodes (reference first), cells are T or L letters.
RolePattern parse_role_pattern_csv(const std::string& text);

struct ProtocolConfig {
    double p_tx = 0.5;
    double tau = 1.0;
    bool include_noise_in_sinr = false;
    // Detection experiments keep the reference receiving every slot; analysis
    // runs let it transmit with p_tx like everyone else.
    bool reference_always_listens = false;
};

// Fixed per-run state: positions, propagation, noise, signatures.
struct SimWorld {
    Deployment deployment;
    PowerModel power;
    Fading fading = Fading::None;
    double noise_power = 0.0;
    std::vector<Signature> signatures;  // node ids 1..K

    int neighbor_count() const { return deployment.neighbor_count(); }
};

SimWorld make_world(Deployment deployment, const ChannelParams& channel);

struct SlotRealization {
    int slot_index = 0;
    std::vector<Role> roles;                       // size K+1
    NodeSet truth_tx_set;                          // transmitting neighbors
    std::vector<std::complex<double>> amplitudes;  // size K+1, 0 when silent
    std::optional<ReceivedVector> received;        // present iff reference listens
    NodeSet success_set;                           // SINR-qualified subset
};

SlotRealization run_slot(const SimWorld& world, const ProtocolConfig& protocol,
                         std::uint64_t seed, int slot_index,
                         const std::vector<Role>* scripted_roles = nullptr);

struct DiscoveryState {
    NodeSet discovered;
    int last_new_discovery_slot = -1;
    bool terminated = false;
};

struct DetectionTally {
    long hits = 0;
    long correct_rejections = 0;
    long false_alarms = 0;
    long misses = 0;               // in-range misses
    long misses_out_of_range = 0;  // truth transmitter beyond the discovery radius

    long total_errors() const { return false_alarms + misses + misses_out_of_range; }
    long total_misses() const { return misses + misses_out_of_range; }
};

struct DetectorSetup {
    DetectorKind kind = DetectorKind::Oracle;
    MatchedFilterConfig mf;
    RstDetectorConfig rst;
    // Used to split miss tallies; detection beyond this radius is not expected.
    double discovery_radius_m = std::numeric_limits<double>::infinity();
};

NodeSet decide_slot(const SlotRealization& slot, const SimWorld& world,
                    const DetectorSetup& detector);

struct SlotRecord {
    SlotRealization slot;
    NodeSet decided;
    bool evaluated = false;          // reception happened, outcomes below are valid
    std::vector<Outcome> outcomes;   // over node ids 1..K
    DiscoveryState state;            // after this slot
};

struct DiscoveryRun {
    std::vector<SlotRecord> slots;
    DetectionTally tally;
    std::vector<double> fraction_discovered;  // per executed slot
    int slots_run = 0;
};

// Slot loop: generate, decide, fold into the discovery state; stop early after
// `early_stop_window` slots without a new discovery (0 or negative disables).
// Slot realizations depend only on (seed, slot index), so runs with different
// detectors and the same seed see identical channels.
DiscoveryRun run_discovery(const SimWorld& world, const ProtocolConfig& protocol,
                           const DetectorSetup& detector, int max_slots, int early_stop_window,
                           std::uint64_t seed, const RolePattern* scripted = nullptr);

struct ReplicateConfig {
    int trials = 100;
    int slots = 20;
    int early_stop_window = 0;
    DiskRegion region{1.0};
    ChannelParams channel;
    ProtocolConfig protocol;
    DetectorSetup detector;
    int neighbor_count = 2;
    bool resample_deployment = true;   // fresh positions per trial
    std::optional<Deployment> fixed_deployment;
    int threads = 0;                   // 0 = hardware concurrency
};

struct ReplicateResult {
    int trials = 0;
    double mean_successes_per_slot = 0.0;
    double stderr_successes_per_slot = 0.0;
    std::vector<double> mean_fraction_by_slot;
    std::vector<double> stderr_fraction_by_slot;
    std::vector<DetectionTally> per_trial_tally;
    double mean_errors = 0.0;
    double stderr_errors = 0.0;
};

// Independent seeded trials with a fixed reduction order; results do not
// depend on the thread count.
ReplicateResult replicate(const ReplicateConfig& config, std::uint64_t base_seed);

}  // namespace nd
