#include "nd/sim_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace nd {

namespace {
constexpr std::uint64_t kStreamRoles = 0x11;
constexpr std::uint64_t kStreamFading = 0x12;
constexpr std::uint64_t kStreamNoise = 0x13;
constexpr std::uint64_t kStreamTrial = 0x21;
constexpr std::uint64_t kStreamTrialDeploy = 0x22;
}  // namespace

RolePattern parse_role_pattern_csv(const std::string& text) {
    std::vector<std::vector<Role>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<Role> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            cell.erase(std::remove_if(cell.begin(), cell.end(), ::isspace), cell.end());
            if (cell.empty()) continue;
            if (cell == "T" || cell == "t")
                row.push_back(Role::Transmit);
            else if (cell == "L" || cell == "l")
                row.push_back(Role::Listen);
            else
                throw std::invalid_argument("role pattern: cells must be T or L, got '" + cell +
                                            "'");
        }
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument("role pattern: no rows");
    const std::size_t slots = rows.front().size();
    for (const auto& row : rows)
        if (row.size() != slots)
            throw std::invalid_argument("role pattern: rows have unequal slot counts");
    // Transpose rows-per-node into slots-per-entry.
    RolePattern pattern(slots, std::vector<Role>(rows.size()));
    for (std::size_t n = 0; n < rows.size(); ++n)
        for (std::size_t t = 0; t < slots; ++t) pattern[t][n] = rows[n][t];
    return pattern;
}

SimWorld make_world(Deployment deployment, const ChannelParams& channel) {
    SimWorld w;
    w.power = PowerModel::from(channel, DiskRegion{deployment.radius_m});
    w.fading = channel.fading;
    w.noise_power = channel.noise_power_w();
    w.signatures = signature_bank(deployment.neighbor_count());
    w.deployment = std::move(deployment);
    return w;
}

SlotRealization run_slot(const SimWorld& world, const ProtocolConfig& protocol,
                         std::uint64_t seed, int slot_index,
                         const std::vector<Role>* scripted_roles) {
    const int k = world.neighbor_count();
    SlotRealization slot;
    slot.slot_index = slot_index;
    slot.roles.resize(static_cast<std::size_t>(k) + 1);
    slot.amplitudes.assign(static_cast<std::size_t>(k) + 1, {0.0, 0.0});

    Rng base(seed);
    const auto u_slot = static_cast<std::uint64_t>(slot_index);
    Rng role_rng = base.split(kStreamRoles, u_slot);
    if (scripted_roles != nullptr) {
        if (scripted_roles->size() != slot.roles.size())
            throw std::invalid_argument("scripted roles must cover the reference and every node");
        slot.roles = *scripted_roles;
    } else {
        for (int id = 0; id <= k; ++id)
            slot.roles[static_cast<std::size_t>(id)] =
                role_rng.next_bernoulli(protocol.p_tx) ? Role::Transmit : Role::Listen;
        if (protocol.reference_always_listens) slot.roles[0] = Role::Listen;
    }

    for (int id = 1; id <= k; ++id)
        if (slot.roles[static_cast<std::size_t>(id)] == Role::Transmit) slot.truth_tx_set.insert(id);

    // Amplitudes for every transmitting neighbor; fading draws are consumed
    // per (slot, node) so role choices do not shift other nodes' channels.
    for (int id : slot.truth_tx_set.members()) {
        const double r = world.deployment.distance_to_reference(id);
        double mag = world.power.amplitude_at(r);
        if (world.fading == Fading::Rayleigh) {
            Rng fad = base.split(kStreamFading, u_slot).split(static_cast<std::uint64_t>(id));
            slot.amplitudes[static_cast<std::size_t>(id)] = mag * rayleigh_draw(fad);
        } else {
            slot.amplitudes[static_cast<std::size_t>(id)] = {mag, 0.0};
        }
    }

    if (slot.roles[0] == Role::Listen) {
        const auto members = slot.truth_tx_set.members();
        std::vector<double> powers(members.size());
        for (std::size_t i = 0; i < members.size(); ++i)
            powers[i] = std::norm(slot.amplitudes[static_cast<std::size_t>(members[i])]);
        const double sinr_noise = protocol.include_noise_in_sinr ? world.noise_power : 0.0;
        if (!members.empty()) {
            const NodeSet winners = success_set(powers, sinr_noise, protocol.tau);
            for (int pos : winners.members()) slot.success_set.insert(members[static_cast<std::size_t>(pos)]);
        }
        std::map<int, std::complex<double>> amp_map;
        for (int id : members) amp_map[id] = slot.amplitudes[static_cast<std::size_t>(id)];
        Rng noise_rng = base.split(kStreamNoise, u_slot);
        slot.received = synthesize(slot.truth_tx_set, amp_map, world.signatures,
                                   world.noise_power, noise_rng, world.fading);
    }
    return slot;
}

NodeSet decide_slot(const SlotRealization& slot, const SimWorld& world,
                    const DetectorSetup& detector) {
    if (detector.kind == DetectorKind::Oracle) return slot.success_set;
    if (!slot.received.has_value()) return NodeSet{};
    if (detector.kind == DetectorKind::MatchedFilter)
        return matched_filter_decide(*slot.received, world.signatures, detector.mf).detected;
    return rst_map_decide(*slot.received, detector.rst, world.noise_power).detected;
}

DiscoveryRun run_discovery(const SimWorld& world, const ProtocolConfig& protocol,
                           const DetectorSetup& detector, int max_slots, int early_stop_window,
                           std::uint64_t seed, const RolePattern* scripted) {
    if (max_slots < 1) throw std::invalid_argument("run_discovery: max_slots must be >= 1");
    const int k = world.neighbor_count();
    NodeSet universe;
    for (int id = 1; id <= k; ++id) universe.insert(id);
    NodeSet in_range;
    for (int id = 1; id <= k; ++id)
        if (world.deployment.distance_to_reference(id) <= detector.discovery_radius_m)
            in_range.insert(id);

    int slots = max_slots;
    if (scripted != nullptr) slots = std::min<int>(slots, static_cast<int>(scripted->size()));

    DiscoveryRun run;
    DiscoveryState state;
    for (int t = 0; t < slots; ++t) {
        SlotRecord rec;
        rec.slot = run_slot(world, protocol, seed, t,
                            scripted != nullptr ? &(*scripted)[static_cast<std::size_t>(t)] : nullptr);
        rec.decided = decide_slot(rec.slot, world, detector);
        rec.evaluated = rec.slot.received.has_value() && detector.kind != DetectorKind::Oracle;
        if (rec.evaluated) {
            rec.outcomes = classify_outcomes(rec.slot.truth_tx_set, rec.decided, universe);
            const auto ids = universe.members();
            for (std::size_t i = 0; i < ids.size(); ++i) {
                switch (rec.outcomes[i]) {
                    case Outcome::Hit: ++run.tally.hits; break;
                    case Outcome::CorrectRejection: ++run.tally.correct_rejections; break;
                    case Outcome::FalseAlarm: ++run.tally.false_alarms; break;
                    case Outcome::Miss:
                        if (in_range.contains(ids[i]))
                            ++run.tally.misses;
                        else
                            ++run.tally.misses_out_of_range;
                        break;
                }
            }
        }
        const NodeSet fresh = rec.decided.intersect(universe);
        const bool grew = (fresh.mask() & ~state.discovered.mask()) != 0;
        state.discovered = state.discovered.unite(fresh);
        if (grew) state.last_new_discovery_slot = t;
        rec.state = state;
        run.fraction_discovered.push_back(k > 0 ? static_cast<double>(state.discovered.size()) / k
                                                : 0.0);
        run.slots.push_back(std::move(rec));
        ++run.slots_run;
        if (early_stop_window > 0 && t - state.last_new_discovery_slot >= early_stop_window) {
            state.terminated = true;
            run.slots.back().state.terminated = true;
            break;
        }
    }
    return run;
}

namespace {

struct TrialOutcome {
    double successes_per_slot = 0.0;
    std::vector<double> fraction_by_slot;
    DetectionTally tally;
};

TrialOutcome run_trial(const ReplicateConfig& cfg, std::uint64_t base_seed, int trial) {
    Rng seeder = Rng(base_seed).split(kStreamTrial, static_cast<std::uint64_t>(trial));
    const std::uint64_t slot_seed = seeder.next_u64();

    Deployment dep;
    if (cfg.resample_deployment) {
        Rng dep_seeder = Rng(base_seed).split(kStreamTrialDeploy, static_cast<std::uint64_t>(trial));
        dep = sample_uniform_disk(cfg.neighbor_count, cfg.region, dep_seeder.next_u64());
    } else {
        if (!cfg.fixed_deployment.has_value())
            throw std::invalid_argument("replicate: fixed deployment requested but absent");
        dep = *cfg.fixed_deployment;
    }
    const SimWorld world = make_world(std::move(dep), cfg.channel);

    DiscoveryRun run = run_discovery(world, cfg.protocol, cfg.detector, cfg.slots,
                                     cfg.early_stop_window, slot_seed);
    TrialOutcome out;
    long successes = 0;
    for (const auto& rec : run.slots) successes += rec.slot.success_set.size();
    out.successes_per_slot = static_cast<double>(successes) / run.slots_run;
    out.fraction_by_slot = run.fraction_discovered;
    // Pad to the nominal slot count when early termination cut the run short.
    while (static_cast<int>(out.fraction_by_slot.size()) < cfg.slots)
        out.fraction_by_slot.push_back(out.fraction_by_slot.empty() ? 0.0
                                                                    : out.fraction_by_slot.back());
    out.tally = run.tally;
    return out;
}

void mean_stderr(const std::vector<double>& xs, double& mean, double& se) {
    const double n = static_cast<double>(xs.size());
    mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var = xs.size() > 1 ? var / (n - 1.0) : 0.0;
    se = std::sqrt(var / n);
}

}  // namespace

ReplicateResult replicate(const ReplicateConfig& config, std::uint64_t base_seed) {
    if (config.trials < 1) throw std::invalid_argument("replicate: trials must be >= 1");
    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(config.trials));

    int threads = config.threads > 0 ? config.threads
                                     : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, config.trials));
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int t = next.fetch_add(1);
            if (t >= config.trials) return;
            outcomes[static_cast<std::size_t>(t)] = run_trial(config, base_seed, t);
        }
    };
    if (threads == 1) {
        worker();
    } else {
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    ReplicateResult res;
    res.trials = config.trials;
    std::vector<double> succ, errs;
    succ.reserve(outcomes.size());
    errs.reserve(outcomes.size());
    for (const auto& o : outcomes) {
        succ.push_back(o.successes_per_slot);
        errs.push_back(static_cast<double>(o.tally.total_errors()));
        res.per_trial_tally.push_back(o.tally);
    }
    mean_stderr(succ, res.mean_successes_per_slot, res.stderr_successes_per_slot);
    mean_stderr(errs, res.mean_errors, res.stderr_errors);

    res.mean_fraction_by_slot.assign(static_cast<std::size_t>(config.slots), 0.0);
    res.stderr_fraction_by_slot.assign(static_cast<std::size_t>(config.slots), 0.0);
    for (int s = 0; s < config.slots; ++s) {
        std::vector<double> xs;
        xs.reserve(outcomes.size());
        for (const auto& o : outcomes) xs.push_back(o.fraction_by_slot[static_cast<std::size_t>(s)]);
        mean_stderr(xs, res.mean_fraction_by_slot[static_cast<std::size_t>(s)],
                    res.stderr_fraction_by_slot[static_cast<std::size_t>(s)]);
    }
    return res;
}

}  // namespace nd
