#include "nd/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nd/deployment.hpp"
#include "nd/detectors.hpp"
#include "nd/experiment_config.hpp"
#include "nd/mpr_analysis.hpp"
#include "nd/numerics.hpp"
#include "nd/sim_engine.hpp"

namespace fs = std::filesystem;

namespace nd {
namespace {

// Bundled three-node transmit/listen demo pattern (reference node first).
constexpr const char* kThreeNodeDemoPattern =
    "T,T,L,L,T,L,T,L,L,T,T,L,T,T,L\n"
    "L,L,T,L,T,T,L,T,L,L,L,L,T,T,T\n"
    "L,T,T,L,T,L,L,T,T,T,T,T,T,T,L\n";

// Named seeds behind the committed deploy1/deploy2 position fixtures
// (data/*.json); the positions regenerate bit-exactly from these.
constexpr std::uint64_t kDeploy1Seed = 67;
constexpr std::uint64_t kDeploy2Seed = 2218853;

// Modulation sweep configuration for the throughput-per-second figure.
constexpr double kFig2TargetBer = 1e-6;
constexpr double kFig2BitsPerSlot = 1.0;
constexpr double kFig2BandwidthHz = 1.0;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

std::vector<double> log_spaced(double lo, double hi, int points) {
    std::vector<double> xs;
    xs.reserve(points);
    const double la = std::log10(lo), lb = std::log10(hi);
    for (int i = 0; i < points; ++i)
        xs.push_back(std::pow(10.0, la + (lb - la) * i / (points - 1)));
    return xs;
}

PowerModel unbounded_model(double eta) {
    PowerModel m;
    m.kind = PowerLawKind::Unbounded;
    m.eta = eta;
    m.region_radius_m = 1.0;
    return m;
}

Deployment scenario_deployment(const ExperimentConfig& cfg) {
    if (cfg.scenario == "deploy1" || cfg.scenario == "deploy2") {
        if (cfg.nodes != 8 || cfg.region_radius_m != 1000.0)
            throw std::invalid_argument(cfg.scenario + " is a fixed 8-node, 1 km fixture");
        return sample_uniform_disk(8, DiskRegion{1000.0},
                                   cfg.scenario == "deploy1" ? kDeploy1Seed : kDeploy2Seed);
    }
    return sample_uniform_disk(cfg.nodes, cfg.region(), cfg.seed);
}

DetectorSetup build_detector(const std::string& kind, const ExperimentConfig& cfg,
                             const SimWorld& world) {
    DetectorSetup det;
    det.discovery_radius_m = cfg.discovery_radius_m;
    if (kind == "oracle") {
        det.kind = DetectorKind::Oracle;
        return det;
    }
    if (kind == "mf") {
        det.kind = DetectorKind::MatchedFilter;
        const double pbar = mean_rx_power(cfg.channel_params(), cfg.region());
        const double nprime =
            effective_noise(world.neighbor_count(), cfg.p_tx, pbar, world.noise_power);
        det.mf = MatchedFilterConfig::min_error(cfg.p_tx, nprime);
        return det;
    }
    if (kind == "rst") {
        det.kind = DetectorKind::RstMap;
        det.rst.discovery_radius_m = cfg.discovery_radius_m;
        det.rst.p_tx = cfg.p_tx;
        det.rst.signatures = world.signatures;
        const double frac = std::min(1.0, (cfg.discovery_radius_m * cfg.discovery_radius_m) /
                                              (cfg.region_radius_m * cfg.region_radius_m));
        det.rst.cardinality_prior = CardinalityPrior::binomial(world.neighbor_count(), frac);
        for (double r : equal_area_radii(cfg.discovery_radius_m, cfg.grid_points))
            det.rst.amplitude_grid.push_back(world.power.amplitude_at(r));
        return det;
    }
    throw std::invalid_argument("unknown detector '" + kind + "'");
}

std::string grid_csv(const DiscoveryRun& run, int neighbor_count) {
    std::ostringstream out;
    out << "node_id";
    for (int t = 0; t < run.slots_run; ++t) out << ",slot" << (t + 1);
    out << '\n';
    for (int row = 0; row < neighbor_count; ++row) {
        out << (row + 1);
        for (const auto& rec : run.slots)
            out << ',' << (rec.evaluated ? static_cast<char>(rec.outcomes[row]) : '-');
        out << '\n';
    }
    return out.str();
}

nlohmann::json tally_json(const DetectionTally& t) {
    return {{"hits", t.hits},
            {"correct_rejections", t.correct_rejections},
            {"false_alarms", t.false_alarms},
            {"misses", t.misses},
            {"misses_out_of_range", t.misses_out_of_range}};
}

// ---- analyze ---------------------------------------------------------------

int run_analyze(const std::string& target, const ExperimentConfig& cfg, const fs::path& out_dir) {
    const double eta = cfg.path_loss_eta;
    const PowerModel model = unbounded_model(eta);
    const auto e_star_at = [&](double tau, double p) {
        CaptureContext ctx;
        ctx.neighbor_count = 2;
        ctx.tx_probability = p;
        ctx.sinr_threshold = tau;
        ctx.model = model;
        return expected_successes_per_slot(ctx);
    };

    if (target == "fig1") {
        std::ostringstream csv;
        csv << "tau,pt_star,e_star\n";
        for (double tau : log_spaced(0.1, 100.0, 61)) {
            const double pt = optimal_tx_probability(tau, eta);
            csv << fmt(tau) << ',' << fmt(pt) << ',' << fmt(e_star_at(tau, pt)) << '\n';
        }
        write_file(out_dir / "fig1.csv", csv.str());
        return 0;
    }

    if (target == "fig2") {
        std::ostringstream csv;
        csv << "tau,m,nodes_per_sec\n";
        for (int m : {2, 4, 8}) {
            MpskParams params;
            params.constellation = m;
            params.target_ber = kFig2TargetBer;
            params.bits_per_slot = kFig2BitsPerSlot;
            params.bandwidth_hz = kFig2BandwidthHz;
            for (double tau : log_spaced(0.1, 100.0, 61)) {
                const double pt = optimal_tx_probability(tau, eta);
                const double per_sec = e_star_at(tau, pt) / slot_duration(tau, params);
                csv << fmt(tau) << ',' << m << ',' << fmt(per_sec) << '\n';
            }
        }
        write_file(out_dir / "fig2.csv", csv.str());
        return 0;
    }

    if (target == "fig3") {
        const RolePattern pattern = parse_role_pattern_csv(kThreeNodeDemoPattern);
        ChannelParams ch = cfg.channel_params();
        const ProtocolConfig protocol = cfg.protocol();
        const double e_star = e_star_at(cfg.tau, cfg.p_tx);
        const int slots = static_cast<int>(pattern.size());

        const auto run_pattern = [&](std::uint64_t dep_seed, std::uint64_t slot_seed) {
            SimWorld world = make_world(sample_uniform_disk(2, DiskRegion{1.0}, dep_seed), ch);
            DetectorSetup oracle;
            oracle.kind = DetectorKind::Oracle;
            return run_discovery(world, protocol, oracle, slots, 0, slot_seed, &pattern);
        };

        const DiscoveryRun run = run_pattern(cfg.seed, cfg.seed);
        std::vector<int> h;
        std::ostringstream csv;
        csv << "slot,actual_fraction,slot_basis,bernoulli\n";
        for (int t = 0; t < run.slots_run; ++t) {
            h.push_back(run.slots[t].slot.success_set.size());
            csv << (t + 1) << ',' << fmt(run.fraction_discovered[t]) << ','
                << fmt(slot_basis_discovery_probability(h, 2)) << ','
                << fmt(bernoulli_discovery_probability(t + 1, e_star, 2)) << '\n';
        }
        write_file(out_dir / "fig3.csv", csv.str());

        // Same scripted pattern averaged over re-drawn positions.
        const int trials = cfg.trials;
        std::vector<std::vector<double>> fractions(slots);
        Rng seeder(cfg.seed);
        for (int i = 0; i < trials; ++i) {
            Rng trial_rng = seeder.split(0x33, static_cast<std::uint64_t>(i));
            const std::uint64_t s = trial_rng.next_u64();
            const DiscoveryRun r = run_pattern(s, s);
            for (int t = 0; t < slots; ++t) fractions[t].push_back(r.fraction_discovered[t]);
        }
        std::ostringstream mean_csv;
        mean_csv << "slot,actual_mean,actual_stderr\n";
        for (int t = 0; t < slots; ++t) {
            double m = 0.0;
            for (double f : fractions[t]) m += f;
            m /= trials;
            double var = 0.0;
            for (double f : fractions[t]) var += (f - m) * (f - m);
            const double se = trials > 1 ? std::sqrt(var / (trials - 1.0) / trials) : 0.0;
            mean_csv << (t + 1) << ',' << fmt(m) << ',' << fmt(se) << '\n';
        }
        write_file(out_dir / "fig3_mean.csv", mean_csv.str());
        return 0;
    }

    if (target == "fig4") {
        CaptureContext ctx;
        ctx.neighbor_count = cfg.nodes;
        ctx.tx_probability = cfg.p_tx;
        ctx.sinr_threshold = cfg.tau;
        ctx.model = model;
        std::ostringstream csv;
        csv << "r_prime,probability\n";
        for (int i = 0; i <= 100; ++i) {
            const double rp = i / 100.0;
            csv << fmt(rp) << ',' << fmt(membership_given_success_count(rp, 1, ctx)) << '\n';
        }
        write_file(out_dir / "fig4.csv", csv.str());
        return 0;
    }
    throw std::invalid_argument("unknown analyze target '" + target + "'");
}

// ---- simulate --------------------------------------------------------------

// Scripted-pattern mode: fixed roles from the CSV, positions redrawn per trial.
int run_simulate_scripted(const ExperimentConfig& cfg, const RolePattern& pattern,
                          const fs::path& out_dir) {
    if (static_cast<int>(pattern.front().size()) != cfg.nodes + 1)
        throw std::invalid_argument("role pattern rows must cover the reference and every node");
    const int slots = static_cast<int>(pattern.size());
    const ChannelParams ch = cfg.channel_params();
    const ProtocolConfig protocol = cfg.protocol();

    std::vector<std::vector<double>> fractions(slots);
    double success_sum = 0.0, success_sq = 0.0;
    Rng seeder(cfg.seed);
    for (int i = 0; i < cfg.trials; ++i) {
        Rng trial_rng = seeder.split(0x44, static_cast<std::uint64_t>(i));
        const std::uint64_t s = trial_rng.next_u64();
        SimWorld world = make_world(sample_uniform_disk(cfg.nodes, cfg.region(), s), ch);
        const DetectorSetup det = build_detector(cfg.detector, cfg, world);
        const DiscoveryRun run = run_discovery(world, protocol, det, slots, 0, s, &pattern);
        for (int t = 0; t < slots; ++t) fractions[t].push_back(run.fraction_discovered[t]);
        long succ = 0;
        for (const auto& rec : run.slots) succ += rec.slot.success_set.size();
        const double per_slot = static_cast<double>(succ) / run.slots_run;
        success_sum += per_slot;
        success_sq += per_slot * per_slot;
    }
    std::ostringstream csv;
    csv << "slot,mean_fraction,stderr_fraction\n";
    for (int t = 0; t < slots; ++t) {
        double m = 0.0;
        for (double f : fractions[t]) m += f;
        m /= cfg.trials;
        double var = 0.0;
        for (double f : fractions[t]) var += (f - m) * (f - m);
        const double se = cfg.trials > 1 ? std::sqrt(var / (cfg.trials - 1.0) / cfg.trials) : 0.0;
        csv << (t + 1) << ',' << fmt(m) << ',' << fmt(se) << '\n';
    }
    write_file(out_dir / "trace.csv", csv.str());

    const double mean = success_sum / cfg.trials;
    double var = success_sq / cfg.trials - mean * mean;
    var = std::max(0.0, var);
    nlohmann::json j;
    j["config"] = nlohmann::json::parse(cfg.summary_json());
    j["trials"] = cfg.trials;
    j["scripted_slots"] = slots;
    j["mean_successes_per_slot"] = mean;
    j["stderr_successes_per_slot"] =
        cfg.trials > 1 ? std::sqrt(var / (cfg.trials - 1.0)) : 0.0;
    write_file(out_dir / "summary.json", j.dump(2) + "\n");
    std::cout << "simulate: scripted pattern, mean successes/slot = " << mean << " ("
              << cfg.trials << " trials)\n";
    return 0;
}

int run_simulate(const ExperimentConfig& cfg, const fs::path& out_dir) {
    ReplicateConfig rc;
    rc.trials = cfg.trials;
    rc.slots = cfg.slots;
    rc.early_stop_window = cfg.early_stop_window;
    rc.region = cfg.region();
    rc.channel = cfg.channel_params();
    rc.protocol = cfg.protocol();
    rc.neighbor_count = cfg.nodes;
    if (cfg.scenario == "deploy1" || cfg.scenario == "deploy2") {
        rc.resample_deployment = false;
        rc.fixed_deployment = scenario_deployment(cfg);
    }
    {
        SimWorld probe = make_world(scenario_deployment(cfg), rc.channel);
        rc.detector = build_detector(cfg.detector, cfg, probe);
    }
    const ReplicateResult res = replicate(rc, cfg.seed);

    std::ostringstream csv;
    csv << "slot,mean_fraction,stderr_fraction\n";
    for (int t = 0; t < cfg.slots; ++t)
        csv << (t + 1) << ',' << fmt(res.mean_fraction_by_slot[t]) << ','
            << fmt(res.stderr_fraction_by_slot[t]) << '\n';
    write_file(out_dir / "trace.csv", csv.str());

    nlohmann::json j;
    j["config"] = nlohmann::json::parse(cfg.summary_json());
    j["trials"] = res.trials;
    j["mean_successes_per_slot"] = res.mean_successes_per_slot;
    j["stderr_successes_per_slot"] = res.stderr_successes_per_slot;
    if (cfg.fading == "none") {
        CaptureContext ctx;
        ctx.neighbor_count = cfg.nodes;
        ctx.tx_probability = cfg.p_tx;
        ctx.sinr_threshold = cfg.tau;
        ctx.model = PowerModel::from(cfg.channel_params(), cfg.region());
        ctx.mc_seed = cfg.seed;
        j["expected_successes_analysis"] = expected_successes_per_slot(ctx);
    }
    if (cfg.detector != "oracle") {
        j["mean_errors"] = res.mean_errors;
        j["stderr_errors"] = res.stderr_errors;
    }
    write_file(out_dir / "summary.json", j.dump(2) + "\n");
    std::cout << "simulate: mean successes/slot = " << res.mean_successes_per_slot << " +- "
              << res.stderr_successes_per_slot << " (" << res.trials << " trials)\n";
    return 0;
}

// ---- detect ----------------------------------------------------------------

int run_detect(const ExperimentConfig& cfg, const std::string& detector_choice,
               const fs::path& out_dir) {
    std::vector<std::string> kinds;
    if (detector_choice == "both")
        kinds = {"mf", "rst"};
    else
        kinds = {detector_choice};

    const Deployment dep = scenario_deployment(cfg);
    const SimWorld world = make_world(dep, cfg.channel_params());
    write_file(out_dir / "signatures.csv", signatures_to_csv(world.signatures));
    if (cfg.scenario != "random") write_file(out_dir / "deployment.json", dep.to_json() + "\n");

    nlohmann::json j;
    j["config"] = nlohmann::json::parse(cfg.summary_json());

    std::vector<std::vector<double>> per_trial_errors(kinds.size());
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        const std::string& kind = kinds[i];
        const DetectorSetup det = build_detector(kind, cfg, world);
        if (cfg.trials == 1) {
            const DiscoveryRun run =
                run_discovery(world, cfg.protocol(), det, cfg.slots, cfg.early_stop_window,
                              cfg.seed);
            write_file(out_dir / ("detect_grid_" + kind + ".csv"),
                       grid_csv(run, world.neighbor_count()));
            j["detectors"][kind] = tally_json(run.tally);
        } else {
            ReplicateConfig rc;
            rc.trials = cfg.trials;
            rc.slots = cfg.slots;
            rc.early_stop_window = cfg.early_stop_window;
            rc.region = cfg.region();
            rc.channel = cfg.channel_params();
            rc.protocol = cfg.protocol();
            rc.neighbor_count = cfg.nodes;
            rc.detector = det;
            if (cfg.scenario != "random") {
                rc.resample_deployment = false;
                rc.fixed_deployment = dep;
            }
            const ReplicateResult res = replicate(rc, cfg.seed);
            DetectionTally sum;
            for (const auto& t : res.per_trial_tally) {
                sum.hits += t.hits;
                sum.correct_rejections += t.correct_rejections;
                sum.false_alarms += t.false_alarms;
                sum.misses += t.misses;
                sum.misses_out_of_range += t.misses_out_of_range;
                per_trial_errors[i].push_back(static_cast<double>(t.total_errors()));
            }
            j["detectors"][kind] = {{"totals", tally_json(sum)},
                                    {"mean_errors_per_trial", res.mean_errors},
                                    {"stderr_errors_per_trial", res.stderr_errors}};
        }
    }

    if (kinds.size() == 2 && cfg.trials > 1) {
        std::vector<double> deltas(per_trial_errors[0].size());
        for (std::size_t t = 0; t < deltas.size(); ++t)
            deltas[t] = per_trial_errors[0][t] - per_trial_errors[1][t];  // mf - rst
        const PairedTestResult pt = paired_one_sided_test(deltas);
        j["paired_mf_minus_rst"] = {{"mean_delta", pt.mean_delta},
                                    {"t_statistic", pt.t_statistic},
                                    {"critical_value_0.05", pt.critical_value},
                                    {"rst_significantly_better", pt.significant}};
    }
    write_file(out_dir / "detect_summary.json", j.dump(2) + "\n");
    std::cout << "detect: wrote " << (out_dir / "detect_summary.json").string() << "\n";
    return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Slotted neighbor-discovery simulator under an SINR capture channel"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", scenario, detector, target, r0;
    std::string trials_override, seed_override;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key=value experiment config file");
        sub->add_option("--out", out_dir, "output directory")->capture_default_str();
        sub->add_option("--seed", seed_override, "RNG seed override");
        sub->add_option("--trials", trials_override, "trial count override");
        sub->add_option("--r0", r0, "discovery radius override [m]");
    };

    CLI::App* analyze = app.add_subcommand("analyze", "emit closed-form/prediction curves as CSV");
    analyze->add_option("--target", target, "fig1 | fig2 | fig3 | fig4")
        ->required()
        ->check(CLI::IsMember({"fig1", "fig2", "fig3", "fig4"}));
    add_common(analyze);

    CLI::App* simulate = app.add_subcommand("simulate", "replicated protocol simulation");
    simulate->add_option("--scenario", scenario, "random | deploy1 | deploy2 | three_node");
    simulate->add_option("--detector", detector, "mf | rst | oracle");
    add_common(simulate);

    CLI::App* detect = app.add_subcommand("detect", "paired detector comparison run");
    detect->add_option("--scenario", scenario, "random | deploy1 | deploy2");
    detect->add_option("--detector", detector, "mf | rst | oracle | both");
    add_common(detect);

    CLI::App* selftest = app.add_subcommand("selftest", "run the built-in invariant suite");
    (void)selftest;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (selftest->parsed()) return run_selftest(std::cout) ? 0 : 2;

        ExperimentConfig cfg = ExperimentConfig::preset(
            !scenario.empty() ? scenario : (analyze->parsed() ? "three_node" : "random"));
        if (analyze->parsed()) cfg.trials = 2000;
        if (!config_path.empty()) cfg = ExperimentConfig::load_file(config_path, cfg);
        if (!scenario.empty()) cfg.scenario = scenario;
        if (!seed_override.empty()) cfg.seed = std::stoull(seed_override);
        if (!trials_override.empty()) cfg.trials = std::stoi(trials_override);
        if (!r0.empty()) cfg.discovery_radius_m = std::stod(r0);
        if (!detector.empty() && detector != "both") cfg.detector = detector;

        if (analyze->parsed()) return run_analyze(target, cfg, out_dir);
        if (simulate->parsed()) return run_simulate(cfg, out_dir);
        if (detect->parsed())
            return run_detect(cfg, detector.empty() ? "both" : detector, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace nd
