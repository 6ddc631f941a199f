#include <cmath>
#include <functional>
#include <iostream>
#include <vector>

#include "nd/cli.hpp"
#include "nd/detectors.hpp"
#include "nd/mpr_analysis.hpp"
#include "nd/rng.hpp"
#include "nd/rst_core.hpp"
#include "nd/signals.hpp"

namespace nd {
namespace {

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

bool check_rng() {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i)
        if (a.next_u64() != b.next_u64()) return false;
    Rng c = Rng(42).split(7);
    double mean = 0.0;
    for (int i = 0; i < 10000; ++i) mean += c.next_unit();
    return near(mean / 10000.0, 0.5, 0.02);
}

bool check_msequence() {
    const Signature s = msequence(4, kDefaultTaps4, 0);
    if (s.length() != 15) return false;
    int ones = 0;
    for (double c : s.chips) ones += c > 0;
    if (ones != 8) return false;
    for (int lag = 1; lag < 15; ++lag) {
        double acf = 0.0;
        for (int l = 0; l < 15; ++l) acf += s.chips[l] * s.chips[(l + lag) % 15];
        if (!near(acf, -1.0, 1e-12)) return false;
    }
    const Signature s3 = msequence(4, kDefaultTaps4, 3);
    for (int l = 0; l < 15; ++l)
        if (s3.chips[l] != s.chips[(l + 3) % 15]) return false;
    return true;
}

bool check_set_statistics() {
    SetFunction pmf(2);
    pmf[0b00] = 0.1;
    pmf[0b01] = 0.4;
    pmf[0b10] = 0.3;
    pmf[0b11] = 0.2;
    const SetFunction beta = belief_mass_from_pmf(pmf);
    if (!near(beta.at(0b10), 0.4, 1e-15)) return false;
    if (!near(beta.at(0b01), 0.5, 1e-15)) return false;
    if (!near(beta.at(0b11), 1.0, 1e-15)) return false;
    const SetFunction back = mobius_inverse(beta);
    for (std::uint32_t m = 0; m < 4; ++m)
        if (!near(back.at(m), pmf.at(m), 1e-15)) return false;

    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const int k = 1 + static_cast<int>(rng.next_u64() % 4);
        SetFunction f(k);
        double total = 0.0;
        for (std::uint32_t m = 0; m < f.subset_count(); ++m) total += (f[m] = rng.next_unit());
        for (std::uint32_t m = 0; m < f.subset_count(); ++m) f[m] /= total;
        const SetFunction round = mobius_inverse(belief_mass_from_pmf(f));
        for (std::uint32_t m = 0; m < f.subset_count(); ++m)
            if (!near(round.at(m), f.at(m), 1e-12)) return false;
    }

    // Belief-mass -> Moebius pipeline reproduces the closed-form density.
    const double p = 0.3;
    SetFunction mass(3);
    for (std::uint32_t m = 0; m < 8; ++m)
        mass[m] = membership_belief_mass_by_card(std::popcount(m), 2, p);
    const SetFunction dens = mobius_inverse(mass);
    return near(dens.at(0b101), p * p, 1e-12);
}

bool check_optimal_pt() {
    if (!near(optimal_tx_probability(1.0, 4.0), 0.4226497, 1e-6)) return false;
    if (!near(optimal_tx_probability(1e6, 4.0), 1.0 / 3.0, 1e-3)) return false;
    CaptureContext ctx;
    ctx.neighbor_count = 2;
    ctx.tx_probability = 0.4226;
    ctx.sinr_threshold = 1.0;
    ctx.model.kind = PowerLawKind::Unbounded;
    ctx.model.eta = 4.0;
    ctx.model.region_radius_m = 1.0;
    return near(expected_successes_per_slot(ctx), 0.3849, 1e-4);
}

bool check_membership_curve() {
    CaptureContext ctx;
    ctx.neighbor_count = 2;
    ctx.tx_probability = 0.4226;
    ctx.sinr_threshold = 1.0;
    ctx.model.kind = PowerLawKind::Unbounded;
    ctx.model.eta = 4.0;
    ctx.model.region_radius_m = 1.0;
    const double p = ctx.tx_probability;
    if (!near(membership_given_success_count(0.0, 1, ctx), 1.0 / (2.0 - p), 1e-10)) return false;
    double prev = 2.0;
    for (int i = 0; i <= 10; ++i) {
        const double v = membership_given_success_count(i / 10.0, 1, ctx);
        if (v > prev + 1e-12) return false;
        prev = v;
    }
    return true;
}

bool check_equal_area() {
    const auto radii = equal_area_radii(1.0, 7);
    for (int i = 1; i <= 7; ++i)
        if (!near(radii[i - 1], std::sqrt((2.0 * i - 1.0) / 14.0), 1e-15)) return false;
    return true;
}

bool check_classify() {
    NodeSet universe{1, 2, 3, 4};
    const auto out = classify_outcomes(NodeSet{1, 2}, NodeSet{2, 3}, universe);
    return out[0] == Outcome::Miss && out[1] == Outcome::Hit && out[2] == Outcome::FalseAlarm &&
           out[3] == Outcome::CorrectRejection;
}

bool check_capture_semantics() {
    Rng rng(99);
    for (int trial = 0; trial < 2000; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 5);
        std::vector<double> powers(n);
        for (auto& p : powers) p = 0.01 + rng.next_unit() * 10.0;
        const double tau_hi = 1.0 + rng.next_unit() * 4.0;
        if (success_set(powers, 0.0, tau_hi).size() > 1) return false;
        const double tau_lo = 0.05 + rng.next_unit() * 0.9;
        const NodeSet lo = success_set(powers, 0.0, tau_lo);
        if (!success_set(powers, 0.0, tau_lo + rng.next_unit()).is_subset_of(lo)) return false;
    }
    return true;
}

bool check_matched_filter_monotone() {
    Rng rng(5);
    const auto sigs = signature_bank(4);
    for (int trial = 0; trial < 200; ++trial) {
        ReceivedVector y;
        y.samples.resize(15);
        for (auto& v : y.samples) v = rng.next_gauss();
        const double n_prime = 0.25 + rng.next_unit();
        const NodeSet lo = matched_filter_decide(y, sigs, {n_prime, 0.5}).detected;
        const NodeSet hi = matched_filter_decide(y, sigs, {n_prime, 1.5}).detected;
        if (!hi.is_subset_of(lo)) return false;
    }
    return true;
}

bool check_predictions() {
    const std::vector<int> h = {1, 1, 0};
    if (!near(slot_basis_discovery_probability(h, 2), 0.75, 1e-15)) return false;
    if (bernoulli_discovery_probability(0, 0.4, 2) != 0.0) return false;
    return near(bernoulli_discovery_probability(15, 0.3849, 2),
                1.0 - std::exp(-15.0 * 0.3849 / 2.0), 1e-15);
}

}  // namespace

bool run_selftest(std::ostream& out) {
    const std::vector<std::pair<const char*, std::function<bool()>>> checks = {
        {"rng determinism and uniformity", check_rng},
        {"m-sequence balance/autocorrelation/shift", check_msequence},
        {"belief mass and Moebius inversion", check_set_statistics},
        {"optimal transmit probability", check_optimal_pt},
        {"conditional membership curve", check_membership_curve},
        {"equal-area discretization radii", check_equal_area},
        {"outcome classification", check_classify},
        {"capture semantics fuzz", check_capture_semantics},
        {"matched filter threshold monotonicity", check_matched_filter_monotone},
        {"multi-slot predictions", check_predictions},
    };
    bool all = true;
    for (const auto& [name, fn] : checks) {
        bool ok = false;
        try {
            ok = fn();
        } catch (const std::exception& e) {
            out << "FAIL " << name << " (exception: " << e.what() << ")\n";
            all = false;
            continue;
        }
        out << (ok ? "ok   " : "FAIL ") << name << "\n";
        if (!ok) all = false;
    }
    out << (all ? "selftest: all checks passed\n" : "selftest: FAILURES\n");
    return all;
}

}  // namespace nd
