#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nd/channel.hpp"

namespace nd {

// Monte Carlo estimate with its standard error (computed over antithetic pairs).
struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

// Per-slot capture setting: J neighbors, each transmitting with p_tx, SINR
// threshold tau, powers drawn from the given law. Noise is excluded from the
// closed-form path unless include_noise is set (simulation cross-checks only).
struct CaptureContext {
    int neighbor_count = 2;  // J
    double tx_probability = 0.5;
    double sinr_threshold = 1.0;
    PowerModel model;
    std::int64_t mc_samples = 1'000'000;
    std::uint64_t mc_seed = 1;
};

// Probability that a given transmitter among n simultaneous ones meets the
// threshold. Closed form where one exists (n = 1; Unbounded without
// fading at n = 2), Monte Carlo otherwise.
double capture_probability(int n, double tau, const PowerModel& model,
                           std::int64_t mc_samples = 1'000'000, std::uint64_t mc_seed = 1);
McEstimate capture_probability_mc(int n, double tau, const PowerModel& model,
                                  std::int64_t samples, std::uint64_t seed);

// Expected successful receptions per slot by one listening node.
double expected_successes_per_slot(const CaptureContext& ctx);

// Closed-form optimal transmission probability for the three-node system.
double optimal_tx_probability(double tau, double eta);

// argmax over p of expected_successes_per_slot, golden-section to 1e-6.
double optimal_tx_probability_numeric(const CaptureContext& ctx);

struct MpskParams {
    int constellation = 2;       // M, a power of two
    double target_ber = 1e-6;    // z
    double bits_per_slot = 1.0;  // W
    double bandwidth_hz = 1.0;   // B
    double pulse_constant = 1.0; // k_g; max symbol rate is 1/k_g
};

// Symbol rate [symbols/sec/Hz] sustaining the target BER at threshold tau,
// clamped at the pulse-shape maximum.
double mpsk_symbol_rate(double tau, const MpskParams& params);

// W / (R_s * B * log2 M); throws when the rate is zero.
double slot_duration(double tau, const MpskParams& params);

// 1 - prod_t (1 - h_t / J): discovery probability given realized success counts.
double slot_basis_discovery_probability(std::span<const int> success_counts, int neighbor_count);

// 1 - exp(-D * e_star / J): Poisson approximation of the same quantity.
double bernoulli_discovery_probability(int slots, double e_star, int neighbor_count);

// Capture probability when the tagged transmitter sits at distance r_prime
// (normalized to the disk radius).
double capture_probability_at_distance(double r_prime, int n, double tau, const PowerModel& model,
                                       std::int64_t mc_samples = 1'000'000,
                                       std::uint64_t mc_seed = 1);
McEstimate capture_probability_at_distance_mc(double r_prime, int n, double tau,
                                              const PowerModel& model, std::int64_t samples,
                                              std::uint64_t seed);

// Capture probability of a transmitter at a random distance when one of the
// other transmitters is pinned at r_prime; zero for n = 1.
double capture_probability_with_pinned_interferer(double r_prime, int n, double tau,
                                                  const PowerModel& model,
                                                  std::int64_t mc_samples = 1'000'000,
                                                  std::uint64_t mc_seed = 1);
McEstimate capture_probability_with_pinned_interferer_mc(double r_prime, int n, double tau,
                                                         const PowerModel& model,
                                                         std::int64_t samples, std::uint64_t seed);

// Pr{tagged node is among the successes | success count = h, its distance = r'}.
double membership_given_success_count(double r_prime, int h, const CaptureContext& ctx);

// Pr{success count = h | tagged node at r'} under the same per-slot model.
double success_count_pmf_at_distance(double r_prime, int h, const CaptureContext& ctx);

}  // namespace nd
