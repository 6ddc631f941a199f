#pragma once

#include <cstdint>
#include <vector>

#include "nd/node_set.hpp"
#include "nd/rst_core.hpp"
#include "nd/signals.hpp"

namespace nd {

enum class DetectorKind { Oracle, MatchedFilter, RstMap };

struct MatchedFilterConfig {
    double effective_noise_w = 0.0;  // N'
    double threshold_beta = 1.0;     // beta

    double beta_prime() const { return threshold_beta * effective_noise_w; }

    // Minimum-probability-of-error threshold beta = (1 - p_tx) / p_tx.
    static MatchedFilterConfig min_error(double p_tx, double n_prime);
};

struct RstDetectorConfig {
    double discovery_radius_m = 1.0;            // R0
    CardinalityPrior cardinality_prior;
    std::vector<double> amplitude_grid;         // equal-weight candidate amplitudes
    double p_tx = 0.5;
    std::vector<Signature> signatures;          // universe, one per node id
    std::uint64_t term_cap = 100'000'000;       // enumeration guard
};

struct Decision {
    NodeSet detected;
    int estimated_j = -1;             // RST only
    std::vector<double> scores;       // MF only: correlator output per signature
    double log_objective = 0.0;       // RST only: winning posterior score
};

enum class Outcome : char {
    Hit = 'H',
    CorrectRejection = 'C',
    FalseAlarm = 'F',
    Miss = 'M',
};

// N' = N + sum_n C(Jbar-1, n) p^n (1-p)^(Jbar-1-n) n Pbar = N + (Jbar-1) p Pbar.
double effective_noise(int j_bar, double p_tx, double mean_rx_power, double noise_power);

// Per-signature correlation against beta' = beta * N'.
Decision matched_filter_decide(const ReceivedVector& y, const std::vector<Signature>& signatures,
                               const MatchedFilterConfig& cfg);

// Gaussian likelihood of y for a candidate transmitter set with known
// amplitudes (one per member, in ascending id order).
double rst_gaussian_likelihood(const ReceivedVector& y, const NodeSet& x_prime,
                               const std::vector<double>& amplitudes,
                               const std::vector<Signature>& signatures, double noise_power);
double rst_gaussian_log_likelihood(const ReceivedVector& y, const NodeSet& x_prime,
                                   const std::vector<double>& amplitudes,
                                   const std::vector<Signature>& signatures, double noise_power);

// Likelihood averaged over the uniform amplitude grid, one independent draw
// per member (log-sum-exp accumulation).
double rst_marginal_likelihood(const ReceivedVector& y, const NodeSet& x_prime,
                               const RstDetectorConfig& cfg, double noise_power);
double rst_marginal_log_likelihood(const ReceivedVector& y, const NodeSet& x_prime,
                                   const RstDetectorConfig& cfg, double noise_power);

// Radii bisecting each of `strips` equal-area annuli by area:
// r_i = R0 sqrt((2i-1) / (2 strips)).
std::vector<double> equal_area_radii(double r0, int strips);

// Joint MAP over (X', J'): marginal likelihood x membership density x
// cardinality prior, exhaustive over subsets of the signature universe.
// Ties break to smaller |X'|, then smaller J', then lexicographic mask.
Decision rst_map_decide(const ReceivedVector& y, const RstDetectorConfig& cfg,
                        double noise_power);

// Per-node H/C/F/M outcomes over the universe (ascending id order).
std::vector<Outcome> classify_outcomes(const NodeSet& truth, const NodeSet& decided,
                                       const NodeSet& universe);

}  // namespace nd
