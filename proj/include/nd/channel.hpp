#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "nd/deployment.hpp"
#include "nd/node_set.hpp"
#include "nd/rng.hpp"

namespace nd {

enum class Fading { None, Rayleigh };

// Distance-to-power law used for received powers.
//   Bounded:   P(r) = G * (1+r)^-eta  (times |psi|^2 under fading)
//   Unbounded: P(r) = r^-eta, disk radius normalized to 1
enum class PowerLawKind { Bounded, Unbounded };

struct ChannelParams {
    double tx_power_w = 1.0;          // G
    double path_loss_eta = 4.0;       // eta
    Fading fading = Fading::None;
    double noise_density_w_hz = 0.0;  // N0
    double bandwidth_hz = 1.0;        // B
    PowerLawKind power_law = PowerLawKind::Bounded;

    double noise_power_w() const { return noise_density_w_hz * bandwidth_hz; }
};

// Propagation bundle: power-law kind plus the parameters that define the
// received-power distribution over a uniform-disk deployment.
struct PowerModel {
    PowerLawKind kind = PowerLawKind::Unbounded;
    double eta = 4.0;
    double tx_power_w = 1.0;     // ignored by Unbounded
    double region_radius_m = 1.0;
    Fading fading = Fading::None;

    static PowerModel from(const ChannelParams& params, DiskRegion region);

    // Mean received power (no fading factor) at distance r.
    double power_at(double r) const;
    double amplitude_at(double r) const { return std::sqrt(power_at(r)); }

    // CDF of the received power of a node at a uniform-disk distance.
    double power_cdf(double x) const;

    // One received-power draw: distance from the disk law, fading if enabled.
    double sample_power(Rng& rng) const;
    // Antithetic mate of the draw made from the same uniforms mirrored.
    void sample_power_pair(Rng& rng, double& p1, double& p2) const;

    // E[power] over the disk, no fading (fading has unit mean so it matches).
    double mean_power() const;
};

// Complex amplitude g = sqrt(G (1+r)^-eta) * psi; real and positive without fading.
std::complex<double> amplitude(double dist, const ChannelParams& params,
                               std::optional<std::complex<double>> fading_draw = std::nullopt);

// Unit-variance circular Gaussian fading coefficient.
std::complex<double> rayleigh_draw(Rng& rng);

// F_P(x) for the channel over the given region; rejects x <= 0.
double rx_power_cdf(double x, const ChannelParams& params, DiskRegion region);

// E[P_rx] over the disk; requires fading = None.
double mean_rx_power(const ChannelParams& params, DiskRegion region);

// P_k / (sum of other powers + noise); +infinity when the denominator is zero.
double sinr(int k, const std::vector<double>& powers, double noise);

// Nodes whose SINR meets the threshold. Powers are indexed by position; the
// returned set holds those positions.
NodeSet success_set(const std::vector<double>& powers, double noise, double tau);

}  // namespace nd
