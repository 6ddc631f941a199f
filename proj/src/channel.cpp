#include "nd/channel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "nd/numerics.hpp"

namespace nd {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
// exp(-x) is below denormal range past ~745; integrand tails beyond this are zero.
constexpr double kExpCutoff = 745.0;
}  // namespace

PowerModel PowerModel::from(const ChannelParams& params, DiskRegion region) {
    PowerModel m;
    m.kind = params.power_law;
    m.eta = params.path_loss_eta;
    m.tx_power_w = params.tx_power_w;
    m.region_radius_m = region.radius_m;
    m.fading = params.fading;
    if (!(m.eta > 0.0)) throw std::invalid_argument("path loss exponent must be positive");
    if (m.kind == PowerLawKind::Unbounded && m.region_radius_m != 1.0)
        throw std::invalid_argument("unbounded power law requires the unit disk");
    return m;
}

double PowerModel::power_at(double r) const {
    if (r < 0.0) throw std::invalid_argument("distance must be >= 0");
    if (kind == PowerLawKind::Unbounded) return std::pow(r, -eta);
    return tx_power_w * std::pow(1.0 + r, -eta);
}

double PowerModel::power_cdf(double x) const {
    if (!(x > 0.0)) throw std::invalid_argument("rx_power_cdf: power must be positive");
    const double R = region_radius_m;
    if (fading == Fading::None) {
        if (kind == PowerLawKind::Unbounded) {
            // P = r^-eta with F_r(r) = r^2 on the unit disk.
            return x < 1.0 ? 0.0 : 1.0 - std::pow(x, -2.0 / eta);
        }
        const double arg = std::pow(tx_power_w / x, 1.0 / eta) - 1.0;
        return 1.0 - distance_cdf(arg, DiskRegion{R});
    }
    // Rayleigh: integrate the conditional law against the unit-mean exponential
    // of |psi|^2. The integrand is 0 below om_lo and exactly e^-omega above om_hi.
    double om_lo, om_hi;
    std::function<double(double)> integrand;
    if (kind == PowerLawKind::Unbounded) {
        om_lo = 0.0;
        om_hi = x;  // F_r((omega/x)^(1/eta)) saturates at omega = x
        integrand = [&](double om) {
            const double r = std::pow(om / x, 1.0 / eta);
            return distance_cdf(r, DiskRegion{1.0}) * std::exp(-om);
        };
    } else {
        om_lo = x / tx_power_w;
        om_hi = om_lo * std::pow(1.0 + R, eta);
        integrand = [&](double om) {
            const double r = std::pow(om * tx_power_w / x, 1.0 / eta) - 1.0;
            return distance_cdf(r, DiskRegion{R}) * std::exp(-om);
        };
    }
    const double tail = om_hi < kExpCutoff ? std::exp(-om_hi) : 0.0;
    const double ub = std::min(om_hi, kExpCutoff);
    const double lb = std::min(om_lo, ub);
    const double body = adaptive_gauss_legendre(integrand, lb, ub, 1e-8);
    double cdf = 1.0 - body - tail;
    return std::min(1.0, std::max(0.0, cdf));
}

double PowerModel::sample_power(Rng& rng) const {
    const double r = region_radius_m * std::sqrt(rng.next_unit_open());
    double p = power_at(r);
    if (fading == Fading::Rayleigh) p *= -std::log(rng.next_unit_open());
    return p;
}

void PowerModel::sample_power_pair(Rng& rng, double& p1, double& p2) const {
    const double u = rng.next_unit_open();
    p1 = power_at(region_radius_m * std::sqrt(u));
    p2 = power_at(region_radius_m * std::sqrt(1.0 - u));
    if (fading == Fading::Rayleigh) {
        const double v = rng.next_unit_open();
        p1 *= -std::log(v);
        p2 *= -std::log1p(-v);
    }
}

double PowerModel::mean_power() const {
    if (kind != PowerLawKind::Bounded)
        throw std::invalid_argument("mean_power requires the bounded power law");
    const double R = region_radius_m;
    const auto f = [&](double r) { return power_at(r) * 2.0 * r / (R * R); };
    return adaptive_gauss_legendre(f, 0.0, R, 1e-10);
}

std::complex<double> amplitude(double dist, const ChannelParams& params,
                               std::optional<std::complex<double>> fading_draw) {
    if (dist < 0.0) throw std::invalid_argument("amplitude: distance must be >= 0");
    const bool need_fading = params.fading == Fading::Rayleigh;
    if (need_fading != fading_draw.has_value())
        throw std::invalid_argument("amplitude: fading draw must be present iff fading enabled");
    const double mag = std::sqrt(params.tx_power_w * std::pow(1.0 + dist, -params.path_loss_eta));
    if (need_fading) return mag * *fading_draw;
    return {mag, 0.0};
}

std::complex<double> rayleigh_draw(Rng& rng) {
    // Independent N(0, 1/2) components make |psi|^2 unit-mean exponential.
    return {rng.next_gauss() * 0.7071067811865475244, rng.next_gauss() * 0.7071067811865475244};
}

double rx_power_cdf(double x, const ChannelParams& params, DiskRegion region) {
    return PowerModel::from(params, region).power_cdf(x);
}

double mean_rx_power(const ChannelParams& params, DiskRegion region) {
    if (params.fading != Fading::None)
        throw std::invalid_argument("mean_rx_power requires fading = None");
    return PowerModel::from(params, region).mean_power();
}

double sinr(int k, const std::vector<double>& powers, double noise) {
    if (k < 0 || k >= static_cast<int>(powers.size()))
        throw std::out_of_range("sinr: index outside power vector");
    if (noise < 0.0) throw std::invalid_argument("sinr: noise must be >= 0");
    double denom = noise;
    for (int i = 0; i < static_cast<int>(powers.size()); ++i)
        if (i != k) denom += powers[i];
    if (denom == 0.0) return kInf;
    return powers[static_cast<std::size_t>(k)] / denom;
}

NodeSet success_set(const std::vector<double>& powers, double noise, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("success_set: tau must be positive");
    NodeSet out;
    for (int k = 0; k < static_cast<int>(powers.size()); ++k)
        if (sinr(k, powers, noise) >= tau) out.insert(k);
    return out;
}

}  // namespace nd
