#include "nd/mpr_analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "nd/numerics.hpp"
#include "nd/rst_core.hpp"

namespace nd {

namespace {

bool unbounded_no_fading(const PowerModel& m) {
    return m.kind == PowerLawKind::Unbounded && m.fading == Fading::None;
}

// Mean/stderr over antithetic pairs of a per-pair estimator.
template <typename PairFn>
McEstimate antithetic_mc(std::int64_t samples, PairFn&& pair_value) {
    const std::int64_t pairs = std::max<std::int64_t>(1, samples / 2);
    double sum = 0.0, sumsq = 0.0;
    for (std::int64_t i = 0; i < pairs; ++i) {
        const double v = pair_value();
        sum += v;
        sumsq += v * v;
    }
    const double mean = sum / static_cast<double>(pairs);
    double var = (sumsq - static_cast<double>(pairs) * mean * mean) /
                 std::max<double>(1.0, static_cast<double>(pairs - 1));
    var = std::max(0.0, var);
    return {mean, std::sqrt(var / static_cast<double>(pairs))};
}

// Tail of the tagged transmitter's power at the sampled interference level;
// the own-power integral is taken through F_P instead of being sampled.
double own_success(double tau, const PowerModel& model, double interference_sum) {
    return 1.0 - model.power_cdf(tau * interference_sum);
}

double zeta_term(int n, int h, double f1, double f2) {
    const double c = binomial_coefficient(n - 1, h - 1);
    if (c == 0.0) return 0.0;
    return c * f1 * std::pow(f2, h - 1) * std::pow(1.0 - f2, n - h);
}

double gamma_term(int n, int h, double f1, double f2) {
    const double c = binomial_coefficient(n - 1, h);
    if (c == 0.0) return 0.0;
    return c * std::pow(f2, h) * std::pow(1.0 - f2, n - h - 1) * (1.0 - f1);
}

double xi_term(int n, int h, double f) {
    const double c = binomial_coefficient(n, h);
    if (c == 0.0) return 0.0;
    return c * std::pow(f, h) * std::pow(1.0 - f, n - h);
}

struct DistanceTerms {
    std::vector<double> f;   // f_n, index n
    std::vector<double> f1;  // f_{1,n}
    std::vector<double> f2;  // f_{2,n}
};

DistanceTerms distance_terms(double r_prime, const CaptureContext& ctx) {
    DistanceTerms t;
    const int j = ctx.neighbor_count;
    t.f.assign(j + 1, 0.0);
    t.f1.assign(j + 1, 0.0);
    t.f2.assign(j + 1, 0.0);
    for (int n = 1; n <= j; ++n) {
        t.f[n] = capture_probability(n, ctx.sinr_threshold, ctx.model, ctx.mc_samples,
                                     ctx.mc_seed);
        t.f1[n] = capture_probability_at_distance(r_prime, n, ctx.sinr_threshold, ctx.model,
                                                  ctx.mc_samples, ctx.mc_seed);
        t.f2[n] = capture_probability_with_pinned_interferer(r_prime, n, ctx.sinr_threshold,
                                                             ctx.model, ctx.mc_samples,
                                                             ctx.mc_seed);
    }
    return t;
}

void validate_ctx(const CaptureContext& ctx) {
    if (ctx.neighbor_count < 1) throw std::invalid_argument("neighbor count must be >= 1");
    if (ctx.tx_probability < 0.0 || ctx.tx_probability > 1.0)
        throw std::invalid_argument("tx probability must be in [0,1]");
    if (!(ctx.sinr_threshold > 0.0)) throw std::invalid_argument("tau must be positive");
}

}  // namespace

McEstimate capture_probability_mc(int n, double tau, const PowerModel& model,
                                  std::int64_t samples, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("capture probability needs n >= 1");
    if (n == 1) return {1.0, 0.0};
    Rng rng = Rng(seed).split(0xCAu, static_cast<std::uint64_t>(n));
    // The tagged transmitter's power is integrated out through F_P; only the
    // n-1 interferer powers are sampled, antithetically.
    return antithetic_mc(samples, [&]() {
        double s1 = 0.0, s2 = 0.0;
        for (int i = 1; i < n; ++i) {
            double a, b;
            model.sample_power_pair(rng, a, b);
            s1 += a;
            s2 += b;
        }
        return 0.5 * (own_success(tau, model, s1) + own_success(tau, model, s2));
    });
}

double capture_probability(int n, double tau, const PowerModel& model, std::int64_t mc_samples,
                           std::uint64_t mc_seed) {
    if (n < 1) throw std::invalid_argument("capture probability needs n >= 1");
    if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
    if (n == 1) return 1.0;
    if (n == 2 && unbounded_no_fading(model)) {
        const double a = 2.0 / model.eta;
        return tau >= 1.0 ? 0.5 * std::pow(tau, -a) : 1.0 - 0.5 * std::pow(tau, a);
    }
    return capture_probability_mc(n, tau, model, mc_samples, mc_seed).value;
}

double expected_successes_per_slot(const CaptureContext& ctx) {
    validate_ctx(ctx);
    const int j = ctx.neighbor_count;
    const double p = ctx.tx_probability;
    double total = 0.0;
    for (int n = 1; n <= j; ++n) {
        const double fn = capture_probability(n, ctx.sinr_threshold, ctx.model, ctx.mc_samples,
                                              ctx.mc_seed);
        total += binomial_coefficient(j, n) * std::pow(p, n) * std::pow(1.0 - p, j - n + 1) *
                 static_cast<double>(n) * fn;
    }
    return total;
}

double optimal_tx_probability(double tau, double eta) {
    if (!(tau > 0.0) || !(eta > 0.0))
        throw std::invalid_argument("optimal_tx_probability: tau and eta must be positive");
    const double a = 2.0 / eta;
    if (tau < 1.0) {
        const double t = std::pow(tau, a);
        return (t + 2.0 - std::sqrt((t - 1.0) * (t - 1.0) + 3.0)) / (3.0 * t);
    }
    const double t = std::pow(tau, -a);
    return (t - 4.0 + std::sqrt((t - 1.0) * (t - 1.0) + 3.0)) / (3.0 * (t - 2.0));
}

double optimal_tx_probability_numeric(const CaptureContext& ctx) {
    validate_ctx(ctx);
    const int j = ctx.neighbor_count;
    std::vector<double> f(j + 1, 0.0);
    for (int n = 1; n <= j; ++n)
        f[n] = capture_probability(n, ctx.sinr_threshold, ctx.model, ctx.mc_samples, ctx.mc_seed);
    const auto objective = [&](double p) {
        double total = 0.0;
        for (int n = 1; n <= j; ++n)
            total += binomial_coefficient(j, n) * std::pow(p, n) * std::pow(1.0 - p, j - n + 1) *
                     static_cast<double>(n) * f[n];
        return total;
    };
    return golden_section_max(objective, 0.0, 1.0, 1e-6);
}

double mpsk_symbol_rate(double tau, const MpskParams& params) {
    if (!(tau >= 0.0)) throw std::invalid_argument("mpsk_symbol_rate: tau must be >= 0");
    const int m = params.constellation;
    if (m < 2 || (m & (m - 1)) != 0)
        throw std::invalid_argument("mpsk_symbol_rate: constellation must be a power of two");
    if (!(params.target_ber > 0.0 && params.target_ber < 0.5))
        throw std::invalid_argument("mpsk_symbol_rate: target BER must be in (0, 0.5)");
    const double max_rate = 1.0 / params.pulse_constant;
    double raw;
    if (m == 2) {
        const double q = inverse_q(params.target_ber);
        raw = 2.0 * tau / (q * q);
    } else if (m == 4) {
        const double q = inverse_q(params.target_ber);
        raw = tau / (2.0 * q * q);
    } else {
        const double arg = params.target_ber * std::log2(static_cast<double>(m)) / 2.0;
        if (!(arg < 0.5)) throw std::invalid_argument("mpsk_symbol_rate: BER target infeasible");
        const double q = inverse_q(arg);
        const double s = std::sin(M_PI / static_cast<double>(m));
        raw = 2.0 * tau * s * s / (q * q);
    }
    return std::min(raw, max_rate);
}

double slot_duration(double tau, const MpskParams& params) {
    const double rate = mpsk_symbol_rate(tau, params);
    if (!(rate > 0.0)) throw std::invalid_argument("slot_duration: symbol rate is zero");
    return params.bits_per_slot /
           (rate * params.bandwidth_hz * std::log2(static_cast<double>(params.constellation)));
}

double slot_basis_discovery_probability(std::span<const int> success_counts, int neighbor_count) {
    if (neighbor_count < 1)
        throw std::invalid_argument("slot_basis_discovery_probability: J must be >= 1");
    double miss = 1.0;
    for (int h : success_counts) {
        if (h < 0 || h > neighbor_count)
            throw std::invalid_argument("slot_basis_discovery_probability: h out of [0, J]");
        miss *= 1.0 - static_cast<double>(h) / static_cast<double>(neighbor_count);
    }
    return 1.0 - miss;
}

double bernoulli_discovery_probability(int slots, double e_star, int neighbor_count) {
    if (slots < 0) throw std::invalid_argument("bernoulli_discovery_probability: D must be >= 0");
    if (neighbor_count < 1)
        throw std::invalid_argument("bernoulli_discovery_probability: J must be >= 1");
    return 1.0 - std::exp(-static_cast<double>(slots) * e_star /
                          static_cast<double>(neighbor_count));
}

McEstimate capture_probability_at_distance_mc(double r_prime, int n, double tau,
                                              const PowerModel& model, std::int64_t samples,
                                              std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("capture_probability_at_distance needs n >= 1");
    if (n == 1) return {1.0, 0.0};
    const double own_mean = model.power_at(r_prime);
    Rng rng = Rng(seed).split(0xF1u, static_cast<std::uint64_t>(n));
    const bool fading = model.fading == Fading::Rayleigh;
    return antithetic_mc(samples, [&]() {
        double s1 = 0.0, s2 = 0.0;
        for (int i = 1; i < n; ++i) {
            double a, b;
            model.sample_power_pair(rng, a, b);
            s1 += a;
            s2 += b;
        }
        // Own-power tail given the pinned distance: a step without fading, the
        // exponential survival with Rayleigh.
        const auto tail = [&](double s) {
            if (!fading) return own_mean > tau * s ? 1.0 : 0.0;
            return std::exp(-tau * s / own_mean);
        };
        return 0.5 * (tail(s1) + tail(s2));
    });
}

double capture_probability_at_distance(double r_prime, int n, double tau, const PowerModel& model,
                                       std::int64_t mc_samples, std::uint64_t mc_seed) {
    if (n < 1) throw std::invalid_argument("capture_probability_at_distance needs n >= 1");
    if (r_prime < 0.0 || r_prime > model.region_radius_m)
        throw std::invalid_argument("capture_probability_at_distance: r' outside region");
    if (n == 1) return 1.0;
    if (n == 2 && model.fading == Fading::None) {
        // The lone interferer must fall below own_power / tau.
        const double own = model.power_at(r_prime);
        const double x = own / tau;
        return x > 0.0 && std::isfinite(x) ? model.power_cdf(x) : (x > 0.0 ? 1.0 : 0.0);
    }
    return capture_probability_at_distance_mc(r_prime, n, tau, model, mc_samples, mc_seed).value;
}

McEstimate capture_probability_with_pinned_interferer_mc(double r_prime, int n, double tau,
                                                         const PowerModel& model,
                                                         std::int64_t samples,
                                                         std::uint64_t seed) {
    if (n < 1)
        throw std::invalid_argument("capture_probability_with_pinned_interferer needs n >= 1");
    if (n == 1) return {0.0, 0.0};
    const double pinned_mean = model.power_at(r_prime);
    Rng rng = Rng(seed).split(0xF2u, static_cast<std::uint64_t>(n));
    const bool fading = model.fading == Fading::Rayleigh;
    return antithetic_mc(samples, [&]() {
        double s1 = pinned_mean, s2 = pinned_mean;
        if (fading) {
            const double v = rng.next_unit_open();
            s1 = pinned_mean * -std::log(v);
            s2 = pinned_mean * -std::log1p(-v);
        }
        for (int i = 2; i < n; ++i) {
            double a, b;
            model.sample_power_pair(rng, a, b);
            s1 += a;
            s2 += b;
        }
        return 0.5 * (own_success(tau, model, s1) + own_success(tau, model, s2));
    });
}

double capture_probability_with_pinned_interferer(double r_prime, int n, double tau,
                                                  const PowerModel& model,
                                                  std::int64_t mc_samples, std::uint64_t mc_seed) {
    if (n < 1)
        throw std::invalid_argument("capture_probability_with_pinned_interferer needs n >= 1");
    if (r_prime < 0.0 || r_prime > model.region_radius_m)
        throw std::invalid_argument("capture_probability_with_pinned_interferer: r' outside region");
    if (n == 1) return 0.0;
    if (n == 2 && model.fading == Fading::None) {
        const double pinned = model.power_at(r_prime);
        return 1.0 - model.power_cdf(tau * pinned);
    }
    return capture_probability_with_pinned_interferer_mc(r_prime, n, tau, model, mc_samples,
                                                         mc_seed).value;
}

double membership_given_success_count(double r_prime, int h, const CaptureContext& ctx) {
    validate_ctx(ctx);
    const int j = ctx.neighbor_count;
    if (h < 0 || h > j)
        throw std::invalid_argument("membership_given_success_count: h out of [0, J]");
    const double p = ctx.tx_probability;
    const DistanceTerms t = distance_terms(r_prime, ctx);

    double num = 0.0;
    double den = h == 0 ? std::pow(1.0 - p, j) : 0.0;  // n = 0 contributes only to h = 0
    for (int n = 1; n <= j; ++n) {
        const double zeta = zeta_term(n, h, t.f1[n], t.f2[n]);
        const double gamma = gamma_term(n, h, t.f1[n], t.f2[n]);
        const double xi = xi_term(n, h, t.f[n]);
        num += binomial_coefficient(j - 1, n - 1) * std::pow(p, n) * std::pow(1.0 - p, j - n) *
               zeta;
        den += binomial_coefficient(j, n) * std::pow(p, n) * std::pow(1.0 - p, j - n) *
               (static_cast<double>(n) / j * (zeta + gamma - xi) + xi);
    }
    if (den <= 0.0)
        throw std::invalid_argument("membership_given_success_count: conditioning event has zero probability");
    return num / den;
}

double success_count_pmf_at_distance(double r_prime, int h, const CaptureContext& ctx) {
    validate_ctx(ctx);
    const int j = ctx.neighbor_count;
    if (h < 0 || h > j)
        throw std::invalid_argument("success_count_pmf_at_distance: h out of [0, J]");
    const double p = ctx.tx_probability;
    const DistanceTerms t = distance_terms(r_prime, ctx);
    double den = h == 0 ? std::pow(1.0 - p, j) : 0.0;
    for (int n = 1; n <= j; ++n) {
        const double zeta = zeta_term(n, h, t.f1[n], t.f2[n]);
        const double gamma = gamma_term(n, h, t.f1[n], t.f2[n]);
        const double xi = xi_term(n, h, t.f[n]);
        den += binomial_coefficient(j, n) * std::pow(p, n) * std::pow(1.0 - p, j - n) *
               (static_cast<double>(n) / j * (zeta + gamma - xi) + xi);
    }
    return den;
}

}  // namespace nd
