#include "nd/detectors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace nd {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093454836;

// Streaming log-sum-exp. Terms more than 46 nats below the running maximum
// cannot move the double-precision total and are dropped on a comparison.
struct LogSumExp {
    double max = kNegInf;
    double sum = 0.0;

    void add(double z) {
        if (z <= max - 46.0) return;
        if (z > max) {
            sum = sum * std::exp(max - z) + 1.0;
            max = z;
        } else {
            sum += std::exp(z - max);
        }
    }
    double log_total() const { return sum > 0.0 ? max + std::log(sum) : kNegInf; }
};

// Per-received-vector scalars: ||y||^2, correlations with each signature,
// and the signature Gram matrix. Residuals of candidate superpositions are
// then quadratic forms in the amplitudes.
struct SlotPrecomp {
    int len = 0;
    double y_sq = 0.0;
    std::vector<double> corr;
    std::vector<std::vector<double>> gram;
};

SlotPrecomp precompute(const ReceivedVector& y, const std::vector<Signature>& sigs) {
    SlotPrecomp pc;
    pc.len = y.length();
    for (const auto& v : y.samples) pc.y_sq += v.real() * v.real();
    const int k = static_cast<int>(sigs.size());
    pc.corr.assign(k, 0.0);
    pc.gram.assign(k, std::vector<double>(k, 0.0));
    for (int i = 0; i < k; ++i) {
        if (sigs[static_cast<std::size_t>(i)].length() != pc.len)
            throw std::invalid_argument("signature length does not match received vector");
        for (int l = 0; l < pc.len; ++l)
            pc.corr[static_cast<std::size_t>(i)] +=
                y.samples[static_cast<std::size_t>(l)].real() *
                sigs[static_cast<std::size_t>(i)].chips[static_cast<std::size_t>(l)];
        for (int j = 0; j <= i; ++j) {
            double g = 0.0;
            for (int l = 0; l < pc.len; ++l)
                g += sigs[static_cast<std::size_t>(i)].chips[static_cast<std::size_t>(l)] *
                     sigs[static_cast<std::size_t>(j)].chips[static_cast<std::size_t>(l)];
            pc.gram[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = g;
            pc.gram[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = g;
        }
    }
    return pc;
}

// Enumerates every amplitude assignment for the members (signature indices)
// and accumulates the Gaussian exponents. The innermost level touches only
// scalars, so a leaf costs a handful of flops.
class AmplitudeEnumerator {
  public:
    static constexpr int kMaxMembers = 12;

    AmplitudeEnumerator(const SlotPrecomp& pc, const std::vector<int>& members,
                        const std::vector<double>& grid, double noise_power)
        : pc_(pc), members_(members), grid_(grid), inv_two_n_(0.5 / noise_power) {
        if (members.size() > kMaxMembers)
            throw std::invalid_argument("amplitude marginalization limited to 12 members");
    }

    double log_mean_exponent() {
        const int m = static_cast<int>(members_.size());
        if (m == 0) return -pc_.y_sq * inv_two_n_;
        for (int e = 0; e < m; ++e) cross_[0][e] = 0.0;
        descend(0, 0.0, 0.0);
        return lse_.log_total() -
               static_cast<double>(m) * std::log(static_cast<double>(grid_.size()));
    }

  private:
    void descend(int d, double a, double q) {
        const int m = static_cast<int>(members_.size());
        const int k = members_[static_cast<std::size_t>(d)];
        const double ck = pc_.corr[static_cast<std::size_t>(k)];
        const double gkk = pc_.gram[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
        const double cx = cross_[d][d];
        if (d + 1 == m) {
            for (const double gv : grid_) {
                const double a2 = a + gv * ck;
                const double q2 = q + gv * gv * gkk + 2.0 * gv * cx;
                lse_.add(-(pc_.y_sq - 2.0 * a2 + q2) * inv_two_n_);
            }
            return;
        }
        for (const double gv : grid_) {
            const double a2 = a + gv * ck;
            const double q2 = q + gv * gv * gkk + 2.0 * gv * cx;
            for (int e = d + 1; e < m; ++e)
                cross_[d + 1][e] =
                    cross_[d][e] +
                    gv * pc_.gram[static_cast<std::size_t>(k)]
                                 [static_cast<std::size_t>(members_[static_cast<std::size_t>(e)])];
            descend(d + 1, a2, q2);
        }
    }

    const SlotPrecomp& pc_;
    const std::vector<int>& members_;
    const std::vector<double>& grid_;
    double inv_two_n_;
    LogSumExp lse_;
    double cross_[13][13] = {};
};

int signature_position(const std::vector<Signature>& sigs, int node_id) {
    for (int i = 0; i < static_cast<int>(sigs.size()); ++i)
        if (sigs[static_cast<std::size_t>(i)].node_id == node_id) return i;
    throw std::invalid_argument("no signature for node id " + std::to_string(node_id));
}

void validate_rst_inputs(const RstDetectorConfig& cfg, double noise_power) {
    if (!(noise_power > 0.0))
        throw std::invalid_argument("rst likelihood: noise power must be positive");
    if (cfg.amplitude_grid.empty())
        throw std::invalid_argument("rst likelihood: amplitude grid is empty");
    if (cfg.signatures.empty()) throw std::invalid_argument("rst likelihood: no signatures");
}

// `exponent` is |X'| for a single marginalization, or the universe size K for
// the full MAP search whose cost is sum_k C(K,k) grid^k = (1+grid)^K.
void check_term_budget(double base, int exponent, std::uint64_t cap) {
    if (std::pow(base, exponent) > static_cast<double>(cap))
        throw std::invalid_argument(
            "enumeration exceeds the term cap; reduce the universe or the amplitude grid");
}

}  // namespace

MatchedFilterConfig MatchedFilterConfig::min_error(double p_tx, double n_prime) {
    if (!(p_tx > 0.0 && p_tx < 1.0))
        throw std::invalid_argument("matched filter threshold needs p_tx in (0,1)");
    return {n_prime, (1.0 - p_tx) / p_tx};
}

double effective_noise(int j_bar, double p_tx, double mean_rx_power, double noise_power) {
    if (j_bar < 1) throw std::invalid_argument("effective_noise: mean neighbor count must be >= 1");
    if (p_tx < 0.0 || p_tx > 1.0) throw std::invalid_argument("effective_noise: p_tx in [0,1]");
    double coeff = 0.0;
    for (int n = 1; n <= j_bar - 1; ++n)
        coeff += binomial_coefficient(j_bar - 1, n) * std::pow(p_tx, n) *
                 std::pow(1.0 - p_tx, j_bar - 1 - n) * static_cast<double>(n);
    return noise_power + coeff * mean_rx_power;
}

Decision matched_filter_decide(const ReceivedVector& y, const std::vector<Signature>& signatures,
                               const MatchedFilterConfig& cfg) {
    Decision d;
    d.scores.reserve(signatures.size());
    const double threshold = cfg.beta_prime();
    for (const auto& sig : signatures) {
        if (sig.length() != y.length())
            throw std::invalid_argument("matched filter: signature length mismatch");
        double score = 0.0;
        for (int l = 0; l < y.length(); ++l)
            score += y.samples[static_cast<std::size_t>(l)].real() *
                     sig.chips[static_cast<std::size_t>(l)];
        d.scores.push_back(score);
        if (score >= threshold) d.detected.insert(sig.node_id);
    }
    return d;
}

double rst_gaussian_log_likelihood(const ReceivedVector& y, const NodeSet& x_prime,
                                   const std::vector<double>& amplitudes,
                                   const std::vector<Signature>& signatures,
                                   double noise_power) {
    if (!(noise_power > 0.0))
        throw std::invalid_argument("rst likelihood: noise power must be positive");
    const auto members = x_prime.members();
    if (amplitudes.size() != members.size())
        throw std::invalid_argument("rst likelihood: one amplitude per member required");
    const int len = y.length();
    double residual = 0.0;
    for (int l = 0; l < len; ++l) {
        double model = 0.0;
        for (std::size_t m = 0; m < members.size(); ++m) {
            const int pos = signature_position(signatures, members[m]);
            if (signatures[static_cast<std::size_t>(pos)].length() != len)
                throw std::invalid_argument("rst likelihood: signature length mismatch");
            model += amplitudes[m] *
                     signatures[static_cast<std::size_t>(pos)].chips[static_cast<std::size_t>(l)];
        }
        const double diff = y.samples[static_cast<std::size_t>(l)].real() - model;
        residual += diff * diff;
    }
    return -0.5 * len * (kLog2Pi + std::log(noise_power)) - residual / (2.0 * noise_power);
}

double rst_gaussian_likelihood(const ReceivedVector& y, const NodeSet& x_prime,
                               const std::vector<double>& amplitudes,
                               const std::vector<Signature>& signatures, double noise_power) {
    return std::exp(rst_gaussian_log_likelihood(y, x_prime, amplitudes, signatures, noise_power));
}

double rst_marginal_log_likelihood(const ReceivedVector& y, const NodeSet& x_prime,
                                   const RstDetectorConfig& cfg, double noise_power) {
    validate_rst_inputs(cfg, noise_power);
    check_term_budget(static_cast<double>(cfg.amplitude_grid.size()), x_prime.size(),
                      cfg.term_cap);
    const SlotPrecomp pc = precompute(y, cfg.signatures);
    std::vector<int> members;
    for (int id : x_prime.members()) members.push_back(signature_position(cfg.signatures, id));
    AmplitudeEnumerator en(pc, members, cfg.amplitude_grid, noise_power);
    const double base = -0.5 * pc.len * (kLog2Pi + std::log(noise_power));
    return base + en.log_mean_exponent();
}

double rst_marginal_likelihood(const ReceivedVector& y, const NodeSet& x_prime,
                               const RstDetectorConfig& cfg, double noise_power) {
    return std::exp(rst_marginal_log_likelihood(y, x_prime, cfg, noise_power));
}

std::vector<double> equal_area_radii(double r0, int strips) {
    if (!(r0 > 0.0)) throw std::invalid_argument("equal_area_radii: radius must be positive");
    if (strips < 1) throw std::invalid_argument("equal_area_radii: strips must be >= 1");
    std::vector<double> radii;
    radii.reserve(static_cast<std::size_t>(strips));
    for (int i = 1; i <= strips; ++i)
        radii.push_back(r0 * std::sqrt((2.0 * i - 1.0) / (2.0 * strips)));
    return radii;
}

Decision rst_map_decide(const ReceivedVector& y, const RstDetectorConfig& cfg,
                        double noise_power) {
    validate_rst_inputs(cfg, noise_power);
    const int k = static_cast<int>(cfg.signatures.size());
    if (k > 12)
        throw std::invalid_argument("rst_map_decide: exhaustive search limited to 12 nodes");
    if (cfg.p_tx < 0.0 || cfg.p_tx > 1.0)
        throw std::invalid_argument("rst_map_decide: p_tx must be in [0,1]");
    check_term_budget(1.0 + static_cast<double>(cfg.amplitude_grid.size()), k, cfg.term_cap);

    const SlotPrecomp pc = precompute(y, cfg.signatures);
    const double base = -0.5 * pc.len * (kLog2Pi + std::log(noise_power));
    const int j_max = cfg.cardinality_prior.max_support(1e-12);

    // Visit subsets smallest-cardinality first so that a strictly-greater
    // update implements the tie-break order.
    std::vector<std::uint32_t> order(std::size_t{1} << k);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [](std::uint32_t a, std::uint32_t b) {
        const int pa = std::popcount(a), pb = std::popcount(b);
        return pa != pb ? pa < pb : a < b;
    });

    Decision best;
    best.log_objective = kNegInf;
    bool found = false;
    std::vector<int> members;
    for (const std::uint32_t mask : order) {
        members.clear();
        for (std::uint32_t m = mask; m != 0; m &= m - 1) members.push_back(std::countr_zero(m));
        const int card = static_cast<int>(members.size());

        AmplitudeEnumerator en(pc, members, cfg.amplitude_grid, noise_power);
        const double log_marginal = base + en.log_mean_exponent();

        for (int jp = card; jp <= j_max; ++jp) {
            const double prior = cfg.cardinality_prior.pmf(jp);
            if (!(prior > 0.0)) continue;
            const double density = membership_density_by_card(card, jp, cfg.p_tx);
            if (!(density > 0.0)) continue;
            const double obj = log_marginal + std::log(density) + std::log(prior);
            if (!found || obj > best.log_objective) {
                found = true;
                best.log_objective = obj;
                best.estimated_j = jp;
                NodeSet s;
                for (int pos : members)
                    s.insert(cfg.signatures[static_cast<std::size_t>(pos)].node_id);
                best.detected = s;
            }
        }
    }
    if (!found) {
        // Degenerate prior/density combination; report the empty set with the
        // most probable neighbor count.
        best.detected = NodeSet{};
        best.estimated_j = 0;
        double top = -1.0;
        for (int jp = 0; jp <= j_max; ++jp)
            if (cfg.cardinality_prior.pmf(jp) > top) {
                top = cfg.cardinality_prior.pmf(jp);
                best.estimated_j = jp;
            }
    }
    return best;
}

std::vector<Outcome> classify_outcomes(const NodeSet& truth, const NodeSet& decided,
                                       const NodeSet& universe) {
    if (!truth.is_subset_of(universe) || !decided.is_subset_of(universe))
        throw std::invalid_argument("classify_outcomes: sets must lie inside the universe");
    std::vector<Outcome> out;
    out.reserve(static_cast<std::size_t>(universe.size()));
    for (int id : universe.members()) {
        const bool t = truth.contains(id), d = decided.contains(id);
        if (t && d)
            out.push_back(Outcome::Hit);
        else if (!t && !d)
            out.push_back(Outcome::CorrectRejection);
        else if (d)
            out.push_back(Outcome::FalseAlarm);
        else
            out.push_back(Outcome::Miss);
    }
    return out;
}

}  // namespace nd
