#include "nd/rst_core.hpp"

#include <cmath>
#include <stdexcept>

namespace nd {

SetFunction::SetFunction(int universe_size, double init) : universe_size_(universe_size) {
    if (universe_size < 0 || universe_size > kMaxUniverse)
        throw std::invalid_argument("SetFunction: universe size must be in [0, 20]");
    table_.assign(std::size_t{1} << universe_size, init);
}

SetFunction belief_mass_from_pmf(const SetFunction& pmf) {
    double total = 0.0;
    for (double v : pmf.table()) {
        if (v < -1e-12) throw std::invalid_argument("belief_mass_from_pmf: negative pmf value");
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("belief_mass_from_pmf: pmf does not sum to 1");

    SetFunction beta = pmf;
    const int n = beta.universe_size();
    const std::uint32_t size = beta.subset_count();
    for (int d = 0; d < n; ++d)
        for (std::uint32_t s = 0; s < size; ++s)
            if (s & (1u << d)) beta[s] += beta.at(s ^ (1u << d));
    return beta;
}

SetFunction mobius_inverse(const SetFunction& beta) {
    SetFunction f = beta;
    const int n = f.universe_size();
    const std::uint32_t size = f.subset_count();
    for (int d = 0; d < n; ++d)
        for (std::uint32_t s = 0; s < size; ++s)
            if (s & (1u << d)) f[s] -= f.at(s ^ (1u << d));
    return f;
}

double binomial_coefficient(int n, int k) {
    if (k < 0 || k > n || n < 0) return 0.0;
    k = std::min(k, n - k);
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

double membership_belief_mass_by_card(int card, int j_prime, double p_tx) {
    if (p_tx < 0.0 || p_tx > 1.0) throw std::invalid_argument("p_tx must be in [0,1]");
    if (j_prime < 0) throw std::invalid_argument("j_prime must be >= 0");
    double sum = 0.0;
    for (int n = 0; n <= j_prime; ++n)
        sum += binomial_coefficient(card, n) * std::pow(p_tx, n) *
               std::pow(1.0 - p_tx, j_prime - n);
    return sum;
}

double membership_belief_mass(const NodeSet& c, int j_prime, double p_tx) {
    return membership_belief_mass_by_card(c.size(), j_prime, p_tx);
}

double membership_density_by_card(int card, int j_prime, double p_tx) {
    if (p_tx < 0.0 || p_tx > 1.0) throw std::invalid_argument("p_tx must be in [0,1]");
    if (j_prime < 0) throw std::invalid_argument("j_prime must be >= 0");
    if (card > j_prime) return 0.0;
    return std::pow(p_tx, card) * std::pow(1.0 - p_tx, j_prime - card);
}

double membership_density(const NodeSet& x_prime, int j_prime, double p_tx) {
    return membership_density_by_card(x_prime.size(), j_prime, p_tx);
}

CardinalityPrior CardinalityPrior::poisson(double mean) {
    if (mean < 0.0) throw std::invalid_argument("poisson prior: mean must be >= 0");
    CardinalityPrior p;
    p.kind = Kind::Poisson;
    p.poisson_mean = mean;
    return p;
}

CardinalityPrior CardinalityPrior::binomial(int n, double prob) {
    if (n < 0 || prob < 0.0 || prob > 1.0)
        throw std::invalid_argument("binomial prior: invalid parameters");
    CardinalityPrior p;
    p.kind = Kind::Binomial;
    p.binomial_n = n;
    p.binomial_p = prob;
    return p;
}

double CardinalityPrior::pmf(int j_prime) const {
    if (j_prime < 0) return 0.0;
    if (kind == Kind::Poisson) {
        if (poisson_mean == 0.0) return j_prime == 0 ? 1.0 : 0.0;
        // log-domain to stay finite for large j'
        double lp = -poisson_mean + j_prime * std::log(poisson_mean) - std::lgamma(j_prime + 1.0);
        return std::exp(lp);
    }
    if (j_prime > binomial_n) return 0.0;
    return binomial_coefficient(binomial_n, j_prime) * std::pow(binomial_p, j_prime) *
           std::pow(1.0 - binomial_p, binomial_n - j_prime);
}

int CardinalityPrior::max_support(double tail_tol) const {
    if (kind == Kind::Binomial) return binomial_n;
    int j = 0;
    double cum = 0.0;
    while (cum < 1.0 - tail_tol && j < 100000) cum += pmf(j++);
    return j;
}

}  // namespace nd
