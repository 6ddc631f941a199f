#pragma once

#include <cstdint>
#include <vector>

#include "nd/node_set.hpp"

namespace nd {

// Real-valued function on the full power set of a finite universe, indexed by
// subset bitmask over universe positions. Capped at 20 elements (2^20 entries).
class SetFunction {
  public:
    static constexpr int kMaxUniverse = 20;

    explicit SetFunction(int universe_size, double init = 0.0);

    int universe_size() const { return universe_size_; }
    std::uint32_t subset_count() const { return static_cast<std::uint32_t>(table_.size()); }

    double& operator[](std::uint32_t mask) { return table_[mask]; }
    double at(std::uint32_t mask) const { return table_[mask]; }

    const std::vector<double>& table() const { return table_; }

  private:
    int universe_size_;
    std::vector<double> table_;
};

// beta(C) = sum_{B subseteq C} pmf(B), via the fast zeta transform. The input
// must be a probability assignment: nonnegative, total 1 within 1e-12.
SetFunction belief_mass_from_pmf(const SetFunction& pmf);

// f(B) = sum_{C subseteq B} (-1)^{|B \ C|} beta(C); exact inverse of the above.
SetFunction mobius_inverse(const SetFunction& beta);

// Pr{X subseteq C | J'} for i.i.d.-Bernoulli(p_tx) membership of J' latent
// neighbors: sum_{n=0}^{J'} C(|C|, n) p^n (1-p)^{J'-n}.
double membership_belief_mass(const NodeSet& c, int j_prime, double p_tx);
double membership_belief_mass_by_card(int card, int j_prime, double p_tx);

// Pr{X = X' | J'} = p^{|X'|} (1-p)^{J'-|X'|} when |X'| <= J', else 0.
double membership_density(const NodeSet& x_prime, int j_prime, double p_tx);
double membership_density_by_card(int card, int j_prime, double p_tx);

// Prior on the number of neighbors inside the discovery region.
struct CardinalityPrior {
    enum class Kind { Poisson, Binomial };

    Kind kind = Kind::Binomial;
    double poisson_mean = 0.0;
    int binomial_n = 0;
    double binomial_p = 0.0;

    static CardinalityPrior poisson(double mean);
    static CardinalityPrior binomial(int n, double p);

    double pmf(int j_prime) const;
    // Largest J' worth enumerating: support end for Binomial, the point where
    // the upper tail drops below tail_tol for Poisson.
    int max_support(double tail_tol = 1e-12) const;
};

double binomial_coefficient(int n, int k);

}  // namespace nd
