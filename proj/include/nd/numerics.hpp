#pragma once

#include <functional>
#include <vector>

namespace nd {

// Adaptive Gauss-Legendre quadrature of f over [a,b]. Each interval is scored
// with 7- and 15-point rules; intervals whose estimates disagree are bisected
// until the local error is within rel_tol of the running whole.
double adaptive_gauss_legendre(const std::function<double(double)>& f, double a, double b,
                               double rel_tol = 1e-8, int max_depth = 48);

// Golden-section search for the maximizer of a unimodal f on [a,b].
double golden_section_max(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-6);

// Upper-tail probability of the standard normal.
double q_function(double x);

// Inverse of q_function by bisection on erfc to 1e-12 absolute in x.
double inverse_q(double p);

// One-sided 5% critical value of Student's t (Cornish-Fisher expansion;
// accurate to ~1e-4 for dof >= 30).
double one_sided_t_critical_95(int dof);

// Welford-free paired one-sided test: H0 is mean(deltas) <= 0.
struct PairedTestResult {
    double mean_delta = 0.0;
    double t_statistic = 0.0;
    double critical_value = 0.0;
    bool significant = false;
};
PairedTestResult paired_one_sided_test(const std::vector<double>& deltas);

}  // namespace nd
