#include "nd/numerics.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace nd {
namespace {

// 15-point Gauss-Legendre nodes/weights on [-1,1] (symmetric half stored).
constexpr std::array<double, 8> kNodes15 = {
    0.0,
    0.2011940939974345223006283,
    0.3941513470775633698972074,
    0.5709721726085388475372267,
    0.7244177313601700474161861,
    0.8482065834104272162006483,
    0.9372733924007059043077589,
    0.9879925180204854284895657,
};
constexpr std::array<double, 8> kWeights15 = {
    0.2025782419255612728806202,
    0.1984314853271115764561183,
    0.1861610000155622110268006,
    0.1662692058169939335532009,
    0.1395706779261543144478048,
    0.1071592204671719350118695,
    0.0703660474881081247092674,
    0.0307532419961172683546284,
};

// 7-point rule, used as the error reference.
constexpr std::array<double, 4> kNodes7 = {
    0.0,
    0.4058451513773971669066064,
    0.7415311855993944398638648,
    0.9491079123427585245261897,
};
constexpr std::array<double, 4> kWeights7 = {
    0.4179591836734693877551020,
    0.3818300505051189449503698,
    0.2797053914892766679014678,
    0.1294849661688696932706114,
};

double gl15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = kWeights15[0] * f(c);
    for (int i = 1; i < 8; ++i)
        s += kWeights15[i] * (f(c - h * kNodes15[i]) + f(c + h * kNodes15[i]));
    return s * h;
}

double gl7(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = kWeights7[0] * f(c);
    for (int i = 1; i < 4; ++i) s += kWeights7[i] * (f(c - h * kNodes7[i]) + f(c + h * kNodes7[i]));
    return s * h;
}

double adaptive_rec(const std::function<double(double)>& f, double a, double b, double coarse,
                    double fine, double tol_abs, int depth) {
    if (depth <= 0 || std::abs(fine - coarse) <= tol_abs) return fine;
    const double m = 0.5 * (a + b);
    const double lc = gl7(f, a, m), lf = gl15(f, a, m);
    const double rc = gl7(f, m, b), rf = gl15(f, m, b);
    return adaptive_rec(f, a, m, lc, lf, 0.5 * tol_abs, depth - 1) +
           adaptive_rec(f, m, b, rc, rf, 0.5 * tol_abs, depth - 1);
}

}  // namespace

double adaptive_gauss_legendre(const std::function<double(double)>& f, double a, double b,
                               double rel_tol, int max_depth) {
    if (!(b > a)) return 0.0;
    const double coarse = gl7(f, a, b);
    const double fine = gl15(f, a, b);
    const double scale = std::max(std::abs(fine), 1e-300);
    return adaptive_rec(f, a, b, coarse, fine, rel_tol * scale, max_depth);
}

double golden_section_max(const std::function<double(double)>& f, double a, double b, double tol) {
    constexpr double kInvPhi = 0.6180339887498948482;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

double q_function(double x) { return 0.5 * std::erfc(x * 0.7071067811865475244); }

double inverse_q(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("inverse_q: p must be in (0,1)");
    // Q is strictly decreasing; bracket generously and bisect to 1e-12 in x.
    double lo = -40.0, hi = 40.0;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (q_function(mid) > p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double one_sided_t_critical_95(int dof) {
    if (dof < 1) throw std::invalid_argument("t critical: dof must be >= 1");
    constexpr double z = 1.6448536269514722;  // z_0.95
    const double d = static_cast<double>(dof);
    return z + (z * z * z + z) / (4.0 * d) +
           (5.0 * z * z * z * z * z + 16.0 * z * z * z + 3.0 * z) / (96.0 * d * d);
}

PairedTestResult paired_one_sided_test(const std::vector<double>& deltas) {
    if (deltas.size() < 2) throw std::invalid_argument("paired test: need at least 2 pairs");
    const double n = static_cast<double>(deltas.size());
    double mean = 0.0;
    for (double d : deltas) mean += d;
    mean /= n;
    double var = 0.0;
    for (double d : deltas) var += (d - mean) * (d - mean);
    var /= (n - 1.0);
    PairedTestResult r;
    r.mean_delta = mean;
    const double se = std::sqrt(var / n);
    r.t_statistic = se > 0.0 ? mean / se : (mean > 0.0 ? 1e300 : 0.0);
    r.critical_value = one_sided_t_critical_95(static_cast<int>(deltas.size()) - 1);
    r.significant = r.t_statistic > r.critical_value;
    return r;
}

}  // namespace nd
