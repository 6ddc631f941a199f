#include <cmath>

#include "doctest.h"
#include "nd/channel.hpp"
#include "nd/rng.hpp"

using namespace nd;

namespace {

ChannelParams micaz_params() {
    ChannelParams p;
    p.tx_power_w = 3.981071705534972e-06;  // -24 dBm
    p.path_loss_eta = 4.0;
    p.noise_density_w_hz = 5.011872336272715e-21;  // -173 dBm/Hz
    p.bandwidth_hz = 100.0;
    p.power_law = PowerLawKind::Bounded;
    return p;
}

PowerModel unbounded_law(double eta = 4.0) {
    PowerModel m;
    m.kind = PowerLawKind::Unbounded;
    m.eta = eta;
    m.region_radius_m = 1.0;
    return m;
}

}  // namespace

TEST_CASE("amplitude at zero distance is sqrt(G)") {
    const ChannelParams p = micaz_params();
    const auto g = amplitude(0.0, p);
    CHECK(g.real() == doctest::Approx(std::sqrt(p.tx_power_w)).epsilon(1e-12));
    CHECK(g.imag() == 0.0);
}

TEST_CASE("amplitude follows the (1+r)^-eta law") {
    const ChannelParams p = micaz_params();
    const auto g = amplitude(500.0, p);
    CHECK(g.real() ==
          doctest::Approx(std::sqrt(p.tx_power_w * std::pow(501.0, -4.0))).epsilon(1e-12));

    CHECK_THROWS(amplitude(-1.0, p));
    CHECK_THROWS(amplitude(1.0, p, std::complex<double>{1.0, 0.0}));  // draw without fading
    ChannelParams fad = p;
    fad.fading = Fading::Rayleigh;
    CHECK_THROWS(amplitude(1.0, fad));  // fading without draw
}

TEST_CASE("rayleigh fading keeps the mean power") {
    ChannelParams p = micaz_params();
    p.fading = Fading::Rayleigh;
    const double r = 200.0;
    const double expected = p.tx_power_w * std::pow(1.0 + r, -4.0);
    Rng rng(3);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) sum += std::norm(amplitude(r, p, rayleigh_draw(rng)));
    CHECK(std::abs(sum / n - expected) / expected < 0.02);
}

TEST_CASE("unbounded received-power cdf has the pareto closed form") {
    const PowerModel m = unbounded_law();
    for (double x : {1.0, 1.5, 4.0, 100.0, 1e6})
        CHECK(m.power_cdf(x) == doctest::Approx(1.0 - std::pow(x, -0.5)).epsilon(1e-12));
    CHECK(m.power_cdf(0.5) == 0.0);
    CHECK(m.power_cdf(0.999999) == 0.0);
    CHECK_THROWS(m.power_cdf(0.0));
    CHECK_THROWS(m.power_cdf(-3.0));
}

TEST_CASE("paper-form cdf limits") {
    const ChannelParams p = micaz_params();
    const DiskRegion region{1000.0};
    CHECK(rx_power_cdf(p.tx_power_w * 2.0, p, region) == doctest::Approx(1.0));
    CHECK(rx_power_cdf(p.tx_power_w * std::pow(1001.0, -4.0) * 0.5, p, region) ==
          doctest::Approx(0.0));
    double prev = 0.0;
    for (double x = 1e-18; x < 1e-5; x *= 3.0) {
        const double v = rx_power_cdf(x, p, region);
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
}

TEST_CASE("faded cdf matches monte carlo and stays a cdf") {
    ChannelParams p = micaz_params();
    p.fading = Fading::Rayleigh;
    const DiskRegion region{1000.0};
    const PowerModel m = PowerModel::from(p, region);
    Rng rng(17);
    const int n = 200000;
    for (double x : {1e-16, 1e-14, 1e-12}) {
        int below = 0;
        for (int i = 0; i < n; ++i) below += m.sample_power(rng) <= x;
        const double mc = static_cast<double>(below) / n;
        const double se = std::sqrt(std::max(mc * (1.0 - mc), 1e-9) / n);
        CHECK(std::abs(m.power_cdf(x) - mc) < 3.0 * se + 1e-4);
    }
    double prev = 0.0;
    for (double x = 1e-20; x < 1e-4; x *= 10.0) {
        const double v = m.power_cdf(x);
        CHECK(v >= prev - 1e-10);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        prev = v;
    }
}

TEST_CASE("the unbounded law is pinned to the unit disk") {
    ChannelParams p;
    p.power_law = PowerLawKind::Unbounded;
    p.path_loss_eta = 4.0;
    CHECK_THROWS(PowerModel::from(p, DiskRegion{2.0}));
    CHECK_NOTHROW(PowerModel::from(p, DiskRegion{1.0}));
}

TEST_CASE("mean received power over the 1 km disk") {
    const ChannelParams p = micaz_params();
    const double mean = mean_rx_power(p, DiskRegion{1000.0});
    CHECK(std::abs(mean - 3.3333e-07 * p.tx_power_w) / (3.3333e-07 * p.tx_power_w) < 1e-4);

    // Monte Carlo cross-check of the quadrature. The raw mean estimator is
    // dominated by rare near-origin draws, so stratify the radius: one
    // uniform draw per stratum of P(r) * f_r(r), which has bounded swing.
    const PowerModel m = PowerModel::from(p, DiskRegion{1000.0});
    Rng rng(23);
    const double R = 1000.0;
    double sum = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) {
        const double r = (i + rng.next_unit()) * R / n;
        sum += m.power_at(r) * 2.0 * r / (R * R) * (R / n);
    }
    CHECK(std::abs(sum - mean) / mean < 0.005);

    // All nodes at the center: mean power tends to G.
    CHECK(mean_rx_power(p, DiskRegion{1e-9}) == doctest::Approx(p.tx_power_w).epsilon(1e-6));

    ChannelParams fad = p;
    fad.fading = Fading::Rayleigh;
    CHECK_THROWS(mean_rx_power(fad, DiskRegion{1000.0}));
}

TEST_CASE("sinr arithmetic") {
    CHECK(sinr(0, {2.0}, 0.5) == doctest::Approx(4.0));
    CHECK(sinr(0, {5.0, 5.0}, 0.0) == doctest::Approx(1.0));
    CHECK(sinr(0, {4.0, 1.0, 1.0}, 0.0) == doctest::Approx(2.0));
    CHECK(std::isinf(sinr(0, {5.0}, 0.0)));
    CHECK_THROWS(sinr(3, {1.0}, 0.0));
    CHECK_THROWS(sinr(0, {1.0}, -1.0));
}

TEST_CASE("success set follows the threshold semantics") {
    CHECK(success_set({5.0, 5.0}, 0.0, 0.4) == NodeSet{0, 1});
    CHECK(success_set({5.0, 5.0}, 0.0, 1.5).empty());
    CHECK(success_set({9.0, 1.0, 2.0}, 0.0, 1e12).empty());  // collision-channel limit
    CHECK(success_set({5.0}, 0.0, 1e12) == NodeSet{0});      // lone transmitter, no noise
    CHECK_THROWS(success_set({1.0}, 0.0, 0.0));
}

TEST_CASE("success set fuzz: tau >= 1 yields at most one winner, antitone in tau") {
    Rng rng(31);
    for (int trial = 0; trial < 10000; ++trial) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 6);
        std::vector<double> powers(static_cast<std::size_t>(n));
        for (auto& v : powers) v = 1e-3 + 10.0 * rng.next_unit();
        const double noise = rng.next_unit() < 0.5 ? 0.0 : rng.next_unit();
        CHECK(success_set(powers, noise, 1.0 + 5.0 * rng.next_unit()).size() <= 1);
        const double t1 = 0.05 + rng.next_unit();
        const double t2 = t1 + rng.next_unit();
        CHECK(success_set(powers, noise, t2).is_subset_of(success_set(powers, noise, t1)));
    }
}
