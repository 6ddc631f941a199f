#include <cmath>
#include <complex>
#include <map>

#include "doctest.h"
#include "nd/signals.hpp"

using namespace nd;

TEST_CASE("m-sequence balance and two-valued autocorrelation") {
    const Signature s = msequence(4, kDefaultTaps4, 0);
    REQUIRE(s.length() == 15);
    int ones = 0, minus = 0;
    for (double c : s.chips) (c > 0 ? ones : minus)++;
    CHECK(ones == 8);
    CHECK(minus == 7);

    double zero_lag = 0.0;
    for (double c : s.chips) zero_lag += c * c;
    CHECK(zero_lag == doctest::Approx(15.0));
    for (int lag = 1; lag < 15; ++lag) {
        double acf = 0.0;
        for (int l = 0; l < 15; ++l) acf += s.chips[l] * s.chips[(l + lag) % 15];
        CHECK(acf == doctest::Approx(-1.0));
    }
}

TEST_CASE("cyclic shift is a rotation") {
    const Signature s0 = msequence(4, kDefaultTaps4, 0);
    const Signature s3 = msequence(4, kDefaultTaps4, 3);
    for (int l = 0; l < 15; ++l) CHECK(s3.chips[l] == s0.chips[(l + 3) % 15]);
}

TEST_CASE("non-primitive polynomials are rejected") {
    CHECK_THROWS(msequence(4, 0b0101, 0));  // x^4 + x^2 + 1, reducible
    CHECK_THROWS(msequence(4, 0b1111, 0));  // x^4+x^3+x^2+x+1, irreducible, order 5
    CHECK_THROWS(msequence(4, 0, 0));
    CHECK_NOTHROW(msequence(4, 0b1001, 0));  // x^4 + x^3 + 1, primitive
    CHECK_NOTHROW(msequence(5, 0b00101, 0));  // x^5 + x^2 + 1, primitive, length 31
}

TEST_CASE("signature bank has -1 cross-correlations") {
    const auto bank = signature_bank(8);
    REQUIRE(bank.size() == 8);
    for (std::size_t i = 0; i < bank.size(); ++i) {
        CHECK(bank[i].node_id == static_cast<int>(i) + 1);
        for (std::size_t j = 0; j < i; ++j) {
            double dot = 0.0;
            for (int l = 0; l < 15; ++l) dot += bank[i].chips[l] * bank[j].chips[l];
            CHECK(dot == doctest::Approx(-1.0));
        }
    }
    CHECK_THROWS(signature_bank(16));  // only 15 distinct shifts exist
}

TEST_CASE("synthesis: empty set and single transmitter") {
    const auto bank = signature_bank(3);
    Rng rng(1);
    const ReceivedVector zero = synthesize(NodeSet{}, {}, bank, 0.0, rng);
    for (const auto& v : zero.samples) CHECK(v == std::complex<double>{0.0, 0.0});

    std::map<int, std::complex<double>> amps = {{2, {2.0, 0.0}}};
    const ReceivedVector y = synthesize(NodeSet{2}, amps, bank, 0.0, rng);
    for (int l = 0; l < 15; ++l) CHECK(y.samples[l].real() == doctest::Approx(2.0 * bank[1].chips[l]));
}

TEST_CASE("correlation identity for two transmitters") {
    const auto bank = signature_bank(3);
    Rng rng(2);
    std::map<int, std::complex<double>> amps = {{1, {0.7, 0.0}}, {3, {1.9, 0.0}}};
    const ReceivedVector y = synthesize(NodeSet{1, 3}, amps, bank, 0.0, rng);
    double corr1 = 0.0;
    for (int l = 0; l < 15; ++l) corr1 += y.samples[l].real() * bank[0].chips[l];
    // <y, s_1> = g_1 * 15 + g_3 * <s_3, s_1> with cross-correlation -1.
    CHECK(corr1 == doctest::Approx(0.7 * 15.0 + 1.9 * -1.0).epsilon(1e-12));
}

TEST_CASE("synthesis is linear in the amplitudes") {
    const auto bank = signature_bank(4);
    Rng rng(3);
    std::map<int, std::complex<double>> a = {{1, {0.3, 0.0}}, {2, {1.1, 0.0}}, {4, {-0.6, 0.0}}};
    std::map<int, std::complex<double>> b = {{1, {0.9, 0.0}}, {2, {-2.0, 0.0}}, {4, {0.25, 0.0}}};
    std::map<int, std::complex<double>> sum;
    for (const auto& [k, v] : a) sum[k] = v + b.at(k);
    const NodeSet tx{1, 2, 4};
    const ReceivedVector ya = synthesize(tx, a, bank, 0.0, rng);
    const ReceivedVector yb = synthesize(tx, b, bank, 0.0, rng);
    const ReceivedVector ys = synthesize(tx, sum, bank, 0.0, rng);
    for (int l = 0; l < 15; ++l)
        CHECK(ys.samples[l].real() ==
              doctest::Approx(ya.samples[l].real() + yb.samples[l].real()).epsilon(1e-12));
}

TEST_CASE("noise variance matches the requested power") {
    const auto bank = signature_bank(1);
    const double n_power = 2.5;
    double sum = 0.0, sumsq = 0.0;
    long count = 0;
    Rng rng(4);
    for (int rep = 0; rep < 70000; ++rep) {
        const ReceivedVector y = synthesize(NodeSet{}, {}, bank, n_power, rng);
        for (const auto& v : y.samples) {
            sum += v.real();
            sumsq += v.real() * v.real();
            ++count;
        }
    }
    const double mean = sum / count;
    const double var = sumsq / count - mean * mean;
    CHECK(std::abs(var - n_power) / n_power < 0.01);

    // Rayleigh mode splits the power across components.
    Rng rng2(5);
    double re2 = 0.0, im2 = 0.0;
    count = 0;
    for (int rep = 0; rep < 70000; ++rep) {
        const ReceivedVector y = synthesize(NodeSet{}, {}, bank, n_power, rng2, Fading::Rayleigh);
        for (const auto& v : y.samples) {
            re2 += v.real() * v.real();
            im2 += v.imag() * v.imag();
            ++count;
        }
    }
    CHECK(std::abs(re2 / count - n_power / 2.0) / (n_power / 2.0) < 0.02);
    CHECK(std::abs(im2 / count - n_power / 2.0) / (n_power / 2.0) < 0.02);
}

TEST_CASE("missing amplitude or signature is an error") {
    const auto bank = signature_bank(2);
    Rng rng(6);
    CHECK_THROWS(synthesize(NodeSet{1}, {}, bank, 0.0, rng));
    std::map<int, std::complex<double>> amps = {{5, {1.0, 0.0}}};
    CHECK_THROWS(synthesize(NodeSet{5}, amps, bank, 0.0, rng));
}

TEST_CASE("signature csv dump") {
    const auto csv = signatures_to_csv(signature_bank(2));
    CHECK(csv.find("node_id,chips") == 0);
    CHECK(csv.find("\n1,") != std::string::npos);
    CHECK(csv.find("\n2,") != std::string::npos);
}
