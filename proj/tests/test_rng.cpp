#include <cmath>

#include "doctest.h"
#include "nd/rng.hpp"

using namespace nd;

TEST_CASE("rng streams are deterministic") {
    Rng a(123), b(123);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());

    Rng c = Rng(123).split(1), d = Rng(123).split(2);
    int same = 0;
    for (int i = 0; i < 64; ++i) same += c.next_u64() == d.next_u64();
    CHECK(same == 0);
}

TEST_CASE("unit draws look uniform") {
    Rng r(7);
    double sum = 0.0, sumsq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = r.next_unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
        sumsq += u * u;
    }
    CHECK(std::abs(sum / n - 0.5) < 0.005);
    CHECK(std::abs(sumsq / n - 1.0 / 3.0) < 0.005);
}

TEST_CASE("gaussian draws have unit variance") {
    Rng r(11);
    double sum = 0.0, sumsq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double g = r.next_gauss();
        sum += g;
        sumsq += g * g;
    }
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(std::abs(sumsq / n - 1.0) < 0.02);
}

TEST_CASE("poisson sampling hits the requested mean") {
    Rng r(5);
    CHECK(r.next_poisson(0.0) == 0);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) sum += static_cast<double>(r.next_poisson(4.0));
    const double mean = sum / n;
    CHECK(mean > 3.94);
    CHECK(mean < 4.06);

    // Chunked path for large rates.
    double big = 0.0;
    for (int i = 0; i < 200; ++i) big += static_cast<double>(r.next_poisson(1500.0));
    CHECK(std::abs(big / 200.0 - 1500.0) < 20.0);
}

TEST_CASE("open-interval draws avoid the endpoints") {
    Rng r(9);
    for (int i = 0; i < 1000; ++i) {
        const double u = r.next_unit_open();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
        CHECK(1.0 - u > 0.0);
        CHECK(1.0 - u < 1.0);
    }
}
