#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "aahbath/special.hpp"

using namespace aahbath::special;

namespace {

// independent oracle: J_n(x) = (1/pi) int_0^pi cos(n th - x sin th) dth by
// composite Simpson with enough nodes to resolve the oscillation
double bessel_integral_oracle(int n, double x) {
    const int N = 4000 + 40 * static_cast<int>(x + n);
    double acc = 0.0;
    for (int i = 0; i <= N; ++i) {
        const double th = M_PI * i / N;
        const double f = std::cos(n * th - x * std::sin(th));
        const double w = (i == 0 || i == N) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += w * f;
    }
    return acc * (M_PI / N) / 3.0 / M_PI;
}

// independent power-series J_0 for the first-zero bisection (small x only)
double j0_series(double x) {
    double term = 1.0, sum = 1.0;
    const double q = -0.25 * x * x;
    for (int k = 1; k < 60; ++k) {
        term *= q / (k * k);
        sum += term;
    }
    return sum;
}

} // namespace

TEST_CASE("bessel_j trivial values") {
    CHECK(bessel_j(0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    for (int n = 1; n <= 8; ++n) CHECK(bessel_j(n, 0.0) == 0.0);
}

TEST_CASE("first zero of J0 located by independent series + bisection") {
    double a = 2.0, b = 3.0;
    for (int it = 0; it < 80; ++it) {
        const double m = 0.5 * (a + b);
        if (j0_series(a) * j0_series(m) <= 0.0) b = m;
        else a = m;
    }
    const double z0 = 0.5 * (a + b);
    CHECK(z0 == doctest::Approx(2.404825557695773).epsilon(1e-12));
    CHECK(std::abs(bessel_j(0, 2.404825557695773)) < 1e-10);
    CHECK(std::abs(bessel_j(0, z0)) < 1e-10);
}

TEST_CASE("bessel_j against the integral representation") {
    for (double x : {0.3, 1.7, 10.0, 57.3, 100.0}) {
        const auto row = bessel_j_row(20, x);
        for (int n : {0, 1, 2, 5, 13, 20}) {
            CHECK(row[n] == doctest::Approx(bessel_integral_oracle(n, x)).epsilon(5e-11));
        }
    }
}

TEST_CASE("bessel sum rule") {
    for (double x : {1.0, 10.0, 100.0}) {
        const auto row = bessel_j_row(static_cast<int>(x) + 60, x);
        double s = row[0] * row[0];
        for (size_t n = 1; n < row.size(); ++n) s += 2.0 * row[n] * row[n];
        CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("scaled bessel I") {
    // sum rule: Ibar_0 + 2 sum Ibar_n = 1 holds by construction; cross-check
    // against the independent integral Ibar_n(x) = (1/pi) int_0^pi
    // e^{x(cos th - 1)} cos(n th) dth
    for (double x : {0.5, 3.0, 42.0, 300.0}) {
        const auto row = bessel_i_scaled_row(12, x);
        for (int n : {0, 1, 4, 12}) {
            const int N = 20000;
            double acc = 0.0;
            for (int i = 0; i <= N; ++i) {
                const double th = M_PI * i / N;
                const double f = std::exp(x * (std::cos(th) - 1.0)) * std::cos(n * th);
                const double w = (i == 0 || i == N) ? 1.0 : (i % 2 ? 4.0 : 2.0);
                acc += w * f;
            }
            const double oracle = acc * (M_PI / N) / 3.0 / M_PI;
            CHECK(row[n] == doctest::Approx(oracle).epsilon(1e-10));
        }
    }
}

TEST_CASE("hyp2f1") {
    CHECK(hyp2f1(0.7, -1.3, 2.1, {0.0, 0.0}).value == std::complex<double>(1.0, 0.0));
    // 2F1(1,1;2;z) = -ln(1-z)/z
    const auto h = hyp2f1(1.0, 1.0, 2.0, {0.5, 0.0});
    CHECK(h.value.real() == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
    CHECK(h.value.imag() == doctest::Approx(0.0).epsilon(1e-14));
    // extended-precision direct summation oracle for (1/3, 2/3; 2; 0.1)
    long double term = 1.0L, sum = 1.0L;
    for (int k = 0; k < 500; ++k) {
        term *= (1.0L / 3.0L + k) * (2.0L / 3.0L + k) / ((2.0L + k) * (1.0L + k)) * 0.1L;
        sum += term;
    }
    const auto h2 = hyp2f1(1.0 / 3.0, 2.0 / 3.0, 2.0, {0.1, 0.0});
    CHECK(h2.value.real() == doctest::Approx(static_cast<double>(sum)).epsilon(1e-14));
    CHECK_THROWS_AS(hyp2f1(1.0, 1.0, 0.0, {0.5, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(hyp2f1(1.0, 1.0, 2.0, {1.5, 0.0}), std::invalid_argument);
}

TEST_CASE("hyp_pfq") {
    CHECK(hyp_pfq({0.3, 1.7}, {2.2}, {0.0, 0.0}).value == std::complex<double>(1.0, 0.0));
    // degenerate geometric case 1F0(1;;z) = 1/(1-z)
    const auto g = hyp_pfq({1.0}, {}, {0.25, 0.0});
    CHECK(g.value.real() == doctest::Approx(4.0 / 3.0).epsilon(1e-13));
    // printed d=2 parameter set at n=0, e=3 (z = 4/9) converges to a finite value
    const auto h = hyp_pfq({1.0, 1.0, 1.0, 1.5, 1.5}, {1.5, 1.5, 1.5, 1.5}, {4.0 / 9.0, 0.0});
    CHECK(std::isfinite(h.value.real()));
    CHECK(h.value.real() > 1.0);
    CHECK(h.est_error < 1e-13 * std::abs(h.value));
}
