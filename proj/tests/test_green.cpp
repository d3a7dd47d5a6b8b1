#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "aahbath/green.hpp"

using namespace aahbath::green;
using cxd = std::complex<double>;

namespace {

// brute-force k-space quadrature of the defining integral (test oracle)
cxd brute_d1(int m, cxd e, int n = 200001) {
    cxd acc(0.0, 0.0);
    for (int i = 0; i < n; ++i) {
        const double k = -M_PI + 2.0 * M_PI * i / n;
        acc += std::exp(cxd(0.0, k * m)) / (e + std::cos(k));
    }
    return acc / static_cast<double>(n);
}

cxd brute_d2(int m, cxd e, int n = 2048) {
    cxd acc(0.0, 0.0);
    for (int i = 0; i < n; ++i) {
        const double k1 = -M_PI + 2.0 * M_PI * i / n;
        for (int j = 0; j < n; ++j) {
            const double k2 = -M_PI + 2.0 * M_PI * j / n;
            acc += std::exp(cxd(0.0, (k1 + k2) * m)) / (e + std::cos(k1) + std::cos(k2));
        }
    }
    return acc / static_cast<double>(n) / static_cast<double>(n);
}

cxd brute_d3(int m, cxd e, int n = 160) {
    cxd acc(0.0, 0.0);
    for (int i = 0; i < n; ++i) {
        const double k1 = -M_PI + 2.0 * M_PI * i / n;
        for (int j = 0; j < n; ++j) {
            const double k2 = -M_PI + 2.0 * M_PI * j / n;
            for (int l = 0; l < n; ++l) {
                const double k3 = -M_PI + 2.0 * M_PI * l / n;
                acc += std::exp(cxd(0.0, (k1 + k2 + k3) * m)) /
                       (e + std::cos(k1) + std::cos(k2) + std::cos(k3));
            }
        }
    }
    return acc / std::pow(static_cast<double>(n), 3);
}

} // namespace

TEST_CASE("d=1 quadrature against the exact value and brute force") {
    // f_1(0; 1.25) = 1/sqrt(e^2-1) = 4/3 (quadrature normalization)
    const auto g = green_quadrature({1.25, 0.0}, 0, 1);
    CHECK(g.value.real() == doctest::Approx(4.0 / 3.0).epsilon(1e-11));
    CHECK(g.value.imag() == doctest::Approx(0.0).epsilon(1e-12));

    for (cxd e : {cxd(2.0, -0.7), cxd(-1.6, 0.3), cxd(0.4, -0.5)}) {
        const auto row = green_quadrature_row(3, e, 1);
        for (int m : {0, 1, 3}) {
            const cxd b = brute_d1(m, e);
            CHECK(std::abs(row[m] - b) < 1e-8 * (1.0 + std::abs(b)));
        }
    }
}

TEST_CASE("d=1 closed form carries the printed pi prefactor") {
    for (double e : {1.25, 2.0, 4.0, -1.5, -3.0}) {
        const auto q = green_quadrature({e, 0.0}, 0, 1);
        const auto c = green_closed({e, 0.0}, 0, 1);
        CHECK(c.value.real() / q.value.real() == doctest::Approx(M_PI).epsilon(1e-8));
    }
    // decay ratio explicit in the printed form: f(m+1)/f(m) = 1/(|e|+sqrt(e^2-1))
    const double e = 2.0;
    const auto c0 = green_closed({e, 0.0}, 0, 1);
    const auto c1 = green_closed({e, 0.0}, 1, 1);
    CHECK(c1.value.real() / c0.value.real() == doctest::Approx(2.0 - std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("reflection, conjugation, decay and parity properties") {
    const cxd e(1.3, -0.4);
    for (int d : {1, 2, 3}) {
        const auto row = green_quadrature_row(4, e, d);
        // conjugation
        const auto rc = green_quadrature_row(4, std::conj(e), d);
        for (int m = 0; m <= 4; ++m)
            CHECK(std::abs(std::conj(rc[m]) - row[m]) < 1e-10 * (1.0 + std::abs(row[m])));
        // parity f(m; -e) = -(-1)^{dm} f(m; e)
        const auto rp = green_quadrature_row(4, -e, d);
        for (int m = 0; m <= 4; ++m) {
            const double sgn = ((d * m) % 2 == 0) ? 1.0 : -1.0;
            CHECK(std::abs(rp[m] + sgn * row[m]) < 1e-9 * (1.0 + std::abs(row[m])));
        }
        // decay in m for real e outside the band
        const auto rr = green_quadrature_row(6, cxd(d + 0.7, 0.0), d);
        for (int m = 1; m <= 6; ++m) CHECK(std::abs(rr[m]) <= std::abs(rr[m - 1]) + 1e-14);
    }
    // band edge rejected
    CHECK_THROWS_AS(green_quadrature({1.0, 0.0}, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(green_quadrature({0.3, 0.0}, 0, 1), std::invalid_argument);
}

TEST_CASE("d=2 quadrature against brute force") {
    const cxd e(3.0, 0.5);
    const auto row = green_quadrature_row(1, e, 2);
    CHECK(std::abs(row[0] - brute_d2(0, e)) < 1e-6);
    CHECK(std::abs(row[1] - brute_d2(1, e)) < 1e-6);
}

TEST_CASE("d=3 quadrature against brute force and closed form") {
    const auto row = green_quadrature_row(1, {4.0, 0.0}, 3);
    CHECK(std::abs(row[0] - brute_d3(0, {4.0, 0.0})) < 2e-5);

    // criterion 9 region: relative agreement quadrature vs Eq.-(11) form
    for (double e : {3.5, 4.0, 5.0, 6.0}) {
        const auto q = green_quadrature_row(2, {e, 0.0}, 3);
        for (int m : {0, 1, 2}) {
            const auto c = green_closed({e, 0.0}, m, 3);
            CHECK(std::abs(c.value - q[m]) <= 1e-6 * std::abs(q[m]));
        }
    }
}

TEST_CASE("d=2 printed closed form measured against quadrature") {
    // implemented exactly as printed and validated only against quadrature;
    // the measured ratio is reported, not asserted equal to one
    const auto q = green_quadrature({3.0, 0.0}, 0, 2);
    const auto c = green_closed({3.0, 0.0}, 0, 2);
    CHECK(std::isfinite(c.value.real()));
    CHECK(c.value.real() != 0.0);
    MESSAGE("d=2 closed/quadrature ratio at e=3, m=0: ", c.value.real() / q.value.real());
}

TEST_CASE("first-sheet segment engines match the quadrature route") {
    for (int d : {2, 3}) {
        for (cxd e : {cxd(0.5, -0.4), cxd(-1.2, -0.3), cxd(d + 1.0, -0.2)}) {
            const auto fast = first_sheet_row(5, e, d);
            const auto ref = green_quadrature_row(5, e, d);
            for (int m = 0; m <= 5; ++m)
                CHECK(std::abs(fast[m] - ref[m]) < 2e-8 * (1.0 + std::abs(ref[m])));
        }
    }
    // d=1 closed first sheet
    const auto f1 = first_sheet_row(3, {0.7, -0.2}, 1);
    const auto q1 = green_quadrature_row(3, {0.7, -0.2}, 1);
    for (int m = 0; m <= 3; ++m) CHECK(std::abs(f1[m] - q1[m]) < 1e-9);
}

TEST_CASE("retarded continuation matches the upper boundary value") {
    // f^{II}(x - i delta) -> f^{I}(x + i delta) as delta -> 0 (linear rate)
    for (int d : {1, 2, 3}) {
        for (double x : {0.35 * d, 0.8 * d, -0.45 * d}) {
            double prev = 1e300;
            for (double del : {1e-2, 1e-3, 1e-4}) {
                const auto lo = retarded_row(3, cxd(x, -del), d);
                const auto up = first_sheet_row(3, cxd(x, +del), d);
                double diff = 0.0;
                for (int m = 0; m <= 3; ++m) diff = std::max(diff, std::abs(lo[m] - up[m]));
                CHECK(diff < prev);
                prev = diff;
            }
            CHECK(prev < 5e-3);   // at delta = 1e-4
        }
    }
}

TEST_CASE("density continuation equals the boundary density") {
    // nu_d(x) = Im f^{I}(x - i 0)/pi on the real axis (independent route)
    for (int d : {1, 2, 3}) {
        for (double x : {0.3 * d, 0.7 * d}) {
            const auto nu = density_continuation_row(2, cxd(x, -1e-9), d);
            const auto fb = first_sheet_row(2, cxd(x, -1e-8), d);
            for (int m = 0; m <= 2; ++m) {
                CHECK(nu[m].real() == doctest::Approx(fb[m].imag() / M_PI)
                          .epsilon(2e-5).scale(1.0));
                CHECK(std::abs(nu[m].imag()) < 2e-5);
            }
        }
    }
    // d=1 second sheet equals the branch-flipped closed form
    const cxd e(0.4, -0.17);
    const auto ret = retarded_row(3, e, 1);
    const cxd R = -(e * std::sqrt(1.0 - 1.0 / (e * e)));
    cxd p = 1.0 / R;
    for (int m = 0; m <= 3; ++m) {
        CHECK(std::abs(ret[m] - p) < 1e-11 * (1.0 + std::abs(p)));
        p *= (-e + R);
    }
}

TEST_CASE("slice prescription: exact for d=1, boundary-consistent for d=2,3") {
    const cxd e(0.4, -0.12);
    const auto s1 = slice_row(3, e, 1);
    const auto r1 = retarded_row(3, e, 1);
    for (int m = 0; m <= 3; ++m) CHECK(std::abs(s1[m] - r1[m]) < 1e-12);

    for (int d : {2, 3}) {
        double prev = 1e300;
        for (double del : {3e-2, 3e-3, 3e-4}) {
            const cxd ee(0.55 * d, -del);
            const auto sl = slice_row(2, ee, d);
            const auto rt = retarded_row(2, ee, d);
            double diff = 0.0;
            for (int m = 0; m <= 2; ++m) diff = std::max(diff, std::abs(sl[m] - rt[m]));
            CHECK(diff < prev);
            prev = diff;
        }
        CHECK(prev < 2e-2);
    }
}

TEST_CASE("d=1 density row is the Chebyshev form") {
    const double w = 0.42;
    const auto row = density_row(4, w, 1);
    const double s = 1.0 / (M_PI * std::sqrt(1.0 - w * w));
    CHECK(row[0] == doctest::Approx(s).epsilon(1e-13));
    CHECK(row[1] == doctest::Approx(w * s).epsilon(1e-13));
    CHECK(row[2] == doctest::Approx((2 * w * w - 1) * s).epsilon(1e-13));
}
