#include "aahbath/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace aahbath::special {

namespace {

// ascending power series, adequate for small x
double bessel_j_series(int n, double x) {
    const double half = 0.5 * x;
    double term = 1.0;
    for (int k = 1; k <= n; ++k) term *= half / k;   // (x/2)^n / n!
    double sum = term;
    const double q = -half * half;
    for (int k = 1; k < 64; ++k) {
        term *= q / (k * (n + k));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum) + 1e-300) break;
    }
    return sum;
}

} // namespace

std::vector<double> bessel_j_row(int nmax, double x) {
    if (nmax < 0) throw std::invalid_argument("bessel_j_row: order must be >= 0");
    if (x < 0) throw std::invalid_argument("bessel_j_row: x must be >= 0");
    std::vector<double> out(nmax + 1);
    if (x < 1.0) {
        for (int n = 0; n <= nmax; ++n) out[n] = bessel_j_series(n, x);
        return out;
    }
    // Miller downward recurrence. Start high enough that J_start is negligible,
    // normalize with J_0 + 2*sum_{k>=1} J_2k = 1.
    const int start = static_cast<int>(x + 1.5 * std::cbrt(x) * 12 + nmax + 30);
    double jp1 = 0.0, j = 1e-300;
    double norm = 0.0;
    std::vector<double> row(nmax + 1, 0.0);
    for (int n = start; n >= 1; --n) {
        const double jm1 = (2.0 * n / x) * j - jp1;
        jp1 = j;
        j = jm1;
        if (n - 1 <= nmax) row[n - 1] = j;
        if ((n - 1) % 2 == 0) norm += (n - 1 == 0) ? j : 2.0 * j;
        if (std::abs(j) > 1e250) {
            const double s = 1e-250;
            j *= s; jp1 *= s; norm *= s;
            for (double& v : row) v *= s;
        }
    }
    for (int n = 0; n <= nmax; ++n) out[n] = row[n] / norm;
    return out;
}

double bessel_j(int order, double x) {
    if (x < 1.0) {
        if (order < 0 || x < 0) throw std::invalid_argument("bessel_j: bad arguments");
        return bessel_j_series(order, x);
    }
    return bessel_j_row(order, x)[order];
}

std::vector<double> bessel_i_scaled_row(int nmax, double x) {
    if (nmax < 0 || x < 0) throw std::invalid_argument("bessel_i_scaled_row: bad arguments");
    std::vector<double> out(nmax + 1);
    if (x < 1e-12) {
        out[0] = 1.0;
        for (int n = 1; n <= nmax; ++n) out[n] = 0.0;
        return out;
    }
    if (x < 1.0) {
        // series for I_n, then scale
        for (int n = 0; n <= nmax; ++n) {
            const double half = 0.5 * x;
            double term = 1.0;
            for (int k = 1; k <= n; ++k) term *= half / k;
            double sum = term;
            const double q = half * half;
            for (int k = 1; k < 64; ++k) {
                term *= q / (k * (n + k));
                sum += term;
                if (term < 1e-17 * sum) break;
            }
            out[n] = sum * std::exp(-x);
        }
        return out;
    }
    const int start = static_cast<int>(1.3 * x + nmax + 40 + 10 * std::cbrt(x));
    double ip1 = 0.0, iv = 1e-300;
    double norm = 0.0;   // Ibar_0 + 2 sum_{k>=1} Ibar_k = 1
    std::vector<double> row(nmax + 1, 0.0);
    for (int n = start; n >= 1; --n) {
        double im1 = (2.0 * n / x) * iv + ip1;
        ip1 = iv;
        iv = im1;
        if (n - 1 <= nmax) row[n - 1] = iv;
        norm += (n - 1 == 0) ? iv : 2.0 * iv;
        if (std::abs(iv) > 1e250) {
            const double s = 1e-250;
            iv *= s; ip1 *= s; norm *= s;
            for (double& v : row) v *= s;
        }
    }
    for (int n = 0; n <= nmax; ++n) out[n] = row[n] / norm;
    return out;
}

HypResult hyp_pfq(const std::vector<double>& upper, const std::vector<double>& lower, cxd z) {
    for (double b : lower) {
        if (b <= 0.0 && b == std::floor(b))
            throw std::invalid_argument("hyp_pfq: lower parameter is a non-positive integer");
    }
    if (std::abs(z) >= 1.0)
        throw std::invalid_argument("hyp_pfq: series requires |z| < 1");
    cxd term = 1.0, sum = 1.0;
    const int cap = 100000;
    for (int k = 0; k < cap; ++k) {
        cxd ratio = z;
        for (double a : upper) ratio *= (a + k);
        for (double b : lower) ratio /= (b + k);
        ratio /= (k + 1.0);
        term *= ratio;
        sum += term;
        if (std::abs(term) < 1e-15 * std::abs(sum)) {
            return {sum, std::abs(term), k + 1};
        }
    }
    throw HypNonConvergence(sum);
}

HypResult hyp2f1(double a, double b, double c, cxd z) {
    return hyp_pfq({a, b}, {c}, z);
}

} // namespace aahbath::special
