// special.hpp — Bessel J via stable downward recurrence, scaled Bessel I,
// and term-ratio hypergeometric series on |z| < 1.
#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace aahbath::special {

using cxd = std::complex<double>;

// J_n(x) for n >= 0, x >= 0. Ascending series for x < 1, Miller downward
// recurrence with the sum rule J_0 + 2*sum J_2k = 1 otherwise.
double bessel_j(int order, double x);

// all of J_0..J_nmax(x) in one downward sweep
std::vector<double> bessel_j_row(int nmax, double x);

// e^{-x} I_n(x) for n = 0..nmax, x >= 0 (downward recurrence, sum rule
// Ibar_0 + 2*sum Ibar_k = 1).
std::vector<double> bessel_i_scaled_row(int nmax, double x);

// thrown when a hypergeometric series fails to reach the term tolerance
struct HypNonConvergence : std::runtime_error {
    cxd partial;
    explicit HypNonConvergence(cxd p)
        : std::runtime_error("hypergeometric series did not converge"), partial(p) {}
};

struct HypResult {
    cxd value;
    double est_error;   // magnitude of the last term added
    int terms;
};

// Gauss 2F1(a,b;c;z), |z| < 1, c not a non-positive integer.
HypResult hyp2f1(double a, double b, double c, cxd z);

// generalized pFq by the same term-ratio summation
HypResult hyp_pfq(const std::vector<double>& upper, const std::vector<double>& lower, cxd z);

} // namespace aahbath::special
