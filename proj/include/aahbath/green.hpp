// green.hpp — lattice Green function f_d(m; e) of the d-dimensional simple
// lattice along the body diagonal, units 2J = 1:
//
//   f_d(m; e) = (2pi)^-d  int_BZ d^d k  e^{i k . m(1,..,1)} / (e + sum_q cos k_q)
//
// Three independent routes:
//   * green_quadrature — Laplace–Bessel representation (ground truth; first
//     sheet, reflection for Im e < 0, rotated I_m integral for real |e| > d).
//   * green_closed     — printed closed forms (d=1 explicit, d=2/3 via
//     hypergeometric series); cross-check only.
//   * sheet engines    — fast first-sheet segment quadratures plus the
//     retarded continuation through the band cut (strip-local) and the
//     boundary-exact slice prescription used by the resonance scan.
#pragma once

#include <complex>
#include <vector>

#include "aahbath/config.hpp"

namespace aahbath::green {

using cxd = std::complex<double>;

struct GreenValue {
    cxd value;
    enum class Method { quadrature, closed_form } method;
    double est_error;
};

// --- ground truth (Eq.-(8) representation reduced to one dimension) ---------
// pre: Im(e) != 0, or Im(e) == 0 and |Re e| > d. Band edge |e| = d rejected.
GreenValue green_quadrature(cxd e, int m, int d);
// all offsets m = 0..m_max in one pass (shared Bessel rows)
std::vector<cxd> green_quadrature_row(int m_max, cxd e, int d, double* est_err = nullptr);

// --- closed forms as printed (valid region: hypergeometric |z| < 1; we
//     require real |e| > d). The d=1 form carries the printed pi prefactor
//     and sign conventions; see tests for the measured ratio to quadrature.
GreenValue green_closed(cxd e, int m, int d);

// --- sheet-resolved engines --------------------------------------------------
// first sheet, analytic in C minus the real band segment [-d, d]
std::vector<cxd> first_sheet_row(int m_max, cxd e, int d);

// analytic continuation of the (germ-local) spectral density mu_d(-e);
// f^{II} = f^{I} - 2 pi i * density_continuation.  Requires |Re e| < d.
std::vector<cxd> density_continuation_row(int m_max, cxd e, int d);

// strip-local retarded continuation through the band cut (Im e <= 0;
// Im e is floored at -1e-12 so the boundary value is usable).
std::vector<cxd> retarded_row(int m_max, cxd e, int d);

// boundary-exact slice prescription: residues in one momentum, remaining
// momenta integrated with the pointwise sheet indicator. Identical to
// retarded_row for d=1; agrees with it on the real axis for all d.
std::vector<cxd> slice_row(int m_max, cxd e, int d);

// real-axis spectral density row mu_{d,m}(w) (support |w| <= d); d = 1 or 2
std::vector<double> density_row(int m_max, double w, int d);

} // namespace aahbath::green
