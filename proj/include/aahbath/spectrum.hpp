// spectrum.hpp — reduced energy levels of the bath-eliminated chain equation:
// bound states (real roots outside the band) and resonances (complex roots of
// det M(e) = 0 scanned over the lower half plane).
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

#include "aahbath/config.hpp"
#include "aahbath/model.hpp"

namespace aahbath::spectrum {

using cxd = std::complex<double>;

// M_{nj} = lambda (delta_{j,n+1}+delta_{j,n-1}) + Delta cos(2 pi beta n + phi) delta_{nj}
//          + g^2 f_d(n-j) - e delta_{nj}
// Green values supplied as a row over |n-j| = 0..N_s-1.
Eigen::MatrixXcd reduced_matrix(cxd e, const ModelConfig& cfg, const std::vector<cxd>& green);

// real-axis variant via green_quadrature (requires |e| > d)
Eigen::MatrixXd reduced_matrix_real(double e, const ModelConfig& cfg);

struct LogDet {
    double log_abs;    // -inf for an exactly singular matrix
    double arg;
};
LogDet log_det(const Eigen::MatrixXcd& M);

struct BoundState {
    double e;
    Eigen::VectorXd vector;        // null vector (real up to phase outside the band)
    Eigen::VectorXd overlaps;      // |<closed_q|v>|^2
    double residual;               // ||M v|| / ||v||
};

// sign-change bracketing of the real determinant on [lo,hi] (which must lie
// outside [-d - margin, d + margin]), bisection to |de| < 1e-12
std::vector<BoundState> find_bound_states(const ModelConfig& cfg, double lo, double hi,
                                          int grid_n = 2000);

struct Resonance {
    cxd e;
    Eigen::VectorXcd vector;
    Eigen::VectorXd overlaps;
    double residual;               // |det| / scale at the root
    double cr_defect;              // Cauchy-Riemann defect of the evaluator at the root
};

struct UnresolvedCell {
    cxd center;
    double det_abs;
    double cr_defect;
};

struct ScanRegion {
    double re_lo, re_hi;
    double im_lo = -0.5, im_hi = 0.0;
};

struct SpectrumResult {
    std::vector<BoundState> bound_states;
    std::vector<Resonance> resonances;
    std::vector<UnresolvedCell> unresolved;
    ScanRegion region;
    int grid_re = 0, grid_im = 0;
    double det_scale = 0.0;        // median |det| over the scan grid
};

// grid + cell sign-change detection + damped Newton with numerical derivative.
// Roots accepted when |det| < 1e-10 * det_scale, the evaluator is analytic at
// the root (CR defect <= 0.3) and Im e <= 1e-12.
SpectrumResult scan_complex_roots(const ModelConfig& cfg, const ScanRegion& region,
                                  int grid_re = 400, int grid_im = 200);

// |<closed_q | v>|^2 for each q; v normalized
Eigen::VectorXd overlaps(const Eigen::VectorXcd& v, const model::ClosedSpectrum& closed);

// convenience: full default analysis (bound states both sides + in-band scan)
SpectrumResult analyze(const ModelConfig& cfg, int grid_re = 400, int grid_im = 200);

} // namespace aahbath::spectrum
