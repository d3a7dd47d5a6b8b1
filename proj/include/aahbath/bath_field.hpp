// bath_field.hpp — reconstruction of the bath excitation field from a stored
// chain trajectory: momentum amplitudes beta_k(t) and position amplitudes
//
//   beta_r(t) = -i g int_0^t ds sum_n alpha_n(s)
//               prod_q i^{|m_{n,q} - r_q|} J_{|m_{n,q} - r_q|}(t - s)
//
// (trapezoidal rule on the stored grid). Snapshots over a region use either
// the direct kernel sum (reference path) or a spectral route (beta_k on a
// fine k-grid + FFT) that emulates the infinite bath; the two agree inside
// the light-cone validity window.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "aahbath/config.hpp"
#include "aahbath/propagator.hpp"

namespace aahbath::bath {

using cxd = std::complex<double>;
using prop::Trajectory;

struct BathSnapshot {
    double t = 0.0;
    std::vector<int> lo, hi;        // inclusive axis-aligned box
    std::vector<cxd> field;         // row-major over the box
    double norm_in_region = 0.0;

    int extent(int q) const { return hi[q] - lo[q] + 1; }
    size_t size() const {
        size_t s = 1;
        for (size_t q = 0; q < lo.size(); ++q) s *= extent(static_cast<int>(q));
        return s;
    }
    const cxd& at(const std::vector<int>& r) const;
};

// Eq.-(13)-style momentum amplitude, k in [-pi, pi]^d
cxd beta_k(const std::vector<double>& k, double t, const Trajectory& traj);

// position amplitude at integer site r (any point of Z^d)
cxd beta_r(const std::vector<int>& r, double t, const Trajectory& traj);

enum class SnapshotMethod { direct, spectral, automatic };

// field over the box [lo, hi]; box must fit inside the configured bath extent
BathSnapshot bath_snapshot(double t, const std::vector<int>& lo, const std::vector<int>& hi,
                           const Trajectory& traj,
                           SnapshotMethod method = SnapshotMethod::automatic);

// full centered box of the configured bath
BathSnapshot bath_snapshot_full(double t, const Trajectory& traj,
                                SnapshotMethod method = SnapshotMethod::automatic);

} // namespace aahbath::bath
