// propagator.hpp — non-Markovian evolution of the chain amplitudes:
//
//   i da_n/dt = lambda (a_{n+1} + a_{n-1}) + Delta cos(2 pi beta n + phi) a_n
//               - i g^2 sum_m i^{d|n-m|} int_0^t ds a_m(s) [J_{|n-m|}(t-s)]^d
//
// integrated in the interaction picture of the closed chain: Heun
// predictor-corrector in time, trapezoidal rule on the stored history, the
// corrector re-evaluating the history integral with the predicted endpoint.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "aahbath/config.hpp"

namespace aahbath::prop {

using cxd = std::complex<double>;

struct KernelTable {
    int n_s = 0, d = 0, steps = 0;
    double dt = 0.0;
    // K[dn * (steps+1) + lag] = J_dn(lag*dt)^d
    std::vector<double> k;
    double at(int dn, int lag) const { return k[static_cast<size_t>(dn) * (steps + 1) + lag]; }
};

KernelTable build_kernel_table(const ModelConfig& cfg);

struct Trajectory {
    Eigen::VectorXd times;          // uniform grid, step dt
    Eigen::MatrixXcd amps;          // (T+1) x N_s, row i = alpha(t_i)
    ModelConfig cfg;
    int steps() const { return static_cast<int>(times.size()) - 1; }
};

struct PropagateOptions {
    int corrector_iters = 1;        // 1 = plain Heun corrector
};

Trajectory propagate(const ModelConfig& cfg, const Eigen::VectorXcd& alpha0,
                     const PropagateOptions& opts = {});
Trajectory propagate_site(const ModelConfig& cfg, int n0, const PropagateOptions& opts = {});

// sum_n |alpha_n(t_i)|^2 per step
Eigen::VectorXd system_norm(const Trajectory& traj);

// dt-adequacy probe: runs a short horizon at dt and dt/2 and reports the
// final-state norm difference; values above 1e-4 flag a too-large step.
double dt_convergence_probe(const ModelConfig& cfg, int n0, double t_probe);

} // namespace aahbath::prop
