// oracle.hpp — exact single-excitation reference on the finite chain+bath
// lattice: sparse H = H_s + H_b + H_I with a periodic bath, propagated by a
// Chebyshev expansion of exp(-iHt) (dense eigendecomposition retained as a
// second exact route for small sizes).
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

#include "aahbath/config.hpp"

namespace aahbath::oracle {

using cxd = std::complex<double>;

struct FullHamiltonian {
    Eigen::SparseMatrix<double> H;    // symmetric, dimension N_s + N_b^d
    int n_s = 0, n_bath = 0, d = 0, n_b = 0;
    double e_min = 0.0, e_max = 0.0;  // spectral bounds (Gershgorin)

    int dim() const { return n_s + n_bath; }
    // row-major index of bath site r (each component in [-(N_b-1)/2, (N_b-1)/2]
    // for odd N_b; general N_b uses 0..N_b-1 shifted)
    int bath_index(const std::vector<int>& r) const;
};

// pre: N_b^d <= 2e5
FullHamiltonian build_full(const ModelConfig& cfg);

// psi0 on the full lattice; returns states at the requested times.
// Chebyshev expansion order chosen so the truncated tail is < 1e-12 per step.
std::vector<Eigen::VectorXcd> exact_propagate(const FullHamiltonian& H,
                                              const Eigen::VectorXcd& psi0,
                                              const std::vector<double>& times);

// dense eigendecomposition route (dim <= ~4000), second exact method
std::vector<Eigen::VectorXcd> exact_propagate_dense(const FullHamiltonian& H,
                                                    const Eigen::VectorXcd& psi0,
                                                    const std::vector<double>& times);

// initial excitation on chain site n0 (1-based)
Eigen::VectorXcd chain_site_state(const FullHamiltonian& H, int n0);

// conservative validity horizon N_b / (2 v_max), v_max = d in units 2J = 1
double recurrence_time(const ModelConfig& cfg);

} // namespace aahbath::oracle
