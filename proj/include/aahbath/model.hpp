// model.hpp — AAH chain Hamiltonian, its eigendecomposition, bath dispersion,
// and the atom -> lattice-site geometry along the body diagonal.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "aahbath/config.hpp"

namespace aahbath::model {

// Delta * cos(2 pi beta n + phi), n is the 1-based site index.
double onsite_potential(int n, const ModelConfig& cfg);

// Tridiagonal open-boundary chain: off-diagonals lambda, diagonal from
// onsite_potential.
Eigen::MatrixXd build_system_hamiltonian(const ModelConfig& cfg);

struct ClosedSpectrum {
    Eigen::VectorXd energies;   // ascending
    Eigen::MatrixXd states;     // orthonormal columns, first nonzero component positive
};

// Full symmetric eigendecomposition with deterministic sign fixing.
ClosedSpectrum closed_spectrum(const Eigen::MatrixXd& H);

// omega(k) = 2J sum_q cos k_q, in units 2J = 1.
double dispersion(const std::vector<double>& k, const ModelConfig& cfg);

// r_n = (n_c - n) * (1,...,1) with n_c = (N_s+1)/2. Odd N_s only.
std::vector<int> atom_site_map(int n, const ModelConfig& cfg);

// scalar offset along the body diagonal (all axes are equal)
int atom_site_offset(int n, const ModelConfig& cfg);

// IPR of a single (real or complex) vector, sum |v_i|^4 for normalized v
double vector_ipr(const Eigen::VectorXd& v);

} // namespace aahbath::model
