#include "aahbath/model.hpp"

#include <cmath>
#include <stdexcept>

namespace aahbath::model {

double onsite_potential(int n, const ModelConfig& cfg) {
    return cfg.Delta * std::cos(2.0 * M_PI * cfg.beta * n + cfg.phi);
}

Eigen::MatrixXd build_system_hamiltonian(const ModelConfig& cfg) {
    cfg.validate();
    const int N = cfg.N_s;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(N, N);
    for (int n = 1; n <= N; ++n) H(n - 1, n - 1) = onsite_potential(n, cfg);
    for (int n = 0; n + 1 < N; ++n) {
        H(n, n + 1) = cfg.lambda;
        H(n + 1, n) = cfg.lambda;
    }
    return H;
}

ClosedSpectrum closed_spectrum(const Eigen::MatrixXd& H) {
    if (H.rows() != H.cols())
        throw std::invalid_argument("closed_spectrum: matrix must be square");
    if (!H.isApprox(H.transpose(), 1e-12))
        throw std::invalid_argument("closed_spectrum: matrix must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("closed_spectrum: eigendecomposition failed");
    ClosedSpectrum out;
    out.energies = solver.eigenvalues();
    out.states = solver.eigenvectors();
    // fix sign: first component above threshold made positive
    for (int c = 0; c < out.states.cols(); ++c) {
        for (int r = 0; r < out.states.rows(); ++r) {
            if (std::abs(out.states(r, c)) > 1e-12) {
                if (out.states(r, c) < 0) out.states.col(c) *= -1.0;
                break;
            }
        }
    }
    return out;
}

double dispersion(const std::vector<double>& k, const ModelConfig& cfg) {
    if (static_cast<int>(k.size()) != cfg.d)
        throw std::invalid_argument("dispersion: k must have length d");
    double w = 0.0;
    for (double kq : k) w += std::cos(kq);
    return w;   // 2J = 1
}

int atom_site_offset(int n, const ModelConfig& cfg) {
    if (cfg.N_s % 2 == 0)
        throw std::invalid_argument("atom_site_map: even N_s has no center site");
    if (n < 1 || n > cfg.N_s)
        throw std::invalid_argument("atom_site_map: atom index out of range");
    const int n_c = (cfg.N_s + 1) / 2;
    return n_c - n;
}

std::vector<int> atom_site_map(int n, const ModelConfig& cfg) {
    return std::vector<int>(cfg.d, atom_site_offset(n, cfg));
}

double vector_ipr(const Eigen::VectorXd& v) {
    double s = 0.0;
    for (int i = 0; i < v.size(); ++i) s += v(i) * v(i) * v(i) * v(i);
    return s;
}

} // namespace aahbath::model
