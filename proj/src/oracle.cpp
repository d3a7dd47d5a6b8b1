#include "aahbath/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "aahbath/model.hpp"
#include "aahbath/special.hpp"

namespace aahbath::oracle {

int FullHamiltonian::bath_index(const std::vector<int>& r) const {
    if (static_cast<int>(r.size()) != d)
        throw std::invalid_argument("bath_index: wrong dimension");
    const int off = (n_b - 1) / 2;
    int idx = 0;
    for (int q = 0; q < d; ++q) {
        int c = r[q] + off;
        if (c < 0 || c >= n_b) throw std::invalid_argument("bath_index: site outside bath");
        idx = idx * n_b + c;
    }
    return n_s + idx;
}

FullHamiltonian build_full(const ModelConfig& cfg) {
    cfg.validate();
    double nbath_d = std::pow(static_cast<double>(cfg.N_b), cfg.d);
    if (nbath_d > 2e5)
        throw std::invalid_argument("build_full: bath size exceeds the 2e5 site cap");
    FullHamiltonian out;
    out.n_s = cfg.N_s;
    out.d = cfg.d;
    out.n_b = cfg.N_b;
    out.n_bath = static_cast<int>(nbath_d + 0.5);
    const int dim = out.dim();

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(dim) * (2 * cfg.d + 2));
    // chain block
    for (int n = 1; n <= cfg.N_s; ++n)
        trip.emplace_back(n - 1, n - 1, model::onsite_potential(n, cfg));
    for (int n = 0; n + 1 < cfg.N_s; ++n) {
        trip.emplace_back(n, n + 1, cfg.lambda);
        trip.emplace_back(n + 1, n, cfg.lambda);
    }
    // bath block: -J sum_<ij> (periodic), J = 1/2 in units 2J = 1
    const double hop = -0.5;
    const int nb = cfg.N_b;
    std::vector<int> coord(cfg.d, 0);
    for (int site = 0; site < out.n_bath; ++site) {
        int rem = site;
        for (int q = cfg.d - 1; q >= 0; --q) {
            coord[q] = rem % nb;
            rem /= nb;
        }
        for (int q = 0; q < cfg.d; ++q) {
            // neighbor in +q direction with wraparound; both directions added
            // once by symmetry of the loop over all sites
            if (nb < 2) continue;
            int stride = 1;
            for (int p = q + 1; p < cfg.d; ++p) stride *= nb;
            const int cq = coord[q];
            const int cq_next = (cq + 1) % nb;
            const int nbr = site + (cq_next - cq) * stride;
            if (nb == 2 && cq == 1) continue;   // avoid double bond on a 2-ring
            trip.emplace_back(cfg.N_s + site, cfg.N_s + nbr, hop);
            trip.emplace_back(cfg.N_s + nbr, cfg.N_s + site, hop);
        }
    }
    // coupling: atom n to its lattice site
    for (int n = 1; n <= cfg.N_s; ++n) {
        const auto r = model::atom_site_map(n, cfg);
        const int bi = out.bath_index(r);
        trip.emplace_back(n - 1, bi, cfg.g);
        trip.emplace_back(bi, n - 1, cfg.g);
    }
    out.H.resize(dim, dim);
    out.H.setFromTriplets(trip.begin(), trip.end());

    // Gershgorin bounds
    double lo = 0.0, hi = 0.0;
    for (int k = 0; k < out.H.outerSize(); ++k) {
        double diag = 0.0, rad = 0.0;
        for (Eigen::SparseMatrix<double>::InnerIterator it(out.H, k); it; ++it) {
            if (it.row() == it.col()) diag = it.value();
            else rad += std::abs(it.value());
        }
        lo = std::min(lo, diag - rad);
        hi = std::max(hi, diag + rad);
    }
    out.e_min = lo - 0.1;
    out.e_max = hi + 0.1;
    return out;
}

Eigen::VectorXcd chain_site_state(const FullHamiltonian& H, int n0) {
    if (n0 < 1 || n0 > H.n_s) throw std::invalid_argument("chain_site_state: n0 out of range");
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(H.dim());
    psi(n0 - 1) = 1.0;
    return psi;
}

std::vector<Eigen::VectorXcd> exact_propagate(const FullHamiltonian& H,
                                              const Eigen::VectorXcd& psi0,
                                              const std::vector<double>& times) {
    if (std::abs(psi0.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("exact_propagate: psi0 must be normalized");
    const double a = 0.5 * (H.e_max + H.e_min);
    const double b = 0.5 * (H.e_max - H.e_min);
    // Htilde v = (H v - a v) / b, spectrum mapped into [-1, 1]
    auto apply_ht = [&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd {
        return (H.H * v - a * v) / b;
    };

    std::vector<Eigen::VectorXcd> out;
    out.reserve(times.size());
    Eigen::VectorXcd psi = psi0;
    double t_prev = 0.0;
    for (double t : times) {
        const double dt = t - t_prev;
        if (dt < -1e-12) throw std::invalid_argument("exact_propagate: times must be ascending");
        if (std::abs(dt) > 1e-14) {
            const double z = b * dt;
            // expansion order: |J_k(z)| falls superexponentially past k = |z|
            int K = static_cast<int>(std::abs(z) + 12.0 * std::cbrt(std::abs(z) + 1.0) + 25.0);
            const auto jrow = special::bessel_j_row(K, std::abs(z));
            // exp(-i H dt) = e^{-i a dt} sum_k (2 - delta_k0)(-i)^k J_k(z) T_k(Htilde)
            Eigen::VectorXcd tkm1 = psi;                 // T_0 psi
            Eigen::VectorXcd tk = apply_ht(psi);         // T_1 psi
            Eigen::VectorXcd acc = jrow[0] * tkm1;
            cxd mi(0.0, -1.0);
            cxd phase = mi;
            acc += 2.0 * phase * jrow[1] * tk;
            for (int k = 2; k <= K; ++k) {
                Eigen::VectorXcd tkp = 2.0 * apply_ht(tk) - tkm1;
                tkm1.swap(tk);
                tk.swap(tkp);
                phase *= mi;
                acc += 2.0 * phase * jrow[k] * tk;
            }
            psi = std::exp(cxd(0.0, -a * dt)) * acc;
            const double drift = std::abs(psi.norm() - 1.0);
            if (drift > 1e-10)
                throw std::runtime_error("exact_propagate: norm drift " + std::to_string(drift));
        }
        out.push_back(psi);
        t_prev = t;
    }
    return out;
}

std::vector<Eigen::VectorXcd> exact_propagate_dense(const FullHamiltonian& H,
                                                    const Eigen::VectorXcd& psi0,
                                                    const std::vector<double>& times) {
    if (H.dim() > 4000)
        throw std::invalid_argument("exact_propagate_dense: dimension too large for the dense route");
    Eigen::MatrixXd Hd = Eigen::MatrixXd(H.H);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Hd);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("exact_propagate_dense: eigendecomposition failed");
    const Eigen::VectorXcd c = es.eigenvectors().transpose().cast<cxd>() * psi0;
    std::vector<Eigen::VectorXcd> out;
    out.reserve(times.size());
    for (double t : times) {
        Eigen::VectorXcd ct = c;
        for (int i = 0; i < ct.size(); ++i) ct(i) *= std::exp(cxd(0.0, -es.eigenvalues()(i) * t));
        out.push_back(es.eigenvectors().cast<cxd>() * ct);
    }
    return out;
}

double recurrence_time(const ModelConfig& cfg) {
    return cfg.N_b / (2.0 * cfg.d);
}

} // namespace aahbath::oracle
