#include "aahbath/propagator.hpp"

#include <cmath>
#include <stdexcept>

#include "aahbath/model.hpp"
#include "aahbath/special.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace aahbath::prop {

namespace {

// phase i^{d*dn} as a complex constant
inline cxd quarter_phase(int q) {
    switch (((q % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

} // namespace

KernelTable build_kernel_table(const ModelConfig& cfg) {
    cfg.validate();
    KernelTable kt;
    kt.n_s = cfg.N_s;
    kt.d = cfg.d;
    kt.steps = cfg.steps();
    kt.dt = cfg.dt;
    const int T = kt.steps;
    const int nmax = cfg.N_s - 1;
    kt.k.assign(static_cast<size_t>(cfg.N_s) * (T + 1), 0.0);
    for (int lag = 0; lag <= T; ++lag) {
        const auto row = special::bessel_j_row(nmax, lag * cfg.dt);
        for (int dn = 0; dn <= nmax; ++dn) {
            double v = row[dn];
            double p = v;
            for (int q = 1; q < cfg.d; ++q) p *= v;
            kt.k[static_cast<size_t>(dn) * (T + 1) + lag] = p;
        }
    }
    return kt;
}

namespace {

// interaction-picture workspace: U(t) = V e^{-i E t} V^T from the closed chain
struct Picture {
    Eigen::MatrixXd V;
    Eigen::VectorXd E;
    void apply_U(double t, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
        Eigen::VectorXcd c = V.transpose() * in;
        for (int i = 0; i < c.size(); ++i) c(i) *= std::exp(cxd(0.0, -E(i) * t));
        out = V * c;
    }
    void apply_U_dag(double t, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
        Eigen::VectorXcd c = V.transpose() * in;
        for (int i = 0; i < c.size(); ++i) c(i) *= std::exp(cxd(0.0, E(i) * t));
        out = V * c;
    }
};

// history sweep S[dn][m] = sum_{j=0..i} K[dn][i+1-j] * A[j][m], deterministic
// fixed-size block decomposition independent of the thread count
void sweep(const KernelTable& kt, const std::vector<double>& are, const std::vector<double>& aim,
           int i, int n, std::vector<double>& sre, std::vector<double>& sim,
           std::vector<double>& scratch) {
    const int T1 = kt.steps + 1;
    constexpr int kBlock = 512;
    const int nj = i + 1;
    const int nblocks = (nj + kBlock - 1) / kBlock;
    const size_t slab = static_cast<size_t>(n) * n;
    scratch.assign(static_cast<size_t>(nblocks) * slab * 2, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (int b = 0; b < nblocks; ++b) {
        double* bre = scratch.data() + static_cast<size_t>(b) * slab * 2;
        double* bim = bre + slab;
        const int j0 = b * kBlock, j1 = std::min(nj, j0 + kBlock);
        for (int dn = 0; dn < n; ++dn) {
            const double* kp = kt.k.data() + static_cast<size_t>(dn) * T1;
            double* orow = bre + static_cast<size_t>(dn) * n;
            double* irow = bim + static_cast<size_t>(dn) * n;
            for (int j = j0; j < j1; ++j) {
                const double kv = kp[i + 1 - j];
                const double* ar = are.data() + static_cast<size_t>(j) * n;
                const double* ai = aim.data() + static_cast<size_t>(j) * n;
                for (int m = 0; m < n; ++m) {
                    orow[m] += kv * ar[m];
                    irow[m] += kv * ai[m];
                }
            }
        }
    }
    sre.assign(slab, 0.0);
    sim.assign(slab, 0.0);
    for (int b = 0; b < nblocks; ++b) {
        const double* bre = scratch.data() + static_cast<size_t>(b) * slab * 2;
        const double* bim = bre + slab;
        for (size_t q = 0; q < slab; ++q) {
            sre[q] += bre[q];
            sim[q] += bim[q];
        }
    }
}

} // namespace

Trajectory propagate(const ModelConfig& cfg, const Eigen::VectorXcd& alpha0,
                     const PropagateOptions& opts) {
    cfg.validate();
    const int n = cfg.N_s;
    if (alpha0.size() != n) throw std::invalid_argument("propagate: alpha0 has wrong length");
    if (std::abs(alpha0.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("propagate: alpha0 must be normalized");

    const KernelTable kt = build_kernel_table(cfg);
    const int T = kt.steps;
    const double dt = cfg.dt;
    const double g2 = cfg.g * cfg.g;

    Picture pic;
    {
        const auto cs = model::closed_spectrum(model::build_system_hamiltonian(cfg));
        pic.V = cs.states;
        pic.E = cs.energies;
    }

    Trajectory traj;
    traj.cfg = cfg;
    traj.times = Eigen::VectorXd::LinSpaced(T + 1, 0.0, T * dt);
    traj.amps = Eigen::MatrixXcd::Zero(T + 1, n);
    traj.amps.row(0) = alpha0.transpose();

    // split history for the real-kernel sweep
    std::vector<double> are(static_cast<size_t>(T + 1) * n, 0.0), aim(are.size(), 0.0);
    for (int m = 0; m < n; ++m) {
        are[m] = alpha0(m).real();
        aim[m] = alpha0(m).imag();
    }

    // phase factors i^{d|n-m|} per offset
    std::vector<cxd> ph(n);
    for (int dn = 0; dn < n; ++dn) ph[dn] = quarter_phase(cfg.d * dn);

    // running prefix P[dn][m] = sum_{j<=i} K[dn][i-j] A[j][m]
    std::vector<double> pre(static_cast<size_t>(n) * n, 0.0), pim(pre.size(), 0.0);
    pre.assign(static_cast<size_t>(n) * n, 0.0);
    pim.assign(pre.size(), 0.0);
    // at i = 0: K[dn][0] = delta_{dn,0}
    for (int m = 0; m < n; ++m) {
        pre[m] = are[m];
        pim[m] = aim[m];
    }

    std::vector<double> sre, sim, scratch;
    Eigen::VectorXcd gam(n), phi(n), gvec(n), gam_p(n), a_p(n), phi_p(n), gvec_p(n), tmp(n);
    gam = alpha0;

    // trapezoid fold: Phi_n = sum_m ph[|n-m|] * dt * (P[|n-m|][m]
    //                 - 0.5*K[|n-m|](t_i)*A[0][m] - 0.5*delta_{nm} endpoint)
    auto fold = [&](const std::vector<double>& zre, const std::vector<double>& zim, int lag_i,
                    const Eigen::VectorXcd& endpoint, Eigen::VectorXcd& out) {
        for (int nn = 0; nn < n; ++nn) {
            cxd acc(0.0, 0.0);
            for (int m = 0; m < n; ++m) {
                const int dn = std::abs(nn - m);
                cxd z(zre[static_cast<size_t>(dn) * n + m], zim[static_cast<size_t>(dn) * n + m]);
                z -= 0.5 * kt.at(dn, lag_i) * traj.amps(0, m);
                acc += ph[dn] * z;
            }
            acc -= 0.5 * endpoint(nn);   // dn = 0 endpoint term, K(0) = 1
            out(nn) = dt * acc;
        }
    };

    for (int i = 0; i < T; ++i) {
        const double ti = i * dt, tip = (i + 1) * dt;
        // F at t_i (gamma' = -g^2 U^dag(t) Phi(t))
        Eigen::VectorXcd a_i = traj.amps.row(i).transpose();
        fold(pre, pim, i, a_i, phi);
        pic.apply_U_dag(ti, phi, tmp);
        gvec = -g2 * tmp;

        gam_p = gam + dt * gvec;
        pic.apply_U(tip, gam_p, a_p);

        // one heavy sweep: S[dn][m] = sum_{j<=i} K[dn][i+1-j] A[j][m]
        sweep(kt, are, aim, i, n, sre, sim, scratch);

        Eigen::VectorXcd gam_n = gam;
        for (int it = 0; it < std::max(1, opts.corrector_iters); ++it) {
            // prefix with predicted endpoint
            std::vector<double> zre = sre, zim = sim;
            for (int m = 0; m < n; ++m) {
                zre[m] += a_p(m).real();
                zim[m] += a_p(m).imag();
            }
            fold(zre, zim, i + 1, a_p, phi_p);
            pic.apply_U_dag(tip, phi_p, tmp);
            gvec_p = -g2 * tmp;
            gam_n = gam + 0.5 * dt * (gvec + gvec_p);
            pic.apply_U(tip, gam_n, a_p);
        }
        gam = gam_n;
        if (!a_p.allFinite())
            throw std::runtime_error("propagate: non-finite amplitude at step " +
                                     std::to_string(i + 1) + " (t = " + std::to_string(tip) + ")");
        traj.amps.row(i + 1) = a_p.transpose();
        for (int m = 0; m < n; ++m) {
            are[static_cast<size_t>(i + 1) * n + m] = a_p(m).real();
            aim[static_cast<size_t>(i + 1) * n + m] = a_p(m).imag();
        }
        // P(i+1) = S + K(0) A(i+1)
        pre = sre;
        pim = sim;
        for (int m = 0; m < n; ++m) {
            pre[m] += a_p(m).real();
            pim[m] += a_p(m).imag();
        }
    }
    return traj;
}

Trajectory propagate_site(const ModelConfig& cfg, int n0, const PropagateOptions& opts) {
    if (n0 < 1 || n0 > cfg.N_s) throw std::invalid_argument("propagate_site: n0 out of range");
    Eigen::VectorXcd a0 = Eigen::VectorXcd::Zero(cfg.N_s);
    a0(n0 - 1) = 1.0;
    return propagate(cfg, a0, opts);
}

Eigen::VectorXd system_norm(const Trajectory& traj) {
    Eigen::VectorXd out(traj.times.size());
    for (int i = 0; i < traj.times.size(); ++i) out(i) = traj.amps.row(i).squaredNorm();
    return out;
}

double dt_convergence_probe(const ModelConfig& cfg, int n0, double t_probe) {
    ModelConfig a = cfg, b = cfg;
    a.t_max = t_probe;
    b.t_max = t_probe;
    b.dt = cfg.dt / 2.0;
    const auto ta = propagate_site(a, n0);
    const auto tb = propagate_site(b, n0);
    const double na = ta.amps.row(ta.steps()).norm();
    const double nb = tb.amps.row(tb.steps()).norm();
    return std::abs(na - nb);
}

} // namespace aahbath::prop
