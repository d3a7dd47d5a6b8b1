#include "aahbath/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aahbath/green.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace aahbath::spectrum {

namespace {

Eigen::MatrixXcd reduced_from_row(cxd e, const ModelConfig& cfg, const std::vector<cxd>& green) {
    const int N = cfg.N_s;
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(N, N);
    for (int n = 0; n < N; ++n) {
        M(n, n) = model::onsite_potential(n + 1, cfg) + cfg.g * cfg.g * green[0] - e;
        if (n + 1 < N) {
            M(n, n + 1) = cfg.lambda;
            M(n + 1, n) = cfg.lambda;
        }
    }
    for (int n = 0; n < N; ++n)
        for (int j = 0; j < N; ++j)
            if (n != j) M(n, j) += cfg.g * cfg.g * green[std::abs(n - j)];
    return M;
}

cxd det_slice(cxd e, const ModelConfig& cfg) {
    const auto row = green::slice_row(cfg.N_s - 1, e, cfg.d);
    return reduced_from_row(e, cfg, row).determinant();
}

// inverse iteration for the (near-)null vector of M, seeded by the closed
// eigenvector nearest in energy
Eigen::VectorXcd null_vector(const Eigen::MatrixXcd& M, const Eigen::VectorXcd& seed,
                             double* residual) {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
    Eigen::VectorXcd v = seed.normalized();
    for (int it = 0; it < 50; ++it) {
        Eigen::VectorXcd w = lu.solve(v);
        const double nw = w.norm();
        if (!std::isfinite(nw) || nw == 0.0) break;
        w /= nw;
        if ((w - v).norm() < 1e-14 || (w + v).norm() < 1e-14) { v = w; break; }
        v = w;
    }
    if (residual) *residual = (M * v).norm();
    return v;
}

} // namespace

Eigen::MatrixXcd reduced_matrix(cxd e, const ModelConfig& cfg, const std::vector<cxd>& green) {
    if (static_cast<int>(green.size()) < cfg.N_s)
        throw std::invalid_argument("reduced_matrix: green row too short");
    return reduced_from_row(e, cfg, green);
}

Eigen::MatrixXd reduced_matrix_real(double e, const ModelConfig& cfg) {
    if (std::abs(e) <= cfg.d)
        throw std::invalid_argument("reduced_matrix_real: |e| must exceed d");
    const auto row = green::green_quadrature_row(cfg.N_s - 1, e, cfg.d);
    const int N = cfg.N_s;
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N, N);
    for (int n = 0; n < N; ++n) {
        M(n, n) = model::onsite_potential(n + 1, cfg) + cfg.g * cfg.g * row[0].real() - e;
        if (n + 1 < N) {
            M(n, n + 1) = cfg.lambda;
            M(n + 1, n) = cfg.lambda;
        }
    }
    for (int n = 0; n < N; ++n)
        for (int j = 0; j < N; ++j)
            if (n != j) M(n, j) += cfg.g * cfg.g * row[std::abs(n - j)].real();
    return M;
}

LogDet log_det(const Eigen::MatrixXcd& M) {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
    const auto& U = lu.matrixLU();
    double la = 0.0, arg = 0.0;
    for (int i = 0; i < U.rows(); ++i) {
        const cxd u = U(i, i);
        const double au = std::abs(u);
        if (au == 0.0) return {-std::numeric_limits<double>::infinity(), 0.0};
        la += std::log(au);
        arg += std::arg(u);
    }
    // permutation parity
    if (lu.permutationP().determinant() < 0) arg += M_PI;
    arg = std::remainder(arg, 2.0 * M_PI);
    return {la, arg};
}

Eigen::VectorXd overlaps(const Eigen::VectorXcd& v, const model::ClosedSpectrum& closed) {
    const Eigen::VectorXcd vn = v.normalized();
    Eigen::VectorXd out(closed.energies.size());
    for (int q = 0; q < closed.energies.size(); ++q) {
        const cxd ip = closed.states.col(q).cast<cxd>().dot(vn);
        out(q) = std::norm(ip);
    }
    return out;
}

std::vector<BoundState> find_bound_states(const ModelConfig& cfg, double lo, double hi,
                                          int grid_n) {
    if (lo >= hi) throw std::invalid_argument("find_bound_states: empty range");
    const double margin = 1e-3;
    if (lo < cfg.d + margin && hi > -cfg.d - margin)
        if (!(hi <= -cfg.d - margin || lo >= cfg.d + margin))
            throw std::invalid_argument("find_bound_states: range must exclude the band");
    const auto closed = model::closed_spectrum(model::build_system_hamiltonian(cfg));

    auto det_at = [&](double e) {
        const Eigen::MatrixXd M = reduced_matrix_real(e, cfg);
        return M.determinant();
    };
    std::vector<double> es(grid_n + 1), ds(grid_n + 1);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i <= grid_n; ++i) {
        es[i] = lo + (hi - lo) * i / grid_n;
        ds[i] = det_at(es[i]);
    }
    std::vector<BoundState> out;
    for (int i = 0; i < grid_n; ++i) {
        if (!(ds[i] == 0.0) && !(ds[i + 1] == 0.0) && std::signbit(ds[i]) == std::signbit(ds[i + 1]))
            continue;
        double a = es[i], b = es[i + 1], fa = ds[i];
        while (b - a > 1e-12) {
            const double m = 0.5 * (a + b);
            const double fm = det_at(m);
            if (std::signbit(fm) == std::signbit(fa)) { a = m; fa = fm; }
            else b = m;
        }
        BoundState bs;
        bs.e = 0.5 * (a + b);
        const Eigen::MatrixXd M = reduced_matrix_real(bs.e, cfg);
        // seed with the closed eigenvector of nearest energy
        int best = 0;
        for (int q = 1; q < closed.energies.size(); ++q)
            if (std::abs(closed.energies(q) - bs.e) < std::abs(closed.energies(best) - bs.e)) best = q;
        double resid = 0.0;
        const Eigen::VectorXcd v =
            null_vector(M.cast<cxd>(), closed.states.col(best).cast<cxd>(), &resid);
        // bound-state null vectors are real up to a global phase
        int imax = 0;
        for (int r = 1; r < v.size(); ++r)
            if (std::abs(v(r)) > std::abs(v(imax))) imax = r;
        const cxd phase = v(imax) / std::abs(v(imax));
        bs.vector = (v / phase).real();
        if (bs.vector(imax) < 0) bs.vector = -bs.vector;
        bs.overlaps = overlaps(v, closed);
        bs.residual = resid;
        out.push_back(std::move(bs));
    }
    std::sort(out.begin(), out.end(), [](const BoundState& x, const BoundState& y) { return x.e < y.e; });
    return out;
}

SpectrumResult scan_complex_roots(const ModelConfig& cfg, const ScanRegion& region,
                                  int grid_re, int grid_im) {
    if (region.re_lo >= region.re_hi || region.im_lo >= region.im_hi || region.im_hi > 0.0 + 1e-15)
        throw std::invalid_argument("scan_complex_roots: bad region");
    if (std::max(std::abs(region.re_lo), std::abs(region.re_hi)) > cfg.d + 1e-12)
        throw std::invalid_argument("scan_complex_roots: region must satisfy |Re e| <= d");
    SpectrumResult res;
    res.region = region;
    res.grid_re = grid_re;
    res.grid_im = grid_im;

    const auto closed = model::closed_spectrum(model::build_system_hamiltonian(cfg));

    std::vector<double> xs(grid_re + 1), ys(grid_im + 1);
    for (int i = 0; i <= grid_re; ++i)
        xs[i] = region.re_lo + (region.re_hi - region.re_lo) * i / grid_re;
    for (int j = 0; j <= grid_im; ++j)
        ys[j] = region.im_lo + (region.im_hi - region.im_lo) * j / grid_im;

    Eigen::MatrixXcd D(grid_re + 1, grid_im + 1);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 4) collapse(2)
#endif
    for (int i = 0; i <= grid_re; ++i)
        for (int j = 0; j <= grid_im; ++j)
            D(i, j) = det_slice(cxd(xs[i], ys[j]), cfg);

    // robust determinant scale: median |det| over the grid
    std::vector<double> mags;
    mags.reserve((grid_re + 1) * (grid_im + 1));
    for (int i = 0; i <= grid_re; ++i)
        for (int j = 0; j <= grid_im; ++j) mags.push_back(std::abs(D(i, j)));
    std::nth_element(mags.begin(), mags.begin() + mags.size() / 2, mags.end());
    res.det_scale = std::max(mags[mags.size() / 2], 1e-300);
    const double tol = 1e-10 * res.det_scale;

    // candidate cells: both Re(det) and Im(det) change sign among corners
    std::vector<cxd> cand;
    for (int i = 0; i < grid_re; ++i) {
        for (int j = 0; j < grid_im; ++j) {
            const cxd c[4] = {D(i, j), D(i + 1, j), D(i, j + 1), D(i + 1, j + 1)};
            double rmin = 1e300, rmax = -1e300, imin = 1e300, imax = -1e300;
            for (const cxd& z : c) {
                rmin = std::min(rmin, z.real()); rmax = std::max(rmax, z.real());
                imin = std::min(imin, z.imag()); imax = std::max(imax, z.imag());
            }
            if (rmin < 0.0 && rmax > 0.0 && imin < 0.0 && imax > 0.0)
                cand.emplace_back(0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1]));
        }
    }

    struct Polished { cxd e; double fa; double cr; bool ok; };
    std::vector<Polished> pol(cand.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (size_t c = 0; c < cand.size(); ++c) {
        cxd e = cand[c];
        const double h = 1e-7;
        bool converged = false;
        double fa = 0.0;
        for (int it = 0; it < 60; ++it) {
            const cxd f0 = det_slice(e, cfg);
            fa = std::abs(f0);
            if (fa < tol) { converged = true; break; }
            const cxd df = (det_slice(e + h, cfg) - det_slice(e - h, cfg)) / (2.0 * h);
            if (df == cxd(0.0)) break;
            cxd step = f0 / df;
            bool improved = false;
            for (int halve = 0; halve < 25; ++halve) {
                const cxd e1 = e - step;
                if (std::abs(det_slice(e1, cfg)) < fa) { e = e1; improved = true; break; }
                step *= 0.5;
            }
            if (!improved) break;
        }
        // Cauchy-Riemann defect of the evaluator at the (near-)root
        const cxd dre = (det_slice(e + h, cfg) - det_slice(e - h, cfg)) / (2.0 * h);
        const cxd dim = (det_slice(e + cxd(0, h), cfg) - det_slice(e - cxd(0, h), cfg)) / (cxd(0, 2.0 * h));
        const double cr = std::abs(dim - dre) / (std::abs(dim) + std::abs(dre) + 1e-300);
        pol[c] = {e, fa, cr, converged};
    }

    std::vector<Resonance> roots;
    for (size_t c = 0; c < cand.size(); ++c) {
        const auto& p = pol[c];
        const bool analytic_here = p.cr <= 0.3;
        if (p.ok && analytic_here && p.e.imag() <= 1e-12) {
            Resonance r;
            r.e = p.e;
            r.residual = p.fa / res.det_scale;
            r.cr_defect = p.cr;
            roots.push_back(std::move(r));
        } else {
            res.unresolved.push_back({cand[c], p.fa, p.cr});
        }
    }
    // dedupe within cluster radius 1e-8, deterministic order
    std::sort(roots.begin(), roots.end(), [](const Resonance& a, const Resonance& b) {
        if (a.e.real() != b.e.real()) return a.e.real() < b.e.real();
        return a.e.imag() < b.e.imag();
    });
    std::vector<Resonance> uniq;
    for (auto& r : roots) {
        if (!uniq.empty() && std::abs(r.e - uniq.back().e) < 1e-8) continue;
        uniq.push_back(std::move(r));
    }
    // null vectors and overlaps at accepted roots
    for (auto& r : uniq) {
        const auto row = green::slice_row(cfg.N_s - 1, r.e, cfg.d);
        const Eigen::MatrixXcd M = reduced_from_row(r.e, cfg, row);
        int best = 0;
        for (int q = 1; q < closed.energies.size(); ++q)
            if (std::abs(closed.energies(q) - r.e.real()) <
                std::abs(closed.energies(best) - r.e.real())) best = q;
        double resid = 0.0;
        r.vector = null_vector(M, closed.states.col(best).cast<cxd>(), &resid);
        r.overlaps = overlaps(r.vector, closed);
    }
    res.resonances = std::move(uniq);
    return res;
}

SpectrumResult analyze(const ModelConfig& cfg, int grid_re, int grid_im) {
    const double margin = 1e-3;
    const double outer = cfg.d + std::abs(cfg.Delta) + 2.0 * std::abs(cfg.lambda) + 1.0;
    ScanRegion region{-cfg.d + margin, cfg.d - margin, -0.5, 0.0};
    SpectrumResult res = scan_complex_roots(cfg, region, grid_re, grid_im);
    auto lowers = find_bound_states(cfg, -outer, -cfg.d - margin);
    auto uppers = find_bound_states(cfg, cfg.d + margin, outer);
    res.bound_states = std::move(lowers);
    res.bound_states.insert(res.bound_states.end(), uppers.begin(), uppers.end());
    return res;
}

} // namespace aahbath::spectrum
