#include "aahbath/bath_field.hpp"

#include <cmath>
#include <fftw3.h>
#include <stdexcept>

#include "aahbath/model.hpp"
#include "aahbath/special.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace aahbath::bath {

namespace {

constexpr double kPi = 3.14159265358979323846;

inline cxd quarter_phase(int q) {
    switch (((q % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

// trapezoid decomposition of [0, t] over the stored grid; a fractional final
// panel (alpha linearly interpolated at t) handles off-grid times
struct TimeGrid {
    int full_steps;
    double frac;
};

TimeGrid time_grid(double t, const Trajectory& traj) {
    const double dt = traj.cfg.dt;
    if (t < -1e-12 || t > traj.times(traj.steps()) + 1e-9)
        throw std::invalid_argument("bath field: t outside the stored trajectory");
    int k = static_cast<int>(std::floor(t / dt + 1e-9));
    k = std::min(k, traj.steps());
    double frac = t - k * dt;
    if (frac < 1e-9 * dt) frac = 0.0;
    return {k, frac};
}

} // namespace

const cxd& BathSnapshot::at(const std::vector<int>& r) const {
    size_t idx = 0;
    for (size_t q = 0; q < lo.size(); ++q) {
        const int c = r[q] - lo[q];
        if (c < 0 || c >= extent(static_cast<int>(q)))
            throw std::invalid_argument("BathSnapshot::at: site outside region");
        idx = idx * extent(static_cast<int>(q)) + c;
    }
    return field[idx];
}

cxd beta_k(const std::vector<double>& k, double t, const Trajectory& traj) {
    const ModelConfig& cfg = traj.cfg;
    if (static_cast<int>(k.size()) != cfg.d)
        throw std::invalid_argument("beta_k: k must have length d");
    for (double kq : k)
        if (kq < -kPi - 1e-12 || kq > kPi + 1e-12)
            throw std::invalid_argument("beta_k: k outside [-pi, pi]");
    const auto tg = time_grid(t, traj);
    const double dt = cfg.dt;
    const double omega = model::dispersion(k, cfg);
    double ksum = 0.0;
    for (double kq : k) ksum += kq;

    std::vector<cxd> ph(cfg.N_s);
    for (int n = 1; n <= cfg.N_s; ++n)
        ph[n - 1] = std::exp(cxd(0.0, -ksum * model::atom_site_offset(n, cfg)));
    auto integrand = [&](double s, const Eigen::RowVectorXcd& alpha) {
        cxd a(0.0, 0.0);
        for (int n = 0; n < cfg.N_s; ++n) a += ph[n] * alpha(n);
        return std::exp(cxd(0.0, (t - s) * omega)) * a;
    };

    cxd acc(0.0, 0.0);
    const int K = tg.full_steps;
    for (int j = 0; j <= K; ++j) {
        const double w = (K == 0) ? 0.0 : ((j == 0 || j == K) ? 0.5 * dt : dt);
        if (w != 0.0) acc += w * integrand(j * dt, traj.amps.row(j));
    }
    if (tg.frac > 0.0) {
        const double th = tg.frac / dt;
        const Eigen::RowVectorXcd a_interp =
            (1.0 - th) * traj.amps.row(K) + th * traj.amps.row(std::min(K + 1, traj.steps()));
        acc += 0.5 * tg.frac * (integrand(K * dt, traj.amps.row(K)) + integrand(t, a_interp));
    }
    const double pref = cfg.g / std::pow(2.0 * kPi, 0.5 * cfg.d);
    return cxd(0.0, -1.0) * pref * acc;
}

cxd beta_r(const std::vector<int>& r, double t, const Trajectory& traj) {
    const ModelConfig& cfg = traj.cfg;
    if (static_cast<int>(r.size()) != cfg.d)
        throw std::invalid_argument("beta_r: r must have length d");
    const auto tg = time_grid(t, traj);
    const double dt = cfg.dt;

    int max_off = 0;
    for (int n = 1; n <= cfg.N_s; ++n) {
        const int x = model::atom_site_offset(n, cfg);
        for (int q = 0; q < cfg.d; ++q) max_off = std::max(max_off, std::abs(x - r[q]));
    }
    auto node = [&](double s, const Eigen::RowVectorXcd& alpha) {
        const auto jrow = special::bessel_j_row(max_off, t - s);
        cxd term(0.0, 0.0);
        for (int n = 1; n <= cfg.N_s; ++n) {
            const int x = model::atom_site_offset(n, cfg);
            cxd kernel(1.0, 0.0);
            for (int q = 0; q < cfg.d; ++q) {
                const int off = std::abs(x - r[q]);
                kernel *= quarter_phase(off) * jrow[off];
            }
            term += alpha(n - 1) * kernel;
        }
        return term;
    };
    cxd acc(0.0, 0.0);
    const int K = tg.full_steps;
    for (int j = 0; j <= K; ++j) {
        const double w = (K == 0) ? 0.0 : ((j == 0 || j == K) ? 0.5 * dt : dt);
        if (w != 0.0) acc += w * node(j * dt, traj.amps.row(j));
    }
    if (tg.frac > 0.0) {
        const double th = tg.frac / dt;
        const Eigen::RowVectorXcd a_interp =
            (1.0 - th) * traj.amps.row(K) + th * traj.amps.row(std::min(K + 1, traj.steps()));
        acc += 0.5 * tg.frac * (node(K * dt, traj.amps.row(K)) + node(t, a_interp));
    }
    return cxd(0.0, -cfg.g) * acc;
}

namespace {

BathSnapshot snapshot_direct(double t, const std::vector<int>& lo, const std::vector<int>& hi,
                             const Trajectory& traj) {
    const ModelConfig& cfg = traj.cfg;
    BathSnapshot snap;
    snap.t = t;
    snap.lo = lo;
    snap.hi = hi;
    snap.field.assign(snap.size(), cxd(0.0));
    const auto tg = time_grid(t, traj);
    if (tg.frac > 0.0)
        throw std::invalid_argument("bath_snapshot: t must lie on the trajectory grid");
    const double dt = cfg.dt;
    const int T = tg.full_steps;

    int max_off = 0;
    for (int q = 0; q < cfg.d; ++q) {
        for (int n = 1; n <= cfg.N_s; ++n) {
            const int x = model::atom_site_offset(n, cfg);
            max_off = std::max({max_off, std::abs(x - lo[q]), std::abs(x - hi[q])});
        }
    }
    // B[off][j] = J_off(t - s_j)
    std::vector<double> B(static_cast<size_t>(max_off + 1) * (T + 1));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int j = 0; j <= T; ++j) {
        const auto row = special::bessel_j_row(max_off, t - j * dt);
        for (int off = 0; off <= max_off; ++off)
            B[static_cast<size_t>(off) * (T + 1) + j] = row[off];
    }
    int ext[3] = {1, 1, 1};
    for (int q = 0; q < cfg.d; ++q) ext[q] = snap.extent(q);
    const size_t total = snap.size();

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 64)
#endif
    for (size_t idx = 0; idx < total; ++idx) {
        int r[3] = {0, 0, 0};
        size_t rem = idx;
        for (int q = cfg.d - 1; q >= 0; --q) {
            r[q] = lo[q] + static_cast<int>(rem % ext[q]);
            rem /= ext[q];
        }
        cxd acc(0.0, 0.0);
        for (int n = 1; n <= cfg.N_s; ++n) {
            const int x = model::atom_site_offset(n, cfg);
            const double* rows[3] = {nullptr, nullptr, nullptr};
            cxd phase(1.0, 0.0);
            for (int q = 0; q < cfg.d; ++q) {
                const int off = std::abs(x - r[q]);
                phase *= quarter_phase(off);
                rows[q] = B.data() + static_cast<size_t>(off) * (T + 1);
            }
            cxd tsum(0.0, 0.0);
            if (T > 0) {
                for (int j = 0; j <= T; ++j) {
                    const double w = (j == 0 || j == T) ? 0.5 * dt : dt;
                    double ker = rows[0][j];
                    for (int q = 1; q < cfg.d; ++q) ker *= rows[q][j];
                    tsum += w * ker * traj.amps(j, n - 1);
                }
            }
            acc += phase * tsum;
        }
        snap.field[idx] = cxd(0.0, -cfg.g) * acc;
    }
    snap.norm_in_region = 0.0;
    for (const cxd& v : snap.field) snap.norm_in_region += std::norm(v);
    return snap;
}

BathSnapshot snapshot_spectral(double t, const std::vector<int>& lo, const std::vector<int>& hi,
                               const Trajectory& traj) {
    const ModelConfig& cfg = traj.cfg;
    BathSnapshot snap;
    snap.t = t;
    snap.lo = lo;
    snap.hi = hi;
    const auto tg = time_grid(t, traj);
    if (tg.frac > 0.0)
        throw std::invalid_argument("bath_snapshot: t must lie on the trajectory grid");
    const int T = tg.full_steps;
    const double dt = cfg.dt;
    const int half_chain = (cfg.N_s - 1) / 2;

    // k-grid of the emulated infinite bath: periodic images must stay outside
    // the light cone (per-axis group velocity 1 in units 2J = 1)
    int N = std::max(cfg.N_b, 2 * (static_cast<int>(std::ceil(t)) + half_chain + 8) + 1);
    for (int q = 0; q < cfg.d; ++q) N = std::max(N, hi[q] - lo[q] + 1);
    size_t total_k = 1;
    for (int q = 0; q < cfg.d; ++q) total_k *= N;

    // Ahat[S][j] = sum_n exp(-i sigma_S x_n) alpha_n(s_j), sigma_S = -d pi + 2 pi S / N
    std::vector<cxd> ahat(static_cast<size_t>(N) * (T + 1));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int S = 0; S < N; ++S) {
        const double sigma = -cfg.d * kPi + 2.0 * kPi * S / N;
        std::vector<cxd> ph(cfg.N_s);
        for (int n = 1; n <= cfg.N_s; ++n)
            ph[n - 1] = std::exp(cxd(0.0, -sigma * model::atom_site_offset(n, cfg)));
        for (int j = 0; j <= T; ++j) {
            cxd a(0.0, 0.0);
            for (int n = 0; n < cfg.N_s; ++n) a += ph[n] * traj.amps(j, n);
            ahat[static_cast<size_t>(S) * (T + 1) + j] = a;
        }
    }

    std::vector<cxd> bk(total_k);
    const double pref = cfg.g / std::pow(2.0 * kPi, 0.5 * cfg.d);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (size_t idx = 0; idx < total_k; ++idx) {
        size_t rem = idx;
        double omega = 0.0;
        int ssum = 0;
        for (int q = 0; q < cfg.d; ++q) {
            const int jq = static_cast<int>(rem % N);
            rem /= N;
            omega += std::cos(-kPi + 2.0 * kPi * jq / N);
            ssum += jq;
        }
        const cxd* arow = ahat.data() + static_cast<size_t>(ssum % N) * (T + 1);
        const cxd rot = std::exp(cxd(0.0, -omega * dt));
        cxd phase = std::exp(cxd(0.0, omega * t));
        cxd acc = 0.5 * dt * phase * arow[0];
        phase *= rot;
        for (int j = 1; j < T; ++j) {
            acc += dt * phase * arow[j];
            phase *= rot;
        }
        if (T > 0) acc += 0.5 * dt * phase * arow[T];
        else acc = cxd(0.0, 0.0);
        bk[idx] = cxd(0.0, -1.0) * pref * acc;
    }

    // beta_r = (2pi/N)^d (2pi)^{-d/2} sum_j e^{i k_j r} beta_{k_j}
    //        = (-1)^{sum_q r_q} * scale * backward-DFT[beta_k](r mod N)
    std::vector<int> dims(cfg.d, N);
    fftw_complex* buf = fftw_alloc_complex(total_k);
    for (size_t i = 0; i < total_k; ++i) {
        buf[i][0] = bk[i].real();
        buf[i][1] = bk[i].imag();
    }
    fftw_plan plan = fftw_plan_dft(cfg.d, dims.data(), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);

    const double scale = std::pow(2.0 * kPi / N, cfg.d) / std::pow(2.0 * kPi, 0.5 * cfg.d);
    snap.field.assign(snap.size(), cxd(0.0));
    int ext[3] = {1, 1, 1};
    for (int q = 0; q < cfg.d; ++q) ext[q] = snap.extent(q);
    const size_t total = snap.size();
    for (size_t idx = 0; idx < total; ++idx) {
        int r[3] = {0, 0, 0};
        size_t rem = idx;
        for (int q = cfg.d - 1; q >= 0; --q) {
            r[q] = lo[q] + static_cast<int>(rem % ext[q]);
            rem /= ext[q];
        }
        int rsum = 0;
        size_t kidx = 0;
        for (int q = 0; q < cfg.d; ++q) {
            rsum += r[q];
            kidx = kidx * N + ((r[q] % N) + N) % N;
        }
        const double par = (((rsum % 2) + 2) % 2 == 0) ? 1.0 : -1.0;
        snap.field[idx] = scale * par * cxd(buf[kidx][0], buf[kidx][1]);
    }
    fftw_free(buf);
    snap.norm_in_region = 0.0;
    for (const cxd& v : snap.field) snap.norm_in_region += std::norm(v);
    return snap;
}

} // namespace

BathSnapshot bath_snapshot(double t, const std::vector<int>& lo, const std::vector<int>& hi,
                           const Trajectory& traj, SnapshotMethod method) {
    const ModelConfig& cfg = traj.cfg;
    if (static_cast<int>(lo.size()) != cfg.d || static_cast<int>(hi.size()) != cfg.d)
        throw std::invalid_argument("bath_snapshot: region rank must equal d");
    const int half = (cfg.N_b - 1) / 2;
    for (int q = 0; q < cfg.d; ++q) {
        if (lo[q] > hi[q]) throw std::invalid_argument("bath_snapshot: empty region");
        if (lo[q] < -half || hi[q] > half)
            throw std::invalid_argument("bath_snapshot: region exceeds the bath extent");
    }
    if (method == SnapshotMethod::automatic) {
        const auto tg = time_grid(t, traj);
        const double direct_cost = static_cast<double>(tg.full_steps) * cfg.N_s *
                                   static_cast<double>(bath::BathSnapshot{t, lo, hi, {}, 0}.size()) * cfg.d;
        method = (cfg.d >= 2 && direct_cost > 2e8) ? SnapshotMethod::spectral
                                                   : SnapshotMethod::direct;
    }
    return method == SnapshotMethod::direct ? snapshot_direct(t, lo, hi, traj)
                                            : snapshot_spectral(t, lo, hi, traj);
}

BathSnapshot bath_snapshot_full(double t, const Trajectory& traj, SnapshotMethod method) {
    const int half = (traj.cfg.N_b - 1) / 2;
    std::vector<int> lo(traj.cfg.d, -half), hi(traj.cfg.d, half);
    return bath_snapshot(t, lo, hi, traj, method);
}

} // namespace aahbath::bath
