#include "aahbath/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace aahbath::obs {

FitResult linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("linear_fit: need >= 2 paired samples");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i]; sy += y[i];
        sxx += x[i] * x[i]; sxy += x[i] * y[i]; syy += y[i] * y[i];
    }
    const double vx = sxx - sx * sx / n;
    const double vy = syy - sy * sy / n;
    const double cxy = sxy - sx * sy / n;
    FitResult f;
    f.slope = cxy / vx;
    f.intercept = (sy - f.slope * sx) / n;
    f.r_squared = (vy <= 0.0) ? 1.0 : (cxy * cxy) / (vx * vy);
    f.window_lo = *std::min_element(x.begin(), x.end());
    f.window_hi = *std::max_element(x.begin(), x.end());
    return f;
}

Eigen::VectorXd revival_probability(const Trajectory& traj, int n0) {
    if (n0 < 1 || n0 > traj.cfg.N_s)
        throw std::invalid_argument("revival_probability: n0 out of range");
    Eigen::VectorXd out(traj.times.size());
    for (int i = 0; i < traj.times.size(); ++i) out(i) = std::norm(traj.amps(i, n0 - 1));
    return out;
}

Eigen::VectorXd ipr(const Trajectory& traj) {
    Eigen::VectorXd out(traj.times.size());
    for (int i = 0; i < traj.times.size(); ++i) {
        double s = 0.0;
        for (int n = 0; n < traj.cfg.N_s; ++n) {
            const double p = std::norm(traj.amps(i, n));
            s += p * p;
        }
        out(i) = s;
    }
    return out;
}

Eigen::VectorXd ipr_normalized(const Trajectory& traj) {
    Eigen::VectorXd out = ipr(traj);
    for (int i = 0; i < traj.times.size(); ++i) {
        const double nrm = traj.amps.row(i).squaredNorm();
        out(i) = (nrm > 1e-12) ? out(i) / (nrm * nrm) : std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

Eigen::VectorXd position_variance(const Trajectory& traj) {
    Eigen::VectorXd out(traj.times.size());
    for (int i = 0; i < traj.times.size(); ++i) {
        double w = 0.0, m1 = 0.0;
        for (int n = 0; n < traj.cfg.N_s; ++n) {
            const double p = std::norm(traj.amps(i, n));
            w += p;
            m1 += p * (n + 1);
        }
        if (w <= 1e-12) {
            out(i) = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        const double mean = m1 / w;
        double v = 0.0;
        for (int n = 0; n < traj.cfg.N_s; ++n)
            v += std::norm(traj.amps(i, n)) * (n + 1 - mean) * (n + 1 - mean);
        out(i) = v / w;
    }
    return out;
}

std::optional<Peak> first_peak(const Trajectory& traj, int n) {
    if (n < 1 || n > traj.cfg.N_s) throw std::invalid_argument("first_peak: n out of range");
    const double floor_p = 1e-8;
    const int T = traj.steps();
    Eigen::VectorXd p = revival_probability(traj, n);
    // boundary case: a point initial state peaks at t = 0
    if (p(0) > floor_p && (T == 0 || p(0) >= p(1)))
        return Peak{p(0), 0.0};
    for (int i = 1; i < T; ++i) {
        if (p(i) <= floor_p) continue;
        if (p(i) > p(i - 1) && p(i) > p(i + 1)) {
            const double den = p(i - 1) - 2.0 * p(i) + p(i + 1);
            double tau = traj.times(i), val = p(i);
            if (std::abs(den) > 1e-300) {
                const double sh = 0.5 * (p(i - 1) - p(i + 1)) / den;
                tau += sh * traj.cfg.dt;
                val = p(i) - 0.25 * (p(i - 1) - p(i + 1)) * sh;
            }
            return Peak{val, tau};
        }
    }
    return std::nullopt;
}

FitResult wavefront_fit(const Trajectory& traj, int n0) {
    std::vector<double> dist, tau;
    for (int n = 1; n <= traj.cfg.N_s; ++n) {
        if (n == n0) continue;
        const auto pk = first_peak(traj, n);
        if (!pk) continue;
        dist.push_back(std::abs(n - n0));
        tau.push_back(pk->tau_f);
    }
    if (dist.size() < 2) throw std::runtime_error("wavefront_fit: too few reached sites");
    return linear_fit(dist, tau);
}

const char* to_string(DecayShape s) {
    switch (s) {
        case DecayShape::stable: return "stable";
        case DecayShape::exponential: return "exponential";
        case DecayShape::super_exponential: return "super_exponential";
        default: return "irregular";
    }
}

DecayClassification decay_shape(const Eigen::VectorXd& times, const Eigen::VectorXd& series,
                                double window_lo, double window_hi) {
    std::vector<double> t, lp, p;
    for (int i = 0; i < times.size(); ++i) {
        if (times(i) < window_lo || times(i) > window_hi) continue;
        if (series(i) <= 0.0) break;   // shrink to the positive prefix
        t.push_back(times(i));
        p.push_back(series(i));
        lp.push_back(std::log(series(i)));
    }
    if (t.size() < 20) throw std::invalid_argument("decay_shape: window must hold >= 20 samples");

    DecayClassification out;
    out.fit = linear_fit(t, lp);

    // stable first: relative drop below 5% over the window
    const double drop = 1.0 - p.back() / p.front();
    if (drop < 0.05) {
        out.shape = DecayShape::stable;
        return out;
    }
    if (out.fit.r_squared >= 0.98) {
        out.shape = DecayShape::exponential;
        return out;
    }
    // residual noise band of the global fit
    double rss = 0.0;
    for (size_t i = 0; i < t.size(); ++i) {
        const double r = lp[i] - (out.fit.slope * t[i] + out.fit.intercept);
        rss += r * r;
    }
    const double sigma = std::sqrt(rss / (t.size() - 2));
    // local slopes on 6 equal segments
    const int nseg = 6;
    std::vector<double> slopes, slope_se;
    const size_t seg = t.size() / nseg;
    for (int s = 0; s < nseg; ++s) {
        const size_t a = s * seg, b = (s == nseg - 1) ? t.size() : (s + 1) * seg;
        if (b - a < 3) continue;
        std::vector<double> tx(t.begin() + a, t.begin() + b), ty(lp.begin() + a, lp.begin() + b);
        const FitResult lf = linear_fit(tx, ty);
        slopes.push_back(lf.slope);
        // slope standard error from the global sigma
        double vx = 0.0, mx = 0.0;
        for (double v : tx) mx += v;
        mx /= tx.size();
        for (double v : tx) vx += (v - mx) * (v - mx);
        slope_se.push_back(sigma / std::sqrt(std::max(vx, 1e-300)));
    }
    bool steepening = slopes.size() >= 3;
    for (size_t i = 1; i < slopes.size(); ++i)
        if (slopes[i] > slopes[i - 1]) steepening = false;
    const double se = 3.0 * std::sqrt(slope_se.front() * slope_se.front() +
                                      slope_se.back() * slope_se.back());
    if (steepening && (slopes.front() - slopes.back()) > se) {
        out.shape = DecayShape::super_exponential;
        return out;
    }
    out.shape = DecayShape::irregular;
    return out;
}

BathVariance bath_variance(const std::vector<bath::BathSnapshot>& snaps, const ModelConfig& cfg,
                           double window_lo, double window_hi) {
    if (snaps.size() < 4)
        throw std::invalid_argument("bath_variance: need >= 4 snapshots");
    BathVariance out;
    for (const auto& s : snaps) {
        double w = 0.0, m1 = 0.0;
        int ext[3] = {1, 1, 1};
        for (size_t q = 0; q < s.lo.size(); ++q) ext[q] = s.hi[q] - s.lo[q] + 1;
        for (size_t idx = 0; idx < s.field.size(); ++idx) {
            // x coordinate = first axis
            size_t rem = idx;
            for (int q = static_cast<int>(s.lo.size()) - 1; q >= 1; --q) rem /= ext[q];
            const double x = s.lo[0] + static_cast<double>(rem);
            const double p = std::norm(s.field[idx]);
            w += p;
            m1 += p * x;
        }
        if (w <= 0.0) {
            out.t.push_back(s.t);
            out.var.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        const double mean = m1 / w;
        double v = 0.0;
        for (size_t idx = 0; idx < s.field.size(); ++idx) {
            size_t rem = idx;
            for (int q = static_cast<int>(s.lo.size()) - 1; q >= 1; --q) rem /= ext[q];
            const double x = s.lo[0] + static_cast<double>(rem);
            v += std::norm(s.field[idx]) * (x - mean) * (x - mean);
        }
        out.t.push_back(s.t);
        out.var.push_back(v / w / (static_cast<double>(cfg.N_b) * cfg.N_b));
    }
    std::vector<double> lx, ly;
    for (size_t i = 0; i < out.t.size(); ++i) {
        if (out.t[i] < window_lo || out.t[i] > window_hi) continue;
        if (!(out.var[i] > 0.0)) continue;
        lx.push_back(std::log(out.t[i]));
        ly.push_back(std::log(out.var[i]));
    }
    if (lx.size() >= 2) out.nu_fit = linear_fit(lx, ly);
    return out;
}

} // namespace aahbath::obs
