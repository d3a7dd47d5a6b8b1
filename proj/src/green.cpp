#include "aahbath/green.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aahbath/special.hpp"

namespace aahbath::green {

namespace {

constexpr double kPi = 3.14159265358979323846;

// 16-point Gauss-Legendre on [-1,1]
const double kGlX[16] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318, -0.7554044083550030,
    -0.6178762444026438, -0.4580167776572274, -0.2816035507792589, -0.0950125098376374,
     0.0950125098376374,  0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
     0.7554044083550030,  0.8656312023878318,  0.9445750230732326,  0.9894009349916499};
const double kGlW[16] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928, 0.1246289712555339,
    0.1495959888165767, 0.1691565193950025, 0.1826034150449236, 0.1894506104550685,
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

// sqrt(e^2-1) with branch ~ e at infinity (analytic off [-1,1])
inline cxd branch_R(cxd e) { return e * std::sqrt(1.0 - 1.0 / (e * e)); }

// T_m recurrence filling row[0..m_max] with z^-independent cost per order
inline void cheb_row(int m_max, cxd z, cxd* row) {
    row[0] = 1.0;
    if (m_max >= 1) row[1] = z;
    for (int m = 2; m <= m_max; ++m) row[m] = 2.0 * z * row[m - 1] - row[m - 2];
}

// f1 row on the chosen sheet: f1[m] = zp^m / Rs, zp = -e + Rs
inline void f1_row(int m_max, cxd e, bool second_sheet, cxd* out) {
    cxd Rs = branch_R(e);
    if (second_sheet) Rs = -Rs;
    const cxd zp = -e + Rs;
    cxd p = 1.0 / Rs;
    for (int m = 0; m <= m_max; ++m) {
        out[m] = p;
        p *= zp;
    }
}

// graded panel breakpoints on [a, b]; geometric refinement toward each anchor
std::vector<double> graded_panels(double a, double b, const std::vector<double>& anchors,
                                  double coarse, double floor_w) {
    std::vector<double> bp = {a, b};
    double step = (b - a) / std::max(1.0, std::ceil((b - a) / coarse));
    for (double x = a + step; x < b - 1e-15; x += step) bp.push_back(x);
    for (double p : anchors) {
        if (p <= a || p >= b) continue;
        bp.push_back(p);
        for (double w = coarse; w > floor_w; w *= 0.3) {
            if (p - w > a) bp.push_back(p - w);
            if (p + w < b) bp.push_back(p + w);
        }
    }
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end(),
                         [](double x, double y) { return std::abs(x - y) < 1e-15; }),
             bp.end());
    return bp;
}

// ---- first sheet, d = 2, 3: theta-space panels ------------------------------
// f_d[m](e) = (1/pi) int_0^pi cos(m th) f_{d-1}(e + cos th) dth

std::vector<double> theta_anchors(double re_e, double band) {
    // cos th = +-band - Re e
    std::vector<double> out;
    for (double s : {band, -band}) {
        const double u = s - re_e;
        if (u > -1.0 && u < 1.0) out.push_back(std::acos(u));
    }
    return out;
}

void f2_first_row(int m_max, cxd e, cxd* out) {
    const double fw = std::clamp(std::abs(e.imag()) * 0.3, 1e-13, 2e-2);
    const auto bp = graded_panels(0.0, kPi, theta_anchors(e.real(), 1.0), 0.35, fw);
    std::vector<cxd> f1(m_max + 1);
    std::fill(out, out + m_max + 1, cxd(0.0));
    for (size_t p = 0; p + 1 < bp.size(); ++p) {
        const double mid = 0.5 * (bp[p] + bp[p + 1]), half = 0.5 * (bp[p + 1] - bp[p]);
        for (int q = 0; q < 16; ++q) {
            const double th = mid + half * kGlX[q];
            const double w = half * kGlW[q] / kPi;
            const double c = std::cos(th);
            f1_row(m_max, e + c, false, f1.data());
            // cos(m th) recurrence
            double cm2 = 1.0, cm1 = c;
            out[0] += w * f1[0];
            if (m_max >= 1) out[1] += w * c * f1[1];
            for (int m = 2; m <= m_max; ++m) {
                const double cm = 2.0 * c * cm1 - cm2;
                cm2 = cm1; cm1 = cm;
                out[m] += w * cm * f1[m];
            }
        }
    }
}

void f3_first_row(int m_max, cxd e, cxd* out) {
    const double fw = std::clamp(std::abs(e.imag()) * 0.3, 1e-13, 2e-2);
    auto anchors = theta_anchors(e.real(), 2.0);           // f2 band edges
    for (double a : theta_anchors(e.real(), 0.0)) anchors.push_back(a);  // f2 log point
    const auto bp = graded_panels(0.0, kPi, anchors, 0.35, fw);
    std::vector<cxd> f2(m_max + 1);
    std::fill(out, out + m_max + 1, cxd(0.0));
    for (size_t p = 0; p + 1 < bp.size(); ++p) {
        const double mid = 0.5 * (bp[p] + bp[p + 1]), half = 0.5 * (bp[p + 1] - bp[p]);
        for (int q = 0; q < 16; ++q) {
            const double th = mid + half * kGlX[q];
            const double w = half * kGlW[q] / kPi;
            const double c = std::cos(th);
            f2_first_row(m_max, e + c, f2.data());
            double cm2 = 1.0, cm1 = c;
            out[0] += w * f2[0];
            if (m_max >= 1) out[1] += w * c * f2[1];
            for (int m = 2; m <= m_max; ++m) {
                const double cm = 2.0 * c * cm1 - cm2;
                cm2 = cm1; cm1 = cm;
                out[m] += w * cm * f2[m];
            }
        }
    }
}

// ---- continued densities ----------------------------------------------------
// mu1c[m](z) = T_m(z) / (pi * sqrt(1-z) sqrt(1+z)), analytic off real |z| >= 1
inline void mu1c_row(int m_max, cxd z, cxd* out) {
    const cxd w = std::sqrt(1.0 - z) * std::sqrt(1.0 + z);
    cheb_row(m_max, z, out);
    const cxd s = 1.0 / (kPi * w);
    for (int m = 0; m <= m_max; ++m) out[m] *= s;
}

// mu2 germ continued from (0,2):  F(w) = int_{w-1}^{1} mu1c(u) mu1c(w-u) du,
// Gauss-Chebyshev on the straight complex segment (weight at both endpoints),
// adaptive node doubling.
void mu2_germ_row(int m_max, cxd w, cxd* out, int n_nodes = 0) {
    const cxd a = w - 1.0, b = 1.0;
    const cxd mid = 0.5 * (a + b), half = 0.5 * (b - a);
    std::vector<cxd> tu(m_max + 1), tv(m_max + 1), acc(m_max + 1), prev(m_max + 1);
    int N = n_nodes > 0 ? n_nodes : 48;
    const int n_cap = 3072;
    bool first = true;
    while (true) {
        std::fill(acc.begin(), acc.end(), cxd(0.0));
        for (int j = 1; j <= N; ++j) {
            const double x = std::cos((2.0 * j - 1.0) * kPi / (2.0 * N));
            const cxd u = mid + half * x;
            const cxd v = w - u;
            // non-weight branch factors: sqrt(1+u) and sqrt(1+v)
            const cxd den = kPi * std::sqrt(1.0 + u) * kPi * std::sqrt(1.0 + v);
            cheb_row(m_max, u, tu.data());
            cheb_row(m_max, v, tv.data());
            for (int m = 0; m <= m_max; ++m) acc[m] += tu[m] * tv[m] / den;
        }
        for (int m = 0; m <= m_max; ++m) acc[m] *= kPi / static_cast<double>(N);
        if (n_nodes > 0) break;
        if (!first) {
            double diff = 0.0, scale = 1e-30;
            for (int m = 0; m <= m_max; ++m) {
                diff = std::max(diff, std::abs(acc[m] - prev[m]));
                scale = std::max(scale, std::abs(acc[m]));
            }
            if (diff < 1e-12 * (1.0 + scale) || N >= n_cap) break;
        }
        prev = acc;
        first = false;
        N *= 2;
    }
    std::copy(acc.begin(), acc.end(), out);
}

// node count for the inner d=2 germ, boosted near its log point at arg 0
inline int mu2_nodes(cxd w) {
    const double aw = std::abs(w);
    if (aw > 0.05) return 96;
    return std::min(768, 96 + static_cast<int>(20.0 / std::sqrt(aw + 1e-4)));
}

enum class EndKind { plain, invsqrt, logsing };

// straight-segment composite quadrature on the complex segment [a,b].
// invsqrt endpoints are removed by a tau^2 substitution; log endpoints get
// geometric panel grading.
template <typename F>
void complex_seg_quad(cxd a, cxd b, EndKind ka, EndKind kb, F&& add_node,
                      std::vector<cxd>& out) {
    std::fill(out.begin(), out.end(), cxd(0.0));
    const cxd dseg = b - a;
    // one half per endpoint, handled in the parameter t in [0, 1/2]
    auto do_half = [&](EndKind kind, bool from_a) {
        // maps local s in [0, 1/2] to t (distance from the endpoint)
        std::vector<double> bp;
        if (kind == EndKind::invsqrt) {
            // t = s'^2 substitution: integrate over tau in [0, sqrt(1/2)]
            const double tau_max = std::sqrt(0.5);
            const int n_panel = 10;
            for (int i = 0; i <= n_panel; ++i) bp.push_back(tau_max * i / n_panel);
            for (size_t p = 0; p + 1 < bp.size(); ++p) {
                const double mid = 0.5 * (bp[p] + bp[p + 1]), half = 0.5 * (bp[p + 1] - bp[p]);
                for (int q = 0; q < 16; ++q) {
                    const double tau = mid + half * kGlX[q];
                    const double t = tau * tau;
                    const double jac = 2.0 * tau;
                    const double tt = from_a ? t : 1.0 - t;
                    add_node(a + dseg * tt, half * kGlW[q] * jac * dseg, out);
                }
            }
        } else if (kind == EndKind::logsing) {
            // geometric grading into the log endpoint; the innermost sliver
            // [0, 1e-12] carries O(1e-11) of an integrable log and is dropped
            bp.push_back(0.5);
            for (double w = 0.25; w > 1e-12; w *= 0.3) bp.push_back(w);
            bp.push_back(1e-12);
            std::sort(bp.begin(), bp.end());
            for (size_t p = 0; p + 1 < bp.size(); ++p) {
                const double mid = 0.5 * (bp[p] + bp[p + 1]), half = 0.5 * (bp[p + 1] - bp[p]);
                for (int q = 0; q < 16; ++q) {
                    const double t = mid + half * kGlX[q];
                    const double tt = from_a ? t : 1.0 - t;
                    add_node(a + dseg * tt, half * kGlW[q] * dseg, out);
                }
            }
        } else {
            for (int i = 0; i <= 6; ++i) bp.push_back(0.5 * i / 6.0);
            for (size_t p = 0; p + 1 < bp.size(); ++p) {
                const double mid = 0.5 * (bp[p] + bp[p + 1]), half = 0.5 * (bp[p + 1] - bp[p]);
                for (int q = 0; q < 16; ++q) {
                    const double t = mid + half * kGlX[q];
                    const double tt = from_a ? t : 1.0 - t;
                    add_node(a + dseg * tt, half * kGlW[q] * dseg, out);
                }
            }
        }
    };
    do_half(ka, true);
    do_half(kb, false);
}

// mu3 germ continued, pieces (0,1) and (1,3); Re y >= 0 expected here.
void mu3_germ_row(int m_max, cxd y, cxd* out) {
    std::vector<cxd> res(m_max + 1, cxd(0.0));
    std::vector<cxd> m1(m_max + 1), m2(m_max + 1);
    std::vector<cxd> part(m_max + 1);
    auto conv_node = [&](bool arg_flip) {
        return [&, arg_flip](cxd u, cxd w, std::vector<cxd>& o) {
            const cxd arg = arg_flip ? (u - y) : (y - u);
            mu1c_row(m_max, u, m1.data());
            mu2_germ_row(m_max, arg, m2.data(), mu2_nodes(arg));
            for (int m = 0; m <= m_max; ++m) o[m] += w * m1[m] * m2[m];
        };
    };
    if (y.real() < 1.0) {
        // int_{-1}^{y} mu1c(u) F(y-u) du  +  int_{y}^{1} mu1c(u) F(u-y) du
        complex_seg_quad(cxd(-1.0), y, EndKind::invsqrt, EndKind::logsing, conv_node(false), part);
        for (int m = 0; m <= m_max; ++m) res[m] += part[m];
        complex_seg_quad(y, cxd(1.0), EndKind::logsing, EndKind::invsqrt, conv_node(true), part);
        for (int m = 0; m <= m_max; ++m) res[m] += part[m];
    } else {
        // int_{y-2}^{1} mu1c(u) F(y-u) du
        complex_seg_quad(y - 2.0, cxd(1.0), EndKind::plain, EndKind::invsqrt, conv_node(false), part);
        res = part;
    }
    std::copy(res.begin(), res.end(), out);
}

} // namespace

// ---------------------------------------------------------------------------

std::vector<cxd> first_sheet_row(int m_max, cxd e, int d) {
    std::vector<cxd> out(m_max + 1);
    switch (d) {
        case 1: f1_row(m_max, e, false, out.data()); break;
        case 2: f2_first_row(m_max, e, out.data()); break;
        case 3: f3_first_row(m_max, e, out.data()); break;
        default: throw std::invalid_argument("first_sheet_row: d must be 1..3");
    }
    return out;
}

std::vector<cxd> density_continuation_row(int m_max, cxd e, int d) {
    if (std::abs(e.real()) >= d)
        throw std::invalid_argument("density_continuation_row: |Re e| must be < d");
    std::vector<cxd> out(m_max + 1);
    const cxd y = -e;
    if (d == 1) {
        mu1c_row(m_max, y, out.data());
        return out;
    }
    // evaluate the germ at |Re y| and map by parity mu_d(-y) = (-1)^{d m} mu_d(y)
    const bool flip = y.real() < 0.0;
    const cxd ya = flip ? -y : y;
    if (d == 2) mu2_germ_row(m_max, ya, out.data());
    else        mu3_germ_row(m_max, ya, out.data());
    if (flip) {
        for (int m = 0; m <= m_max; ++m)
            if ((d * m) % 2 != 0) out[m] = -out[m];
    }
    return out;
}

std::vector<cxd> retarded_row(int m_max, cxd e, int d) {
    if (e.imag() > -1e-12) e = cxd(e.real(), -1e-12);
    auto out = first_sheet_row(m_max, e, d);
    const auto nu = density_continuation_row(m_max, e, d);
    const cxd twopii(0.0, 2.0 * kPi);
    for (int m = 0; m <= m_max; ++m) out[m] -= twopii * nu[m];
    return out;
}

std::vector<double> density_row(int m_max, double w, int d) {
    std::vector<double> out(m_max + 1, 0.0);
    if (std::abs(w) >= d) return out;
    std::vector<cxd> tmp(m_max + 1);
    if (d == 1) {
        const double s = 1.0 / (kPi * std::sqrt(1.0 - w * w));
        std::vector<cxd> t(m_max + 1);
        cheb_row(m_max, cxd(w), t.data());
        for (int m = 0; m <= m_max; ++m) out[m] = t[m].real() * s;
        return out;
    }
    if (d != 2) throw std::invalid_argument("density_row: d must be 1 or 2");
    mu2_germ_row(m_max, cxd(std::abs(w)), tmp.data());
    for (int m = 0; m <= m_max; ++m) out[m] = tmp[m].real();   // even in w for d=2
    return out;
}

std::vector<cxd> slice_row(int m_max, cxd e, int d) {
    if (e.imag() > -1e-12) e = cxd(e.real(), -1e-12);
    std::vector<cxd> out(m_max + 1, cxd(0.0));
    if (d == 1) {
        f1_row(m_max, e, std::abs(e.real()) < 1.0, out.data());
        return out;
    }
    std::vector<cxd> f1(m_max + 1);
    if (d == 2) {
        // (1/pi) int_0^pi cos(m th) G1(e + cos th) dth, sheet switched at |Re zeta|=1
        const double fw = std::clamp(std::abs(e.imag()) * 0.3, 1e-10, 2e-2);
        const auto bp = graded_panels(0.0, kPi, theta_anchors(e.real(), 1.0), 0.35, fw);
        for (size_t p = 0; p + 1 < bp.size(); ++p) {
            const double mid = 0.5 * (bp[p] + bp[p + 1]), half = 0.5 * (bp[p + 1] - bp[p]);
            for (int q = 0; q < 16; ++q) {
                const double th = mid + half * kGlX[q];
                const double w = half * kGlW[q] / kPi;
                const double c = std::cos(th);
                const cxd zeta = e + c;
                f1_row(m_max, zeta, std::abs(zeta.real()) < 1.0, f1.data());
                double cm2 = 1.0, cm1 = c;
                out[0] += w * f1[0];
                if (m_max >= 1) out[1] += w * c * f1[1];
                for (int m = 2; m <= m_max; ++m) {
                    const double cm = 2.0 * c * cm1 - cm2;
                    cm2 = cm1; cm1 = cm;
                    out[m] += w * cm * f1[m];
                }
            }
        }
        return out;
    }
    // d = 3: int_{-2}^{2} mu2[m](w) G1[m](e + w) dw with the real d=2 density
    std::vector<double> anchors = {0.0};
    for (double s : {1.0, -1.0}) {
        const double w = s - e.real();
        if (w > -2.0 && w < 2.0) anchors.push_back(w);
    }
    const double fw = std::clamp(std::abs(e.imag()) * 0.3, 1e-8, 2e-2);
    const auto bp = graded_panels(-2.0, 2.0, anchors, 0.4, fw);
    std::vector<cxd> mu2(m_max + 1);
    for (size_t p = 0; p + 1 < bp.size(); ++p) {
        const double mid = 0.5 * (bp[p] + bp[p + 1]), half = 0.5 * (bp[p + 1] - bp[p]);
        for (int q = 0; q < 16; ++q) {
            const double w = mid + half * kGlX[q];
            const double wq = half * kGlW[q];
            const cxd zeta = e + w;
            f1_row(m_max, zeta, std::abs(zeta.real()) < 1.0, f1.data());
            // d=2 density is even in w
            mu2_germ_row(m_max, cxd(std::abs(w)), mu2.data(), mu2_nodes(cxd(w)));
            for (int m = 0; m <= m_max; ++m) out[m] += wq * mu2[m].real() * f1[m];
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// ground-truth quadrature (Laplace–Bessel representation)

namespace {

// real e > d: f_d(m; e) = (-1)^{d m} int_0^inf e^{-(e-d)u} Ibar_m(u)^d du
std::vector<cxd> quad_real_outside(int m_max, double e, int d, double* est) {
    const double gap = e - d;
    const double L = 34.0 + 0.5 * d * std::log(1.0 + 1.0 / gap);
    double u_cut = L / gap;
    for (int it = 0; it < 3; ++it)
        u_cut = (L + 0.5 * d * std::log(std::max(2.0, u_cut))) / gap;
    std::vector<double> bp;
    bp.push_back(0.0);
    for (double w = std::min(1.0, u_cut / 8.0); w < u_cut; w *= 2.0) bp.push_back(w);
    bp.push_back(u_cut);
    std::vector<double> acc(m_max + 1, 0.0);
    for (size_t p = 0; p + 1 < bp.size(); ++p) {
        const double mid = 0.5 * (bp[p] + bp[p + 1]), half = 0.5 * (bp[p + 1] - bp[p]);
        for (int q = 0; q < 16; ++q) {
            const double u = mid + half * kGlX[q];
            const double w = half * kGlW[q];
            const auto ib = special::bessel_i_scaled_row(m_max, u);
            const double damp = std::exp(-gap * u);
            for (int m = 0; m <= m_max; ++m) {
                double v = ib[m];
                double pw = v;
                for (int k = 1; k < d; ++k) pw *= v;
                acc[m] += w * damp * pw;
            }
        }
    }
    std::vector<cxd> out(m_max + 1);
    for (int m = 0; m <= m_max; ++m) {
        double v = acc[m];
        if ((d * m) % 2 != 0) v = -v;
        out[m] = v;
    }
    if (est) *est = std::exp(-gap * u_cut) / gap;
    return out;
}

// Im e > 0: f_d(m; e) = -i int_0^inf e^{i e s} [i^m J_m(s)]^d ds
std::vector<cxd> quad_upper_half(int m_max, cxd e, int d, double* est) {
    const double eta = e.imag();
    const double L = 34.0;
    const double s_cut = L / eta;
    const double freq = std::abs(e.real()) + d + 1.0;
    const double hmax = 3.0 / freq;
    std::vector<cxd> acc(m_max + 1, cxd(0.0));
    const cxd ie = cxd(0.0, 1.0) * e;
    double s0 = 0.0;
    while (s0 < s_cut) {
        const double s1 = std::min(s_cut, s0 + hmax);
        const double mid = 0.5 * (s0 + s1), half = 0.5 * (s1 - s0);
        for (int q = 0; q < 16; ++q) {
            const double s = mid + half * kGlX[q];
            const double w = half * kGlW[q];
            const auto jr = special::bessel_j_row(m_max, s);
            const cxd osc = std::exp(ie * s) * w;
            for (int m = 0; m <= m_max; ++m) {
                double v = jr[m];
                double pw = v;
                for (int k = 1; k < d; ++k) pw *= v;
                acc[m] += osc * pw;
            }
        }
        s0 = s1;
    }
    // phases: -i * i^{m d}
    std::vector<cxd> out(m_max + 1);
    const cxd mi(0.0, -1.0);
    for (int m = 0; m <= m_max; ++m) {
        cxd ph = mi;
        switch ((m * d) % 4) {
            case 0: break;
            case 1: ph *= cxd(0.0, 1.0); break;
            case 2: ph *= -1.0; break;
            case 3: ph *= cxd(0.0, -1.0); break;
        }
        out[m] = ph * acc[m];
    }
    if (est) *est = std::exp(-eta * s_cut) / eta;
    return out;
}

} // namespace

std::vector<cxd> green_quadrature_row(int m_max, cxd e, int d, double* est_err) {
    if (d < 1 || d > 3) throw std::invalid_argument("green_quadrature: d must be 1..3");
    if (!std::isfinite(e.real()) || !std::isfinite(e.imag()))
        throw std::invalid_argument("green_quadrature: e must be finite");
    if (e.imag() == 0.0) {
        if (std::abs(std::abs(e.real()) - d) < 1e-12)
            throw std::invalid_argument("green_quadrature: band edge |e| = d is singular");
        if (std::abs(e.real()) < d)
            throw std::invalid_argument("green_quadrature: real in-band e not supported here");
        if (e.real() > 0) return quad_real_outside(m_max, e.real(), d, est_err);
        // parity: f_d(m; -E) = -(-1)^{d m} f_d(m; E)
        auto v = quad_real_outside(m_max, -e.real(), d, est_err);
        for (int m = 0; m <= m_max; ++m) {
            v[m] = -v[m];
            if ((d * m) % 2 != 0) v[m] = -v[m];
        }
        return v;
    }
    if (e.imag() > 0.0) return quad_upper_half(m_max, e, d, est_err);
    // reflection: f(m; e) = conj(f(m; conj e))
    auto v = quad_upper_half(m_max, std::conj(e), d, est_err);
    for (auto& z : v) z = std::conj(z);
    return v;
}

GreenValue green_quadrature(cxd e, int m, int d) {
    double est = 0.0;
    const auto row = green_quadrature_row(m, e, d, &est);
    return {row[m], GreenValue::Method::quadrature, est + 1e-13 * (1.0 + std::abs(row[m]))};
}

GreenValue green_closed(cxd e, int m, int d) {
    if (e.imag() != 0.0 || std::abs(e.real()) <= d)
        throw std::invalid_argument("green_closed: requires real |e| > d; use green_quadrature");
    const double x = e.real();
    const int n = std::abs(m);
    if (d == 1) {
        const double r = std::sqrt(x * x - 1.0);
        const double v = kPi / r * (x > 0 ? 1.0 : -1.0) / std::pow(std::abs(x) + r, n);
        return {v, GreenValue::Method::closed_form, 1e-14 * std::abs(v)};
    }
    if (d == 2) {
        const cxd z = 4.0 / (x * x);
        const auto h = special::hyp_pfq({1.0, 1.0, 1.0, 1.5, 1.5},
                                        {1.5 + n, 1.5 - n, 1.5, 1.5}, z);
        const double cosn = (n % 2 == 0) ? 1.0 : -1.0;
        const cxd v = -16.0 * cosn / (kPi * kPi * (4.0 * n * n - 1.0) * x * x) * h.value;
        return {v, GreenValue::Method::closed_form, h.est_error * std::abs(v)};
    }
    // d = 3
    const double s9 = std::sqrt(1.0 - 9.0 / (x * x));
    const double s1 = std::sqrt(1.0 - 1.0 / (x * x));
    const double eta_p = (4.0 * x * x + (9.0 - 4.0 * x * x) * s9 + 27.0 * s1) / (8.0 * x * x);
    const double eta_m = (4.0 * x * x + (9.0 - 4.0 * x * x) * s9 - 27.0 * s1) / (8.0 * x * x);
    const auto hp = special::hyp2f1(1.0 / 3.0, 2.0 / 3.0, n + 1.0, eta_p);
    const auto hm = special::hyp2f1(1.0 / 3.0, 2.0 / 3.0, n + 1.0, eta_m);
    const double lg = std::lgamma(3.0 * n + 1.0) - 3.0 * n * std::log(3.0) -
                      3.0 * std::lgamma(n + 1.0);
    const double xi = x / 3.0 * (1.0 - s9);
    const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
    const cxd v = sgn / x * std::exp(lg + 3.0 * n * std::log(std::abs(xi))) *
                  (xi < 0 && (3 * n) % 2 != 0 ? -1.0 : 1.0) * hp.value * hm.value;
    return {v, GreenValue::Method::closed_form,
            (hp.est_error + hm.est_error) * std::abs(v) + 1e-14 * std::abs(v)};
}

} // namespace aahbath::green
