#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "aahbath/bath_field.hpp"
#include "aahbath/model.hpp"
#include "aahbath/propagator.hpp"

using namespace aahbath;
using cxd = std::complex<double>;

namespace {
prop::Trajectory short_traj(double delta, int d, int n0, double tmax, double g = 0.1,
                            int nb = 201) {
    ModelConfig c;
    c.Delta = delta;
    c.d = d;
    c.g = g;
    c.N_b = nb;
    c.t_max = tmax;
    return prop::propagate_site(c, n0);
}
} // namespace

TEST_CASE("bath amplitudes vanish at t=0 and for g=0") {
    auto traj = short_traj(1.0, 1, 11, 1.0);
    CHECK(std::abs(bath::beta_r({0}, 0.0, traj)) == 0.0);
    CHECK(std::abs(bath::beta_k({0.3}, 0.0, traj)) == 0.0);

    auto traj0 = short_traj(1.0, 1, 11, 1.0, 0.0);
    CHECK(std::abs(bath::beta_r({4}, 1.0, traj0)) == 0.0);
    CHECK(std::abs(bath::beta_k({-1.1}, 1.0, traj0)) == 0.0);
}

TEST_CASE("short-time growth of the coupled-site amplitude") {
    // beta at the coupled site of n0 grows like -i g t alpha_{n0}(0) + O(t^2)
    auto traj = short_traj(1.0, 1, 11, 0.2);
    auto residual_r = [&](double t) {
        return std::abs(bath::beta_r({0}, t, traj) - cxd(0.0, -0.1 * t));
    };
    const double r1 = residual_r(0.1), r2 = residual_r(0.05);
    CHECK(r1 < 1e-3);
    CHECK(r1 / r2 > 3.0);   // quadratic remainder
    CHECK(r1 / r2 < 5.0);
    // leading-order momentum amplitude: -i g t e^{-i k r_{n0}} alpha(0) / sqrt(2 pi)
    const double k = 0.7, t = 0.1;
    const cxd bk = bath::beta_k({k}, t, traj);
    const cxd lead = cxd(0.0, -0.1 * t / std::sqrt(2.0 * M_PI));
    CHECK(std::abs(bk - lead) < 0.05 * std::abs(lead));
}

TEST_CASE("d=1 localized phase keeps the field on the coupled site") {
    auto traj = short_traj(3.0, 1, 1, 40.0);
    const auto snap = bath::bath_snapshot(40.0, {-40}, {40}, traj);
    // coupled site of n0=1 is x=10
    const double peak = std::norm(snap.at({10}));
    double other = 0.0;
    for (int x = -40; x <= 40; ++x)
        if (std::abs(x - 10) > 2) other = std::max(other, std::norm(snap.at({x})));
    CHECK(peak > 0.0);
    CHECK(other < 0.10 * peak);
}

TEST_CASE("mirroring the trajectory mirrors the field") {
    auto traj = short_traj(1.0, 1, 3, 5.0);
    // synthetic mirrored trajectory: alpha'_n = alpha_{N+1-n}
    prop::Trajectory mir = traj;
    for (int i = 0; i <= traj.steps(); ++i)
        for (int n = 0; n < traj.cfg.N_s; ++n)
            mir.amps(i, n) = traj.amps(i, traj.cfg.N_s - 1 - n);
    for (int x : {-7, 0, 4, 12}) {
        const cxd a = bath::beta_r({x}, 5.0, traj);
        const cxd b = bath::beta_r({-x}, 5.0, mir);
        CHECK(std::abs(a - b) < 1e-13);
    }
}

TEST_CASE("momentum and position amplitudes are Fourier-consistent (d=1)") {
    auto traj = short_traj(1.0, 1, 11, 10.0);
    const auto snap = bath::bath_snapshot(10.0, {-100}, {100}, traj);
    // beta_k ~ (1/sqrt(2pi)) sum_r beta_r e^{-i k r} over the full window
    for (double k : {0.4, -1.3, 2.2}) {
        cxd acc(0.0, 0.0);
        for (int x = -100; x <= 100; ++x)
            acc += snap.at({x}) * std::exp(cxd(0.0, -k * x));
        acc /= std::sqrt(2.0 * M_PI);
        const cxd direct = bath::beta_k({k}, 10.0, traj);
        CHECK(std::abs(acc - direct) < 1e-6);
    }
}

TEST_CASE("light cone") {
    auto traj = short_traj(1.0, 1, 11, 8.0);
    // |r| beyond 2t + chain footprint: amplitude below 1e-10
    const auto snap = bath::bath_snapshot(8.0, {-60}, {60}, traj);
    for (int x = 40; x <= 60; ++x) {
        CHECK(std::norm(snap.at({x})) < 1e-10);
        CHECK(std::norm(snap.at({-x})) < 1e-10);
    }
}

TEST_CASE("norm balance between chain and bath (d=1)") {
    auto traj = short_traj(1.0, 1, 11, 10.0);
    const auto snap = bath::bath_snapshot_full(10.0, traj);
    const double chain = traj.amps.row(static_cast<int>(10.0 / traj.cfg.dt + 0.5)).squaredNorm();
    CHECK(chain + snap.norm_in_region == doctest::Approx(1.0).epsilon(5e-3));
    CHECK(snap.norm_in_region <= 1.0 + 1e-6);
}

TEST_CASE("spectral snapshot agrees with the direct kernel sum (d=2)") {
    ModelConfig c;
    c.Delta = 1.0;
    c.d = 2;
    c.g = 0.1;
    c.N_b = 41;
    c.t_max = 6.0;
    auto traj = prop::propagate_site(c, 11);
    const auto dir = bath::bath_snapshot_full(6.0, traj, bath::SnapshotMethod::direct);
    const auto spc = bath::bath_snapshot_full(6.0, traj, bath::SnapshotMethod::spectral);
    REQUIRE(dir.field.size() == spc.field.size());
    double worst = 0.0;
    for (size_t i = 0; i < dir.field.size(); ++i)
        worst = std::max(worst, std::abs(dir.field[i] - spc.field[i]));
    CHECK(worst < 1e-6);
    CHECK(dir.norm_in_region == doctest::Approx(spc.norm_in_region).epsilon(1e-6));
}

TEST_CASE("region validation") {
    auto traj = short_traj(1.0, 1, 11, 1.0);
    CHECK_THROWS_AS(bath::bath_snapshot(1.0, {-101}, {0}, traj), std::invalid_argument);
    CHECK_THROWS_AS(bath::bath_snapshot(1.0, {5}, {4}, traj), std::invalid_argument);
    CHECK_THROWS_AS(bath::beta_r({0, 0}, 1.0, traj), std::invalid_argument);
}

TEST_CASE("off-grid time uses interpolated history") {
    auto traj = short_traj(1.0, 1, 11, 2.0);
    const cxd a = bath::beta_r({0}, 1.0, traj);
    const cxd b = bath::beta_r({0}, 1.005, traj);     // between grid points
    const cxd c2 = bath::beta_r({0}, 1.02, traj);
    CHECK(std::abs(b - a) < std::abs(c2 - a) + 1e-12);
    CHECK(std::abs(b - a) > 0.0);
}
