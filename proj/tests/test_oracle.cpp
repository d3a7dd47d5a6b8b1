#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "aahbath/model.hpp"
#include "aahbath/oracle.hpp"

using namespace aahbath;
using cxd = std::complex<double>;

TEST_CASE("full hamiltonian block structure") {
    ModelConfig c;
    c.N_s = 3;
    c.N_b = 11;
    c.d = 1;
    c.g = 0.0;
    const auto H = oracle::build_full(c);
    CHECK(H.dim() == 14);
    // g = 0: no chain-bath entries
    const Eigen::MatrixXd Hd = Eigen::MatrixXd(H.H);
    CHECK(Hd.block(0, 3, 3, 11).cwiseAbs().maxCoeff() == 0.0);
    CHECK((Hd - Hd.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("explicit 4x4 check: one atom, three bath sites") {
    ModelConfig c;
    c.N_s = 1;
    c.N_b = 3;
    c.d = 1;
    c.g = 0.1;
    c.Delta = 0.5;
    c.phi = 0.3;
    c.beta = (1.0 + std::sqrt(5.0)) / 2.0;
    const auto H = oracle::build_full(c);
    const Eigen::MatrixXd Hd = Eigen::MatrixXd(H.H);
    REQUIRE(H.dim() == 4);
    // atom onsite
    CHECK(Hd(0, 0) == doctest::Approx(model::onsite_potential(1, c)));
    // atom couples to bath site x=0 (center of the ring, index offset 1)
    CHECK(Hd(0, 2) == doctest::Approx(0.1));
    // ring of 3 with hopping -J = -1/2 everywhere
    CHECK(Hd(1, 2) == doctest::Approx(-0.5));
    CHECK(Hd(2, 3) == doctest::Approx(-0.5));
    CHECK(Hd(1, 3) == doctest::Approx(-0.5));
    CHECK(Hd(1, 1) == 0.0);
}

TEST_CASE("bath block spectrum matches the band") {
    ModelConfig c;
    c.N_s = 1;
    c.N_b = 201;
    c.d = 1;
    c.g = 0.0;
    const auto H = oracle::build_full(c);
    Eigen::MatrixXd bath = Eigen::MatrixXd(H.H).block(1, 1, 201, 201);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(bath);
    // eigenvalues -cos(2 pi q / N_b), q = 0..N_b-1, inside [-1, 1]
    CHECK(es.eigenvalues().minCoeff() == doctest::Approx(-1.0).epsilon(1e-3));
    CHECK(es.eigenvalues().maxCoeff() == doctest::Approx(1.0).epsilon(1e-3));
    std::vector<double> expect;
    for (int q = 0; q < 201; ++q) expect.push_back(-std::cos(2.0 * M_PI * q / 201));
    std::sort(expect.begin(), expect.end());
    for (int q = 0; q < 201; ++q)
        CHECK(es.eigenvalues()(q) == doctest::Approx(expect[q]).epsilon(1e-10));
}

TEST_CASE("exact propagation: trivial limits and norm conservation") {
    ModelConfig c;
    c.N_s = 3;
    c.N_b = 31;
    c.d = 1;
    c.g = 0.1;
    const auto H = oracle::build_full(c);
    const auto psi0 = oracle::chain_site_state(H, 2);
    const auto snaps = oracle::exact_propagate(H, psi0, {0.0, 1.0, 5.0, 20.0});
    CHECK((snaps[0] - psi0).norm() < 1e-14);
    for (const auto& s : snaps) CHECK(std::abs(s.norm() - 1.0) < 1e-10);
}

TEST_CASE("chebyshev route matches the dense eigendecomposition route") {
    ModelConfig c;
    c.N_s = 5;
    c.N_b = 51;
    c.d = 1;
    c.g = 0.1;
    c.Delta = 3.0;
    const auto H = oracle::build_full(c);
    const auto psi0 = oracle::chain_site_state(H, 1);
    const std::vector<double> times = {0.5, 3.0, 11.0};
    const auto a = oracle::exact_propagate(H, psi0, times);
    const auto b = oracle::exact_propagate_dense(H, psi0, times);
    for (size_t i = 0; i < times.size(); ++i)
        CHECK((a[i] - b[i]).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("d=2 oracle runs at moderate size") {
    ModelConfig c;
    c.N_s = 21;
    c.N_b = 41;
    c.d = 2;
    c.g = 0.1;
    const auto H = oracle::build_full(c);
    CHECK(H.dim() == 21 + 41 * 41);
    const auto psi0 = oracle::chain_site_state(H, 11);
    const auto snaps = oracle::exact_propagate(H, psi0, {2.0});
    CHECK(std::abs(snaps[0].norm() - 1.0) < 1e-10);
    // some weight must have left the chain
    double chain = 0.0;
    for (int n = 0; n < 21; ++n) chain += std::norm(snaps[0](n));
    CHECK(chain < 1.0);
    CHECK(chain > 0.5);
}

TEST_CASE("recurrence time") {
    ModelConfig c;
    c.N_b = 201;
    c.d = 1;
    CHECK(oracle::recurrence_time(c) == doctest::Approx(100.0).epsilon(0.01));
    c.d = 2;
    CHECK(oracle::recurrence_time(c) == doctest::Approx(50.0).epsilon(0.01));
    c.N_b = 1000000000;
    c.d = 1;
    CHECK(oracle::recurrence_time(c) > 1e8);
}

TEST_CASE("size cap") {
    ModelConfig c;
    c.N_b = 201;
    c.d = 3;
    CHECK_THROWS_AS(oracle::build_full(c), std::invalid_argument);
}
