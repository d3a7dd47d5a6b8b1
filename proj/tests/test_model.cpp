#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "aahbath/config.hpp"
#include "aahbath/model.hpp"

using namespace aahbath;

namespace {
ModelConfig base_cfg() {
    ModelConfig c;
    c.N_s = 21;
    c.lambda = 1.0;
    c.beta = (1.0 + std::sqrt(5.0)) / 2.0;
    c.phi = -0.6 * M_PI;
    c.g = 0.1;
    return c;
}
} // namespace

TEST_CASE("onsite potential") {
    ModelConfig c = base_cfg();
    c.Delta = 0.0;
    CHECK(model::onsite_potential(7, c) == 0.0);

    c.Delta = 1.0;
    c.phi = 0.0;
    CHECK(model::onsite_potential(0, c) == doctest::Approx(1.0).epsilon(1e-15));

    c = base_cfg();
    c.Delta = 3.0;
    // high-precision evaluation of Delta*cos(2 pi beta + phi)
    const long double arg = 2.0L * 3.14159265358979323846264338328L *
                            1.61803398874989484820458683437L - 0.6L * 3.14159265358979323846264338328L;
    const double expect = static_cast<double>(3.0L * std::cos(arg));
    CHECK(model::onsite_potential(1, c) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(model::onsite_potential(1, c) == doctest::Approx(-1.2437).epsilon(1e-4));
}

TEST_CASE("system hamiltonian structure") {
    ModelConfig c = base_cfg();
    c.N_s = 2;
    c.Delta = 0.0;
    const auto H = model::build_system_hamiltonian(c);
    CHECK(H(0, 0) == 0.0);
    CHECK(H(0, 1) == 1.0);
    CHECK(H(1, 0) == 1.0);
    CHECK(H(1, 1) == 0.0);

    c.N_s = 3;
    const auto H3 = model::build_system_hamiltonian(c);
    const auto cs = model::closed_spectrum(H3);
    CHECK(cs.energies(0) == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-12));
    CHECK(cs.energies(1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(cs.energies(2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("open chain analytic spectrum at Delta=0") {
    ModelConfig c = base_cfg();
    c.Delta = 0.0;
    const auto cs = model::closed_spectrum(model::build_system_hamiltonian(c));
    for (int q = 1; q <= c.N_s; ++q) {
        const double expect = 2.0 * c.lambda * std::cos(q * M_PI / (c.N_s + 1));
        // ascending order: q = N_s maps to the lowest level
        CHECK(cs.energies(c.N_s - q) == doctest::Approx(expect).epsilon(1e-10));
    }
}

TEST_CASE("closed spectrum invariants") {
    ModelConfig c = base_cfg();
    c.Delta = 3.0;
    const auto H = model::build_system_hamiltonian(c);
    const auto cs = model::closed_spectrum(H);
    // residual and orthonormality
    for (int q = 0; q < c.N_s; ++q) {
        const Eigen::VectorXd r = H * cs.states.col(q) - cs.energies(q) * cs.states.col(q);
        CHECK(r.norm() < 1e-10);
    }
    const Eigen::MatrixXd gram = cs.states.transpose() * cs.states;
    CHECK((gram - Eigen::MatrixXd::Identity(c.N_s, c.N_s)).cwiseAbs().maxCoeff() < 1e-12);
    // ascending
    for (int q = 1; q < c.N_s; ++q) CHECK(cs.energies(q) >= cs.energies(q - 1));
    // sign fix: first nonzero component positive
    for (int q = 0; q < c.N_s; ++q) {
        for (int r = 0; r < c.N_s; ++r) {
            if (std::abs(cs.states(r, q)) > 1e-12) {
                CHECK(cs.states(r, q) > 0.0);
                break;
            }
        }
    }
}

TEST_CASE("localization of eigenvectors across the transition") {
    ModelConfig c = base_cfg();
    c.Delta = 1.0;
    auto cs = model::closed_spectrum(model::build_system_hamiltonian(c));
    // the open chain keeps its two in-gap edge modes even in the delocalized
    // phase; every bulk state must be extended there
    std::vector<double> iprs;
    for (int q = 0; q < c.N_s; ++q) iprs.push_back(model::vector_ipr(cs.states.col(q)));
    std::sort(iprs.begin(), iprs.end());
    CHECK(iprs[c.N_s - 3] < 0.2);           // all but the two edge modes
    CHECK(iprs[c.N_s - 1] < 0.5);           // edge modes only weakly localized here

    c.Delta = 3.0;
    cs = model::closed_spectrum(model::build_system_hamiltonian(c));
    double max_ipr = 0.0;
    int edge_hits = 0;
    for (int q = 0; q < c.N_s; ++q) {
        const double ipr = model::vector_ipr(cs.states.col(q));
        max_ipr = std::max(max_ipr, ipr);
        int imax = 0;
        for (int r = 1; r < c.N_s; ++r)
            if (std::abs(cs.states(r, q)) > std::abs(cs.states(imax, q))) imax = r;
        if (ipr > 0.5 && (imax == 0 || imax == c.N_s - 1)) ++edge_hits;
    }
    CHECK(max_ipr > 0.5);   // localized phase
    CHECK(edge_hits >= 2);  // the two edge modes sit at n=1 and n=N_s
}

TEST_CASE("dispersion") {
    ModelConfig c = base_cfg();
    c.d = 3;
    CHECK(model::dispersion({0.0, 0.0, 0.0}, c) == doctest::Approx(3.0));
    c.d = 2;
    CHECK(model::dispersion({M_PI, M_PI}, c) == doctest::Approx(-2.0));
    c.d = 1;
    CHECK(model::dispersion({M_PI / 2}, c) == doctest::Approx(0.0).epsilon(1e-15));
    // even and bounded
    for (double k = -3.0; k <= 3.0; k += 0.37) {
        CHECK(model::dispersion({k}, c) == doctest::Approx(model::dispersion({-k}, c)));
        CHECK(std::abs(model::dispersion({k}, c)) <= 1.0 + 1e-12);
    }
}

TEST_CASE("atom site map") {
    ModelConfig c = base_cfg();
    c.d = 2;
    CHECK(model::atom_site_map(11, c) == std::vector<int>{0, 0});
    c.d = 3;
    CHECK(model::atom_site_map(1, c) == std::vector<int>{10, 10, 10});
    c.d = 1;
    CHECK(model::atom_site_map(21, c) == std::vector<int>{-10});
    // isometry along the body diagonal
    for (int n = 1; n <= c.N_s; ++n)
        for (int m = 1; m <= c.N_s; ++m)
            CHECK(std::abs(model::atom_site_offset(n, c) - model::atom_site_offset(m, c)) ==
                  std::abs(n - m));
    c.N_s = 20;
    CHECK_THROWS_AS(model::atom_site_map(1, c), std::invalid_argument);
}

TEST_CASE("config round trip and hash") {
    ModelConfig c = base_cfg();
    c.Delta = 3.0;
    c.d = 2;
    const std::string s1 = canonical_config(c);
    const auto p = parse_config_text(s1);
    const std::string s2 = canonical_config(p.model);
    CHECK(s1 == s2);
    CHECK(config_hash(c) == config_hash(p.model));

    ModelConfig c2 = c;
    c2.g = 0.2;
    CHECK(config_hash(c) != config_hash(c2));

    // extra keys are preserved for the run layer
    const auto q = parse_config_text("N_s = 5\nn0 = 3\nd=1\n");
    CHECK(q.model.N_s == 5);
    CHECK(q.extra.at("n0") == "3");

    CHECK_THROWS_AS(parse_config_text("d = 4\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("dt = -1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("garbage line\n"), std::invalid_argument);
}
