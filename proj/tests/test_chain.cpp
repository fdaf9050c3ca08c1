#include "chain.hpp"
#include "error.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace chaintx;

TEST_CASE("coupling profiles") {
    CHECK(build_couplings(profile::Uniform{-1.0}, 4) == std::vector<double>{-1.0, -1.0, -1.0});
    CHECK(build_couplings(profile::WeakEnds{-1.0, -0.1}, 5) == std::vector<double>{-0.1, -1.0, -1.0, -0.1});
    const auto pst = build_couplings(profile::PerfectTransfer{1.0}, 4);
    REQUIRE(pst.size() == 3);
    CHECK(pst[0] == doctest::Approx(std::sqrt(3.0)));
    CHECK(pst[1] == doctest::Approx(2.0));
    CHECK(pst[2] == doctest::Approx(std::sqrt(3.0)));
    CHECK(build_couplings(profile::PerfectTransfer{0.5}, 2) == std::vector<double>{0.5});
    CHECK(build_couplings(profile::Custom{{1.0, 2.0}}, 3) == std::vector<double>{1.0, 2.0});

    CHECK_THROWS_AS(build_couplings(profile::Custom{{1.0, 2.0}}, 4), InvalidArgument);
    CHECK_THROWS_AS(build_couplings(profile::Uniform{1.0}, 1), InvalidArgument);
    // N = 2 weak ends: the single bond is both end bonds.
    CHECK(build_couplings(profile::WeakEnds{-1.0, -0.1}, 2) == std::vector<double>{-0.1});
}

TEST_CASE("chain validation") {
    CHECK_THROWS_AS(ChainSpec(std::vector<double>{}, 1.0), InvalidArgument);
    CHECK_THROWS_AS(ChainSpec(std::vector<double>{1.0, std::nan("")}, 1.0), InvalidArgument);
    CHECK_THROWS_AS(ChainSpec(std::vector<double>{1.0}, 0.0), InvalidArgument);
    CHECK_THROWS_AS(ChainSpec(std::vector<double>{1.0}, std::numeric_limits<double>::infinity()), InvalidArgument);
    const ChainSpec c(profile::Uniform{-1.0}, 5, -0.5);
    CHECK(c.sites() == 5);
    CHECK(c.hop_prefactor() == -0.5);
    CHECK(c.with_prefactor(2.0).hop_prefactor() == 2.0);
    CHECK(c.rescaled(3.0).couplings()[2] == -3.0);
}

TEST_CASE("subspace Hamiltonian hopping is -g J") {
    const SymTridiag h = subspace_hamiltonian(ChainSpec(std::vector<double>{2.0, -1.0}, 0.5));
    CHECK(h.diag == std::vector<double>{0.0, 0.0, 0.0});
    CHECK(h.offdiag == std::vector<double>{-1.0, 0.5});
}

TEST_CASE("analytic uniform eigensystem matches the numerical one up to N = 64") {
    for (double g : {1.0, -1.0, 0.5}) {
        for (std::size_t n = 2; n <= 64; ++n) {
            const double j = -1.0;
            const EigenSystem num = eig_sym_tridiag(subspace_hamiltonian(ChainSpec(profile::Uniform{j}, n, g)));
            const EigenSystem ana = analytic_uniform_eigensystem(n, j, g);
            for (std::size_t m = 0; m < n; ++m) {
                CHECK(std::abs(num.values[m] - ana.values[m]) <= 1e-10);
                // Eigenvectors agree up to sign.
                double same = 0.0, flip = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    same = std::max(same, std::abs(num.vectors(i, m) - ana.vectors(i, m)));
                    flip = std::max(flip, std::abs(num.vectors(i, m) + ana.vectors(i, m)));
                }
                CHECK(std::min(same, flip) <= 1e-10);
            }
        }
    }
}

TEST_CASE("analytic spectrum at g = 1 is -2J cos(pi m / (N+1))") {
    const EigenSystem es = analytic_uniform_eigensystem(3, -1.0, 1.0);
    // -2J cos(q) with J = -1 gives 2 cos(q): ascending -sqrt2, 0, sqrt2.
    CHECK(es.values[0] == doctest::Approx(-std::sqrt(2.0)));
    CHECK(es.values[1] == doctest::Approx(0.0));
    CHECK(es.values[2] == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("subspace states") {
    const double in[] = {3.0, 4.0};
    const SubspaceState s = SubspaceState::normalized(std::span<const double>(in));
    CHECK(s[0].real() == doctest::Approx(0.6));
    CHECK(s.weight_on_first(1) == doctest::Approx(0.36));
    CHECK(s.weight_on_first(5) == doctest::Approx(1.0));
    CHECK_THROWS_AS(SubspaceState::normalized(ComplexVector(3)), InvalidArgument);
    CHECK_THROWS_AS(SubspaceState::normalized(ComplexVector{}), InvalidArgument);
    CHECK_THROWS_AS(SubspaceState::basis(3, 3), InvalidArgument);
}

TEST_CASE("state families") {
    const SubspaceState three = family_state(StateFamily::ThreeSpin, 6);
    CHECK(three[0].real() == doctest::Approx(-1.0 / std::sqrt(2.0)));
    CHECK(three[2].real() == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(three.weight_on_first(3) == doctest::Approx(1.0));
    const SubspaceState two = family_state(StateFamily::TwoSpin, 4);
    CHECK(two[1].real() == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(family_width(StateFamily::ThreeSpin) == 3);
    CHECK_THROWS_AS(family_state(StateFamily::ThreeSpin, 2), InvalidArgument);
    for (auto f : {StateFamily::Single, StateFamily::TwoSpin, StateFamily::ThreeSpin})
        CHECK(parse_family(family_name(f)) == f);
    CHECK_THROWS_AS(parse_family("four-spin"), InvalidArgument);
}
