#include "error.hpp"
#include "oracle.hpp"

#include <doctest.h>

#include <random>

using namespace chaintx;

namespace {

ChainSpec random_chain(std::mt19937& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<double> c(n - 1);
    for (auto& x : c) x = u(rng);
    return ChainSpec(std::move(c), rng() % 2 ? 1.0 : -0.5);
}

} // namespace

TEST_CASE("reference pattern and sector labels for N = 5") {
    CHECK(oracle::reference_pattern(5) == 0b01010);
    CHECK(oracle::sector_index(5, 0) == 0b11010);
    CHECK(oracle::sector_index(5, 1) == 0b00010);
    CHECK(oracle::sector_index(5, 4) == 0b01011);
}

TEST_CASE("staggered charge commutes with the DQ Hamiltonian") {
    std::mt19937 rng(21);
    for (std::size_t n = 2; n <= 8; ++n)
        for (int trial = 0; trial < 3; ++trial) {
            const ComplexMatrix h = oracle::full_hamiltonian(random_chain(rng, n));
            const ComplexMatrix q = oracle::staggered_charge(n);
            CHECK(max_abs_diff(multiply(h, q), multiply(q, h)) <= 1e-12);
            CHECK(max_abs_diff(h, adjoint(h)) <= 1e-14);
        }
}

TEST_CASE("sector states carry charge N - 2 and H restricted to the sector is the hopping matrix") {
    std::mt19937 rng(22);
    for (std::size_t n = 2; n <= 8; ++n) {
        const ChainSpec spec = random_chain(rng, n);
        const ComplexMatrix h = oracle::full_hamiltonian(spec);
        const ComplexMatrix q = oracle::staggered_charge(n);
        const SymTridiag sub = subspace_hamiltonian(spec);
        const std::size_t dim = std::size_t{1} << n;
        for (std::size_t a = 0; a < n; ++a) {
            const auto ia = oracle::sector_index(n, a);
            CHECK(q(ia, ia).real() == doctest::Approx(static_cast<double>(n) - 2.0));
            // Closure: H|a> has no weight outside the sector.
            double outside = 0.0;
            for (std::size_t s = 0; s < dim; ++s) {
                bool in = false;
                for (std::size_t b = 0; b < n; ++b) in = in || s == oracle::sector_index(n, b);
                if (!in) outside += std::norm(h(s, ia));
            }
            CHECK(outside <= 1e-24);
            for (std::size_t b = 0; b < n; ++b) {
                const cplx e = h(oracle::sector_index(n, b), ia);
                double want = 0.0;
                if (b + 1 == a) want = sub.offdiag[b];
                if (a + 1 == b) want = sub.offdiag[a];
                CHECK(std::abs(e - want) <= 1e-14);
            }
        }
    }
}

TEST_CASE("subspace evolution and fidelity agree with the full Hilbert space") {
    std::mt19937 rng(23);
    std::normal_distribution<double> d;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + trial % 9; // 2..10
        const ChainSpec spec = random_chain(rng, n);
        const EncodingSpec enc{1 + rng() % (n / 2), trial % 3 ? SwapOrder::Direct : SwapOrder::Mirror};
        ComplexVector a(n);
        for (std::size_t j = 0; j < enc.k; ++j) a[j] = {d(rng), d(rng)};
        const SubspaceState s0 = SubspaceState::normalized(a);
        const double t = std::uniform_real_distribution<double>(0.0, 20.0)(rng);

        const oracle::FullPropagator prop(spec);
        const oracle::FullState full = prop.evolve(oracle::embed(s0), t);
        CHECK(oracle::sector_leakage(full) <= 1e-12);
        const ComplexVector got = oracle::extract(full);
        const ComplexVector want = Evolution(spec).evolve(s0.amplitudes(), t);
        for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(got[j] - want[j]) <= 1e-10);

        CHECK(std::abs(oracle::fidelity_full(prop, enc, s0, t) - fidelity(spec, enc, s0, t)) <= 1e-10);
    }
}

TEST_CASE("oracle guards") {
    CHECK_THROWS_AS(oracle::full_hamiltonian(ChainSpec(profile::Uniform{1.0}, 13)), InvalidArgument);
    CHECK_THROWS_AS(oracle::fidelity_full(ChainSpec(profile::Uniform{1.0}, 11), {1}, SubspaceState::basis(11, 0), 1.0),
                    InvalidArgument);
    oracle::FullState leaky{3, ComplexVector(8)};
    leaky.amplitudes[0b111] = 1.0; // not reachable by a single flip of 010
    CHECK(oracle::sector_leakage(leaky) == doctest::Approx(1.0));
    CHECK_THROWS_AS(oracle::extract(leaky), NumericalError);
}
