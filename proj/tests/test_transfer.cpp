#include "error.hpp"
#include "transfer.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace chaintx;

namespace {

ChainSpec random_chain(std::mt19937& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<double> c(n - 1);
    for (auto& x : c) x = u(rng);
    const double g = (rng() % 2 ? 1.0 : -1.0) * std::uniform_real_distribution<double>(0.3, 2.0)(rng);
    return ChainSpec(std::move(c), g);
}

SubspaceState random_sender_state(std::mt19937& rng, std::size_t n, std::size_t k) {
    std::normal_distribution<double> d;
    ComplexVector a(n);
    for (std::size_t j = 0; j < k; ++j) a[j] = {d(rng), d(rng)};
    return SubspaceState::normalized(std::move(a));
}

UnitaryEigenSystem synthetic(const std::vector<double>& phases) {
    UnitaryEigenSystem es;
    es.vectors = ComplexMatrix::identity(phases.size());
    for (double p : phases) es.values.push_back(std::polar(1.0, p));
    return es;
}

} // namespace

TEST_CASE("encoding validation and receiver sites") {
    CHECK_THROWS_AS(EncodingSpec{0}.validate(4), InvalidArgument);
    CHECK_THROWS_AS(EncodingSpec{3}.validate(5), InvalidArgument);
    CHECK_NOTHROW(EncodingSpec{3}.validate(6));
    const EncodingSpec direct{2, SwapOrder::Direct}, mirror{2, SwapOrder::Mirror};
    CHECK(direct.receiver_site(0, 5) == 3);
    CHECK(direct.receiver_site(1, 5) == 4);
    CHECK(mirror.receiver_site(0, 5) == 4);
    CHECK(mirror.receiver_site(1, 5) == 3);
    CHECK(parse_order("mirror") == SwapOrder::Mirror);
    CHECK(order_name(SwapOrder::Direct) == "direct");
    CHECK_THROWS_AS(parse_order("reverse"), InvalidArgument);
}

TEST_CASE("swap operator is an involutive permutation") {
    for (std::size_t n = 2; n <= 9; ++n)
        for (std::size_t k = 1; 2 * k <= n; ++k)
            for (auto order : {SwapOrder::Direct, SwapOrder::Mirror}) {
                const ComplexMatrix p = swap_operator(n, {k, order});
                CHECK(approx_equal(multiply(p, p), ComplexMatrix::identity(n), 0.0));
                CHECK(approx_equal(adjoint(p), p, 0.0));
            }
}

TEST_CASE("W(tau) is unitary") {
    std::mt19937 rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + rng() % 11;
        const ChainSpec c = random_chain(rng, n);
        const EncodingSpec enc{1 + rng() % (n / 2), trial % 2 ? SwapOrder::Mirror : SwapOrder::Direct};
        const double tau = std::uniform_real_distribution<double>(0.0, 40.0)(rng);
        CHECK(unitarity_defect(transfer_operator(c, enc, tau)) <= 1e-12);
        CHECK(unitarity_defect(propagator(c, tau)) <= 1e-12);
    }
}

TEST_CASE("Parseval: overlaps with the W eigenbasis square-sum to one") {
    std::mt19937 rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + rng() % 11;
        const ChainSpec c = random_chain(rng, n);
        const EncodingSpec enc{1 + rng() % (n / 2)};
        const UnitaryEigenSystem es = eig_unitary(transfer_operator(c, enc, 1.0 + trial));
        double s = 0.0;
        for (double p : overlap_pm(es, random_sender_state(rng, n, n))) {
            CHECK(p <= 1.0 + 1e-12);
            s += p * p;
        }
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("rescale invariance: J -> sJ, t -> t/s") {
    std::mt19937 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + rng() % 9;
        const ChainSpec c = random_chain(rng, n);
        const EncodingSpec enc{1 + rng() % (n / 2)};
        const SubspaceState s0 = random_sender_state(rng, n, enc.k);
        const double s = std::uniform_real_distribution<double>(0.2, 5.0)(rng);
        const double t = std::uniform_real_distribution<double>(0.0, 30.0)(rng);
        CHECK(std::abs(fidelity(c, enc, s0, t) - fidelity(c.rescaled(s), enc, s0, t / s)) <= 1e-10);
        CHECK(max_abs_diff(transfer_operator(c, enc, t), transfer_operator(c.rescaled(s), enc, t / s)) <= 1e-10);
    }
}

TEST_CASE("prefactor enters only as g t") {
    const ChainSpec c1(profile::WeakEnds{-1.0, -0.1}, 5, 1.0);
    const ChainSpec c2 = c1.with_prefactor(2.0);
    const SubspaceState one = SubspaceState::basis(5, 0);
    for (double t : {0.3, 4.0, 17.5, 31.0})
        CHECK(std::abs(fidelity(c2, {1}, one, t) - fidelity(c1, {1}, one, 2.0 * t)) <= 1e-12);
}

TEST_CASE("two-site chain: F(t) = |sin(g J t)|") {
    for (double g : {1.0, -0.5, 2.0})
        for (double j : {-1.0, 0.7}) {
            const ChainSpec c(std::vector<double>{j}, g);
            for (double t = 0.0; t < 6.0; t += 0.37)
                CHECK(fidelity(c, {1}, SubspaceState::basis(2, 0), t) ==
                      doctest::Approx(std::abs(std::sin(g * j * t))).epsilon(1e-12));
        }
}

TEST_CASE("fidelity is zero at t = 0 and rejects receiver-side support") {
    const ChainSpec c(profile::Uniform{-1.0}, 6);
    CHECK(fidelity(c, {3}, family_state(StateFamily::ThreeSpin, 6), 0.0) == doctest::Approx(0.0));
    const double amps[] = {1.0, 0.0, 0.0, 0.0, 0.0, 0.1};
    CHECK_THROWS_AS(fidelity(c, {3}, SubspaceState::normalized(std::span<const double>(amps)), 1.0), InvalidArgument);
    CHECK_THROWS_AS(fidelity(c, {3}, SubspaceState::basis(5, 0), 1.0), InvalidArgument);
}

TEST_CASE("degenerate clusters use transitive closure and wrap around the branch cut") {
    const double pi = std::numbers::pi;
    auto cl = find_clusters(synthetic({pi - 0.01, 0.0, -pi + 0.01}), 0.05);
    REQUIRE(cl.size() == 2);
    CHECK(cl[0].members == std::vector<std::size_t>{0, 2});
    CHECK(cl[0].spread == doctest::Approx(0.02));
    CHECK(std::abs(std::abs(cl[0].phase) - pi) < 1e-12);
    CHECK(cl[1].members == std::vector<std::size_t>{1});

    cl = find_clusters(synthetic({0.0, 0.04, 0.08, 1.0}), 0.05);
    REQUIRE(cl.size() == 2);
    CHECK(cl[0].members == std::vector<std::size_t>{0, 1, 2});
    CHECK(cl[0].spread == doctest::Approx(0.08));

    CHECK(find_clusters(synthetic({0.0, 0.01}), 0.05).size() == 1);
    CHECK_THROWS_AS(find_clusters(synthetic({0.0}), 0.0), InvalidArgument);
}

TEST_CASE("candidates: single-eigenvector and cluster passes") {
    // N = 2, tau = 0: W is the bare swap with eigenvectors (|1> +- |2>)/sqrt2.
    const ChainSpec c(profile::Uniform{-1.0}, 2);
    const UnitaryEigenSystem es = eig_unitary(transfer_operator(c, {1}, 0.0));
    CHECK(find_candidates(es, {1}, 0.05, 0.01).empty());

    // A window wide enough to merge +1 and -1 lets the cluster pass recover |1>.
    const auto all = find_candidates(es, {1}, 4.0, 0.01);
    REQUIRE(all.size() == 1);
    CHECK(all[0].from_cluster);
    CHECK(all[0].sender_weight == doctest::Approx(1.0));
    CHECK(std::abs(all[0].initial[0]) == doctest::Approx(1.0));

    // Identity eigensystem: every basis vector inside the sender region qualifies.
    const auto id = find_candidates(synthetic({0.1, 1.0, 2.0, 3.0}), {2}, 0.05, 0.01);
    REQUIRE(id.size() == 2);
    CHECK(id[0].members == std::vector<std::size_t>{0});
    CHECK(id[1].members == std::vector<std::size_t>{1});
    CHECK_THROWS_AS(find_candidates(es, {1}, 0.05, 0.0), InvalidArgument);
}

TEST_CASE("PST condition: an exact candidate transfers with unit fidelity") {
    std::mt19937 rng(8);
    const double pi = std::numbers::pi;
    for (std::size_t n = 2; n <= 10; ++n) {
        const double scale = std::uniform_real_distribution<double>(0.3, 2.0)(rng);
        const double g = n % 2 ? -0.7 : 1.3;
        const ChainSpec c(profile::PerfectTransfer{scale}, n, g);
        const double tau = pi / (2.0 * std::abs(g) * scale);
        for (std::size_t k = 1; 2 * k <= n; ++k) {
            const EncodingSpec enc{k, SwapOrder::Mirror};
            const UnitaryEigenSystem es = eig_unitary(transfer_operator(c, enc, tau));
            std::size_t exact = 0;
            for (const auto& cand : find_candidates(es, enc, 0.05, 0.01, tau)) {
                if (cand.sender_weight < 1.0 - 1e-9) continue;
                ++exact;
                CHECK(fidelity(c, enc, sender_projection(cand.initial, k), tau) >= 1.0 - 1e-6);
            }
            CHECK(exact >= 1);
        }
    }
}

TEST_CASE("time grid") {
    const auto g = time_grid({0.0, 1.0}, 0.1);
    REQUIRE(g.size() == 11);
    CHECK(g.back() == doctest::Approx(1.0));
    CHECK(time_grid({0.0, 50.0}, 0.01).size() == 5001);
    CHECK_THROWS_AS(time_grid({5.0, 5.0}, 0.01), InvalidArgument);
    CHECK_THROWS_AS(time_grid({6.0, 5.0}, 0.01), InvalidArgument);
    CHECK_THROWS_AS(time_grid({0.0, 1.0}, 0.0), InvalidArgument);
    CHECK_THROWS_AS(time_grid({0.0, std::nan("")}, 0.1), InvalidArgument);
}

TEST_CASE("time scan refines the best grid point and reports the earliest maximum") {
    const ChainSpec c(std::vector<double>{1.0}, 1.0);
    // |sin t| reaches 1 at pi/2, 3pi/2, ...: the first one must win.
    const FidelityTrace tr = scan_time(c, {1}, SubspaceState::basis(2, 0), {0.0, 10.0}, 0.01);
    CHECK(tr.t_max == doctest::Approx(std::numbers::pi / 2).epsilon(1e-4));
    CHECK(tr.f_max >= 1.0 - 1e-8);
    for (double f : tr.fidelities) CHECK(f <= tr.f_max + 1e-15);
}

TEST_CASE("length scan matches sequential scans and is repeatable") {
    LengthScanRequest req;
    req.family = StateFamily::TwoSpin;
    req.n_min = 4;
    req.n_max = 12;
    req.window = {0.0, 20.0};
    const auto a = scan_length(req);
    const auto b = scan_length(req);
    REQUIRE(a.size() == 9);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::size_t n = req.n_min + i;
        const FidelityTrace tr =
            scan_time(ChainSpec(req.profile, n, req.g), {2}, family_state(req.family, n), req.window, req.step);
        CHECK(a[i].n == n);
        CHECK(a[i].f_max == tr.f_max);
        CHECK(a[i].t_max == tr.t_max);
        CHECK(b[i].f_max == a[i].f_max);
        CHECK(b[i].t_max == a[i].t_max);
    }
    req.n_min = 3;
    CHECK_THROWS_AS(scan_length(req), InvalidArgument);
}

TEST_CASE("superposition residual") {
    const ChainSpec c(profile::Uniform{-1.0}, 5);
    const UnitaryEigenSystem es = eig_unitary(transfer_operator(c, {2}, 3.0));
    const std::size_t idx[] = {1, 3};
    const ComplexVector target = [&] {
        ComplexVector t(5);
        for (std::size_t j = 0; j < 5; ++j) t[j] = 0.6 * es.vectors(j, 1) + 0.8 * es.vectors(j, 3);
        return t;
    }();
    const cplx coeffs[] = {0.6, 0.8};
    CHECK(verify_pst_superposition(es, idx, coeffs, target) <= 1e-7);
    // Global phase does not count.
    const cplx rotated[] = {0.6 * std::polar(1.0, 1.0), 0.8 * std::polar(1.0, 1.0)};
    CHECK(verify_pst_superposition(es, idx, rotated, target) <= 1e-7);
    const cplx wrong[] = {0.8, 0.6};
    CHECK(verify_pst_superposition(es, idx, wrong, target) > 0.1);
    const std::size_t bad[] = {1, 9};
    CHECK_THROWS_AS(verify_pst_superposition(es, bad, coeffs, target), InvalidArgument);
}

TEST_CASE("overlap tracking") {
    const ChainSpec c(profile::Uniform{-1.0}, 7);
    const auto peaks = track_overlap_maxima(c, {1}, SubspaceState::basis(7, 0), {5.0, 40.0}, 0.05);
    REQUIRE(peaks.size() == 7);
    for (std::size_t m = 0; m < 7; ++m) {
        CHECK(peaks[m].label == m);
        CHECK(peaks[m].p <= 1.0 + 1e-12);
        CHECK(peaks[m].tau >= 5.0);
        CHECK(peaks[m].tau <= 40.0);
    }
    CHECK_THROWS_AS(track_overlap_maxima(c, {1}, SubspaceState::basis(7, 0), {5.0, 5.0}), InvalidArgument);
}
