#include "oracle.hpp"

#include "error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace chaintx::oracle {

namespace {

std::uint64_t site_bit(std::size_t n, std::size_t site) { return std::uint64_t{1} << (n - 1 - site); }

void check_size(std::size_t n, std::size_t cap, const char* what) {
    require(n >= 1 && n <= cap, std::string(what) + ": N=" + std::to_string(n) + " outside 1.." + std::to_string(cap));
}

// Pauli action on one qubit of a basis state: returns the flipped index and the phase.
struct PauliImage {
    std::uint64_t index;
    cplx phase;
};

PauliImage apply_x(std::uint64_t s, std::uint64_t bit) { return {s ^ bit, 1.0}; }
PauliImage apply_y(std::uint64_t s, std::uint64_t bit) {
    // Y|0> = i|1>, Y|1> = -i|0>
    return {s ^ bit, (s & bit) ? cplx{0.0, -1.0} : cplx{0.0, 1.0}};
}

} // namespace

ComplexMatrix full_hamiltonian(const ChainSpec& spec) {
    const std::size_t n = spec.sites();
    check_size(n, kMaxSites, "full_hamiltonian");
    const std::uint64_t dim = std::uint64_t{1} << n;
    ComplexMatrix h(dim, dim);
    const auto couplings = spec.couplings();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double amp = -spec.hop_prefactor() * couplings[i] / 2.0;
        const std::uint64_t bi = site_bit(n, i), bj = site_bit(n, i + 1);
        for (std::uint64_t s = 0; s < dim; ++s) {
            const PauliImage x1 = apply_x(s, bi), x2 = apply_x(x1.index, bj);
            const PauliImage y1 = apply_y(s, bi), y2 = apply_y(y1.index, bj);
            h(x2.index, s) += amp * x1.phase * x2.phase;
            h(y2.index, s) -= amp * y1.phase * y2.phase;
        }
    }
    return h;
}

ComplexMatrix staggered_charge(std::size_t n) {
    check_size(n, kMaxSites, "staggered_charge");
    const std::uint64_t dim = std::uint64_t{1} << n;
    ComplexMatrix q(dim, dim);
    for (std::uint64_t s = 0; s < dim; ++s) {
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double z = (s & site_bit(n, i)) ? -1.0 : 1.0;
            v += (i % 2 == 0) ? z : -z; // i = 0 is site 1 (odd)
        }
        q(s, s) = v;
    }
    return q;
}

std::uint64_t reference_pattern(std::size_t n) {
    std::uint64_t r = 0;
    for (std::size_t i = 1; i < n; i += 2) r |= site_bit(n, i);
    return r;
}

std::uint64_t sector_index(std::size_t n, std::size_t site) {
    require(site < n, "sector_index: site out of range");
    return reference_pattern(n) ^ site_bit(n, site);
}

FullState embed(const SubspaceState& state) {
    const std::size_t n = state.size();
    check_size(n, kMaxSites, "embed");
    FullState f{n, ComplexVector(std::size_t{1} << n)};
    for (std::size_t j = 0; j < n; ++j) f.amplitudes[sector_index(n, j)] = state[j];
    return f;
}

double sector_leakage(const FullState& full) {
    const std::size_t n = full.sites;
    double inside = 0.0, total = 0.0;
    for (const auto& a : full.amplitudes) total += std::norm(a);
    for (std::size_t j = 0; j < n; ++j) inside += std::norm(full.amplitudes[sector_index(n, j)]);
    return std::max(0.0, total - inside);
}

ComplexVector extract(const FullState& full) {
    const std::size_t n = full.sites;
    check_size(n, kMaxSites, "extract");
    require(full.amplitudes.size() == (std::size_t{1} << n), "extract: amplitude count is not 2^N");
    const double leak = sector_leakage(full);
    if (leak > 1e-9) throw NumericalError("extract: sector leakage " + std::to_string(leak) + " exceeds 1e-9");
    ComplexVector c(n);
    for (std::size_t j = 0; j < n; ++j) c[j] = full.amplitudes[sector_index(n, j)];
    return c;
}

struct FullPropagator::Impl {
    Eigen::VectorXd energies;
    Eigen::MatrixXd vectors;
};

FullPropagator::FullPropagator(const ChainSpec& spec) : sites_(spec.sites()), impl_(std::make_unique<Impl>()) {
    const ComplexMatrix h = full_hamiltonian(spec);
    const auto dim = static_cast<Eigen::Index>(h.rows());
    // XX and YY are real in the computational basis.
    Eigen::MatrixXd hr(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) hr(i, j) = h(i, j).real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hr);
    if (solver.info() != Eigen::Success) throw NumericalError("FullPropagator: dense eigensolver failed");
    impl_->energies = solver.eigenvalues();
    impl_->vectors = solver.eigenvectors();
}

FullPropagator::~FullPropagator() = default;
FullPropagator::FullPropagator(FullPropagator&&) noexcept = default;
FullPropagator& FullPropagator::operator=(FullPropagator&&) noexcept = default;

FullState FullPropagator::evolve(const FullState& psi, double t) const {
    require(psi.sites == sites_, "evolve_full: state size differs from chain");
    const auto dim = impl_->energies.size();
    Eigen::VectorXcd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = psi.amplitudes[static_cast<std::size_t>(i)];
    Eigen::VectorXcd a = impl_->vectors.transpose().cast<cplx>() * v;
    for (Eigen::Index m = 0; m < dim; ++m) a(m) *= std::polar(1.0, -impl_->energies(m) * t);
    const Eigen::VectorXcd out = impl_->vectors.cast<cplx>() * a;
    FullState r{sites_, ComplexVector(static_cast<std::size_t>(dim))};
    for (Eigen::Index i = 0; i < dim; ++i) r.amplitudes[static_cast<std::size_t>(i)] = out(i);
    return r;
}

FullState evolve_full(const ChainSpec& spec, const FullState& psi, double t) {
    return FullPropagator(spec).evolve(psi, t);
}

double fidelity_full(const FullPropagator& prop, const EncodingSpec& enc, const SubspaceState& initial, double t) {
    const std::size_t n = prop.sites();
    check_size(n, kMaxFidelitySites, "fidelity_full");
    enc.validate(n);
    require(initial.size() == n, "fidelity_full: state dimension differs from chain");
    for (std::size_t j = enc.k; j < n; ++j)
        require(std::abs(initial[j]) <= 1e-10, "fidelity_full: initial state has support outside the sender region");

    const FullState psi = prop.evolve(embed(initial), t);
    const std::size_t k = enc.k;
    const std::uint64_t block = std::uint64_t{1} << k;
    const std::uint64_t envs = std::uint64_t{1} << (n - k);

    // Receiver sites are the k least significant bits.
    ComplexMatrix rho(block, block);
    for (std::uint64_t e = 0; e < envs; ++e)
        for (std::uint64_t a = 0; a < block; ++a) {
            const cplx pa = psi.amplitudes[e * block + a];
            if (pa == cplx{}) continue;
            for (std::uint64_t b = 0; b < block; ++b)
                rho(a, b) += pa * std::conj(psi.amplitudes[e * block + b]);
        }

    const std::uint64_t ref_b = reference_pattern(n) & (block - 1);
    ComplexVector phi(block);
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t r = enc.receiver_site(j, n);
        phi[ref_b ^ site_bit(n, r)] += initial[j];
    }
    const cplx f = dot(phi, multiply(rho, phi));
    return std::sqrt(std::max(0.0, f.real()));
}

double fidelity_full(const ChainSpec& spec, const EncodingSpec& enc, const SubspaceState& initial, double t) {
    return fidelity_full(FullPropagator(spec), enc, initial, t);
}

} // namespace chaintx::oracle
