#include "chain.hpp"

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace chaintx {

std::vector<double> build_couplings(const CouplingProfile& p, std::size_t n) {
    require(n >= 2, "build_couplings: chain needs at least 2 sites");
    const std::size_t links = n - 1;
    struct Visitor {
        std::size_t n, links;
        std::vector<double> operator()(const profile::Uniform& u) const { return std::vector<double>(links, u.j); }
        std::vector<double> operator()(const profile::WeakEnds& w) const {
            std::vector<double> c(links, w.j);
            c.front() = w.j0;
            c.back() = w.j0;
            return c;
        }
        std::vector<double> operator()(const profile::PerfectTransfer& t) const {
            std::vector<double> c(links);
            for (std::size_t i = 1; i <= links; ++i)
                c[i - 1] = t.scale * std::sqrt(static_cast<double>(i * (n - i)));
            return c;
        }
        std::vector<double> operator()(const profile::Custom& c) const {
            require(c.couplings.size() == links, "build_couplings: custom list has " +
                                                     std::to_string(c.couplings.size()) + " entries, expected " +
                                                     std::to_string(links));
            return c.couplings;
        }
    };
    return std::visit(Visitor{n, links}, p);
}

ChainSpec::ChainSpec(std::vector<double> couplings, double hop_prefactor)
    : couplings_(std::move(couplings)), g_(hop_prefactor) {
    require(!couplings_.empty(), "ChainSpec: chain needs at least 2 sites");
    for (double c : couplings_) require(std::isfinite(c), "ChainSpec: couplings must be finite");
    require(std::isfinite(g_) && g_ != 0.0, "ChainSpec: hop prefactor g must be finite and non-zero");
}

ChainSpec::ChainSpec(const CouplingProfile& p, std::size_t n, double hop_prefactor)
    : ChainSpec(build_couplings(p, n), hop_prefactor) {}

ChainSpec ChainSpec::rescaled(double s) const {
    std::vector<double> c = couplings_;
    for (auto& x : c) x *= s;
    return ChainSpec(std::move(c), g_);
}

SubspaceState SubspaceState::normalized(ComplexVector amplitudes) {
    require(!amplitudes.empty(), "SubspaceState: empty amplitude list");
    const double nrm = norm(amplitudes);
    require(std::isfinite(nrm) && nrm > 0.0, "SubspaceState: amplitudes must be finite and non-zero");
    for (auto& a : amplitudes) a /= nrm;
    return SubspaceState(std::move(amplitudes));
}

SubspaceState SubspaceState::normalized(std::span<const double> amplitudes) {
    return normalized(ComplexVector(amplitudes.begin(), amplitudes.end()));
}

SubspaceState SubspaceState::basis(std::size_t n, std::size_t site) {
    require(site < n, "SubspaceState::basis: site index out of range");
    ComplexVector a(n);
    a[site] = 1.0;
    return SubspaceState(std::move(a));
}

double SubspaceState::weight_on_first(std::size_t k) const {
    double w = 0.0;
    for (std::size_t j = 0; j < k && j < amps_.size(); ++j) w += std::norm(amps_[j]);
    return w;
}

SymTridiag subspace_hamiltonian(const ChainSpec& spec) {
    SymTridiag h;
    h.diag.assign(spec.sites(), 0.0);
    h.offdiag.reserve(spec.sites() - 1);
    for (double j : spec.couplings()) h.offdiag.push_back(-spec.hop_prefactor() * j);
    return h;
}

double uniform_wavenumber(std::size_t n, std::size_t m) {
    return std::numbers::pi * static_cast<double>(m) / static_cast<double>(n + 1);
}

EigenSystem analytic_uniform_eigensystem(std::size_t n, double j, double g) {
    require(n >= 2, "analytic_uniform_eigensystem: chain needs at least 2 sites");
    const double hop = -g * j;
    const double amp = std::sqrt(2.0 / static_cast<double>(n + 1));

    std::vector<std::size_t> order(n);
    for (std::size_t m = 0; m < n; ++m) order[m] = m + 1;
    // cos(q_m) decreases with m, so the energy order is fixed by the sign of the hopping.
    if (hop > 0) std::reverse(order.begin(), order.end());

    EigenSystem es;
    es.values.resize(n);
    es.vectors = RealMatrix(n, n);
    for (std::size_t col = 0; col < n; ++col) {
        const std::size_t m = order[col];
        const double q = uniform_wavenumber(n, m);
        es.values[col] = 2.0 * hop * std::cos(q);
        for (std::size_t site = 1; site <= n; ++site)
            es.vectors(site - 1, col) = amp * std::sin(q * static_cast<double>(site));
    }
    return es;
}

SubspaceState family_state(StateFamily f, std::size_t n) {
    require(n >= family_width(f), "family_state: chain shorter than the encoding");
    const double r = 1.0 / std::sqrt(2.0);
    ComplexVector a(n);
    switch (f) {
    case StateFamily::Single: a[0] = 1.0; break;
    case StateFamily::TwoSpin: a[0] = -r; a[1] = r; break;
    case StateFamily::ThreeSpin: a[0] = -r; a[2] = r; break;
    }
    return SubspaceState::normalized(std::move(a));
}

std::size_t family_width(StateFamily f) {
    switch (f) {
    case StateFamily::Single: return 1;
    case StateFamily::TwoSpin: return 2;
    case StateFamily::ThreeSpin: return 3;
    }
    return 1;
}

std::string_view family_name(StateFamily f) {
    switch (f) {
    case StateFamily::Single: return "single";
    case StateFamily::TwoSpin: return "two-spin";
    case StateFamily::ThreeSpin: return "three-spin";
    }
    return "single";
}

StateFamily parse_family(std::string_view name) {
    if (name == "single") return StateFamily::Single;
    if (name == "two-spin") return StateFamily::TwoSpin;
    if (name == "three-spin") return StateFamily::ThreeSpin;
    throw InvalidArgument("unknown state family '" + std::string(name) + "' (expected single, two-spin or three-spin)");
}

} // namespace chaintx
