#pragma once

#include "linalg.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace chaintx {

namespace profile {
struct Uniform {
    double j;
};
// J_{1,2} = J_{N-1,N} = j0, j elsewhere.
struct WeakEnds {
    double j;
    double j0;
};
// J_{i,i+1} = scale * sqrt(i (N - i)).
struct PerfectTransfer {
    double scale;
};
struct Custom {
    std::vector<double> couplings;
};
} // namespace profile

using CouplingProfile = std::variant<profile::Uniform, profile::WeakEnds, profile::PerfectTransfer, profile::Custom>;

std::vector<double> build_couplings(const CouplingProfile& p, std::size_t n);

/// A chain of N sites with nearest-neighbour couplings J_{i,i+1}. The single-excitation
/// hopping element is h_{j,j+1} = -g J_{j,j+1}; g is a signed, non-zero convention factor.
class ChainSpec {
public:
    ChainSpec(std::vector<double> couplings, double hop_prefactor = 1.0);
    ChainSpec(const CouplingProfile& p, std::size_t n, double hop_prefactor = 1.0);

    std::size_t sites() const { return couplings_.size() + 1; }
    std::span<const double> couplings() const { return couplings_; }
    double hop_prefactor() const { return g_; }

    ChainSpec with_prefactor(double g) const { return ChainSpec(couplings_, g); }
    ChainSpec rescaled(double s) const;

private:
    std::vector<double> couplings_;
    double g_;
};

/// Amplitudes over |j>, j = 0..N-1 (site j+1 carries the excitation).
class SubspaceState {
public:
    /// Normalizes; rejects the zero vector.
    static SubspaceState normalized(ComplexVector amplitudes);
    static SubspaceState normalized(std::span<const double> amplitudes);
    static SubspaceState basis(std::size_t n, std::size_t site);

    std::size_t size() const { return amps_.size(); }
    std::span<const cplx> amplitudes() const { return amps_; }
    cplx operator[](std::size_t j) const { return amps_[j]; }
    /// Probability mass on the first k sites.
    double weight_on_first(std::size_t k) const;

private:
    explicit SubspaceState(ComplexVector a) : amps_(std::move(a)) {}
    ComplexVector amps_;
};

SymTridiag subspace_hamiltonian(const ChainSpec& spec);

/// E_m = 2 (-g J) cos(q_m), |Psi_m> = sqrt(2/(N+1)) sum_j sin(q_m j) |j>, q_m = pi m/(N+1),
/// sorted by ascending energy.
EigenSystem analytic_uniform_eigensystem(std::size_t n, double j, double g);
double uniform_wavenumber(std::size_t n, std::size_t m);

enum class StateFamily { Single, TwoSpin, ThreeSpin };

/// Single: |1>. TwoSpin: (-|1> + |2>)/sqrt2. ThreeSpin: (-|1> + |3>)/sqrt2.
SubspaceState family_state(StateFamily f, std::size_t n);
std::size_t family_width(StateFamily f);
std::string_view family_name(StateFamily f);
StateFamily parse_family(std::string_view name);

} // namespace chaintx
