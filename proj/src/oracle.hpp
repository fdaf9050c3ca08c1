#pragma once

// Full 2^N Hilbert-space reference for the DQ chain. Used to cross-check the
// single-excitation reduction; not meant for production-size chains.
//
// Bit convention: site 1 is the most significant bit of the basis index, a set
// bit is |1>. Sector state |j> is the reference pattern (odd sites 0, even sites 1)
// with site j flipped, so for N = 5: |1> = |11010>, |2> = |00010>.

#include "chain.hpp"
#include "linalg.hpp"
#include "transfer.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>

namespace chaintx::oracle {

inline constexpr std::size_t kMaxSites = 12;
inline constexpr std::size_t kMaxFidelitySites = 10;

struct FullState {
    std::size_t sites = 0;
    ComplexVector amplitudes; // length 2^sites
};

/// sum_i -g J_{i,i+1} (X_i X_{i+1} - Y_i Y_{i+1}) / 2
ComplexMatrix full_hamiltonian(const ChainSpec& spec);
/// sum_{odd i} Z_i - sum_{even i} Z_i
ComplexMatrix staggered_charge(std::size_t n);

std::uint64_t reference_pattern(std::size_t n);
std::uint64_t sector_index(std::size_t n, std::size_t site);

FullState embed(const SubspaceState& state);
/// Weight outside the staggered single-excitation sector.
double sector_leakage(const FullState& full);
/// Throws NumericalError when the leakage exceeds 1e-9.
ComplexVector extract(const FullState& full);

class FullPropagator {
public:
    explicit FullPropagator(const ChainSpec& spec);
    ~FullPropagator();
    FullPropagator(FullPropagator&&) noexcept;
    FullPropagator& operator=(FullPropagator&&) noexcept;

    std::size_t sites() const { return sites_; }
    FullState evolve(const FullState& psi, double t) const;

private:
    struct Impl;
    std::size_t sites_;
    std::unique_ptr<Impl> impl_;
};

FullState evolve_full(const ChainSpec& spec, const FullState& psi, double t);

/// sqrt(<Phi|rho_B|Phi>) with rho_B the reduced state of the last k sites.
double fidelity_full(const FullPropagator& prop, const EncodingSpec& enc, const SubspaceState& initial, double t);
double fidelity_full(const ChainSpec& spec, const EncodingSpec& enc, const SubspaceState& initial, double t);

} // namespace chaintx::oracle
