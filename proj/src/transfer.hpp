#pragma once

#include "chain.hpp"
#include "linalg.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace chaintx {

enum class SwapOrder { Direct, Mirror };

SwapOrder parse_order(std::string_view name);
std::string_view order_name(SwapOrder o);

/// Sender region = sites [0, k), receiver region = sites [N-k, N).
struct EncodingSpec {
    std::size_t k = 1;
    SwapOrder order = SwapOrder::Direct;

    void validate(std::size_t n) const;
    /// Receiver site paired with sender site j (0-based).
    std::size_t receiver_site(std::size_t j, std::size_t n) const;
};

inline constexpr double kDefaultClusterDelta = 0.05;
inline constexpr double kDefaultWeightEps = 0.01;
inline constexpr double kDefaultTimeStep = 0.01;
inline constexpr double kRefineTol = 1e-4;
inline constexpr double kTieTol = 1e-9;

/// Cached eigendecomposition of the subspace Hamiltonian; U(t) = V diag(e^{-iEt}) V^T.
class Evolution {
public:
    explicit Evolution(const ChainSpec& spec);

    std::size_t sites() const { return eig_.values.size(); }
    const EigenSystem& eigensystem() const { return eig_; }
    ComplexMatrix propagator(double t) const;
    ComplexVector evolve(std::span<const cplx> c0, double t) const;

private:
    EigenSystem eig_;
};

ComplexMatrix propagator(const ChainSpec& spec, double tau);
ComplexMatrix swap_operator(std::size_t n, const EncodingSpec& enc);
/// W(tau) = P U(tau).
ComplexMatrix transfer_operator(const ChainSpec& spec, const EncodingSpec& enc, double tau);

struct DegenerateCluster {
    std::vector<std::size_t> members;
    double phase = 0.0;  // circular mean of member eigenphases
    double spread = 0.0; // largest pairwise circular distance
};

/// Transitive closure of eigenphases within delta on the unit circle.
std::vector<DegenerateCluster> find_clusters(const UnitaryEigenSystem& es, double delta);

struct TransferCandidate {
    SubspaceState initial;
    double sender_weight = 0.0;
    std::vector<std::size_t> members; // one index for a single eigenvector
    bool from_cluster = false;
    double tau = 0.0;
};

std::vector<TransferCandidate> find_candidates(const UnitaryEigenSystem& es, const EncodingSpec& enc, double delta,
                                               double eps, double tau = 0.0);

/// Truncate onto the sender region and renormalize.
SubspaceState sender_projection(const SubspaceState& s, std::size_t k);

std::vector<double> overlap_pm(const UnitaryEigenSystem& es, const SubspaceState& state);

/// F(t) = |sum_j conj(a_j) c_{r(j)}(t)| for a sender-only initial state.
class FidelityEvaluator {
public:
    FidelityEvaluator(const ChainSpec& spec, const EncodingSpec& enc, const SubspaceState& initial);
    double operator()(double t) const;

private:
    std::vector<double> energies_;
    ComplexVector spectral_;  // V^T c(0)
    std::vector<double> rows_; // k x N receiver rows of V, row-major
    ComplexVector sender_;     // a_j
    std::size_t n_;
};

double fidelity(const ChainSpec& spec, const EncodingSpec& enc, const SubspaceState& initial, double t);

struct TimeWindow {
    double t0 = 0.0;
    double t1 = 50.0;
};

struct FidelityTrace {
    std::vector<double> times;
    std::vector<double> fidelities;
    double f_max = 0.0;
    double t_max = 0.0;
};

std::vector<double> time_grid(const TimeWindow& w, double step);

FidelityTrace scan_time(const ChainSpec& spec, const EncodingSpec& enc, const SubspaceState& initial,
                        const TimeWindow& window, double step = kDefaultTimeStep);

struct LengthRecord {
    std::size_t n = 0;
    double f_max = 0.0;
    double t_max = 0.0;
};

struct LengthScanRequest {
    CouplingProfile profile = profile::Uniform{-1.0};
    double g = 1.0;
    SwapOrder order = SwapOrder::Direct;
    StateFamily family = StateFamily::ThreeSpin;
    std::size_t n_min = 6;
    std::size_t n_max = 30;
    TimeWindow window{};
    double step = kDefaultTimeStep;
};

/// One scan_time per chain length, ascending N. Lengths run concurrently;
/// the result does not depend on scheduling.
std::vector<LengthRecord> scan_length(const LengthScanRequest& req);

/// || e^{i phi} sum_l C_l |Psi_{idx_l}> - target || minimized over the global phase.
double verify_pst_superposition(const UnitaryEigenSystem& es, std::span<const std::size_t> indices,
                                std::span<const cplx> coeffs, std::span<const cplx> target);

struct OverlapPeak {
    std::size_t label = 0; // eigenphase rank at the window start
    double tau = 0.0;
    double p = 0.0;
};

/// Follows every eigenvector of W(tau) across the time grid by maximal overlap
/// between consecutive grid points and records max_tau |<Psi_m|state>|.
std::vector<OverlapPeak> track_overlap_maxima(const ChainSpec& spec, const EncodingSpec& enc,
                                              const SubspaceState& state, const TimeWindow& window,
                                              double step = kDefaultTimeStep);

} // namespace chaintx
