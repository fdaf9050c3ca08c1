#include "transfer.hpp"

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <numeric>
#include <string>

namespace chaintx {

SwapOrder parse_order(std::string_view name) {
    if (name == "direct") return SwapOrder::Direct;
    if (name == "mirror") return SwapOrder::Mirror;
    throw InvalidArgument("unknown swap order '" + std::string(name) + "' (expected direct or mirror)");
}

std::string_view order_name(SwapOrder o) { return o == SwapOrder::Direct ? "direct" : "mirror"; }

void EncodingSpec::validate(std::size_t n) const {
    require(k >= 1, "encoding width k must be at least 1");
    require(2 * k <= n, "encoding width k=" + std::to_string(k) + " needs 2k <= N (N=" + std::to_string(n) + ")");
}

std::size_t EncodingSpec::receiver_site(std::size_t j, std::size_t n) const {
    return order == SwapOrder::Direct ? n - k + j : n - 1 - j;
}

Evolution::Evolution(const ChainSpec& spec) : eig_(eig_sym_tridiag(subspace_hamiltonian(spec))) {}

ComplexMatrix Evolution::propagator(double t) const {
    require(std::isfinite(t), "propagator: time must be finite");
    const std::size_t n = sites();
    ComplexVector ph(n);
    for (std::size_t m = 0; m < n; ++m) ph[m] = std::polar(1.0, -eig_.values[m] * t);
    ComplexMatrix u(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            cplx s{};
            for (std::size_t m = 0; m < n; ++m) s += eig_.vectors(i, m) * ph[m] * eig_.vectors(j, m);
            u(i, j) = s;
        }
    return u;
}

ComplexVector Evolution::evolve(std::span<const cplx> c0, double t) const {
    const std::size_t n = sites();
    require(c0.size() == n, "evolve: state dimension differs from chain length");
    ComplexVector a(n);
    for (std::size_t m = 0; m < n; ++m) {
        cplx s{};
        for (std::size_t j = 0; j < n; ++j) s += eig_.vectors(j, m) * c0[j];
        a[m] = s * std::polar(1.0, -eig_.values[m] * t);
    }
    ComplexVector c(n);
    for (std::size_t i = 0; i < n; ++i) {
        cplx s{};
        for (std::size_t m = 0; m < n; ++m) s += eig_.vectors(i, m) * a[m];
        c[i] = s;
    }
    return c;
}

ComplexMatrix propagator(const ChainSpec& spec, double tau) { return Evolution(spec).propagator(tau); }

ComplexMatrix swap_operator(std::size_t n, const EncodingSpec& enc) {
    enc.validate(n);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t j = 0; j < enc.k; ++j) {
        const std::size_t r = enc.receiver_site(j, n);
        perm[j] = r;
        perm[r] = j;
    }
    ComplexMatrix p(n, n);
    for (std::size_t i = 0; i < n; ++i) p(i, perm[i]) = 1.0;
    return p;
}

ComplexMatrix transfer_operator(const ChainSpec& spec, const EncodingSpec& enc, double tau) {
    return multiply(swap_operator(spec.sites(), enc), propagator(spec, tau));
}

namespace {

double circular_distance(double a, double b) {
    double d = std::fmod(std::abs(a - b), 2.0 * std::numbers::pi);
    return std::min(d, 2.0 * std::numbers::pi - d);
}

} // namespace

std::vector<DegenerateCluster> find_clusters(const UnitaryEigenSystem& es, double delta) {
    require(delta > 0.0, "find_clusters: delta must be positive");
    const std::size_t n = es.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return es.phase(a) < es.phase(b); });

    // gap[i] separates order[i] from order[(i+1) % n], the last one across the branch cut.
    std::vector<bool> cut(n, false);
    bool any_cut = false;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = es.phase(order[i]);
        const double b = es.phase(order[(i + 1) % n]);
        const double gap = (i + 1 < n) ? b - a : b + 2.0 * std::numbers::pi - a;
        cut[i] = gap > delta;
        any_cut = any_cut || cut[i];
    }

    std::vector<std::vector<std::size_t>> groups;
    if (!any_cut || n == 1) {
        groups.push_back(order);
    } else {
        std::size_t start = 0;
        while (!cut[start]) ++start;
        start = (start + 1) % n;
        std::vector<std::size_t> cur;
        for (std::size_t step = 0; step < n; ++step) {
            const std::size_t i = (start + step) % n;
            cur.push_back(order[i]);
            if (cut[i]) {
                groups.push_back(std::move(cur));
                cur.clear();
            }
        }
    }

    std::vector<DegenerateCluster> out;
    for (auto& g : groups) {
        DegenerateCluster c;
        cplx mean{};
        for (auto m : g) mean += es.values[m];
        c.phase = std::arg(mean);
        for (std::size_t a = 0; a < g.size(); ++a)
            for (std::size_t b = a + 1; b < g.size(); ++b)
                c.spread = std::max(c.spread, circular_distance(es.phase(g[a]), es.phase(g[b])));
        std::sort(g.begin(), g.end());
        c.members = std::move(g);
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.members.front() < b.members.front(); });
    return out;
}

std::vector<TransferCandidate> find_candidates(const UnitaryEigenSystem& es, const EncodingSpec& enc, double delta,
                                               double eps, double tau) {
    const std::size_t n = es.size();
    enc.validate(n);
    require(delta > 0.0, "find_candidates: delta must be positive");
    require(eps > 0.0, "find_candidates: eps must be positive");
    const std::size_t k = enc.k;

    std::vector<TransferCandidate> out;
    for (std::size_t m = 0; m < n; ++m) {
        const SubspaceState s = SubspaceState::normalized(phase_fix(es.vector(m)));
        double outside = 0.0;
        for (std::size_t j = k; j < n; ++j) outside += std::norm(s[j]);
        if (outside <= eps) out.push_back({s, s.weight_on_first(k), {m}, false, tau});
    }

    for (const auto& cl : find_clusters(es, delta)) {
        const std::size_t len = cl.members.size();
        if (len < 2) continue;
        // Gram matrix of the k x L restriction; its top eigenvector is the principal
        // right singular direction.
        ComplexMatrix gram(len, len);
        for (std::size_t a = 0; a < len; ++a)
            for (std::size_t b = 0; b < len; ++b) {
                cplx s{};
                for (std::size_t j = 0; j < k; ++j)
                    s += std::conj(es.vectors(j, cl.members[a])) * es.vectors(j, cl.members[b]);
                gram(a, b) = s;
            }
        const HermitianEigenSystem hs = eig_hermitian(gram);
        ComplexVector lifted(n);
        for (std::size_t a = 0; a < len; ++a) {
            const cplx c = hs.vectors(a, len - 1);
            for (std::size_t j = 0; j < n; ++j) lifted[j] += c * es.vectors(j, cl.members[a]);
        }
        const SubspaceState s = SubspaceState::normalized(phase_fix(lifted));
        const double w = s.weight_on_first(k);
        if (w >= 1.0 - eps) out.push_back({s, w, cl.members, true, tau});
    }

    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.sender_weight > b.sender_weight; });
    return out;
}

SubspaceState sender_projection(const SubspaceState& s, std::size_t k) {
    ComplexVector a(s.amplitudes().begin(), s.amplitudes().end());
    for (std::size_t j = k; j < a.size(); ++j) a[j] = 0.0;
    return SubspaceState::normalized(std::move(a));
}

std::vector<double> overlap_pm(const UnitaryEigenSystem& es, const SubspaceState& state) {
    require(state.size() == es.size(), "overlap_pm: state dimension differs from eigensystem");
    std::vector<double> p(es.size());
    for (std::size_t m = 0; m < es.size(); ++m) {
        cplx s{};
        for (std::size_t j = 0; j < es.size(); ++j) s += std::conj(es.vectors(j, m)) * state[j];
        p[m] = std::abs(s);
    }
    return p;
}

FidelityEvaluator::FidelityEvaluator(const ChainSpec& spec, const EncodingSpec& enc, const SubspaceState& initial)
    : n_(spec.sites()) {
    enc.validate(n_);
    require(initial.size() == n_, "fidelity: initial state has " + std::to_string(initial.size()) +
                                      " amplitudes for a chain of " + std::to_string(n_) + " sites");
    for (std::size_t j = enc.k; j < n_; ++j)
        require(std::abs(initial[j]) <= 1e-10, "fidelity: initial state has support outside the sender region");

    const Evolution evo(spec);
    const EigenSystem& es = evo.eigensystem();
    energies_ = es.values;
    spectral_.resize(n_);
    for (std::size_t m = 0; m < n_; ++m) {
        cplx s{};
        for (std::size_t j = 0; j < enc.k; ++j) s += es.vectors(j, m) * initial[j];
        spectral_[m] = s;
    }
    rows_.resize(enc.k * n_);
    sender_.resize(enc.k);
    for (std::size_t j = 0; j < enc.k; ++j) {
        const std::size_t r = enc.receiver_site(j, n_);
        for (std::size_t m = 0; m < n_; ++m) rows_[j * n_ + m] = es.vectors(r, m);
        sender_[j] = initial[j];
    }
}

double FidelityEvaluator::operator()(double t) const {
    ComplexVector a(n_);
    for (std::size_t m = 0; m < n_; ++m) a[m] = spectral_[m] * std::polar(1.0, -energies_[m] * t);
    cplx f{};
    for (std::size_t j = 0; j < sender_.size(); ++j) {
        cplx c{};
        const double* row = &rows_[j * n_];
        for (std::size_t m = 0; m < n_; ++m) c += row[m] * a[m];
        f += std::conj(sender_[j]) * c;
    }
    return std::abs(f);
}

double fidelity(const ChainSpec& spec, const EncodingSpec& enc, const SubspaceState& initial, double t) {
    return FidelityEvaluator(spec, enc, initial)(t);
}

std::vector<double> time_grid(const TimeWindow& w, double step) {
    require(std::isfinite(w.t0) && std::isfinite(w.t1), "time window bounds must be finite");
    require(w.t0 < w.t1, "time window must satisfy t0 < t1");
    require(std::isfinite(step) && step > 0.0, "time step must be positive");
    const auto count = static_cast<std::size_t>(std::floor((w.t1 - w.t0) / step + 1e-9)) + 1;
    std::vector<double> t(count);
    for (std::size_t i = 0; i < count; ++i) t[i] = std::min(w.t0 + static_cast<double>(i) * step, w.t1);
    return t;
}

namespace {

// Golden-section maximization of f on [a, b].
template <typename F>
std::pair<double, double> golden_max(const F& f, double a, double b, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

} // namespace

FidelityTrace scan_time(const ChainSpec& spec, const EncodingSpec& enc, const SubspaceState& initial,
                        const TimeWindow& window, double step) {
    const FidelityEvaluator fid(spec, enc, initial);
    FidelityTrace tr;
    tr.times = time_grid(window, step);
    tr.fidelities.reserve(tr.times.size());
    std::size_t best = 0;
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        tr.fidelities.push_back(fid(tr.times[i]));
        if (tr.fidelities[i] > tr.fidelities[best] + kTieTol) best = i;
    }
    tr.f_max = tr.fidelities[best];
    tr.t_max = tr.times[best];

    const double lo = std::max(window.t0, tr.t_max - step);
    const double hi = std::min(window.t1, tr.t_max + step);
    if (hi > lo) {
        const auto [t, f] = golden_max(fid, lo, hi, kRefineTol);
        if (f > tr.f_max) {
            tr.f_max = f;
            tr.t_max = t;
        }
    }
    return tr;
}

std::vector<LengthRecord> scan_length(const LengthScanRequest& req) {
    require(req.n_min <= req.n_max, "scan_length: empty length range");
    const std::size_t k = family_width(req.family);
    require(2 * k <= req.n_min, "scan_length: every chain needs 2k <= N");
    time_grid(req.window, req.step);

    std::vector<std::future<LengthRecord>> jobs;
    for (std::size_t n = req.n_min; n <= req.n_max; ++n) {
        jobs.push_back(std::async(std::launch::async, [&req, n, k] {
            const ChainSpec spec(req.profile, n, req.g);
            const FidelityTrace tr =
                scan_time(spec, EncodingSpec{k, req.order}, family_state(req.family, n), req.window, req.step);
            return LengthRecord{n, tr.f_max, tr.t_max};
        }));
    }
    std::vector<LengthRecord> out;
    out.reserve(jobs.size());
    for (auto& j : jobs) out.push_back(j.get());
    return out;
}

double verify_pst_superposition(const UnitaryEigenSystem& es, std::span<const std::size_t> indices,
                                std::span<const cplx> coeffs, std::span<const cplx> target) {
    require(indices.size() == coeffs.size(), "verify_pst_superposition: one coefficient per selected eigenvector");
    require(target.size() == es.size(), "verify_pst_superposition: target dimension differs from eigensystem");
    ComplexVector sum(es.size());
    for (std::size_t l = 0; l < indices.size(); ++l) {
        require(indices[l] < es.size(), "verify_pst_superposition: eigenvector index out of range");
        for (std::size_t j = 0; j < es.size(); ++j) sum[j] += coeffs[l] * es.vectors(j, indices[l]);
    }
    const double a = norm(sum);
    const double b = norm(target);
    const double overlap = std::abs(dot(sum, target));
    return std::sqrt(std::max(0.0, a * a + b * b - 2.0 * overlap));
}

std::vector<OverlapPeak> track_overlap_maxima(const ChainSpec& spec, const EncodingSpec& enc,
                                              const SubspaceState& state, const TimeWindow& window, double step) {
    const std::size_t n = spec.sites();
    enc.validate(n);
    require(state.size() == n, "track_overlap_maxima: state dimension differs from chain length");
    const std::vector<double> grid = time_grid(window, step);
    const Evolution evo(spec);
    const ComplexMatrix p = swap_operator(n, enc);

    std::vector<OverlapPeak> peaks(n);
    ComplexMatrix prev;
    for (std::size_t step_i = 0; step_i < grid.size(); ++step_i) {
        const double t = grid[step_i];
        const UnitaryEigenSystem es = eig_unitary(multiply(p, evo.propagator(t)));
        // slot[m]: column of es currently carrying tracked label m.
        std::vector<std::size_t> slot(n);
        if (step_i == 0) {
            std::iota(slot.begin(), slot.end(), 0);
        } else {
            struct Pair {
                double ov;
                std::size_t label, col;
            };
            std::vector<Pair> pairs;
            pairs.reserve(n * n);
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b) {
                    cplx s{};
                    for (std::size_t j = 0; j < n; ++j) s += std::conj(prev(j, a)) * es.vectors(j, b);
                    pairs.push_back({std::abs(s), a, b});
                }
            std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) { return x.ov > y.ov; });
            std::vector<bool> label_done(n, false), col_done(n, false);
            for (const auto& pr : pairs) {
                if (label_done[pr.label] || col_done[pr.col]) continue;
                slot[pr.label] = pr.col;
                label_done[pr.label] = col_done[pr.col] = true;
            }
        }
        ComplexMatrix cur(n, n);
        for (std::size_t m = 0; m < n; ++m)
            for (std::size_t j = 0; j < n; ++j) cur(j, m) = es.vectors(j, slot[m]);

        for (std::size_t m = 0; m < n; ++m) {
            cplx s{};
            for (std::size_t j = 0; j < n; ++j) s += std::conj(cur(j, m)) * state[j];
            const double pm = std::abs(s);
            if (step_i == 0 || pm > peaks[m].p + kTieTol) peaks[m] = {m, t, pm};
        }
        prev = std::move(cur);
    }
    return peaks;
}

} // namespace chaintx
