#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

namespace cli {

namespace {

constexpr double kDefaultDelta = 0.05;
constexpr double kDefaultEps = 0.01;
constexpr double kDefaultStep = 0.01;
constexpr double kTableTol = 0.005;

template <class T, void (*Destroy)(T*)>
struct Deleter {
    void operator()(T* p) const { Destroy(p); }
};
template <class T, void (*Destroy)(T*)>
using Handle = std::unique_ptr<T, Deleter<T, Destroy>>;

using Chain = Handle<chaintx_chain, chaintx_chain_destroy>;
using Eigen = Handle<chaintx_eigensystem, chaintx_eigensystem_destroy>;
using Candidates = Handle<chaintx_candidates, chaintx_candidates_destroy>;
using Trace = Handle<chaintx_trace, chaintx_trace_destroy>;
using LengthReport = Handle<chaintx_length_report, chaintx_length_report_destroy>;
using Track = Handle<chaintx_overlap_track, chaintx_overlap_track_destroy>;
using Comparison = Handle<chaintx_comparison, chaintx_comparison_destroy>;

struct Setup {
    chaintx_profile profile{};
    std::vector<double> storage; // custom couplings
    std::size_t n = 0;
    GChoice g;
};

Chain make_chain(const Setup& s) {
    chaintx_chain* raw = nullptr;
    check(chaintx_chain_create(&s.profile, s.n, s.g.value, &raw));
    return Chain(raw);
}

Setup setup_from(const RunConfig& c, const GChoice& g) {
    Setup s;
    s.n = require_n(c);
    s.profile = resolve_profile(c, s.n, s.storage);
    s.g = g;
    return s;
}

void echo_chain(Report& r, const Setup& s) {
    r.input("g", s.g.value);
    r.input("g_source", s.g.source);
    r.input("N", static_cast<long long>(s.n));
    r.input("profile", profile_label(s.profile));
    switch (s.profile.kind) {
    case CHAINTX_PROFILE_UNIFORM: r.input("J", s.profile.j); break;
    case CHAINTX_PROFILE_WEAK_ENDS:
        r.input("J", s.profile.j);
        r.input("J0", s.profile.j0);
        break;
    case CHAINTX_PROFILE_PERFECT_TRANSFER: r.input("scale", s.profile.scale); break;
    case CHAINTX_PROFILE_CUSTOM: {
        std::string list;
        for (double x : s.storage) list += (list.empty() ? "" : ";") + format_number(x);
        r.input("couplings", list);
        break;
    }
    }
}

void echo_encoding(Report& r, const chaintx_encoding& e) {
    r.input("k", static_cast<long long>(e.k));
    r.input("order", std::string(chaintx_order_name(e.order)));
}

void echo_window(Report& r, const Window& w) {
    r.input("t0", w.t0);
    r.input("t1", w.t1);
    r.input("step", w.step);
}

std::string join_members(const std::vector<std::size_t>& m) {
    std::string s;
    for (std::size_t i : m) s += (s.empty() ? "" : ";") + std::to_string(i + 1);
    return s;
}

struct EigenRun {
    Chain chain;
    Eigen es;
};

// W(tau) eigen rows (sorted by descending sender weight, then eigenphase) followed by candidates.
EigenRun eigen_into(Report& r, const Setup& s, const chaintx_encoding& enc, double tau, double delta, double eps) {
    EigenRun run{make_chain(s), nullptr};
    chaintx_eigensystem* raw = nullptr;
    check(chaintx_transfer_eigensystem(run.chain.get(), &enc, tau, &raw));
    run.es.reset(raw);
    const std::size_t n = s.n;

    r.columns = {"kind", "m", "re", "im", "phase", "sender_weight", "fidelity"};
    for (std::size_t j = 1; j <= n; ++j) {
        r.columns.push_back("a" + std::to_string(j) + "_re");
        r.columns.push_back("a" + std::to_string(j) + "_im");
    }
    r.columns.push_back("members");

    const auto amplitude_cells = [n](std::vector<Cell>& row, const std::vector<double>& re,
                                     const std::vector<double>& im) {
        for (std::size_t j = 0; j < n; ++j) {
            row.emplace_back(re[j]);
            row.emplace_back(im[j]);
        }
    };

    struct EigenRow {
        std::size_t m;
        double re, im, phase, weight;
    };
    std::vector<EigenRow> eig(n);
    for (std::size_t m = 0; m < n; ++m) {
        auto& e = eig[m];
        e.m = m;
        check(chaintx_eigensystem_value(run.es.get(), m, &e.re, &e.im));
        e.phase = std::atan2(e.im, e.re);
        check(chaintx_eigensystem_sender_weight(run.es.get(), m, enc.k, &e.weight));
    }
    std::stable_sort(eig.begin(), eig.end(), [](const EigenRow& a, const EigenRow& b) {
        if (a.weight != b.weight) return a.weight > b.weight;
        return a.phase < b.phase;
    });
    std::vector<double> re(n), im(n);
    for (const auto& e : eig) {
        check(chaintx_eigensystem_vector(run.es.get(), e.m, re.data(), im.data()));
        std::vector<Cell> row{std::string("eigen"), static_cast<long long>(e.m + 1), e.re, e.im, e.phase, e.weight,
                              Cell{}};
        amplitude_cells(row, re, im);
        row.emplace_back(std::string{});
        r.rows.push_back(std::move(row));
    }

    chaintx_candidates* craw = nullptr;
    check(chaintx_find_candidates(run.es.get(), &enc, delta, eps, &craw));
    const Candidates cands(craw);
    const std::size_t nc = chaintx_candidates_size(cands.get());
    for (std::size_t i = 0; i < nc; ++i) {
        chaintx_candidate_info info{};
        check(chaintx_candidate_info_at(cands.get(), i, &info));
        std::vector<std::size_t> members(info.n_members);
        check(chaintx_candidate_members(cands.get(), i, members.data(), members.size()));
        check(chaintx_candidate_state(cands.get(), i, re.data(), im.data()));
        // Fidelity of the preparable state: the candidate restricted to the sender sites.
        std::vector<double> sre(re.begin(), re.begin() + enc.k), sim(im.begin(), im.begin() + enc.k);
        sre.resize(n, 0.0);
        sim.resize(n, 0.0);
        double f = 0.0;
        check(chaintx_fidelity(run.chain.get(), &enc, sre.data(), sim.data(), n, tau, &f));
        std::vector<Cell> row{std::string(info.from_cluster ? "cluster" : "candidate"), Cell{}, Cell{}, Cell{}, Cell{},
                              info.sender_weight, f};
        amplitude_cells(row, re, im);
        row.emplace_back(join_members(members));
        r.rows.push_back(std::move(row));
    }
    r.result("eigenvectors", static_cast<long long>(n));
    r.result("candidates", static_cast<long long>(nc));
    return run;
}

void trace_into(Report& r, const Setup& s, const chaintx_encoding& enc, const InitialState& st, const Window& w) {
    const Chain chain = make_chain(s);
    chaintx_trace* raw = nullptr;
    check(chaintx_scan_time(chain.get(), &enc, st.re.data(), nullptr, s.n, w.t0, w.t1, w.step, &raw));
    const Trace tr(raw);
    double f_max = 0.0, t_max = 0.0;
    check(chaintx_trace_best(tr.get(), &f_max, &t_max));
    r.result("F_max", f_max);
    r.result("T_max", t_max);
    r.columns = {"t", "F"};
    for (std::size_t i = 0; i < chaintx_trace_size(tr.get()); ++i) {
        double t = 0.0, f = 0.0;
        check(chaintx_trace_point(tr.get(), i, &t, &f));
        r.rows.push_back({t, f});
    }
}

void length_into(Report& r, const chaintx_profile& profile, double g, chaintx_order order,
                 const std::vector<chaintx_family>& families, std::optional<std::size_t> n_min, std::size_t n_max,
                 const Window& w) {
    r.columns = {"family", "N", "F_max", "T_max"};
    for (chaintx_family f : families) {
        chaintx_length_request req{profile, g, order, f, n_min.value_or(2 * chaintx_family_width(f)), n_max,
                                   w.t0, w.t1, w.step};
        chaintx_length_report* raw = nullptr;
        check(chaintx_scan_length(&req, &raw));
        const LengthReport rep(raw);
        for (std::size_t i = 0; i < chaintx_length_report_size(rep.get()); ++i) {
            std::size_t n = 0;
            double f_max = 0.0, t_max = 0.0;
            check(chaintx_length_record(rep.get(), i, &n, &f_max, &t_max));
            r.rows.push_back({std::string(chaintx_family_name(f)), static_cast<long long>(n), f_max, t_max});
        }
    }
}

void overlap_into(Report& r, const Setup& s, const chaintx_encoding& enc, const InitialState& st, const Window& w) {
    const Chain chain = make_chain(s);
    chaintx_overlap_track* raw = nullptr;
    check(chaintx_track_overlaps(chain.get(), &enc, st.re.data(), nullptr, s.n, w.t0, w.t1, w.step, &raw));
    const Track track(raw);
    r.columns = {"m", "tau", "p"};
    for (std::size_t i = 0; i < chaintx_overlap_track_size(track.get()); ++i) {
        std::size_t label = 0;
        double tau = 0.0, p = 0.0;
        check(chaintx_overlap_peak(track.get(), i, &label, &tau, &p));
        r.rows.push_back({static_cast<long long>(label + 1), tau, p});
    }
}

double require_real(const std::optional<double>& v, const char* key) {
    if (!v) throw CliError(kUsage, std::string("config field '") + key + "' is required");
    return *v;
}

Window require_window(const RunConfig& c) {
    if (!c.t0 || !c.t1) throw CliError(kUsage, "config fields 't0' and 't1' are required");
    return resolve_window(c, {0.0, 0.0, kDefaultStep});
}

} // namespace

Report cmd_eigen(const RunConfig& c, const GChoice& g) {
    Report r;
    r.experiment = "eigen";
    const Setup s = setup_from(c, g);
    const chaintx_encoding enc = resolve_encoding(c, s.n, 1);
    const double tau = require_real(c.tau, "tau");
    const double delta = c.delta.value_or(kDefaultDelta);
    const double eps = c.eps.value_or(kDefaultEps);
    if (!(delta >= 0.0)) throw CliError(kUsage, "config field 'delta': expected a non-negative number");
    if (!(eps >= 0.0 && eps < 1.0)) throw CliError(kUsage, "config field 'eps': expected a number in [0, 1)");
    echo_chain(r, s);
    echo_encoding(r, enc);
    r.input("tau", tau);
    r.input("delta", delta);
    r.input("eps", eps);
    eigen_into(r, s, enc, tau, delta, eps);
    return r;
}

Report cmd_scan(const RunConfig& c, const GChoice& g) {
    Report r;
    const Window w = require_window(c);
    if (c.n_min || c.n_max) {
        r.experiment = "length-scan";
        if (!c.n_max) throw CliError(kUsage, "config field 'n_max' is required for a length scan");
        if (!c.family) throw CliError(kUsage, "config field 'family' is required for a length scan");
        if (c.n) throw CliError(kUsage, "config field 'N' conflicts with a length scan; use n_min/n_max");
        chaintx_family f;
        check(chaintx_parse_family(c.family->c_str(), &f));
        Setup s;
        s.n = *c.n_max;
        s.profile = resolve_profile(c, s.n, s.storage);
        if (s.profile.kind == CHAINTX_PROFILE_CUSTOM)
            throw CliError(kUsage, "config field 'profile': custom couplings cannot be used across lengths");
        chaintx_order order = CHAINTX_ORDER_DIRECT;
        if (c.order) check(chaintx_parse_order(c.order->c_str(), &order));
        r.input("g", g.value);
        r.input("g_source", g.source);
        r.input("profile", profile_label(s.profile));
        r.input("family", *c.family);
        r.input("order", std::string(chaintx_order_name(order)));
        if (c.n_min) r.input("n_min", static_cast<long long>(*c.n_min));
        r.input("n_max", static_cast<long long>(*c.n_max));
        echo_window(r, w);
        length_into(r, s.profile, g.value, order, {f}, c.n_min, *c.n_max, w);
        return r;
    }
    r.experiment = "trace";
    const Setup s = setup_from(c, g);
    const InitialState st = resolve_state(c, s.n, c.family.value_or("single"));
    const chaintx_encoding enc = resolve_encoding(c, s.n, st.width);
    if (st.width > enc.k)
        throw CliError(kUsage, "config field 'k': state '" + st.label + "' needs k >= " + std::to_string(st.width));
    echo_chain(r, s);
    echo_encoding(r, enc);
    r.input("state", st.label);
    echo_window(r, w);
    trace_into(r, s, enc, st, w);
    return r;
}

Report cmd_table3(const RunConfig& c, const GChoice& g) {
    Report r;
    r.experiment = "overlap-track";
    const Setup s = setup_from(c, g);
    const chaintx_encoding enc = resolve_encoding(c, s.n, 1);
    const InitialState st = resolve_state(c, s.n, c.family.value_or("single"));
    const Window w = resolve_window(c, {5.0, 40.0, kDefaultStep});
    echo_chain(r, s);
    echo_encoding(r, enc);
    r.input("state", st.label);
    echo_window(r, w);
    overlap_into(r, s, enc, st, w);
    return r;
}

Report cmd_reproduce(const std::string& name, const GChoice& g) {
    chaintx_preset p{};
    check(chaintx_preset_find(name.c_str(), &p));
    Report r;
    r.experiment = p.name;
    Setup s;
    s.profile = p.profile;
    s.n = p.n;
    s.g = g;
    const Window w{p.t0, p.t1, p.step};

    switch (p.kind) {
    case CHAINTX_PRESET_EIGEN: {
        echo_chain(r, s);
        echo_encoding(r, p.enc);
        r.input("tau", p.tau);
        r.input("delta", p.delta);
        r.input("eps", p.eps);
        r.input("table_tolerance", kTableTol);
        const EigenRun run = eigen_into(r, s, p.enc, p.tau, p.delta, p.eps);
        chaintx_comparison* raw = nullptr;
        check(chaintx_compare_published(run.es.get(), p.name, &raw));
        const Comparison cmp(raw);
        chaintx_comparison_summary sum{};
        check(chaintx_comparison_summary_get(cmp.get(), &sum));
        r.result("published_rows", static_cast<long long>(sum.rows));
        r.result("max_value_error", sum.max_value_error);
        if (sum.vectors_compared) r.result("max_vector_error", sum.max_vector_error);
        else r.result("max_vector_error", Cell{});
        const bool ok = sum.max_value_error <= kTableTol && (!sum.vectors_compared || sum.max_vector_error <= kTableTol);
        r.result("matches_published", std::string(ok ? "yes" : "no"));
        break;
    }
    case CHAINTX_PRESET_OVERLAP: {
        const InitialState st{"single", [&] {
                                  std::vector<double> v(p.n, 0.0);
                                  v[0] = 1.0;
                                  return v;
                              }()};
        echo_chain(r, s);
        echo_encoding(r, p.enc);
        r.input("state", st.label);
        echo_window(r, w);
        overlap_into(r, s, p.enc, st, w);
        break;
    }
    case CHAINTX_PRESET_TRACE: {
        InitialState st;
        st.label = chaintx_family_name(p.families[0]);
        st.re.assign(p.n, 0.0);
        check(chaintx_family_state(p.families[0], p.n, st.re.data(), nullptr));
        echo_chain(r, s);
        echo_encoding(r, p.enc);
        r.input("state", st.label);
        echo_window(r, w);
        trace_into(r, s, p.enc, st, w);
        break;
    }
    case CHAINTX_PRESET_LENGTH: {
        r.input("g", g.value);
        r.input("g_source", g.source);
        r.input("profile", profile_label(p.profile));
        r.input("J", p.profile.j);
        std::string fams;
        std::vector<chaintx_family> families(p.families, p.families + p.n_families);
        for (chaintx_family f : families) fams += (fams.empty() ? "" : ";") + std::string(chaintx_family_name(f));
        r.input("families", fams);
        r.input("order", std::string(chaintx_order_name(p.enc.order)));
        r.input("n_max", static_cast<long long>(p.n_max));
        echo_window(r, w);
        length_into(r, p.profile, g.value, p.enc.order, families, std::nullopt, p.n_max, w);
        break;
    }
    }
    if (*p.calibration_from) r.input("calibrated_with", std::string(p.calibration_from));
    return r;
}

Report cmd_calibrate(const std::optional<std::string>& write_to) {
    Report r;
    r.experiment = "calibrate";
    r.columns = {"preset", "g", "misfit", "method"};
    for (std::size_t i = 0; i < chaintx_preset_count(); ++i) {
        chaintx_preset p{};
        check(chaintx_preset_at(i, &p));
        chaintx_calibration cal{};
        check(chaintx_calibrate(p.name, &cal));
        r.rows.push_back({std::string(p.name), cal.g, cal.misfit, std::string(cal.method)});
    }
    if (write_to) {
        check(chaintx_write_conventions(write_to->c_str()));
        r.input("written_to", *write_to);
    }
    return r;
}

} // namespace cli
