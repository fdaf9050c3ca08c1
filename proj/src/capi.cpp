#include "chaintx/chaintx.h"

#include "chain.hpp"
#include "error.hpp"
#include "reproduction.hpp"
#include "transfer.hpp"

#include <cstring>
#include <fstream>
#include <new>
#include <string>
#include <vector>

using namespace chaintx;

struct chaintx_chain {
    ChainSpec spec;
};

struct chaintx_eigensystem {
    UnitaryEigenSystem es; // columns phase-fixed
    double tau;
};

struct chaintx_candidates {
    std::vector<TransferCandidate> items;
};

struct chaintx_trace {
    FidelityTrace trace;
};

struct chaintx_length_report {
    std::vector<LengthRecord> records;
};

struct chaintx_overlap_track {
    std::vector<OverlapPeak> peaks;
};

struct chaintx_comparison {
    TableComparison cmp;
    const PublishedEigenTable* table;
};

struct chaintx_kv {
    std::vector<KeyValueEntry> entries;
};

namespace {

thread_local std::string g_last_error;

chaintx_status fail(chaintx_status s, const std::string& msg) {
    g_last_error = msg;
    return s;
}

template <typename F>
chaintx_status guarded(F&& f) {
    try {
        f();
        return CHAINTX_OK;
    } catch (const InvalidArgument& e) {
        return fail(CHAINTX_INVALID_ARGUMENT, e.what());
    } catch (const NumericalError& e) {
        return fail(CHAINTX_NUMERICAL, e.what());
    } catch (const std::bad_alloc&) {
        return fail(CHAINTX_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(CHAINTX_INTERNAL, e.what());
    }
}

void need(const void* p, const char* what) { require(p != nullptr, std::string(what) + " is NULL"); }

CouplingProfile to_profile(const chaintx_profile* p) {
    need(p, "profile");
    switch (p->kind) {
    case CHAINTX_PROFILE_UNIFORM: return profile::Uniform{p->j};
    case CHAINTX_PROFILE_WEAK_ENDS: return profile::WeakEnds{p->j, p->j0};
    case CHAINTX_PROFILE_PERFECT_TRANSFER: return profile::PerfectTransfer{p->scale};
    case CHAINTX_PROFILE_CUSTOM:
        require(p->n_couplings == 0 || p->couplings != nullptr, "profile.couplings is NULL");
        return profile::Custom{std::vector<double>(p->couplings, p->couplings + p->n_couplings)};
    }
    throw InvalidArgument("profile: unknown kind");
}

chaintx_profile from_profile(const CouplingProfile& p) {
    chaintx_profile out{};
    if (const auto* u = std::get_if<profile::Uniform>(&p)) {
        out.kind = CHAINTX_PROFILE_UNIFORM;
        out.j = u->j;
    } else if (const auto* w = std::get_if<profile::WeakEnds>(&p)) {
        out.kind = CHAINTX_PROFILE_WEAK_ENDS;
        out.j = w->j;
        out.j0 = w->j0;
    } else if (const auto* s = std::get_if<profile::PerfectTransfer>(&p)) {
        out.kind = CHAINTX_PROFILE_PERFECT_TRANSFER;
        out.scale = s->scale;
    } else {
        const auto& c = std::get<profile::Custom>(p);
        out.kind = CHAINTX_PROFILE_CUSTOM;
        out.couplings = c.couplings.data();
        out.n_couplings = c.couplings.size();
    }
    return out;
}

EncodingSpec to_encoding(const chaintx_encoding* e) {
    need(e, "encoding");
    require(e->order == CHAINTX_ORDER_DIRECT || e->order == CHAINTX_ORDER_MIRROR, "encoding.order: unknown value");
    return {e->k, e->order == CHAINTX_ORDER_MIRROR ? SwapOrder::Mirror : SwapOrder::Direct};
}

StateFamily to_family(chaintx_family f) {
    switch (f) {
    case CHAINTX_FAMILY_SINGLE: return StateFamily::Single;
    case CHAINTX_FAMILY_TWO_SPIN: return StateFamily::TwoSpin;
    case CHAINTX_FAMILY_THREE_SPIN: return StateFamily::ThreeSpin;
    }
    throw InvalidArgument("family: unknown value");
}

chaintx_family from_family(StateFamily f) {
    switch (f) {
    case StateFamily::Single: return CHAINTX_FAMILY_SINGLE;
    case StateFamily::TwoSpin: return CHAINTX_FAMILY_TWO_SPIN;
    case StateFamily::ThreeSpin: return CHAINTX_FAMILY_THREE_SPIN;
    }
    return CHAINTX_FAMILY_SINGLE;
}

ComplexVector read_vector(const double* re, const double* im, std::size_t n) {
    need(re, "state real part");
    ComplexVector v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = {re[j], im ? im[j] : 0.0};
    return v;
}

void write_vector(std::span<const cplx> v, double* re, double* im) {
    need(re, "output real part");
    for (std::size_t j = 0; j < v.size(); ++j) {
        re[j] = v[j].real();
        if (im) im[j] = v[j].imag();
    }
}

void check_index(std::size_t i, std::size_t size, const char* what) {
    require(i < size, std::string(what) + ": index " + std::to_string(i) + " out of range (size " +
                          std::to_string(size) + ")");
}

template <typename T, typename... Args>
T* make(Args&&... args) {
    return new T{std::forward<Args>(args)...};
}

void fill_preset(const Preset& p, chaintx_preset* out) {
    need(out, "out");
    chaintx_preset r{};
    r.name = p.name.c_str();
    switch (p.kind) {
    case PresetKind::Eigen: r.kind = CHAINTX_PRESET_EIGEN; break;
    case PresetKind::Overlap: r.kind = CHAINTX_PRESET_OVERLAP; break;
    case PresetKind::Trace: r.kind = CHAINTX_PRESET_TRACE; break;
    case PresetKind::Length: r.kind = CHAINTX_PRESET_LENGTH; break;
    }
    r.profile = from_profile(p.profile);
    r.n = p.n;
    r.enc = {p.enc.k, p.enc.order == SwapOrder::Mirror ? CHAINTX_ORDER_MIRROR : CHAINTX_ORDER_DIRECT};
    r.tau = p.tau;
    r.t0 = p.window.t0;
    r.t1 = p.window.t1;
    r.step = p.step;
    r.delta = p.delta;
    r.eps = p.eps;
    r.n_families = std::min<std::size_t>(p.families.size(), 3);
    for (std::size_t i = 0; i < r.n_families; ++i) r.families[i] = from_family(p.families[i]);
    r.n_max = p.n_max;
    r.calibration_from = p.calibration_from.c_str();
    *out = r;
}

} // namespace

extern "C" {

const char* chaintx_version(void) { return "0.1.0"; }

const char* chaintx_last_error(void) { return g_last_error.c_str(); }

const char* chaintx_status_name(chaintx_status s) {
    switch (s) {
    case CHAINTX_OK: return "ok";
    case CHAINTX_INVALID_ARGUMENT: return "invalid argument";
    case CHAINTX_NUMERICAL: return "numerical failure";
    case CHAINTX_IO: return "i/o failure";
    case CHAINTX_INTERNAL: return "internal error";
    }
    return "unknown status";
}

chaintx_status chaintx_parse_order(const char* name, chaintx_order* out) {
    return guarded([&] {
        need(name, "name");
        need(out, "out");
        *out = parse_order(name) == SwapOrder::Mirror ? CHAINTX_ORDER_MIRROR : CHAINTX_ORDER_DIRECT;
    });
}

const char* chaintx_order_name(chaintx_order o) { return o == CHAINTX_ORDER_MIRROR ? "mirror" : "direct"; }

chaintx_status chaintx_parse_family(const char* name, chaintx_family* out) {
    return guarded([&] {
        need(name, "name");
        need(out, "out");
        *out = from_family(parse_family(name));
    });
}

const char* chaintx_family_name(chaintx_family f) {
    switch (f) {
    case CHAINTX_FAMILY_SINGLE: return "single";
    case CHAINTX_FAMILY_TWO_SPIN: return "two-spin";
    case CHAINTX_FAMILY_THREE_SPIN: return "three-spin";
    }
    return "";
}

size_t chaintx_family_width(chaintx_family f) {
    try {
        return family_width(to_family(f));
    } catch (const std::exception&) {
        return 0;
    }
}

chaintx_status chaintx_family_state(chaintx_family f, size_t n, double* re, double* im) {
    return guarded([&] { write_vector(family_state(to_family(f), n).amplitudes(), re, im); });
}

chaintx_status chaintx_chain_create(const chaintx_profile* profile, size_t n, double g, chaintx_chain** out) {
    return guarded([&] {
        need(out, "out");
        *out = nullptr;
        *out = make<chaintx_chain>(ChainSpec(to_profile(profile), n, g));
    });
}

void chaintx_chain_destroy(chaintx_chain* chain) { delete chain; }

size_t chaintx_chain_sites(const chaintx_chain* chain) { return chain ? chain->spec.sites() : 0; }

double chaintx_chain_prefactor(const chaintx_chain* chain) { return chain ? chain->spec.hop_prefactor() : 0.0; }

chaintx_status chaintx_chain_couplings(const chaintx_chain* chain, double* out, size_t cap) {
    return guarded([&] {
        need(chain, "chain");
        need(out, "out");
        const auto c = chain->spec.couplings();
        require(cap >= c.size(), "chain_couplings: buffer holds " + std::to_string(cap) + ", need " +
                                     std::to_string(c.size()));
        std::copy(c.begin(), c.end(), out);
    });
}

chaintx_status chaintx_transfer_eigensystem(const chaintx_chain* chain, const chaintx_encoding* enc, double tau,
                                            chaintx_eigensystem** out) {
    return guarded([&] {
        need(chain, "chain");
        need(out, "out");
        *out = nullptr;
        UnitaryEigenSystem es = eig_unitary(transfer_operator(chain->spec, to_encoding(enc), tau));
        for (std::size_t m = 0; m < es.size(); ++m) {
            const ComplexVector v = phase_fix(es.vector(m));
            es.vectors.set_column(m, v);
        }
        *out = make<chaintx_eigensystem>(std::move(es), tau);
    });
}

void chaintx_eigensystem_destroy(chaintx_eigensystem* es) { delete es; }

size_t chaintx_eigensystem_size(const chaintx_eigensystem* es) { return es ? es->es.size() : 0; }

chaintx_status chaintx_eigensystem_value(const chaintx_eigensystem* es, size_t m, double* re, double* im) {
    return guarded([&] {
        need(es, "eigensystem");
        need(re, "re");
        need(im, "im");
        check_index(m, es->es.size(), "eigensystem_value");
        *re = es->es.values[m].real();
        *im = es->es.values[m].imag();
    });
}

chaintx_status chaintx_eigensystem_vector(const chaintx_eigensystem* es, size_t m, double* re, double* im) {
    return guarded([&] {
        need(es, "eigensystem");
        check_index(m, es->es.size(), "eigensystem_vector");
        write_vector(es->es.vector(m), re, im);
    });
}

chaintx_status chaintx_eigensystem_sender_weight(const chaintx_eigensystem* es, size_t m, size_t k, double* weight) {
    return guarded([&] {
        need(es, "eigensystem");
        need(weight, "weight");
        check_index(m, es->es.size(), "eigensystem_sender_weight");
        require(k <= es->es.size(), "sender_weight: k exceeds N");
        double w = 0.0;
        for (std::size_t j = 0; j < k; ++j) w += std::norm(es->es.vectors(j, m));
        *weight = w;
    });
}

chaintx_status chaintx_eigensystem_overlap(const chaintx_eigensystem* es, size_t m, const double* re,
                                           const double* im, size_t n, double* p) {
    return guarded([&] {
        need(es, "eigensystem");
        need(p, "p");
        check_index(m, es->es.size(), "eigensystem_overlap");
        require(n == es->es.size(), "overlap: state dimension differs from eigensystem");
        const SubspaceState s = SubspaceState::normalized(read_vector(re, im, n));
        *p = overlap_pm(es->es, s)[m];
    });
}

chaintx_status chaintx_verify_superposition(const chaintx_eigensystem* es, const size_t* indices, const double* c_re,
                                            const double* c_im, size_t count, const double* t_re,
                                            const double* t_im, size_t n, double* residual) {
    return guarded([&] {
        need(es, "eigensystem");
        need(indices, "indices");
        need(residual, "residual");
        const std::vector<std::size_t> idx(indices, indices + count);
        const ComplexVector c = read_vector(c_re, c_im, count);
        const ComplexVector t = read_vector(t_re, t_im, n);
        *residual = verify_pst_superposition(es->es, idx, c, t);
    });
}

chaintx_status chaintx_find_candidates(const chaintx_eigensystem* es, const chaintx_encoding* enc, double delta,
                                       double eps, chaintx_candidates** out) {
    return guarded([&] {
        need(es, "eigensystem");
        need(out, "out");
        *out = nullptr;
        *out = make<chaintx_candidates>(find_candidates(es->es, to_encoding(enc), delta, eps, es->tau));
    });
}

void chaintx_candidates_destroy(chaintx_candidates* c) { delete c; }

size_t chaintx_candidates_size(const chaintx_candidates* c) { return c ? c->items.size() : 0; }

chaintx_status chaintx_candidate_info_at(const chaintx_candidates* c, size_t i, chaintx_candidate_info* out) {
    return guarded([&] {
        need(c, "candidates");
        need(out, "out");
        check_index(i, c->items.size(), "candidate_info");
        const auto& t = c->items[i];
        *out = {t.sender_weight, t.from_cluster ? 1 : 0, t.members.size()};
    });
}

chaintx_status chaintx_candidate_members(const chaintx_candidates* c, size_t i, size_t* out, size_t cap) {
    return guarded([&] {
        need(c, "candidates");
        need(out, "out");
        check_index(i, c->items.size(), "candidate_members");
        const auto& m = c->items[i].members;
        require(cap >= m.size(), "candidate_members: buffer too small");
        std::copy(m.begin(), m.end(), out);
    });
}

chaintx_status chaintx_candidate_state(const chaintx_candidates* c, size_t i, double* re, double* im) {
    return guarded([&] {
        need(c, "candidates");
        check_index(i, c->items.size(), "candidate_state");
        write_vector(c->items[i].initial.amplitudes(), re, im);
    });
}

chaintx_status chaintx_fidelity(const chaintx_chain* chain, const chaintx_encoding* enc, const double* re,
                                const double* im, size_t n, double t, double* f) {
    return guarded([&] {
        need(chain, "chain");
        need(f, "f");
        *f = fidelity(chain->spec, to_encoding(enc), SubspaceState::normalized(read_vector(re, im, n)), t);
    });
}

chaintx_status chaintx_scan_time(const chaintx_chain* chain, const chaintx_encoding* enc, const double* re,
                                 const double* im, size_t n, double t0, double t1, double step, chaintx_trace** out) {
    return guarded([&] {
        need(chain, "chain");
        need(out, "out");
        *out = nullptr;
        const SubspaceState s = SubspaceState::normalized(read_vector(re, im, n));
        *out = make<chaintx_trace>(scan_time(chain->spec, to_encoding(enc), s, TimeWindow{t0, t1}, step));
    });
}

void chaintx_trace_destroy(chaintx_trace* tr) { delete tr; }

size_t chaintx_trace_size(const chaintx_trace* tr) { return tr ? tr->trace.times.size() : 0; }

chaintx_status chaintx_trace_point(const chaintx_trace* tr, size_t i, double* t, double* f) {
    return guarded([&] {
        need(tr, "trace");
        need(t, "t");
        need(f, "f");
        check_index(i, tr->trace.times.size(), "trace_point");
        *t = tr->trace.times[i];
        *f = tr->trace.fidelities[i];
    });
}

chaintx_status chaintx_trace_best(const chaintx_trace* tr, double* f_max, double* t_max) {
    return guarded([&] {
        need(tr, "trace");
        need(f_max, "f_max");
        need(t_max, "t_max");
        *f_max = tr->trace.f_max;
        *t_max = tr->trace.t_max;
    });
}

chaintx_status chaintx_scan_length(const chaintx_length_request* req, chaintx_length_report** out) {
    return guarded([&] {
        need(req, "request");
        need(out, "out");
        *out = nullptr;
        LengthScanRequest r;
        r.profile = to_profile(&req->profile);
        r.g = req->g;
        r.order = req->order == CHAINTX_ORDER_MIRROR ? SwapOrder::Mirror : SwapOrder::Direct;
        r.family = to_family(req->family);
        r.n_min = req->n_min;
        r.n_max = req->n_max;
        r.window = {req->t0, req->t1};
        r.step = req->step;
        *out = make<chaintx_length_report>(scan_length(r));
    });
}

void chaintx_length_report_destroy(chaintx_length_report* r) { delete r; }

size_t chaintx_length_report_size(const chaintx_length_report* r) { return r ? r->records.size() : 0; }

chaintx_status chaintx_length_record(const chaintx_length_report* r, size_t i, size_t* n, double* f_max,
                                     double* t_max) {
    return guarded([&] {
        need(r, "report");
        need(n, "n");
        need(f_max, "f_max");
        need(t_max, "t_max");
        check_index(i, r->records.size(), "length_record");
        const auto& rec = r->records[i];
        *n = rec.n;
        *f_max = rec.f_max;
        *t_max = rec.t_max;
    });
}

chaintx_status chaintx_track_overlaps(const chaintx_chain* chain, const chaintx_encoding* enc, const double* re,
                                      const double* im, size_t n, double t0, double t1, double step,
                                      chaintx_overlap_track** out) {
    return guarded([&] {
        need(chain, "chain");
        need(out, "out");
        *out = nullptr;
        const SubspaceState s = SubspaceState::normalized(read_vector(re, im, n));
        *out = make<chaintx_overlap_track>(
            track_overlap_maxima(chain->spec, to_encoding(enc), s, TimeWindow{t0, t1}, step));
    });
}

void chaintx_overlap_track_destroy(chaintx_overlap_track* o) { delete o; }

size_t chaintx_overlap_track_size(const chaintx_overlap_track* o) { return o ? o->peaks.size() : 0; }

chaintx_status chaintx_overlap_peak(const chaintx_overlap_track* o, size_t i, size_t* label, double* tau, double* p) {
    return guarded([&] {
        need(o, "track");
        need(label, "label");
        need(tau, "tau");
        need(p, "p");
        check_index(i, o->peaks.size(), "overlap_peak");
        *label = o->peaks[i].label;
        *tau = o->peaks[i].tau;
        *p = o->peaks[i].p;
    });
}

size_t chaintx_preset_count(void) { return presets().size(); }

chaintx_status chaintx_preset_at(size_t i, chaintx_preset* out) {
    return guarded([&] {
        check_index(i, presets().size(), "preset_at");
        fill_preset(presets()[i], out);
    });
}

chaintx_status chaintx_preset_find(const char* name, chaintx_preset* out) {
    return guarded([&] {
        need(name, "name");
        fill_preset(find_preset(name), out);
    });
}

chaintx_status chaintx_compare_published(const chaintx_eigensystem* es, const char* preset,
                                         chaintx_comparison** out) {
    return guarded([&] {
        need(es, "eigensystem");
        need(preset, "preset");
        need(out, "out");
        *out = nullptr;
        const PublishedEigenTable& t = published_table(preset);
        *out = make<chaintx_comparison>(compare_eigen_table(es->es, t), &t);
    });
}

void chaintx_comparison_destroy(chaintx_comparison* c) { delete c; }

chaintx_status chaintx_comparison_summary_get(const chaintx_comparison* c, chaintx_comparison_summary* out) {
    return guarded([&] {
        need(c, "comparison");
        need(out, "out");
        *out = {c->cmp.rows.size(), c->cmp.max_value_error, c->table->compare_vectors ? c->cmp.max_vector_error : 0.0,
                c->table->compare_vectors ? 1 : 0};
    });
}

chaintx_status chaintx_comparison_row_at(const chaintx_comparison* c, size_t r, chaintx_comparison_row* out) {
    return guarded([&] {
        need(c, "comparison");
        need(out, "out");
        check_index(r, c->cmp.rows.size(), "comparison_row");
        const auto& row = c->cmp.rows[r];
        const auto& pub = c->table->rows[r];
        *out = {pub.value.real(),  pub.value.imag(),   row.computed_value.real(), row.computed_value.imag(),
                row.value_error,   row.vector_error,   row.matched.size()};
    });
}

chaintx_status chaintx_calibrate(const char* preset, chaintx_calibration* out) {
    return guarded([&] {
        need(preset, "preset");
        need(out, "out");
        const Calibration c = calibrate(find_preset(preset));
        chaintx_calibration r{};
        r.g = c.g;
        r.misfit = c.misfit;
        std::strncpy(r.method, c.method.c_str(), sizeof r.method - 1);
        *out = r;
    });
}

chaintx_status chaintx_write_conventions(const char* path) {
    chaintx_status io = CHAINTX_OK;
    const chaintx_status s = guarded([&] {
        need(path, "path");
        const auto cals = calibrate_all();
        std::ofstream os(path, std::ios::binary);
        if (!os) {
            io = fail(CHAINTX_IO, std::string("cannot open '") + path + "' for writing");
            return;
        }
        write_conventions(os, cals);
        if (!os.flush()) io = fail(CHAINTX_IO, std::string("write to '") + path + "' failed");
    });
    return s != CHAINTX_OK ? s : io;
}

chaintx_status chaintx_conventions_lookup(const char* path, const char* preset, double* g) {
    chaintx_status io = CHAINTX_OK;
    const chaintx_status s = guarded([&] {
        need(path, "path");
        need(preset, "preset");
        need(g, "g");
        if (!std::ifstream(path)) {
            io = fail(CHAINTX_IO, std::string("cannot open conventions file '") + path + "'");
            return;
        }
        const auto table = load_conventions(path);
        const auto it = table.find(preset);
        require(it != table.end(), std::string("conventions file '") + path + "' has no entry '" + preset + ".g'");
        *g = it->second;
    });
    return s != CHAINTX_OK ? s : io;
}

chaintx_status chaintx_kv_parse_file(const char* path, chaintx_kv** out) {
    chaintx_status io = CHAINTX_OK;
    const chaintx_status s = guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = nullptr;
        std::ifstream in(path);
        if (!in) {
            io = fail(CHAINTX_IO, std::string("cannot open '") + path + "'");
            return;
        }
        *out = make<chaintx_kv>(parse_key_value(in));
    });
    return s != CHAINTX_OK ? s : io;
}

void chaintx_kv_destroy(chaintx_kv* kv) { delete kv; }

size_t chaintx_kv_size(const chaintx_kv* kv) { return kv ? kv->entries.size() : 0; }

chaintx_status chaintx_kv_entry(const chaintx_kv* kv, size_t i, const char** key, const char** value, size_t* line) {
    return guarded([&] {
        need(kv, "kv");
        check_index(i, kv->entries.size(), "kv_entry");
        const auto& e = kv->entries[i];
        if (key) *key = e.key.c_str();
        if (value) *value = e.value.c_str();
        if (line) *line = e.line;
    });
}

} // extern "C"
