#ifndef CHAINTX_CHAINTX_H
#define CHAINTX_CHAINTX_H

/* C interface to the chaintx spin-chain transfer library.
 *
 * Objects are opaque handles created by *_create / producer functions and
 * released with the matching *_destroy (NULL is accepted). Every fallible call
 * returns a chaintx_status; on failure chaintx_last_error() holds a message for
 * the calling thread until its next failing call. Complex vectors cross the
 * boundary as separate real and imaginary arrays; an imaginary input may be NULL.
 * Sites and eigenvector indices are 0-based. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(CHAINTX_BUILDING)
#define CHAINTX_API __attribute__((visibility("default")))
#else
#define CHAINTX_API
#endif

typedef enum {
    CHAINTX_OK = 0,
    CHAINTX_INVALID_ARGUMENT = 1, /* precondition or configuration violation */
    CHAINTX_NUMERICAL = 2,        /* non-convergence, non-unitarity, no calibration fit */
    CHAINTX_IO = 3,
    CHAINTX_INTERNAL = 4
} chaintx_status;

CHAINTX_API const char* chaintx_version(void);
CHAINTX_API const char* chaintx_last_error(void);
CHAINTX_API const char* chaintx_status_name(chaintx_status s);

/* ---- chain model ---- */

typedef enum {
    CHAINTX_PROFILE_UNIFORM = 0,          /* J */
    CHAINTX_PROFILE_WEAK_ENDS = 1,        /* J, J0 on the two end bonds */
    CHAINTX_PROFILE_PERFECT_TRANSFER = 2, /* scale * sqrt(i (N - i)) */
    CHAINTX_PROFILE_CUSTOM = 3            /* couplings[0 .. N-2] */
} chaintx_profile_kind;

typedef struct {
    chaintx_profile_kind kind;
    double j;
    double j0;
    double scale;
    const double* couplings;
    size_t n_couplings;
} chaintx_profile;

typedef enum { CHAINTX_ORDER_DIRECT = 0, CHAINTX_ORDER_MIRROR = 1 } chaintx_order;

typedef struct {
    size_t k;
    chaintx_order order;
} chaintx_encoding;

typedef enum { CHAINTX_FAMILY_SINGLE = 0, CHAINTX_FAMILY_TWO_SPIN = 1, CHAINTX_FAMILY_THREE_SPIN = 2 } chaintx_family;

CHAINTX_API chaintx_status chaintx_parse_order(const char* name, chaintx_order* out);
CHAINTX_API const char* chaintx_order_name(chaintx_order o);
CHAINTX_API chaintx_status chaintx_parse_family(const char* name, chaintx_family* out);
CHAINTX_API const char* chaintx_family_name(chaintx_family f);
CHAINTX_API size_t chaintx_family_width(chaintx_family f);
/* Writes n amplitudes. */
CHAINTX_API chaintx_status chaintx_family_state(chaintx_family f, size_t n, double* re, double* im);

typedef struct chaintx_chain chaintx_chain;

/* g is the signed hop prefactor: subspace hopping is -g J_{j,j+1}. */
CHAINTX_API chaintx_status chaintx_chain_create(const chaintx_profile* profile, size_t n, double g,
                                                chaintx_chain** out);
CHAINTX_API void chaintx_chain_destroy(chaintx_chain* chain);
CHAINTX_API size_t chaintx_chain_sites(const chaintx_chain* chain);
CHAINTX_API double chaintx_chain_prefactor(const chaintx_chain* chain);
/* Copies the N-1 couplings; cap must be at least N-1. */
CHAINTX_API chaintx_status chaintx_chain_couplings(const chaintx_chain* chain, double* out, size_t cap);

/* ---- W(tau) eigensystem ---- */

typedef struct chaintx_eigensystem chaintx_eigensystem;

CHAINTX_API chaintx_status chaintx_transfer_eigensystem(const chaintx_chain* chain, const chaintx_encoding* enc,
                                                        double tau, chaintx_eigensystem** out);
CHAINTX_API void chaintx_eigensystem_destroy(chaintx_eigensystem* es);
CHAINTX_API size_t chaintx_eigensystem_size(const chaintx_eigensystem* es);
/* Ordered by eigenphase in (-pi, pi]. */
CHAINTX_API chaintx_status chaintx_eigensystem_value(const chaintx_eigensystem* es, size_t m, double* re, double* im);
/* Phase-fixed: the largest component is real and positive. */
CHAINTX_API chaintx_status chaintx_eigensystem_vector(const chaintx_eigensystem* es, size_t m, double* re, double* im);
CHAINTX_API chaintx_status chaintx_eigensystem_sender_weight(const chaintx_eigensystem* es, size_t m, size_t k,
                                                             double* weight);
/* p_m = |<Psi_m|state>| for a normalized copy of the state. */
CHAINTX_API chaintx_status chaintx_eigensystem_overlap(const chaintx_eigensystem* es, size_t m, const double* re,
                                                       const double* im, size_t n, double* p);
/* min over phi of || e^{i phi} sum_l c_l |Psi_{idx_l}> - target || with phase-fixed eigenvectors. */
CHAINTX_API chaintx_status chaintx_verify_superposition(const chaintx_eigensystem* es, const size_t* indices,
                                                        const double* c_re, const double* c_im, size_t count,
                                                        const double* t_re, const double* t_im, size_t n,
                                                        double* residual);

typedef struct chaintx_candidates chaintx_candidates;

typedef struct {
    double sender_weight;
    int from_cluster;
    size_t n_members;
} chaintx_candidate_info;

CHAINTX_API chaintx_status chaintx_find_candidates(const chaintx_eigensystem* es, const chaintx_encoding* enc,
                                                   double delta, double eps, chaintx_candidates** out);
CHAINTX_API void chaintx_candidates_destroy(chaintx_candidates* c);
CHAINTX_API size_t chaintx_candidates_size(const chaintx_candidates* c);
CHAINTX_API chaintx_status chaintx_candidate_info_at(const chaintx_candidates* c, size_t i, chaintx_candidate_info* out);
CHAINTX_API chaintx_status chaintx_candidate_members(const chaintx_candidates* c, size_t i, size_t* out, size_t cap);
CHAINTX_API chaintx_status chaintx_candidate_state(const chaintx_candidates* c, size_t i, double* re, double* im);

/* ---- fidelity and scans ---- */

CHAINTX_API chaintx_status chaintx_fidelity(const chaintx_chain* chain, const chaintx_encoding* enc, const double* re,
                                            const double* im, size_t n, double t, double* f);

typedef struct chaintx_trace chaintx_trace;

CHAINTX_API chaintx_status chaintx_scan_time(const chaintx_chain* chain, const chaintx_encoding* enc,
                                             const double* re, const double* im, size_t n, double t0, double t1,
                                             double step, chaintx_trace** out);
CHAINTX_API void chaintx_trace_destroy(chaintx_trace* tr);
CHAINTX_API size_t chaintx_trace_size(const chaintx_trace* tr);
CHAINTX_API chaintx_status chaintx_trace_point(const chaintx_trace* tr, size_t i, double* t, double* f);
/* Refined maximum; t_max is the earliest attainment. */
CHAINTX_API chaintx_status chaintx_trace_best(const chaintx_trace* tr, double* f_max, double* t_max);

typedef struct {
    chaintx_profile profile;
    double g;
    chaintx_order order;
    chaintx_family family;
    size_t n_min;
    size_t n_max;
    double t0;
    double t1;
    double step;
} chaintx_length_request;

typedef struct chaintx_length_report chaintx_length_report;

CHAINTX_API chaintx_status chaintx_scan_length(const chaintx_length_request* req, chaintx_length_report** out);
CHAINTX_API void chaintx_length_report_destroy(chaintx_length_report* r);
CHAINTX_API size_t chaintx_length_report_size(const chaintx_length_report* r);
CHAINTX_API chaintx_status chaintx_length_record(const chaintx_length_report* r, size_t i, size_t* n, double* f_max,
                                                 double* t_max);

typedef struct chaintx_overlap_track chaintx_overlap_track;

/* One peak per eigenvector, labelled by eigenphase rank at t0. */
CHAINTX_API chaintx_status chaintx_track_overlaps(const chaintx_chain* chain, const chaintx_encoding* enc,
                                                  const double* re, const double* im, size_t n, double t0,
                                                  double t1, double step, chaintx_overlap_track** out);
CHAINTX_API void chaintx_overlap_track_destroy(chaintx_overlap_track* o);
CHAINTX_API size_t chaintx_overlap_track_size(const chaintx_overlap_track* o);
CHAINTX_API chaintx_status chaintx_overlap_peak(const chaintx_overlap_track* o, size_t i, size_t* label, double* tau,
                                                double* p);

/* ---- reproduction presets ---- */

typedef enum {
    CHAINTX_PRESET_EIGEN = 0,
    CHAINTX_PRESET_OVERLAP = 1,
    CHAINTX_PRESET_TRACE = 2,
    CHAINTX_PRESET_LENGTH = 3
} chaintx_preset_kind;

/* Pointers refer to library-lifetime storage. */
typedef struct {
    const char* name;
    chaintx_preset_kind kind;
    chaintx_profile profile;
    size_t n;
    chaintx_encoding enc;
    double tau;
    double t0;
    double t1;
    double step;
    double delta;
    double eps;
    size_t n_families;
    chaintx_family families[3];
    size_t n_max;
    const char* calibration_from; /* "" when the preset has its own search */
} chaintx_preset;

CHAINTX_API size_t chaintx_preset_count(void);
CHAINTX_API chaintx_status chaintx_preset_at(size_t i, chaintx_preset* out);
CHAINTX_API chaintx_status chaintx_preset_find(const char* name, chaintx_preset* out);

typedef struct chaintx_comparison chaintx_comparison;

typedef struct {
    size_t rows;
    double max_value_error;
    double max_vector_error;
    int vectors_compared;
} chaintx_comparison_summary;

typedef struct {
    double published_re;
    double published_im;
    double computed_re;
    double computed_im;
    double value_error;
    double vector_error;
    size_t matched; /* computed eigenvectors in the comparison span */
} chaintx_comparison_row;

/* Compares against the published eigen table of a preset (table1, table2, table4, table5). */
CHAINTX_API chaintx_status chaintx_compare_published(const chaintx_eigensystem* es, const char* preset,
                                                     chaintx_comparison** out);
CHAINTX_API void chaintx_comparison_destroy(chaintx_comparison* c);
CHAINTX_API chaintx_status chaintx_comparison_summary_get(const chaintx_comparison* c,
                                                          chaintx_comparison_summary* out);
CHAINTX_API chaintx_status chaintx_comparison_row_at(const chaintx_comparison* c, size_t r, chaintx_comparison_row* out);

typedef struct {
    double g;
    double misfit; /* <= 1: every compared value within tolerance */
    char method[128];
} chaintx_calibration;

CHAINTX_API chaintx_status chaintx_calibrate(const char* preset, chaintx_calibration* out);
/* Calibrates every preset and writes a conventions file. */
CHAINTX_API chaintx_status chaintx_write_conventions(const char* path);
CHAINTX_API chaintx_status chaintx_conventions_lookup(const char* path, const char* preset, double* g);

/* ---- flat key = value files ---- */

typedef struct chaintx_kv chaintx_kv;

CHAINTX_API chaintx_status chaintx_kv_parse_file(const char* path, chaintx_kv** out);
CHAINTX_API void chaintx_kv_destroy(chaintx_kv* kv);
CHAINTX_API size_t chaintx_kv_size(const chaintx_kv* kv);
CHAINTX_API chaintx_status chaintx_kv_entry(const chaintx_kv* kv, size_t i, const char** key, const char** value,
                                            size_t* line);

#ifdef __cplusplus
}
#endif

#endif
