#pragma once

// Reproduction presets, the published reference values they are checked
// against, and the hop-prefactor calibration search.

#include "chain.hpp"
#include "linalg.hpp"
#include "transfer.hpp"

#include <cstddef>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chaintx {

enum class PresetKind { Eigen, Overlap, Trace, Length };

struct Preset {
    std::string name;
    PresetKind kind = PresetKind::Eigen;
    CouplingProfile profile = profile::Uniform{-1.0};
    std::size_t n = 2;
    EncodingSpec enc{};
    double tau = 0.0;
    TimeWindow window{};
    double step = kDefaultTimeStep;
    double delta = kDefaultClusterDelta;
    double eps = kDefaultWeightEps;
    std::vector<StateFamily> families{StateFamily::Single};
    std::size_t n_max = 0;       // Length presets scan N = 2k .. n_max
    std::string calibration_from; // preset whose g this one shares; empty = own search
};

std::span<const Preset> presets();
const Preset& find_preset(std::string_view name);

// Published eigen tables: eigenvalue (re, im) then real amplitudes on |1>..|N>.
struct PublishedRow {
    cplx value;
    std::vector<double> amplitudes;
};

struct PublishedEigenTable {
    std::string preset;
    std::vector<PublishedRow> rows;
    bool compare_vectors = true;
};

const PublishedEigenTable& published_table(std::string_view preset);

struct PublishedOverlap {
    double tau;
    double p;
};
std::span<const PublishedOverlap> published_table3();

inline constexpr double kTableTol = 0.005;
inline constexpr double kCoincidenceTol = 1e-3;

struct RowComparison {
    std::size_t row = 0;
    std::vector<std::size_t> matched; // computed eigenvectors indistinguishable at table precision
    cplx computed_value;
    double value_error = 0.0;  // max(|d re|, |d im|)
    double vector_error = 0.0; // max component error on real parts
    ComplexVector computed_vector;
};

struct TableComparison {
    std::vector<RowComparison> rows;
    double max_value_error = 0.0;
    double max_vector_error = 0.0;
    bool within(double tol, bool vectors = true) const {
        return max_value_error <= tol && (!vectors || max_vector_error <= tol);
    }
};

/// Each published row is matched to the nearest computed eigenvalue. Computed
/// eigenvalues within coincidence_tol of that match form its comparison span;
/// the published vector is projected onto the span, normalized, phase-fixed and
/// compared on real parts (the tables print real parts only).
TableComparison compare_eigen_table(const UnitaryEigenSystem& es, const PublishedEigenTable& table,
                                    double coincidence_tol = kCoincidenceTol);

ChainSpec preset_chain(const Preset& p, double g);
ChainSpec preset_chain(const Preset& p, std::size_t n, double g);

struct Calibration {
    std::string preset;
    double g = 1.0;
    double misfit = 0.0; // normalized, <= 1 means every reproduced value is within tolerance
    std::string method;
};

/// Normalized misfit of a preset's published values at prefactor g.
double calibration_misfit(const Preset& p, double g);

/// Coarse candidates {0.5, 1, 2, -0.5, -1, -2}; if none fits, a 1e-4 grid over
/// |g| in [0.25, 4] of both signs, ascending, up to the end of the first fitting
/// run. Best misfit wins; earlier candidates win ties.
Calibration calibrate(const Preset& p);
std::vector<Calibration> calibrate_all();

void write_conventions(std::ostream& os, std::span<const Calibration> cals);

/// Flat `key = value` lines; `#` starts a comment. Later keys override earlier ones.
struct KeyValueEntry {
    std::string key;
    std::string value;
    std::size_t line = 0;
};
std::vector<KeyValueEntry> parse_key_value(std::istream& is);

/// preset name -> g, read from a conventions file.
std::map<std::string, double> load_conventions(const std::string& path);

} // namespace chaintx
