#include "reproduction.hpp"

#include "error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

namespace chaintx {

namespace {

std::vector<Preset> make_presets() {
    std::vector<Preset> ps;

    Preset t1;
    t1.name = "table1";
    t1.kind = PresetKind::Eigen;
    t1.profile = profile::WeakEnds{-1.0, -0.1};
    t1.n = 5;
    t1.enc = {1, SwapOrder::Direct};
    t1.tau = 31.0;
    ps.push_back(t1);

    Preset t2;
    t2.name = "table2";
    t2.kind = PresetKind::Eigen;
    t2.profile = profile::PerfectTransfer{1.0};
    t2.n = 4;
    t2.enc = {1, SwapOrder::Direct};
    t2.tau = 3.14;
    ps.push_back(t2);

    Preset t3;
    t3.name = "table3";
    t3.kind = PresetKind::Overlap;
    t3.profile = profile::Uniform{-1.0};
    t3.n = 7;
    t3.enc = {1, SwapOrder::Direct};
    t3.window = {5.0, 40.0};
    ps.push_back(t3);

    // The pair of Table 4 sits 0.235 rad apart, and the next phase gap is 0.32.
    Preset t4;
    t4.name = "table4";
    t4.kind = PresetKind::Eigen;
    t4.profile = profile::Uniform{-1.0};
    t4.n = 6;
    t4.enc = {3, SwapOrder::Direct};
    t4.tau = 4.0;
    t4.delta = 0.25;
    t4.families = {StateFamily::ThreeSpin};
    ps.push_back(t4);

    Preset t5;
    t5.name = "table5";
    t5.kind = PresetKind::Eigen;
    t5.profile = profile::Uniform{-1.0};
    t5.n = 5;
    t5.enc = {2, SwapOrder::Direct};
    t5.tau = 47.2;
    ps.push_back(t5);

    Preset f2a;
    f2a.name = "fig2a";
    f2a.kind = PresetKind::Trace;
    f2a.profile = t1.profile;
    f2a.n = 5;
    f2a.window = {0.0, 50.0};
    f2a.calibration_from = "table1";
    ps.push_back(f2a);

    // PST chains revisit F = 1 periodically; the window isolates the first arrival.
    Preset f2b;
    f2b.name = "fig2b";
    f2b.kind = PresetKind::Trace;
    f2b.profile = t2.profile;
    f2b.n = 4;
    f2b.window = {0.0, 10.0};
    f2b.calibration_from = "table2";
    ps.push_back(f2b);

    Preset f3;
    f3.name = "fig3";
    f3.kind = PresetKind::Length;
    f3.profile = profile::Uniform{-1.0};
    f3.n = 6;
    f3.window = {0.0, 50.0};
    f3.families = {StateFamily::TwoSpin, StateFamily::ThreeSpin};
    f3.n_max = 30;
    ps.push_back(f3);

    return ps;
}

const std::vector<Preset>& preset_store() {
    static const std::vector<Preset> ps = make_presets();
    return ps;
}

std::vector<PublishedEigenTable> make_tables() {
    std::vector<PublishedEigenTable> ts;
    ts.push_back({"table1",
                  {
                      {{0.999, 0.03}, {0.035, -0.500, 0.705, -0.500, 0.035}},
                      {{0.999, -0.03}, {0.035, 0.500, 0.705, 0.500, 0.035}},
                      {{1.000, 0.0}, {0.398, 0.0, -0.066, 0.0, 0.914}},
                      {{1.000, 0.0}, {0.999, 0.0, -0.050, 0.0, -0.003}},
                      {{-1.000, 0.0}, {0.0, 0.707, 0.0, -0.707, 0.0}},
                  },
                  true});
    ts.push_back({"table2",
                  {
                      {{0.0, 1.000}, {0.707, 0.0, 0.0, -0.707}},
                      {{0.018, -1.000}, {0.0, 0.707, -0.707, 0.0}},
                      {{-0.009, 1.000}, {0.612, -0.354, -0.354, 0.612}},
                      {{0.028, 1.000}, {0.354, 0.612, 0.612, 0.354}},
                  },
                  true});
    // Four-way amplitude ties leave the printed gauge ambiguous; eigenvalues only.
    ts.push_back({"table4",
                  {
                      {{0.117, -0.993}, {-0.493, 0.005, 0.500, 0.500, 0.005, -0.500}},
                      {{-0.117, -0.993}, {-0.493, -0.005, 0.500, -0.500, 0.005, 0.500}},
                      {{0.252, 0.968}, {-0.275, 0.590, -0.275, -0.275, 0.590, -0.275}},
                      {{-0.252, 0.968}, {0.275, 0.590, 0.275, -0.275, -0.590, -0.275}},
                      {{0.544, 0.839}, {0.421, 0.379, 0.405, 0.405, 0.379, 0.421}},
                      {{-0.54, 0.839}, {-0.421, 0.379, -0.405, 0.405, -0.379, 0.421}},
                  },
                  false});
    ts.push_back({"table5",
                  {
                      {{0.999, -0.025}, {-0.263, -0.263, 0.850, -0.263, -0.263}},
                      {{-0.999, 0.041}, {0.500, -0.500, 0.000, -0.500, 0.500}},
                      {{-0.997, 0.076}, {0.500, -0.500, 0.000, 0.500, -0.500}},
                      {{0.997, 0.076}, {0.500, 0.500, 0.000, -0.500, -0.500}},
                      {{0.998, 0.067}, {0.425, 0.425, 0.526, 0.425, 0.425}},
                  },
                  true});
    return ts;
}

constexpr PublishedOverlap kTable3[] = {
    {31.1, 0.7071}, {8.0, 0.6295}, {31.0, 0.7062}, {18.6, 0.6402}, {35.6, 0.7068}, {30.6, 0.6842}, {8.9, 0.7071},
};

constexpr double kCoarseCandidates[] = {0.5, 1.0, 2.0, -0.5, -1.0, -2.0};
constexpr double kFineMin = 0.25;
constexpr double kFineMax = 4.0;
constexpr double kFineStep = 1e-4;

// Fig. 3 anchor values quoted in the text for the three-spin state.
constexpr double kFig3F6 = 0.96, kFig3F6Tol = 0.02, kFig3T6 = 4.0;
constexpr double kFig3F7 = 1.00, kFig3F7Tol = 0.01, kFig3T7 = 28.8, kFig3T7Tol = 0.5;
constexpr double kOverlapTol = 0.01;

double eigen_misfit(const Preset& p, double g) {
    const ChainSpec chain = preset_chain(p, g);
    const UnitaryEigenSystem es = eig_unitary(transfer_operator(chain, p.enc, p.tau));
    const auto& table = published_table(p.name);
    const TableComparison cmp = compare_eigen_table(es, table);
    return std::max(cmp.max_value_error, table.compare_vectors ? cmp.max_vector_error : 0.0) / kTableTol;
}

// Largest p_m among the W(tau) eigenvectors at each published tau.
double overlap_misfit(const Preset& p, double g) {
    const ChainSpec chain = preset_chain(p, g);
    const SubspaceState one = SubspaceState::basis(p.n, 0);
    double worst = 0.0;
    for (const auto& row : published_table3()) {
        const UnitaryEigenSystem es = eig_unitary(transfer_operator(chain, p.enc, row.tau));
        const auto pm = overlap_pm(es, one);
        worst = std::max(worst, std::abs(*std::max_element(pm.begin(), pm.end()) - row.p));
    }
    return worst / kOverlapTol;
}

double length_misfit(const Preset& p, double g) {
    const EncodingSpec enc{family_width(StateFamily::ThreeSpin), SwapOrder::Direct};
    const double f6 = fidelity(preset_chain(p, 6, g), enc, family_state(StateFamily::ThreeSpin, 6), kFig3T6);
    const FidelityTrace t7 =
        scan_time(preset_chain(p, 7, g), enc, family_state(StateFamily::ThreeSpin, 7), p.window, p.step);
    return std::max({std::abs(f6 - kFig3F6) / kFig3F6Tol, std::abs(t7.f_max - kFig3F7) / kFig3F7Tol,
                     std::abs(t7.t_max - kFig3T7) / kFig3T7Tol});
}

std::string format_g(double g) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, g);
    return std::string(buf, r.ptr);
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

} // namespace

std::span<const Preset> presets() { return preset_store(); }

const Preset& find_preset(std::string_view name) {
    for (const auto& p : preset_store())
        if (p.name == name) return p;
    throw InvalidArgument("unknown preset '" + std::string(name) + "'");
}

const PublishedEigenTable& published_table(std::string_view preset) {
    static const std::vector<PublishedEigenTable> tables = make_tables();
    for (const auto& t : tables)
        if (t.preset == preset) return t;
    throw InvalidArgument("no published eigen table for '" + std::string(preset) + "'");
}

std::span<const PublishedOverlap> published_table3() { return kTable3; }

TableComparison compare_eigen_table(const UnitaryEigenSystem& es, const PublishedEigenTable& table,
                                    double coincidence_tol) {
    TableComparison out;
    const std::size_t n = es.size();
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const PublishedRow& row = table.rows[r];
        require(row.amplitudes.size() == n, "compare_eigen_table: row width differs from eigensystem size");

        std::size_t best = 0;
        for (std::size_t m = 1; m < n; ++m)
            if (std::abs(es.values[m] - row.value) < std::abs(es.values[best] - row.value)) best = m;

        RowComparison rc;
        rc.row = r;
        rc.computed_value = es.values[best];
        rc.value_error = std::max(std::abs(rc.computed_value.real() - row.value.real()),
                                  std::abs(rc.computed_value.imag() - row.value.imag()));
        for (std::size_t m = 0; m < n; ++m)
            if (std::abs(es.values[m] - es.values[best]) <= coincidence_tol) rc.matched.push_back(m);

        if (rc.matched.size() == 1) {
            rc.computed_vector = phase_fix(es.vector(best));
        } else {
            // Eigenvectors are orthonormal, so the projection is a sum of rank-one terms.
            ComplexVector target(row.amplitudes.begin(), row.amplitudes.end());
            ComplexVector proj(n);
            for (std::size_t m : rc.matched) {
                const ComplexVector v = es.vector(m);
                const cplx c = dot(v, target);
                for (std::size_t j = 0; j < n; ++j) proj[j] += c * v[j];
            }
            const double nrm = norm(proj);
            if (nrm == 0.0) throw NumericalError("compare_eigen_table: published vector orthogonal to matched span");
            for (auto& x : proj) x /= nrm;
            rc.computed_vector = phase_fix(proj);
        }
        for (std::size_t j = 0; j < n; ++j)
            rc.vector_error = std::max(rc.vector_error, std::abs(rc.computed_vector[j].real() - row.amplitudes[j]));

        out.max_value_error = std::max(out.max_value_error, rc.value_error);
        out.max_vector_error = std::max(out.max_vector_error, rc.vector_error);
        out.rows.push_back(std::move(rc));
    }
    return out;
}

ChainSpec preset_chain(const Preset& p, double g) { return ChainSpec(p.profile, p.n, g); }
ChainSpec preset_chain(const Preset& p, std::size_t n, double g) { return ChainSpec(p.profile, n, g); }

double calibration_misfit(const Preset& p, double g) {
    switch (p.kind) {
    case PresetKind::Eigen: return eigen_misfit(p, g);
    case PresetKind::Overlap: return overlap_misfit(p, g);
    case PresetKind::Length: return length_misfit(p, g);
    case PresetKind::Trace: return calibration_misfit(find_preset(p.calibration_from), g);
    }
    throw InvalidArgument("calibration_misfit: unknown preset kind");
}

Calibration calibrate(const Preset& p) {
    if (!p.calibration_from.empty()) {
        Calibration c = calibrate(find_preset(p.calibration_from));
        c.preset = p.name;
        c.method = "shared with " + p.calibration_from + " (same chain)";
        return c;
    }

    Calibration best{p.name, 0.0, std::numeric_limits<double>::infinity(), {}};
    for (double g : kCoarseCandidates) {
        const double m = calibration_misfit(p, g);
        if (m <= 1.0 && m < best.misfit) best = {p.name, g, m, "coarse search over {0.5, 1, 2, -0.5, -1, -2}"};
    }
    if (std::isfinite(best.misfit)) return best;

    // Larger |g| aliases the same eigenphases modulo 2 pi, so the search stops at
    // the end of the first run of fitting magnitudes.
    const auto steps = static_cast<long>(std::llround((kFineMax - kFineMin) / kFineStep));
    for (long i = 0; i <= steps; ++i) {
        const double mag = std::round((kFineMin + static_cast<double>(i) * kFineStep) / kFineStep) * kFineStep;
        bool fits = false;
        for (double g : {mag, -mag}) {
            const double m = calibration_misfit(p, g);
            if (m > 1.0) continue;
            fits = true;
            if (m < best.misfit)
                best = {p.name, g, m, "fine search over |g| in [0.25, 4], step 1e-4, first fitting run"};
        }
        if (!fits && std::isfinite(best.misfit)) break;
    }
    if (!std::isfinite(best.misfit))
        throw NumericalError("calibrate: no prefactor reproduces preset '" + p.name + "' within tolerance");
    return best;
}

std::vector<Calibration> calibrate_all() {
    std::vector<Calibration> out;
    for (const auto& p : preset_store()) out.push_back(calibrate(p));
    return out;
}

void write_conventions(std::ostream& os, std::span<const Calibration> cals) {
    os << "# Hop prefactor g per reproduction preset: subspace hopping is -g J_{j,j+1}.\n"
          "# Each value is the best fit of a search against the published numbers;\n"
          "# misfit is the worst deviation in units of the comparison tolerance.\n"
          "# Regenerate with: chaintx calibrate --out <this file>\n";
    for (const auto& c : cals) {
        char buf[32];
        const auto r = std::to_chars(buf, buf + sizeof buf, c.misfit, std::chars_format::fixed, 3);
        os << "\n# " << c.preset << ": " << c.method << "; misfit " << std::string(buf, r.ptr) << "\n"
           << c.preset << ".g = " << format_g(c.g) << "\n";
    }
}

std::vector<KeyValueEntry> parse_key_value(std::istream& is) {
    std::vector<KeyValueEntry> out;
    std::string line;
    std::size_t no = 0;
    while (std::getline(is, line)) {
        ++no;
        const auto hash = line.find('#');
        const std::string body = trim(std::string_view(line).substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw InvalidArgument("line " + std::to_string(no) + ": expected 'key = value'");
        KeyValueEntry e{trim(std::string_view(body).substr(0, eq)), trim(std::string_view(body).substr(eq + 1)), no};
        if (e.key.empty()) throw InvalidArgument("line " + std::to_string(no) + ": empty key");
        out.push_back(std::move(e));
    }
    return out;
}

std::map<std::string, double> load_conventions(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open conventions file '" + path + "'");
    std::map<std::string, double> out;
    for (const auto& e : parse_key_value(in)) {
        constexpr std::string_view suffix = ".g";
        if (e.key.size() <= suffix.size() || !e.key.ends_with(suffix))
            throw InvalidArgument(path + ":" + std::to_string(e.line) + ": unknown key '" + e.key + "'");
        double g = 0.0;
        const char* end = e.value.data() + e.value.size();
        const auto r = std::from_chars(e.value.data(), end, g);
        if (r.ec != std::errc{} || r.ptr != end || !std::isfinite(g) || g == 0.0)
            throw InvalidArgument(path + ":" + std::to_string(e.line) + ": '" + e.key + "' is not a non-zero number");
        out[e.key.substr(0, e.key.size() - suffix.size())] = g;
    }
    return out;
}

} // namespace chaintx
