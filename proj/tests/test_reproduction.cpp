#include "error.hpp"
#include "reproduction.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace chaintx;

TEST_CASE("key = value parsing") {
    std::istringstream in("# header\n"
                          "N = 5\n"
                          "\n"
                          "  profile=weak-ends   # trailing comment\n"
                          "couplings = 1, 2, 3\r\n"
                          "empty =\n");
    const auto kv = parse_key_value(in);
    REQUIRE(kv.size() == 4);
    CHECK(kv[0].key == "N");
    CHECK(kv[0].value == "5");
    CHECK(kv[0].line == 2);
    CHECK(kv[1].value == "weak-ends");
    CHECK(kv[2].value == "1, 2, 3");
    CHECK(kv[3].value.empty());

    std::istringstream bad("N 5\n");
    CHECK_THROWS_AS(parse_key_value(bad), InvalidArgument);
    std::istringstream nokey(" = 5\n");
    CHECK_THROWS_AS(parse_key_value(nokey), InvalidArgument);
}

TEST_CASE("presets are complete and consistent") {
    for (const char* name : {"table1", "table2", "table3", "table4", "table5", "fig2a", "fig2b", "fig3"}) {
        const Preset& p = find_preset(name);
        CHECK(p.name == name);
        if (p.kind == PresetKind::Eigen) CHECK(published_table(name).rows.size() == p.n);
        if (!p.calibration_from.empty()) CHECK(find_preset(p.calibration_from).kind == PresetKind::Eigen);
    }
    CHECK_THROWS_AS(find_preset("table6"), InvalidArgument);
    CHECK_THROWS_AS(published_table("fig3"), InvalidArgument);
    CHECK(published_table3().size() == 7);
}

TEST_CASE("table comparison: exact rows, coincident spans, and value errors") {
    UnitaryEigenSystem es;
    es.values = {std::polar(1.0, 0.0), std::polar(1.0, 1e-4), -1.0};
    es.vectors = ComplexMatrix::identity(3);
    const double r = 1.0 / std::sqrt(2.0);

    PublishedEigenTable t{"synthetic",
                          {{{1.0, 0.0}, {r, r, 0.0}}, {{-1.0, 0.002}, {0.0, 0.0, 1.0}}},
                          true};
    const TableComparison c = compare_eigen_table(es, t);
    REQUIRE(c.rows.size() == 2);
    // (|1> + |2>)/sqrt2 lies in the span of two coincident eigenvectors.
    CHECK(c.rows[0].matched.size() == 2);
    CHECK(c.rows[0].vector_error <= 1e-12);
    CHECK(c.rows[1].matched == std::vector<std::size_t>{2});
    CHECK(c.rows[1].value_error == doctest::Approx(0.002));
    CHECK(c.within(kTableTol));

    // Resolving the pair separately puts the published vector out of reach.
    const TableComparison strict = compare_eigen_table(es, t, 1e-6);
    CHECK(strict.rows[0].matched.size() == 1);
    CHECK(strict.max_vector_error > 0.2);

    PublishedEigenTable wrong_width{"synthetic", {{{1.0, 0.0}, {1.0, 0.0}}}, true};
    CHECK_THROWS_AS(compare_eigen_table(es, wrong_width), InvalidArgument);
}

TEST_CASE("shipped conventions match a fresh calibration") {
    const auto shipped = load_conventions(CHAINTX_CONVENTIONS);
    for (const auto& cal : calibrate_all()) {
        INFO(cal.preset);
        REQUIRE(shipped.count(cal.preset) == 1);
        CHECK(shipped.at(cal.preset) == doctest::Approx(cal.g).epsilon(1e-12));
        CHECK(cal.misfit <= 1.0);
    }
}

TEST_CASE("conventions round trip") {
    const std::vector<Calibration> cals{{"table1", -1.0, 0.5, "coarse"}, {"table2", -0.5032, 0.1, "fine"}};
    std::ostringstream os;
    write_conventions(os, cals);
    std::istringstream in(os.str());
    const auto kv = parse_key_value(in);
    REQUIRE(kv.size() == 2);
    CHECK(kv[1].key == "table2.g");
    CHECK(kv[1].value == "-0.5032");
}
