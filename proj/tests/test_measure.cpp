#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "otb/errors.hpp"
#include "otb/measure.hpp"
#include "otb/sample.hpp"

using namespace otb;

namespace {

Sample make_sample(std::vector<Observation> obs, int num_cells, bool exogenous) {
    Sample s;
    s.observations = std::move(obs);
    for (int x = 0; x < num_cells; ++x) s.cell_labels.push_back("c" + std::to_string(x));
    s.exogenous = exogenous;
    return s;
}

}  // namespace

TEST_CASE("from_points sorts, collapses duplicates and drops zeros") {
    const SignedMeasure m = SignedMeasure::from_points({{20.0, 0.5},
                                                        {10.0, 0.3},
                                                        {10.0, 0.2},
                                                        {5.0, 0.0}});
    CHECK(m.support == std::vector<double>{10.0, 20.0});
    CHECK(m.weights == std::vector<double>{0.5, 0.5});
    CHECK(m.total() == doctest::Approx(1.0));
    CHECK(m.proper());
}

TEST_CASE("cdf and tail conventions") {
    const SignedMeasure m = SignedMeasure::from_points({{1.0, 0.25}, {2.0, 0.5}, {3.0, 0.25}});
    CHECK(m.cdf(2.0) == doctest::Approx(0.75));
    CHECK(m.cdf_strict(2.0) == doctest::Approx(0.25));
    CHECK(m.tail(2.0) == doctest::Approx(0.75));
    CHECK(m.tail_strict(2.0) == doctest::Approx(0.25));
    CHECK(m.cdf(0.0) == 0.0);
    CHECK(m.tail(4.0) == 0.0);
    CHECK(m.min_support() == 1.0);
    CHECK(m.max_support() == 3.0);
}

TEST_CASE("measure_difference has zero total for equal-mass inputs") {
    const SignedMeasure a = SignedMeasure::from_points({{0.0, 0.5}, {1.0, 0.5}});
    const SignedMeasure b = SignedMeasure::from_points({{0.0, 0.2}, {2.0, 0.8}});
    const SignedMeasure d = measure_difference(a, b);
    CHECK(d.total() == doctest::Approx(0.0));
    CHECK(d.cdf(0.0) == doctest::Approx(0.3));
    CHECK(d.cdf(1.0) == doctest::Approx(0.8));
}

TEST_CASE("complier_share closed forms") {
    CellProbs cp;
    cp.num_cells = 2;
    cp.p_x = {0.5, 0.5};
    // FS = (0.4, 0.2) via p(D=1|Z=1) - p(D=1|Z=0)
    cp.p_xz = {{0.25, 0.25}, {0.25, 0.25}};
    cp.p_dxz.resize(2);
    cp.p_dxz[0][1][1] = 0.25 * 0.4;  // z=1, d=1
    cp.p_dxz[0][0][1] = 0.0;
    cp.p_dxz[1][1][1] = 0.25 * 0.2;
    cp.p_dxz[1][0][1] = 0.0;
    const ComplierShares sh = complier_share(cp);
    CHECK(sh.s[0] == doctest::Approx(2.0 / 3.0));
    CHECK(sh.s[1] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("complier_share rejects a nonpositive first stage") {
    CellProbs cp;
    cp.num_cells = 1;
    cp.p_x = {1.0};
    cp.p_xz = {{0.5, 0.5}};
    cp.p_dxz.resize(1);
    cp.p_dxz[0][1][1] = 0.1;
    cp.p_dxz[0][0][1] = 0.2;  // FS = 0.2 - 0.4 < 0
    CHECK_THROWS_AS(complier_share(cp), AssumptionError);
}

TEST_CASE("noncompliant cell produces the signed measure {10:1, 20:1, 30:-1}") {
    // rows (y, d, z) = (10,1,1), (20,1,1), (30,1,0), (40,0,0)
    const Sample s = make_sample({{10.0, 1, 1, 0}, {20.0, 1, 1, 0},
                                  {30.0, 1, 0, 0}, {40.0, 0, 0, 0}},
                                 1, false);
    const CellProbs cp = cell_probabilities(s);
    const SignedMeasure m = complier_measure(s, cp, 1, 0);
    CHECK(m.support == std::vector<double>{10.0, 20.0, 30.0});
    CHECK(m.weights[0] == doctest::Approx(1.0));
    CHECK(m.weights[1] == doctest::Approx(1.0));
    CHECK(m.weights[2] == doctest::Approx(-1.0));
    CHECK(m.total() == doctest::Approx(1.0));
    CHECK_FALSE(m.proper());

    // measure_apply examples on the same measure
    CHECK(m.apply([](double) { return 1.0; }) == doctest::Approx(1.0));
    CHECK(m.apply([](double y) { return y; }) == doctest::Approx(0.0));
    CHECK(m.apply([](double y) { return y <= 15.0 ? 1.0 : 0.0; }) == doctest::Approx(1.0));
}

TEST_CASE("exogenous cell weights are nonnegative and sum to one") {
    const Sample s = make_sample({{1.0, 1, 1, 0}, {2.0, 1, 1, 0}, {2.0, 0, 0, 0},
                                  {3.0, 0, 0, 0}, {1.0, 1, 1, 0}},
                                 1, true);
    const CellProbs cp = cell_probabilities(s);
    for (int d : {0, 1}) {
        const SignedMeasure m = complier_measure(s, cp, d, 0);
        CHECK(m.proper());
        CHECK(m.total() == doctest::Approx(1.0));
    }
    // duplicate outcomes collapse: treated arm has y values {1 (twice), 2}
    const SignedMeasure m1 = complier_measure(s, cp, 1, 0);
    CHECK(m1.support == std::vector<double>{1.0, 2.0});
    CHECK(m1.weights[0] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("zero bootstrap weight drops the observation") {
    const Sample s = make_sample({{1.0, 1, 1, 0}, {2.0, 1, 1, 0}, {3.0, 0, 0, 0}}, 1, true);
    const std::vector<double> w{0.0, 1.5, 1.5};
    const CellProbs cp = cell_probabilities(s, w);
    const SignedMeasure m = complier_measure(s, cp, 1, 0, w);
    CHECK(m.support == std::vector<double>{2.0});
    CHECK(m.weights[0] == doctest::Approx(1.0));
}

TEST_CASE("unit bootstrap weights reproduce the unweighted measure exactly") {
    const Sample s = make_sample({{1.5, 1, 1, 0}, {2.5, 1, 1, 0}, {0.5, 0, 0, 0},
                                  {3.5, 0, 0, 0}},
                                 1, true);
    const std::vector<double> ones(4, 1.0);
    const CellProbs cp0 = cell_probabilities(s);
    const CellProbs cp1 = cell_probabilities(s, ones);
    for (int d : {0, 1}) {
        const SignedMeasure a = complier_measure(s, cp0, d, 0);
        const SignedMeasure b = complier_measure(s, cp1, d, 0, ones);
        CHECK(a.support == b.support);
        CHECK(a.weights == b.weights);
    }
}

TEST_CASE("degenerate contrast raises") {
    // all rows treated: p(D=1|Z=1) = p(D=1|Z=0) = 1
    const Sample s = make_sample({{1.0, 1, 1, 0}, {2.0, 1, 0, 0}}, 1, false);
    const CellProbs cp = cell_probabilities(s);
    CHECK_THROWS_AS(complier_measure(s, cp, 1, 0), DegenerateCellError);
}

TEST_CASE("eta_hat stacks per-cell moments") {
    const SignedMeasure m = SignedMeasure::from_points({{0.0, 0.5}, {2.0, 0.5}});
    EtaFunctions fns;
    fns.eta1 = {[](double y) { return y; }};
    fns.eta0 = {[](double y) { return y; }, [](double y) { return y * y; }};

    SUBCASE("single cell") {
        const EtaHat e = eta_hat({m}, {m}, ComplierShares{{1.0}}, fns);
        REQUIRE(e.eta.size() == 3);
        CHECK(e.eta[0] == doctest::Approx(1.0));
        CHECK(e.eta[1] == doctest::Approx(1.0));
        CHECK(e.eta[2] == doctest::Approx(2.0));
    }
    SUBCASE("two cells average by shares") {
        const SignedMeasure m3 = SignedMeasure::from_points({{3.0, 1.0}});
        EtaFunctions only1;
        only1.eta1 = {[](double y) { return y; }};
        const EtaHat e = eta_hat({m, m3}, {m, m3}, ComplierShares{{0.5, 0.5}}, only1);
        CHECK(e.eta[0] == doctest::Approx(2.0));
        CHECK(e.eta1_cell[0][0] == doctest::Approx(1.0));
        CHECK(e.eta1_cell[1][0] == doctest::Approx(3.0));
    }
}
