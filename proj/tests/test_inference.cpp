#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "otb/errors.hpp"
#include "otb/inference.hpp"

using namespace otb;

namespace {

// exogenous sample with X cells, both arms populated in each cell, outcomes
// on a small discrete grid
Sample make_sample(Rng& rng, int n, int X) {
    Sample s;
    s.exogenous = true;
    for (int x = 0; x < X; ++x) s.cell_labels.push_back("cell " + std::to_string(x));
    for (int i = 0; i < n; ++i) {
        Observation o;
        o.x = i % X;                       // every cell populated
        o.d = (i / X) % 2;                 // both arms in every cell
        o.z = o.d;
        o.y = 0.5 + 0.5 * static_cast<double>(rng.next_below(6)) + 0.1 * o.x;
        s.observations.push_back(o);
    }
    return s;
}

AnalysisOptions identity_options() {
    ParameterOptions po;
    po.cost = "product";
    AnalysisOptions opts;
    opts.param = make_parameter("identity", po);
    return opts;
}

}  // namespace

TEST_CASE("bootstrap weights: scheme identities and determinism") {
    const int n = 157;
    SUBCASE("multinomial counts sum to n and are integers") {
        Rng rng = Rng::stream(7, 0);
        const auto w = gen_bootstrap_weights(BootScheme::multinomial, n, rng);
        REQUIRE(static_cast<int>(w.size()) == n);
        double total = 0.0;
        for (double wi : w) {
            CHECK(wi == std::floor(wi));
            CHECK(wi >= 0.0);
            total += wi;
        }
        CHECK(total == static_cast<double>(n));
    }
    SUBCASE("bayesian weights are strictly positive with mean one") {
        Rng rng = Rng::stream(7, 0);
        const auto w = gen_bootstrap_weights(BootScheme::bayesian, n, rng);
        double total = 0.0;
        for (double wi : w) {
            CHECK(wi > 0.0);
            total += wi;
        }
        CHECK(total / n == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("identical streams reproduce identical weights") {
        Rng a = Rng::stream(42, 3), b = Rng::stream(42, 3);
        CHECK(gen_bootstrap_weights(BootScheme::bayesian, n, a) ==
              gen_bootstrap_weights(BootScheme::bayesian, n, b));
        Rng c = Rng::stream(42, 4);
        CHECK(gen_bootstrap_weights(BootScheme::bayesian, n, c) !=
              gen_bootstrap_weights(BootScheme::bayesian, n, b));
    }
}

TEST_CASE("confidence_set order statistic") {
    SUBCASE("all draws at the point estimate give a zero critical value") {
        std::vector<std::pair<double, double>> draws(50, {0.3, 0.9});
        const InferenceResult r = confidence_set(draws, 0.3, 0.9, 400, 0.05);
        CHECK(r.c_hat == 0.0);
        CHECK(r.lo == 0.3);
        CHECK(r.hi == 0.9);
    }
    SUBCASE("stats 1..100 at alpha 0.05 pick the 95th") {
        // n = 1 so the stat for draw (k, gammaH) is k itself
        std::vector<std::pair<double, double>> draws;
        for (int k = 1; k <= 100; ++k) draws.emplace_back(static_cast<double>(k), 10.0);
        const InferenceResult r = confidence_set(draws, 0.0, 10.0, 1, 0.05);
        CHECK(r.c_hat == 95.0);
        CHECK(r.lo == -95.0);
        CHECK(r.hi == 105.0);
    }
    SUBCASE("critical value is nonincreasing in alpha") {
        Rng rng(0xabcdULL);
        std::vector<std::pair<double, double>> draws;
        for (int k = 0; k < 200; ++k)
            draws.emplace_back(rng.next_double(), 1.0 + rng.next_double());
        double prev = 1e300;
        for (double alpha : {0.01, 0.05, 0.10, 0.5}) {
            const InferenceResult r = confidence_set(draws, 0.4, 1.6, 50, alpha);
            CHECK(r.c_hat <= prev);
            prev = r.c_hat;
        }
    }
}

TEST_CASE("derivative matrices: frozen one-cell layout") {
    AnalysisPoint pt;
    pt.cells = {0};
    pt.shares = {0.4};
    pt.cell_theta = {{0.2, 0.8}};
    pt.eta.eta1_cell = {{1.5}};
    pt.eta.eta0_cell = {{2.5}};
    pt.grads.gL = {1.0, 0.0, 2.0, 3.0};
    pt.grads.gH = {0.0, 1.0, 2.0, 3.0};
    const DerivativeMatrices dm = build_derivative_matrices(pt);
    CHECK(dm.M == 1);
    CHECK(dm.K1 == 1);
    CHECK(dm.K0 == 1);
    // rows (thetaL, thetaH, eta1, eta0) x columns (thetaL, thetaH, eta1, eta0, s)
    const std::vector<double> want_d3{
        0.4, 0.0, 0.0, 0.0, 0.2,
        0.0, 0.4, 0.0, 0.0, 0.8,
        0.0, 0.0, 0.4, 0.0, 1.5,
        0.0, 0.0, 0.0, 0.4, 2.5,
    };
    CHECK(dm.d3 == want_d3);
    const std::vector<double> want_d4{1.0, 0.0, 2.0, 3.0, 0.0, 1.0, 2.0, 3.0};
    CHECK(dm.d4 == want_d4);
}

TEST_CASE("evaluate_t2prime takes the candidate maximum") {
    // two piecewise-linear candidates: phi(y) = y vs phi(y) = -y, psi = 0
    DualCandidate up;
    up.s1 = {0.0, 1.0};
    up.phi = {0.0, 1.0};
    up.s0 = {0.0, 1.0};
    up.psi = {0.0, 0.0};
    DualCandidate down = up;
    down.phi = {0.0, -1.0};

    PsiSets psi;
    psi.lower = {{up, down}};
    psi.upper = {{down}};

    CellIncrement inc;
    inc.h1 = SignedMeasure::from_points({{0.25, 2.0}, {0.75, -1.0}});  // H1(y->y) = -0.25
    inc.h0 = SignedMeasure::from_points({{0.5, 3.0}});
    inc.h_eta1 = {7.0};
    inc.h_eta0 = {};
    inc.h_s = -4.0;

    const std::vector<double> t2 = evaluate_t2prime({inc}, psi);
    REQUIRE(t2.size() == 4);
    CHECK(t2[0] == doctest::Approx(0.25));    // max(-0.25, +0.25) from the two candidates
    CHECK(t2[1] == doctest::Approx(-0.25));   // minus the single upper candidate's 0.25... sign
    CHECK(t2[2] == 7.0);
    CHECK(t2[3] == -4.0);

    SUBCASE("zero increments give zero transport terms") {
        CellIncrement zero;
        const std::vector<double> z = evaluate_t2prime({zero}, psi);
        CHECK(z[0] == 0.0);
        CHECK(z[1] == 0.0);
    }
    SUBCASE("empty candidate sets are a solver error") {
        PsiSets empty;
        empty.lower = {{}};
        empty.upper = {{up}};
        CHECK_THROWS_AS(evaluate_t2prime({inc}, empty), SolverError);
    }
}

TEST_CASE("bootstrap_draws is deterministic and brackets the point estimate") {
    Rng rng(0xd00dULL);
    const Sample s = make_sample(rng, 120, 2);
    const AnalysisOptions opts = identity_options();
    const AnalysisPoint pt = analyze_point(s, opts);

    BootstrapConfig cfg;
    cfg.replicates = 60;
    cfg.seed = 11;
    cfg.threads = 2;
    const InferenceResult a = bootstrap_draws(s, pt, opts, cfg);
    const InferenceResult b = bootstrap_draws(s, pt, opts, cfg);
    CHECK(a.draws == b.draws);
    CHECK(a.c_hat == b.c_hat);
    REQUIRE(static_cast<int>(a.draws.size()) == 60);
    CHECK(a.lo <= pt.gamma.lo + 1e-12);
    CHECK(a.hi >= pt.gamma.hi - 1e-12);
    CHECK(a.failed_replicates == 0);

    SUBCASE("thread count does not change the draws") {
        BootstrapConfig serial = cfg;
        serial.threads = 1;
        CHECK(bootstrap_draws(s, pt, opts, serial).draws == a.draws);
    }
    SUBCASE("a different seed changes the draws") {
        BootstrapConfig other = cfg;
        other.seed = 12;
        CHECK(bootstrap_draws(s, pt, opts, other).draws != a.draws);
    }
}

TEST_CASE("simple and derivative critical values agree to first order") {
    Rng rng(0xbeefULL);
    const Sample s = make_sample(rng, 200, 2);
    const AnalysisOptions opts = identity_options();
    const AnalysisPoint pt = analyze_point(s, opts);

    BootstrapConfig cfg;
    cfg.replicates = 200;
    cfg.seed = 5;
    const InferenceResult simple = bootstrap_draws(s, pt, opts, cfg);
    cfg.method = BootMethod::derivative;
    const InferenceResult deriv = bootstrap_draws(s, pt, opts, cfg);

    CHECK(simple.c_hat > 0.0);
    CHECK(deriv.c_hat > 0.0);
    CHECK(std::abs(deriv.c_hat - simple.c_hat) <= 0.25 * simple.c_hat);
    // one lower and one upper candidate set per cell
    REQUIRE(deriv.psi_sizes.size() == 2 * pt.cells.size());
    for (int sz : deriv.psi_sizes) CHECK(sz >= 1);
}

TEST_CASE("bootstrap config validation") {
    Rng rng(0x1dULL);
    const Sample s = make_sample(rng, 60, 1);
    const AnalysisOptions opts = identity_options();
    const AnalysisPoint pt = analyze_point(s, opts);

    BootstrapConfig cfg;
    cfg.replicates = 0;
    CHECK_THROWS_AS(bootstrap_draws(s, pt, opts, cfg), ConfigError);
    cfg.replicates = 10;
    cfg.alpha = 1.0;
    CHECK_THROWS_AS(bootstrap_draws(s, pt, opts, cfg), ConfigError);
    cfg.alpha = 0.05;
    cfg.method = BootMethod::derivative;
    cfg.kappa = std::sqrt(60.0) + 1.0;  // must be < sqrt(n)
    CHECK_THROWS_AS(bootstrap_draws(s, pt, opts, cfg), ConfigError);
}

TEST_CASE("multinomial weights on a fragile cell trip the failure cap") {
    // a 9-observation cell pattern where one cell has a single treated row;
    // multinomial resampling frequently empties it
    Sample s;
    s.exogenous = true;
    s.cell_labels = {"big", "tiny"};
    for (int i = 0; i < 8; ++i) s.observations.push_back({1.0 + i % 3, i % 2, i % 2, 0});
    s.observations.push_back({2.0, 1, 1, 1});
    s.observations.push_back({1.0, 0, 0, 1});

    const AnalysisOptions opts = identity_options();
    const AnalysisPoint pt = analyze_point(s, opts);
    BootstrapConfig cfg;
    cfg.scheme = BootScheme::multinomial;
    cfg.replicates = 100;
    cfg.seed = 3;
    CHECK_THROWS_AS(bootstrap_draws(s, pt, opts, cfg), SolverError);
    // the Bayesian scheme never zeroes a weight, so the same setup succeeds
    cfg.scheme = BootScheme::bayesian;
    const InferenceResult r = bootstrap_draws(s, pt, opts, cfg);
    CHECK(r.failed_replicates == 0);
}

TEST_CASE("quantile confidence set contains the estimated identified set") {
    Rng rng(0x9e1ULL);
    const Sample s = make_sample(rng, 150, 2);
    std::vector<double> grid;
    for (int k = 0; k <= 30; ++k) grid.push_back(-3.0 + 6.0 * k / 30.0);

    BootstrapConfig cfg;
    cfg.replicates = 80;
    cfg.seed = 21;
    const double tau = 0.5;
    const QuantileBand band = quantile_confidence_set(s, tau, grid, cfg);
    REQUIRE(band.curve.size() == grid.size());
    REQUIRE(band.c_hat.size() == grid.size());

    const auto ident = quantile_identified_set(band.curve, tau);
    for (std::size_t q = 0; q < grid.size(); ++q) {
        const bool in_ident = band.curve[q].lo <= tau && tau <= band.curve[q].hi;
        if (in_ident) CHECK(band.kept[q] == 1);  // c_hat clamp guarantees containment
    }
    CHECK(!ident.empty());
    CHECK(!band.components.empty());
    CHECK(band.components.front().first <= ident.front().first);
    CHECK(band.components.back().second >= ident.back().second);

    SUBCASE("deterministic across runs") {
        const QuantileBand again = quantile_confidence_set(s, tau, grid, cfg);
        CHECK(again.c_hat == band.c_hat);
        CHECK(again.components == band.components);
    }
    SUBCASE("empty grid is a config error") {
        CHECK_THROWS_AS(quantile_confidence_set(s, tau, {}, cfg), ConfigError);
    }
}
