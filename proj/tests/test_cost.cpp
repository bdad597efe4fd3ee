#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "otb/cost.hpp"
#include "otb/errors.hpp"

using namespace otb;

namespace {

// brute-force (L, sup) over a fine grid, for checking the closed forms
ClassBounds grid_bounds(const SmoothCost& cost, const Rectangle& r, int steps = 200) {
    double lip = 0.0, sup = 0.0;
    for (int i = 0; i <= steps; ++i)
        for (int j = 0; j <= steps; ++j) {
            const double y1 = r.y_min + r.span() * i / steps;
            const double y0 = r.y_min + r.span() * j / steps;
            sup = std::max(sup, std::abs(cost.c(y1, y0)));
            const auto g = cost.grad(y1, y0);
            lip = std::max(lip, std::hypot(g[0], g[1]));
        }
    return {lip, sup};
}

}  // namespace

TEST_CASE("product cost on the unit square") {
    const Rectangle r{0.0, 1.0};
    const ClassBounds b = derive_class_bounds(cost_product(), r);
    CHECK(b.sup_norm == doctest::Approx(1.0));
    CHECK(b.lipschitz == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("squared difference on the unit square") {
    const Rectangle r{0.0, 1.0};
    const ClassBounds b = derive_class_bounds(cost_squared_diff(), r);
    CHECK(b.sup_norm == doctest::Approx(1.0));
    CHECK(b.lipschitz == doctest::Approx(2.0 * std::sqrt(2.0)));
}

TEST_CASE("closed-form class bounds dominate a dense grid scan") {
    const Rectangle rects[] = {{0.0, 1.0}, {-2.0, 3.0}, {-1.5, -0.25}, {0.5, 4.0}};
    for (const Rectangle& r : rects) {
        for (const SmoothCost& cost :
             {cost_product(), cost_squared_diff(), cost_te_times_y0()}) {
            const ClassBounds closed = derive_class_bounds(cost, r);
            const ClassBounds grid = grid_bounds(cost, r);
            CHECK(closed.sup_norm >= grid.sup_norm - 1e-9);
            CHECK(closed.lipschitz >= grid.lipschitz - 1e-9);
            // and tight: the grid should get within O(1/steps) of the bound
            CHECK(closed.sup_norm <= grid.sup_norm + 0.15 * (1.0 + grid.sup_norm));
            CHECK(closed.lipschitz <= grid.lipschitz + 0.15 * (1.0 + grid.lipschitz));
        }
        if (r.y_min > 0.0 || r.y_max < 0.0) {
            const SmoothCost pc = cost_percent_change();
            const ClassBounds closed = derive_class_bounds(pc, r);
            const ClassBounds grid = grid_bounds(pc, r);
            CHECK(closed.sup_norm >= grid.sup_norm - 1e-9);
            CHECK(closed.lipschitz >= grid.lipschitz - 1e-9);
        }
    }
}

TEST_CASE("percent change needs a zero-free rectangle") {
    CHECK_THROWS_AS(derive_class_bounds(cost_percent_change(), Rectangle{-1.0, 1.0}),
                    ConfigError);
    CHECK_THROWS_AS(derive_class_bounds(cost_percent_change(), Rectangle{0.0, 1.0}),
                    ConfigError);
    CHECK_NOTHROW(derive_class_bounds(cost_percent_change(), Rectangle{0.5, 2.0}));
}

TEST_CASE("custom costs require declared constants") {
    SmoothCost c;
    c.name = "custom";
    c.c = [](double, double) { return 0.0; };
    CHECK_THROWS_AS(derive_class_bounds(c, Rectangle{0.0, 1.0}), ConfigError);
    c.declared = ClassBounds{3.0, 7.0};
    const ClassBounds b = derive_class_bounds(c, Rectangle{0.0, 1.0});
    CHECK(b.lipschitz == 3.0);
    CHECK(b.sup_norm == 7.0);
}

TEST_CASE("negate_cost flips values and the cross sign, keeps class bounds") {
    const SmoothCost c = cost_product();
    const SmoothCost n = negate_cost(c);
    CHECK(n.c(2.0, 3.0) == doctest::Approx(-6.0));
    CHECK(n.cross_sign == -c.cross_sign);
    const Rectangle r{-1.0, 2.0};
    const ClassBounds a = derive_class_bounds(c, r);
    const ClassBounds b = derive_class_bounds(n, r);
    CHECK(a.lipschitz == b.lipschitz);
    CHECK(a.sup_norm == b.sup_norm);
    const auto g = n.grad(2.0, 3.0);
    CHECK(g[0] == doctest::Approx(-3.0));
    CHECK(g[1] == doctest::Approx(-2.0));
}

TEST_CASE("indicator cost inequalities") {
    const IndicatorCost strict_lo{0.0, IndicatorFamily::lower, false};
    const IndicatorCost weak_lo{0.0, IndicatorFamily::lower, true};
    const IndicatorCost strict_hi{0.0, IndicatorFamily::upper, false};
    const IndicatorCost weak_hi{0.0, IndicatorFamily::upper, true};
    CHECK(strict_lo(1.0, 1.0) == 0.0);
    CHECK(weak_lo(1.0, 1.0) == 1.0);
    CHECK(strict_lo(0.0, 1.0) == 1.0);
    CHECK(strict_hi(1.0, 1.0) == 0.0);
    CHECK(weak_hi(1.0, 1.0) == 1.0);
    CHECK(strict_hi(2.0, 1.0) == 1.0);
}
