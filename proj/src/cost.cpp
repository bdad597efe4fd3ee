#include "otb/cost.hpp"

#include <algorithm>
#include <cmath>

#include "otb/errors.hpp"

namespace otb {

namespace {

double max_abs(const Rectangle& r) { return std::max(std::abs(r.y_min), std::abs(r.y_max)); }

}  // namespace

ClassBounds derive_class_bounds(const SmoothCost& cost, const Rectangle& rect) {
    if (!(rect.y_max >= rect.y_min) || !std::isfinite(rect.y_min) || !std::isfinite(rect.y_max))
        throw ConfigError("invalid working rectangle for cost '" + cost.name + "'");
    if (cost.class_bounds) return cost.class_bounds(rect);
    if (cost.declared) return *cost.declared;
    throw ConfigError("custom cost '" + cost.name +
                      "' requires declared Lipschitz and sup-norm constants");
}

SmoothCost cost_product() {
    SmoothCost c;
    c.name = "product";
    c.cross_sign = 1;
    c.c = [](double y1, double y0) { return y1 * y0; };
    c.grad = [](double y1, double y0) { return std::array<double, 2>{y0, y1}; };
    // |c| and ||grad|| = ||(y0, y1)|| are both maximal at the largest-magnitude corner
    c.class_bounds = [](const Rectangle& r) {
        const double m = max_abs(r);
        return ClassBounds{std::sqrt(2.0) * m, m * m};
    };
    return c;
}

SmoothCost cost_squared_diff() {
    SmoothCost c;
    c.name = "squared_difference";
    c.cross_sign = -1;
    c.c = [](double y1, double y0) {
        const double d = y1 - y0;
        return d * d;
    };
    c.grad = [](double y1, double y0) {
        const double d = y1 - y0;
        return std::array<double, 2>{2.0 * d, -2.0 * d};
    };
    // gradient norm 2*sqrt(2)*|y1-y0| peaks at |y1-y0| = span
    c.class_bounds = [](const Rectangle& r) {
        const double s = r.span();
        return ClassBounds{2.0 * std::sqrt(2.0) * s, s * s};
    };
    return c;
}

SmoothCost cost_te_times_y0() {
    SmoothCost c;
    c.name = "te_times_y0";
    c.cross_sign = 1;
    c.c = [](double y1, double y0) { return (y1 - y0) * y0; };
    c.grad = [](double y1, double y0) { return std::array<double, 2>{y0, y1 - 2.0 * y0}; };
    c.class_bounds = [](const Rectangle& r) {
        // ||grad||^2 = y0^2 + (y1-2y0)^2 is convex, so corners suffice for L;
        // |c| additionally peaks on the edge critical line y0 = y1/2.
        const double corners[2] = {r.y_min, r.y_max};
        double lip = 0.0, sup = 0.0;
        for (double y1 : corners)
            for (double y0 : corners) {
                lip = std::max(lip, std::hypot(y0, y1 - 2.0 * y0));
                sup = std::max(sup, std::abs((y1 - y0) * y0));
            }
        for (double y1 : corners) {
            const double y0 = y1 / 2.0;
            if (y0 >= r.y_min && y0 <= r.y_max)
                sup = std::max(sup, std::abs((y1 - y0) * y0));
        }
        return ClassBounds{lip, sup};
    };
    return c;
}

SmoothCost cost_percent_change() {
    SmoothCost c;
    c.name = "percent_change";
    c.cross_sign = -1;
    c.c = [](double y1, double y0) { return (y1 - y0) / y0; };
    c.grad = [](double y1, double y0) {
        return std::array<double, 2>{1.0 / y0, -y1 / (y0 * y0)};
    };
    c.class_bounds = [](const Rectangle& r) {
        if (r.y_min <= 0.0 && r.y_max >= 0.0)
            throw ConfigError(
                "percent_change requires the outcome rectangle to exclude zero");
        // c and each gradient coordinate are monotone in y1 and in y0 on a
        // zero-free interval, so corners suffice.
        const double corners[2] = {r.y_min, r.y_max};
        double lip = 0.0, sup = 0.0;
        for (double y1 : corners)
            for (double y0 : corners) {
                lip = std::max(lip, std::hypot(1.0 / y0, y1 / (y0 * y0)));
                sup = std::max(sup, std::abs((y1 - y0) / y0));
            }
        return ClassBounds{lip, sup};
    };
    return c;
}

SmoothCost negate_cost(const SmoothCost& cost) {
    SmoothCost neg;
    neg.name = "neg_" + cost.name;
    neg.c = [f = cost.c](double y1, double y0) { return -f(y1, y0); };
    if (cost.grad)
        neg.grad = [g = cost.grad](double y1, double y0) {
            auto v = g(y1, y0);
            return std::array<double, 2>{-v[0], -v[1]};
        };
    if (cost.class_bounds) neg.class_bounds = cost.class_bounds;  // |-c| = |c|, same L
    neg.declared = cost.declared;
    neg.cross_sign = -cost.cross_sign;
    return neg;
}

}  // namespace otb
