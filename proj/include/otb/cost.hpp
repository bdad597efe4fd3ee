#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace otb {

/// Working square [y_min, y_max]^2 on which dual-class constants are derived;
/// defaults to the observed outcome range, optionally user-widened.
struct Rectangle {
    double y_min = 0.0;
    double y_max = 0.0;

    double span() const { return y_max - y_min; }
};

struct ClassBounds {
    double lipschitz = 0.0;
    double sup_norm = 0.0;
};

/// Lipschitz cost c(y1, y0). Built-ins carry a closed-form class_bounds map;
/// custom costs must declare (L, ||c||_inf) themselves.
struct SmoothCost {
    std::string name;
    std::function<double(double, double)> c;  // c(y1, y0)
    // gradient (dc/dy1, dc/dy0); null for custom costs without one
    std::function<std::array<double, 2>(double, double)> grad;
    std::function<ClassBounds(const Rectangle&)> class_bounds;  // closed form (built-ins)
    std::optional<ClassBounds> declared;                        // user override
    // sign of d2c/dy1dy0 when constant over the rectangle, else 0; a negative
    // (submodular) cost is minimized by the comonotone coupling, a positive
    // one by the antitone coupling, which seeds the transport solver's basis
    int cross_sign = 0;
};

enum class IndicatorFamily {
    lower,  // c_L = 1{y1 - y0 < delta}   (<= when weak)
    upper,  // c_H = 1{y1 - y0 > delta}   (>= when weak)
};

/// Threshold cost for the CDF family. `weak` switches the inequality from
/// strict to non-strict; a parameter theta = P(Y1 - Y0 <= delta) pairs a weak
/// lower cost with a strict upper cost, and P(Y1 - Y0 < delta) the reverse.
struct IndicatorCost {
    double delta = 0.0;
    IndicatorFamily family = IndicatorFamily::lower;
    bool weak = false;

    /// c(y1, y0) as 0/1.
    double operator()(double y1, double y0) const {
        const double d = y1 - y0;
        if (family == IndicatorFamily::lower) return (weak ? d <= delta : d < delta) ? 1.0 : 0.0;
        return (weak ? d >= delta : d > delta) ? 1.0 : 0.0;
    }
};

using CostSpec = std::variant<SmoothCost, IndicatorCost>;

/// The cost whose transport value yields the opposite bound: the strict
/// indicator of the opposite family (1{d > delta} against 1{d < delta} or
/// 1{d <= delta}). theta^H = 1 - OT(opposing_cost(c)) for a lower-family
/// parameter; note the opposite of a weak cost is its set complement.
inline IndicatorCost opposing_cost(const IndicatorCost& c) {
    return IndicatorCost{c.delta,
                         c.family == IndicatorFamily::lower ? IndicatorFamily::upper
                                                            : IndicatorFamily::lower,
                         /*weak=*/false};
}

/// Resolve (L, ||c||_inf) on the rectangle: closed form for built-ins,
/// declared values for custom costs. Errors when neither is available.
ClassBounds derive_class_bounds(const SmoothCost& cost, const Rectangle& rect);

// Built-in smooth costs.
SmoothCost cost_product();       // y1 * y0
SmoothCost cost_squared_diff();  // (y1 - y0)^2
SmoothCost cost_te_times_y0();   // (y1 - y0) * y0
SmoothCost cost_percent_change();  // (y1 - y0) / y0; rectangle must exclude 0

/// c -> -c with the same class constants (used for upper bounds).
SmoothCost negate_cost(const SmoothCost& cost);

}  // namespace otb
