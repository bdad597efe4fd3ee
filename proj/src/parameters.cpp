#include "otb/parameters.hpp"

#include <cmath>

#include "otb/errors.hpp"

namespace otb {

namespace {

const EtaFn kIdent = [](double y) { return y; };
const EtaFn kSquare = [](double y) { return y * y; };

}  // namespace

SmoothCost smooth_cost_by_name(const std::string& name) {
    if (name == "product") return cost_product();
    if (name == "squared_difference") return cost_squared_diff();
    if (name == "te_times_y0") return cost_te_times_y0();
    if (name == "percent_change") return cost_percent_change();
    throw ConfigError("unknown smooth cost '" + name + "'");
}

std::vector<std::string> parameter_names() {
    return {"identity",  "variance_te", "correlation",           "cov_te_y0",
            "ols_slope", "cdf_at_delta", "proportion_benefiting", "expected_percent_change"};
}

ParameterSpec make_parameter(const std::string& name, const ParameterOptions& opts) {
    ParameterSpec p;
    p.name = name;

    if (name == "identity") {
        if (!opts.cost) throw ConfigError("parameter 'identity' requires a smooth cost name");
        p.cost = smooth_cost_by_name(*opts.cost);
        p.g = [](double t, std::span<const double>) { return t; };
        p.grad_g = [](double, std::span<const double>) { return std::vector<double>{1.0}; };
        p.monotone = Monotonicity::increasing;
        return p;
    }
    if (name == "expected_percent_change") {
        p.cost = cost_percent_change();
        p.g = [](double t, std::span<const double>) { return t; };
        p.grad_g = [](double, std::span<const double>) { return std::vector<double>{1.0}; };
        p.monotone = Monotonicity::increasing;
        return p;
    }
    if (name == "variance_te") {
        p.cost = cost_squared_diff();
        p.eta.eta1 = {kIdent};
        p.eta.eta0 = {kIdent};
        p.g = [](double t, std::span<const double> e) {
            const double d = e[0] - e[1];
            return t - d * d;
        };
        p.grad_g = [](double, std::span<const double> e) {
            const double d = e[0] - e[1];
            return std::vector<double>{1.0, -2.0 * d, 2.0 * d};
        };
        p.monotone = Monotonicity::increasing;
        return p;
    }
    if (name == "correlation") {
        p.cost = cost_product();
        p.eta.eta1 = {kIdent, kSquare};
        p.eta.eta0 = {kIdent, kSquare};
        // eta = (E[Y1], E[Y1^2], E[Y0], E[Y0^2])
        p.g = [](double t, std::span<const double> e) {
            const double s1 = std::sqrt(e[1] - e[0] * e[0]);
            const double s0 = std::sqrt(e[3] - e[2] * e[2]);
            return (t - e[0] * e[2]) / (s1 * s0);
        };
        p.grad_g = [](double t, std::span<const double> e) {
            const double v1 = e[1] - e[0] * e[0], v0 = e[3] - e[2] * e[2];
            const double s1 = std::sqrt(v1), s0 = std::sqrt(v0);
            const double num = t - e[0] * e[2];
            return std::vector<double>{
                1.0 / (s1 * s0),
                -e[2] / (s1 * s0) + num * e[0] / (v1 * s1 * s0),
                -num / (2.0 * v1 * s1 * s0),
                -e[0] / (s1 * s0) + num * e[2] / (s1 * v0 * s0),
                -num / (2.0 * s1 * v0 * s0),
            };
        };
        p.monotone = Monotonicity::increasing;
        return p;
    }
    if (name == "cov_te_y0") {
        p.cost = cost_te_times_y0();
        p.eta.eta1 = {kIdent};
        p.eta.eta0 = {kIdent};
        p.g = [](double t, std::span<const double> e) { return t - (e[0] - e[1]) * e[1]; };
        p.grad_g = [](double, std::span<const double> e) {
            return std::vector<double>{1.0, -e[1], -e[0] + 2.0 * e[1]};
        };
        p.monotone = Monotonicity::increasing;
        return p;
    }
    if (name == "ols_slope") {
        p.cost = cost_te_times_y0();
        p.eta.eta1 = {kIdent};
        p.eta.eta0 = {kIdent, kSquare};
        // eta = (E[Y1], E[Y0], E[Y0^2])
        p.g = [](double t, std::span<const double> e) {
            return (t - (e[0] - e[1]) * e[1]) / (e[2] - e[1] * e[1]);
        };
        p.grad_g = [](double t, std::span<const double> e) {
            const double den = e[2] - e[1] * e[1];
            const double num = t - (e[0] - e[1]) * e[1];
            return std::vector<double>{
                1.0 / den,
                -e[1] / den,
                (2.0 * e[1] - e[0]) / den + 2.0 * e[1] * num / (den * den),
                -num / (den * den),
            };
        };
        p.monotone = Monotonicity::increasing;
        return p;
    }
    if (name == "cdf_at_delta") {
        if (!opts.delta) throw ConfigError("parameter 'cdf_at_delta' requires delta");
        p.cost = IndicatorCost{*opts.delta, IndicatorFamily::lower, /*weak=*/true};
        p.g = [](double t, std::span<const double>) { return t; };
        p.grad_g = [](double, std::span<const double>) { return std::vector<double>{1.0}; };
        p.monotone = Monotonicity::increasing;
        return p;
    }
    if (name == "proportion_benefiting") {
        // P(Y1 > Y0) = 1 - theta with theta = P(Y1 - Y0 <= 0)
        p.cost = IndicatorCost{0.0, IndicatorFamily::lower, /*weak=*/true};
        p.g = [](double t, std::span<const double>) { return 1.0 - t; };
        p.grad_g = [](double, std::span<const double>) { return std::vector<double>{-1.0}; };
        p.monotone = Monotonicity::decreasing;
        return p;
    }
    throw ConfigError("unknown parameter '" + name + "'");
}

}  // namespace otb
