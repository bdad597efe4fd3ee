#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "otb/cost.hpp"
#include "otb/measure.hpp"

namespace otb {

enum class Monotonicity { increasing, decreasing, unknown };

/// A target parameter gamma = g(theta, eta): the cost defining theta, the
/// nuisance moment functions, g with its gradient (d/dtheta, d/deta), and the
/// monotonicity of g in theta when known.
struct ParameterSpec {
    std::string name;
    CostSpec cost;
    EtaFunctions eta;
    std::function<double(double, std::span<const double>)> g;
    std::function<std::vector<double>(double, std::span<const double>)> grad_g;  // 1 + K
    Monotonicity monotone = Monotonicity::unknown;
};

struct ParameterOptions {
    std::optional<double> delta;       // threshold for the CDF family
    std::optional<std::string> cost;   // smooth cost name for "identity"
};

/// Look up a built-in parameter. Registered names:
///   identity                theta itself under a named smooth cost
///   variance_te             Var(Y1 - Y0)
///   correlation             Corr(Y1, Y0)
///   cov_te_y0               Cov(Y1 - Y0, Y0)
///   ols_slope               Cov(Y1 - Y0, Y0) / Var(Y0)
///   cdf_at_delta            P(Y1 - Y0 <= delta)
///   proportion_benefiting   P(Y1 > Y0)
///   expected_percent_change E[(Y1 - Y0) / Y0]
ParameterSpec make_parameter(const std::string& name, const ParameterOptions& opts = {});

std::vector<std::string> parameter_names();

/// Named built-in smooth cost ("product", "squared_difference", "te_times_y0",
/// "percent_change"); throws ConfigError on unknown names.
SmoothCost smooth_cost_by_name(const std::string& name);

}  // namespace otb
