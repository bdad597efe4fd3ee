#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "otb/cost.hpp"
#include "otb/measure.hpp"
#include "otb/parameters.hpp"
#include "otb/sample.hpp"

namespace otb {

struct CellBounds {
    double lo = 0.0;
    double hi = 0.0;
};

/// Per-cell [theta_x^L, theta_x^H]. Dispatch: smooth costs solve the dual
/// (transportation route when both measures are strictly positive, restricted
/// LP otherwise, with -c for the upper bound); indicator costs use the
/// Makarov scan for proper marginals and the interval sweep for signed ones.
/// The upper bound always pairs the parameter's cost with the strict
/// opposite-family indicator (e.g. 1{d <= delta} with 1{d > delta}).
CellBounds theta_bounds_cell(const SignedMeasure& mu1, const SignedMeasure& mu0,
                             const CostSpec& cost, const Rectangle& rect);

/// Share-weighted aggregate; with a subset A the shares renormalize over A.
CellBounds aggregate_theta(const ComplierShares& shares, const std::vector<CellBounds>& cells,
                           const std::vector<int>* subset = nullptr);

struct GammaBounds {
    double lo = 0.0, hi = 0.0;
    double t_lo = 0.0, t_hi = 0.0;  // arg min / arg max over [thetaL, thetaH]
};

/// gamma^L = inf, gamma^H = sup of g(t, eta) over t in [thetaL, thetaH].
/// Monotone parameters evaluate the endpoints; otherwise a 1001-point grid
/// with local refinement to 1e-10 in t.
GammaBounds gamma_bounds(double theta_lo, double theta_hi, std::span<const double> eta,
                         const ParameterSpec& p);

struct EnvelopeGrads {
    std::vector<double> gL, gH;  // each (d/dthetaL, d/dthetaH, d/deta), length 2+K
};

/// Envelope-theorem gradients of the realized maps g^L/g^H at the recorded
/// optimizers; endpoint attainment tested at 1e-9 * (1 + width).
EnvelopeGrads grad_envelope(double theta_lo, double theta_hi, std::span<const double> eta,
                            const ParameterSpec& p, double t_lo, double t_hi);

struct CurvePoint {
    double delta = 0.0;
    double lo = 0.0, hi = 0.0;
};

/// Aggregated theta^L(delta), theta^H(delta) with the strict lower cost
/// 1{y1 - y0 < delta} (upper from the strict 1{y1 - y0 > delta}).
std::vector<CurvePoint> cdf_bound_curve(const std::vector<SignedMeasure>& m1,
                                        const std::vector<SignedMeasure>& m0,
                                        const ComplierShares& shares,
                                        const std::vector<double>& grid);

/// Connected components of {q in grid : thetaL(q) <= tau <= thetaH(q)},
/// as closed [q_lo, q_hi] intervals of grid points.
std::vector<std::pair<double, double>> quantile_identified_set(
    const std::vector<CurvePoint>& curve, double tau);

/// Pairwise outcome differences y_i - y_j over the pooled sample, plus
/// midpoints of adjacent values, uniformly thinned to at most `cap` points.
std::vector<double> default_delta_grid(const Sample& s, int cap = 5000);

}  // namespace otb
