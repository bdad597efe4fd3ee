#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "otb/cost.hpp"
#include "otb/measure.hpp"

namespace otb {

struct DualSolution {
    std::vector<double> phi;  // on mu1.support
    std::vector<double> psi;  // on mu0.support
    double objective = 0.0;
    double max_violation = 0.0;  // largest feasibility residual at the returned pair
    int iterations = 0;
};

/// Interval-indicator dual pair (phi, psi) = (1_I, -1_{J complement}),
/// stored as index ranges into the two supports (empty when lo > hi).
struct IntervalPair {
    int i_lo = 0, i_hi = -1;
    int j_lo = 0, j_hi = -1;

    bool i_empty() const { return i_lo > i_hi; }
    bool j_empty() const { return j_lo > j_hi; }
};

/// Restricted dual for a Lipschitz cost: maximize mu1(phi) + mu0(psi) over
/// phi_i + psi_j <= c(y_i, y_j), and when `restricted`, the class constraints
/// |phi| <= ||c||, -2||c|| <= psi <= 0, adjacent-pair Lipschitz bounds.
/// Unrestricted solves require proper marginals (the problem is unbounded for
/// signed ones) and route through the transportation solver.
DualSolution solve_dual_smooth(const SignedMeasure& mu1, const SignedMeasure& mu0,
                               const SmoothCost& cost, const Rectangle& rect, bool restricted);

/// Exact maximum of mu1(1_I) + mu0(-1_{J^c}) over feasible interval pairs
/// with endpoints at support values or +-infinity. Interval sweep; matches
/// solve_dual_indicator_enum exactly (same prefix-sum arithmetic).
DualSolution solve_dual_indicator(const SignedMeasure& mu1, const SignedMeasure& mu0,
                                  const IndicatorCost& cost, IntervalPair* best = nullptr);

/// O(m1^2 m0^2) enumeration over all interval pairs; the correctness oracle
/// for the sweep.
DualSolution solve_dual_indicator_enum(const SignedMeasure& mu1, const SignedMeasure& mu0,
                                       const IndicatorCost& cost, IntervalPair* best = nullptr);

/// Makarov CDF bounds for proper marginals: thetaL = OT(c_L) with
/// c_L = 1{y1 - y0 < delta} (<= when weak), thetaH = 1 - OT(c_H) with the
/// always-strict c_H = 1{y1 - y0 > delta}. The interval brackets both the
/// strict and the weak CDF of Y1 - Y0 at delta, sidestepping the atom
/// ambiguity. Closed-form scan over support points and their delta-shifts.
std::pair<double, double> makarov_closed_form(const SignedMeasure& mu1, const SignedMeasure& mu0,
                                              double delta, bool weak = false);

/// Exact primal transportation value min E_pi[c] over couplings of (p1, p0);
/// dense-simplex route, independent of the dual solvers. Test-scale only.
double primal_oracle(const SignedMeasure& p1, const SignedMeasure& p0,
                     const std::function<double(double, double)>& cost);

/// One member of the approximate-argmax set, with a canonical extension of
/// (phi, psi) off the solved supports: interval indicators for indicator
/// costs, piecewise-linear interpolation for smooth ones.
struct DualCandidate {
    std::vector<double> s1, phi;
    std::vector<double> s0, psi;
    double objective = 0.0;
    bool indicator = false;
    // real interval endpoints for the indicator case (+-inf encoded as such)
    double i_lo_y = 0.0, i_hi_y = -1.0;
    double j_lo_y = 0.0, j_hi_y = -1.0;
    bool i_is_empty = false, j_is_empty = false;

    double phi_at(double y) const;
    double psi_at(double y) const;
};

/// Dual pairs within `slack` of the optimum. Indicator costs: the exact
/// finite family from enumeration. Smooth costs: the optimal vertex plus
/// vertices reached under deterministic objective perturbations (a documented
/// vertex subsample of the near-optimal face).
std::vector<DualCandidate> approx_argmax_set(const SignedMeasure& mu1, const SignedMeasure& mu0,
                                             const CostSpec& cost, const Rectangle& rect,
                                             double slack);

/// Linear interpolation on a sorted grid, clamped to the end values.
double eval_piecewise_linear(const std::vector<double>& grid, const std::vector<double>& values,
                             double y);

}  // namespace otb
