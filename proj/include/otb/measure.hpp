#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "otb/sample.hpp"

namespace otb {

/// Finitely supported measure on outcome values with strictly increasing
/// support. Weights sum to one by construction but may be negative when the
/// sample exhibits noncompliance.
struct SignedMeasure {
    std::vector<double> support;  // strictly increasing
    std::vector<double> weights;  // aligned to support

    /// Collapse duplicate outcome values (summing weights), drop exact-zero
    /// weights, and sort. Input order is irrelevant.
    static SignedMeasure from_points(std::vector<std::pair<double, double>> points);

    int size() const { return static_cast<int>(support.size()); }
    double total() const;
    bool proper(double tol = 1e-12) const;  // all weights >= -tol

    double apply(const std::function<double(double)>& f) const;

    // Mass of half-lines; naming follows the usual CDF conventions.
    double cdf(double y) const;          // mass of (-inf, y]
    double cdf_strict(double y) const;   // mass of (-inf, y)
    double tail(double y) const;         // mass of [y, inf)
    double tail_strict(double y) const;  // mass of (y, inf)

    double min_support() const { return support.front(); }
    double max_support() const { return support.back(); }
};

/// Difference m1 - m0 as a signed measure (used for bootstrap increments).
SignedMeasure measure_difference(const SignedMeasure& m1, const SignedMeasure& m0);

struct ComplierShares {
    std::vector<double> s;  // per cell, sums to one
};

/// s_x-hat = FS_x * p_x / sum_x' FS_x' * p_x' where FS is the first stage.
ComplierShares complier_share(const CellProbs& cp);

/// The weighted point-mass representation of P-hat_{d|x}. Observations with
/// zero weight are dropped and duplicate outcomes collapsed, so the solver
/// sees one variable per distinct value. Bootstrap weights w reweight both
/// the numerator indicators and the starred cell frequencies in cp (the
/// caller passes cp = cell_probabilities(s, w)).
SignedMeasure complier_measure(const Sample& s, const CellProbs& cp, int d, int x,
                               std::span<const double> w = {});

using EtaFn = std::function<double(double)>;

/// Per-arm nuisance moment functions eta_1 (applied to P_{1|x}) and eta_0.
struct EtaFunctions {
    std::vector<EtaFn> eta1;
    std::vector<EtaFn> eta0;

    int k1() const { return static_cast<int>(eta1.size()); }
    int k0() const { return static_cast<int>(eta0.size()); }
    int k() const { return k1() + k0(); }
};

struct EtaHat {
    std::vector<double> eta;                         // stacked (eta_1, eta_0), length K
    std::vector<std::vector<double>> eta1_cell;      // [x][k1]
    std::vector<std::vector<double>> eta0_cell;      // [x][k0]
};

/// eta-hat_d^(k) = sum_x s_x-hat * P-hat_{d|x}(eta_d^(k)); per-cell components
/// retained for the derivative bootstrap.
EtaHat eta_hat(const std::vector<SignedMeasure>& m1_by_cell,
               const std::vector<SignedMeasure>& m0_by_cell, const ComplierShares& shares,
               const EtaFunctions& fns);

}  // namespace otb
