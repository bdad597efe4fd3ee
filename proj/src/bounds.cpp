#include "otb/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "otb/dual.hpp"
#include "otb/errors.hpp"

namespace otb {

namespace {

CellBounds indicator_bounds(const SignedMeasure& mu1, const SignedMeasure& mu0,
                            const IndicatorCost& cost) {
    const bool strictly_positive =
        std::all_of(mu1.weights.begin(), mu1.weights.end(), [](double w) { return w > 0.0; }) &&
        std::all_of(mu0.weights.begin(), mu0.weights.end(), [](double w) { return w > 0.0; });

    if (strictly_positive && cost.family == IndicatorFamily::lower) {
        const auto [lo, hi] = makarov_closed_form(mu1, mu0, cost.delta, cost.weak);
        return {lo, hi};
    }
    const double lo = solve_dual_indicator(mu1, mu0, cost).objective;
    const double hi = 1.0 - solve_dual_indicator(mu1, mu0, opposing_cost(cost)).objective;
    return {lo, hi};
}

}  // namespace

CellBounds theta_bounds_cell(const SignedMeasure& mu1, const SignedMeasure& mu0,
                             const CostSpec& cost, const Rectangle& rect) {
    if (const auto* ind = std::get_if<IndicatorCost>(&cost))
        return indicator_bounds(mu1, mu0, *ind);

    const auto& sm = std::get<SmoothCost>(cost);
    const bool strictly_positive =
        std::all_of(mu1.weights.begin(), mu1.weights.end(), [](double w) { return w > 0.0; }) &&
        std::all_of(mu0.weights.begin(), mu0.weights.end(), [](double w) { return w > 0.0; });
    const bool restricted = !strictly_positive;
    const double lo = solve_dual_smooth(mu1, mu0, sm, rect, restricted).objective;
    const double hi = -solve_dual_smooth(mu1, mu0, negate_cost(sm), rect, restricted).objective;
    return {lo, hi};
}

CellBounds aggregate_theta(const ComplierShares& shares, const std::vector<CellBounds>& cells,
                           const std::vector<int>* subset) {
    if (shares.s.size() != cells.size())
        throw ConfigError("aggregate_theta: shares and cell bounds disagree on cell count");
    CellBounds out{0.0, 0.0};
    if (!subset) {
        for (std::size_t x = 0; x < cells.size(); ++x) {
            out.lo += shares.s[x] * cells[x].lo;
            out.hi += shares.s[x] * cells[x].hi;
        }
        return out;
    }
    if (subset->empty()) throw ConfigError("aggregate_theta: empty cell subset");
    double s_a = 0.0;
    for (int x : *subset) {
        if (x < 0 || x >= static_cast<int>(cells.size()))
            throw ConfigError("aggregate_theta: unknown cell in subset");
        s_a += shares.s[x];
        out.lo += shares.s[x] * cells[x].lo;
        out.hi += shares.s[x] * cells[x].hi;
    }
    out.lo /= s_a;
    out.hi /= s_a;
    return out;
}

GammaBounds gamma_bounds(double theta_lo, double theta_hi, std::span<const double> eta,
                         const ParameterSpec& p) {
    auto eval = [&](double t) {
        const double v = p.g(t, eta);
        if (!std::isfinite(v))
            throw EvaluationError("parameter '" + p.name + "' is not finite at theta = " +
                                  std::to_string(t));
        return v;
    };

    GammaBounds out;
    if (p.monotone == Monotonicity::increasing) {
        out = {eval(theta_lo), eval(theta_hi), theta_lo, theta_hi};
        return out;
    }
    if (p.monotone == Monotonicity::decreasing) {
        out = {eval(theta_hi), eval(theta_lo), theta_hi, theta_lo};
        return out;
    }

    // unknown monotonicity: dense grid, then zoom around each optimizer
    auto optimize = [&](bool maximize) {
        double a = theta_lo, b = theta_hi;
        double best_t = a, best_v = eval(a);
        const int coarse = 1001;
        while (true) {
            const int npts = (b - a) == (theta_hi - theta_lo) ? coarse : 101;
            int best_k = -1;
            for (int k = 0; k < npts; ++k) {
                const double t = npts == 1 ? a : a + (b - a) * k / (npts - 1);
                const double v = eval(t);
                if ((maximize ? v > best_v : v < best_v)) {
                    best_v = v;
                    best_t = t;
                    best_k = k;
                }
            }
            const double step = npts == 1 ? 0.0 : (b - a) / (npts - 1);
            if (step <= 1e-10) break;
            (void)best_k;
            a = std::max(theta_lo, best_t - step);
            b = std::min(theta_hi, best_t + step);
            if (b - a <= 1e-10) break;
        }
        return std::pair<double, double>{best_t, best_v};
    };
    const auto [t_lo, v_lo] = optimize(false);
    const auto [t_hi, v_hi] = optimize(true);
    out = {v_lo, v_hi, t_lo, t_hi};
    return out;
}

EnvelopeGrads grad_envelope(double theta_lo, double theta_hi, std::span<const double> eta,
                            const ParameterSpec& p, double t_lo, double t_hi) {
    const double tol = 1e-9 * (1.0 + std::abs(theta_hi - theta_lo));
    const int K = static_cast<int>(eta.size());
    EnvelopeGrads out;
    auto fill = [&](double t) {
        const std::vector<double> g = p.grad_g(t, eta);
        std::vector<double> row(2 + K, 0.0);
        // endpoint attainment; an interior optimizer zeroes both theta slots
        // via its first-order condition
        if (std::abs(t - theta_lo) <= tol) row[0] = g[0];
        if (std::abs(t - theta_hi) <= tol) row[1] = g[0];
        for (int k = 0; k < K; ++k) row[2 + k] = g[1 + k];
        return row;
    };
    out.gL = fill(t_lo);
    out.gH = fill(t_hi);
    return out;
}

std::vector<CurvePoint> cdf_bound_curve(const std::vector<SignedMeasure>& m1,
                                        const std::vector<SignedMeasure>& m0,
                                        const ComplierShares& shares,
                                        const std::vector<double>& grid) {
    const Rectangle dummy{};
    std::vector<CurvePoint> out;
    out.reserve(grid.size());
    for (double delta : grid) {
        const IndicatorCost c{delta, IndicatorFamily::lower, /*weak=*/false};
        std::vector<CellBounds> cells(m1.size());
        for (std::size_t x = 0; x < m1.size(); ++x)
            cells[x] = theta_bounds_cell(m1[x], m0[x], c, dummy);
        const CellBounds agg = aggregate_theta(shares, cells);
        out.push_back({delta, agg.lo, agg.hi});
    }
    return out;
}

std::vector<std::pair<double, double>> quantile_identified_set(
    const std::vector<CurvePoint>& curve, double tau) {
    std::vector<std::pair<double, double>> components;
    bool open = false;
    for (const CurvePoint& pt : curve) {
        const bool in = pt.lo <= tau && tau <= pt.hi;
        if (in && !open) {
            components.emplace_back(pt.delta, pt.delta);
            open = true;
        } else if (in) {
            components.back().second = pt.delta;
        } else {
            open = false;
        }
    }
    return components;
}

std::vector<double> default_delta_grid(const Sample& s, int cap) {
    std::vector<double> ys;
    ys.reserve(s.n());
    for (const Observation& o : s.observations) ys.push_back(o.y);
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

    std::vector<double> diffs;
    diffs.reserve(ys.size() * ys.size());
    for (double a : ys)
        for (double b : ys) diffs.push_back(a - b);
    std::sort(diffs.begin(), diffs.end());
    diffs.erase(std::unique(diffs.begin(), diffs.end()), diffs.end());

    std::vector<double> grid;
    grid.reserve(2 * diffs.size());
    for (std::size_t k = 0; k < diffs.size(); ++k) {
        grid.push_back(diffs[k]);
        if (k + 1 < diffs.size()) grid.push_back(0.5 * (diffs[k] + diffs[k + 1]));
    }
    if (static_cast<int>(grid.size()) <= cap) return grid;
    std::vector<double> thin;
    thin.reserve(cap);
    const double stride = static_cast<double>(grid.size() - 1) / (cap - 1);
    for (int k = 0; k < cap; ++k) thin.push_back(grid[static_cast<std::size_t>(k * stride)]);
    thin.erase(std::unique(thin.begin(), thin.end()), thin.end());
    return thin;
}

}  // namespace otb
