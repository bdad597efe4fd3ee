#include "otb/dual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "otb/errors.hpp"
#include "otb/rng.hpp"
#include "otb/simplex.hpp"
#include "otb/transport.hpp"

namespace otb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> prefix_sums(const std::vector<double>& w) {
    std::vector<double> p(w.size() + 1, 0.0);
    for (std::size_t i = 0; i < w.size(); ++i) p[i + 1] = p[i] + w[i];
    return p;
}

// Shared candidate-value convention for the sweep and the enumeration: both
// must produce bit-identical floats, so every interval sum is a single
// prefix-array subtraction and every candidate is (sum1 + sum0) - total0.
double pair_value(double sum1, double sum0, double total0) { return (sum1 + sum0) - total0; }

struct IndicatorInstance {
    const std::vector<double>&s1, &s0;
    std::vector<double> p1, p0;  // prefix sums
    double total0;
    IndicatorFamily family;
    bool weak;
    double delta;

    IndicatorInstance(const SignedMeasure& mu1, const SignedMeasure& mu0,
                      const IndicatorCost& cost)
        : s1(mu1.support),
          s0(mu0.support),
          p1(prefix_sums(mu1.weights)),
          p0(prefix_sums(mu0.weights)),
          total0(p0.back()),
          family(cost.family),
          weak(cost.weak),
          delta(cost.delta) {}

    int m1() const { return static_cast<int>(s1.size()); }
    int m0() const { return static_cast<int>(s0.size()); }

    // feasibility of a nonempty/nonempty pair, by index
    bool feasible(int i_lo, int i_hi, int j_lo, int j_hi) const {
        if (family == IndicatorFamily::lower) {
            const double gap = s1[i_hi] - s0[j_lo];
            return weak ? gap <= delta : gap < delta;
        }
        const double gap = s1[i_lo] - s0[j_hi];
        return weak ? gap >= delta : gap > delta;
    }
};

struct SweepResult {
    double value;
    IntervalPair best;
};

SweepResult indicator_sweep(const IndicatorInstance& in) {
    const int m1 = in.m1(), m0 = in.m0();
    const auto& p1 = in.p1;
    const auto& p0 = in.p0;

    double best_v = pair_value(0.0, 0.0, in.total0);  // both empty
    IntervalPair best;  // default-constructed: both empty

    if (in.family == IndicatorFamily::lower) {
        // bestEnd1[i]: best interval of mu1 ending at i (right cap for I)
        std::vector<double> best_end1(m1);
        std::vector<int> arg_a1(m1);
        {
            double minp = p1[0];
            int arg = 0;
            for (int i = 0; i < m1; ++i) {
                best_end1[i] = p1[i + 1] - minp;
                arg_a1[i] = arg;
                if (p1[i + 1] < minp) {
                    minp = p1[i + 1];
                    arg = i + 1;
                }
            }
        }
        // bestStart0[j]: best interval of mu0 starting at j (left cap for J)
        std::vector<double> best_start0(m0);
        std::vector<int> arg_b0(m0);
        {
            double maxs = p0[m0];
            int arg = m0 - 1;
            for (int j = m0 - 1; j >= 0; --j) {
                if (p0[j + 1] > maxs) {
                    maxs = p0[j + 1];
                    arg = j;
                }
                best_start0[j] = maxs - p0[j];
                arg_b0[j] = arg;
            }
        }
        std::vector<double> suff_best(m0);
        std::vector<int> suff_arg(m0);
        for (int j = m0 - 1; j >= 0; --j) {
            suff_best[j] = best_start0[j];
            suff_arg[j] = j;
            if (j + 1 < m0 && suff_best[j + 1] > suff_best[j]) {
                suff_best[j] = suff_best[j + 1];
                suff_arg[j] = suff_arg[j + 1];
            }
        }

        for (int i = 0; i < m1; ++i) {  // J empty
            const double v = pair_value(best_end1[i], 0.0, in.total0);
            if (v > best_v) {
                best_v = v;
                best = IntervalPair{arg_a1[i], i, 0, -1};
            }
        }
        for (int j = 0; j < m0; ++j) {  // I empty
            const double v = pair_value(0.0, best_start0[j], in.total0);
            if (v > best_v) {
                best_v = v;
                best = IntervalPair{0, -1, j, arg_b0[j]};
            }
        }
        for (int i = 0; i < m1; ++i) {  // both nonempty: s0[j] above s1[i] - delta
            const double cap = in.s1[i] - in.delta;
            const auto it = in.weak ? std::lower_bound(in.s0.begin(), in.s0.end(), cap)
                                    : std::upper_bound(in.s0.begin(), in.s0.end(), cap);
            const int jmin = static_cast<int>(it - in.s0.begin());
            if (jmin >= m0) continue;
            const double v = pair_value(best_end1[i], suff_best[jmin], in.total0);
            if (v > best_v) {
                const int j = suff_arg[jmin];
                best_v = v;
                best = IntervalPair{arg_a1[i], i, j, arg_b0[j]};
            }
        }
    } else {
        // mirrored: I capped on the left, J on the right
        std::vector<double> best_start1(m1);
        std::vector<int> arg_b1(m1);
        {
            double maxs = p1[m1];
            int arg = m1 - 1;
            for (int i = m1 - 1; i >= 0; --i) {
                if (p1[i + 1] > maxs) {
                    maxs = p1[i + 1];
                    arg = i;
                }
                best_start1[i] = maxs - p1[i];
                arg_b1[i] = arg;
            }
        }
        std::vector<double> best_end0(m0);
        std::vector<int> arg_a0(m0);
        {
            double minp = p0[0];
            int arg = 0;
            for (int j = 0; j < m0; ++j) {
                best_end0[j] = p0[j + 1] - minp;
                arg_a0[j] = arg;
                if (p0[j + 1] < minp) {
                    minp = p0[j + 1];
                    arg = j + 1;
                }
            }
        }
        std::vector<double> pref_best(m0);
        std::vector<int> pref_arg(m0);
        for (int j = 0; j < m0; ++j) {
            pref_best[j] = best_end0[j];
            pref_arg[j] = j;
            if (j > 0 && pref_best[j - 1] > pref_best[j]) {
                pref_best[j] = pref_best[j - 1];
                pref_arg[j] = pref_arg[j - 1];
            }
        }

        for (int i = 0; i < m1; ++i) {  // J empty
            const double v = pair_value(best_start1[i], 0.0, in.total0);
            if (v > best_v) {
                best_v = v;
                best = IntervalPair{i, arg_b1[i], 0, -1};
            }
        }
        for (int j = 0; j < m0; ++j) {  // I empty
            const double v = pair_value(0.0, best_end0[j], in.total0);
            if (v > best_v) {
                best_v = v;
                best = IntervalPair{0, -1, arg_a0[j], j};
            }
        }
        for (int i = 0; i < m1; ++i) {  // both nonempty: s0[j] below s1[i] - delta
            const double cap = in.s1[i] - in.delta;
            const auto it = in.weak ? std::upper_bound(in.s0.begin(), in.s0.end(), cap)
                                    : std::lower_bound(in.s0.begin(), in.s0.end(), cap);
            const int jmax = static_cast<int>(it - in.s0.begin()) - 1;
            if (jmax < 0) continue;
            const double v = pair_value(best_start1[i], pref_best[jmax], in.total0);
            if (v > best_v) {
                const int j = pref_arg[jmax];
                best_v = v;
                best = IntervalPair{i, arg_b1[i], arg_a0[j], j};
            }
        }
    }
    return {best_v, best};
}

DualSolution solution_from_pair(const IndicatorInstance& in, const IntervalPair& pr,
                                double value) {
    DualSolution sol;
    sol.objective = value;
    sol.phi.assign(in.m1(), 0.0);
    sol.psi.assign(in.m0(), pr.j_empty() ? -1.0 : 0.0);
    for (int i = pr.i_lo; i <= pr.i_hi; ++i) sol.phi[i] = 1.0;
    if (!pr.j_empty())
        for (int j = 0; j < in.m0(); ++j)
            if (j < pr.j_lo || j > pr.j_hi) sol.psi[j] = -1.0;
    IndicatorCost c{in.delta, in.family, in.weak};
    for (int i = 0; i < in.m1(); ++i)
        for (int j = 0; j < in.m0(); ++j)
            sol.max_violation = std::max(
                sol.max_violation, sol.phi[i] + sol.psi[j] - c(in.s1[i], in.s0[j]));
    sol.max_violation = std::max(sol.max_violation, 0.0);
    return sol;
}

// Visit every interval pair: f(i_lo, i_hi, j_lo, j_hi, value), empties
// encoded as lo > hi. Shared by the enumeration oracle and the indicator
// approximate-argmax filter.
template <typename F>
void enumerate_pairs(const IndicatorInstance& in, F&& f) {
    const int m1 = in.m1(), m0 = in.m0();
    auto visit_j = [&](int a, int b, double sum1) {
        f(a, b, 0, -1, pair_value(sum1, 0.0, in.total0));  // J empty
        for (int c = 0; c < m0; ++c)
            for (int d = c; d < m0; ++d) {
                if (a <= b && !in.feasible(a, b, c, d)) continue;
                f(a, b, c, d, pair_value(sum1, in.p0[d + 1] - in.p0[c], in.total0));
            }
    };
    visit_j(0, -1, 0.0);  // I empty
    for (int a = 0; a < m1; ++a)
        for (int b = a; b < m1; ++b) visit_j(a, b, in.p1[b + 1] - in.p1[a]);
}

}  // namespace

DualSolution solve_dual_indicator(const SignedMeasure& mu1, const SignedMeasure& mu0,
                                  const IndicatorCost& cost, IntervalPair* best) {
    if (mu1.size() == 0 || mu0.size() == 0)
        throw SolverError("indicator dual: empty support");
    IndicatorInstance in(mu1, mu0, cost);
    const SweepResult r = indicator_sweep(in);
    if (best) *best = r.best;
    return solution_from_pair(in, r.best, r.value);
}

DualSolution solve_dual_indicator_enum(const SignedMeasure& mu1, const SignedMeasure& mu0,
                                       const IndicatorCost& cost, IntervalPair* best) {
    if (mu1.size() == 0 || mu0.size() == 0)
        throw SolverError("indicator dual: empty support");
    IndicatorInstance in(mu1, mu0, cost);
    double best_v = -kInf;
    IntervalPair best_pr;
    enumerate_pairs(in, [&](int a, int b, int c, int d, double v) {
        if (v > best_v) {
            best_v = v;
            best_pr = IntervalPair{a, b, c, d};
        }
    });
    if (best) *best = best_pr;
    return solution_from_pair(in, best_pr, best_v);
}

std::pair<double, double> makarov_closed_form(const SignedMeasure& mu1, const SignedMeasure& mu0,
                                              double delta, bool weak) {
    if (!mu1.proper() || !mu0.proper())
        throw ConfigError("makarov closed form requires proper marginals; "
                          "use the indicator dual for signed measures");

    std::vector<double> candidates;
    candidates.reserve(mu1.size() + mu0.size());
    for (double y : mu1.support) candidates.push_back(y);
    for (double y : mu0.support) candidates.push_back(y + delta);

    // lower cost value OT_{c_L}
    double ot_l = 0.0;
    for (double p : candidates) {
        const double v = weak ? mu1.cdf(p) - mu0.cdf_strict(p - delta)
                              : mu1.cdf(p) - mu0.cdf(p - delta);
        ot_l = std::max(ot_l, v);
    }
    const double lo_bdry = mu0.min_support() + delta;
    ot_l = std::max(ot_l, weak ? mu1.cdf(lo_bdry) : mu1.cdf_strict(lo_bdry));

    // upper cost value OT_{c_H} with the always-strict c_H = 1{y1-y0 > delta};
    // 1 - OT then bounds P(Y1-Y0 <= delta) from above, so the returned pair
    // brackets both the strict and weak CDF at delta
    double ot_h = 0.0;
    for (double q : candidates) ot_h = std::max(ot_h, mu1.tail(q) - mu0.tail(q - delta));
    const double hi_bdry = mu0.max_support() + delta;
    ot_h = std::max(ot_h, mu1.tail_strict(hi_bdry));

    return {ot_l, 1.0 - ot_h};
}

namespace {

DualSolution solve_smooth_restricted(const SignedMeasure& mu1, const SignedMeasure& mu0,
                                     const SmoothCost& cost, const Rectangle& rect,
                                     std::span<const double> objective_override) {
    const int m1 = mu1.size(), m0 = mu0.size();
    const int nv = m1 + m0;
    const ClassBounds cb = derive_class_bounds(cost, rect);
    const double A = cb.sup_norm, L = cb.lipschitz;

    // max-form constraints M v <= r over v = (phi, psi); the LP below is its
    // dual  min r'y  s.t.  M'y = w, y >= 0,  whose equality multipliers
    // recover the optimal (phi, psi).
    std::vector<std::pair<std::pair<int, double>, std::pair<int, double>>> terms;
    std::vector<double> rhs;
    auto add1 = [&](int k, double coef, double r) {
        terms.push_back({{k, coef}, {-1, 0.0}});
        rhs.push_back(r);
    };
    auto add2 = [&](int k1, double c1, int k2, double c2, double r) {
        terms.push_back({{k1, c1}, {k2, c2}});
        rhs.push_back(r);
    };

    for (int i = 0; i < m1; ++i)
        for (int j = 0; j < m0; ++j)
            add2(i, 1.0, m1 + j, 1.0, cost.c(mu1.support[i], mu0.support[j]));
    for (int i = 0; i + 1 < m1; ++i) {
        const double d = L * (mu1.support[i + 1] - mu1.support[i]);
        add2(i, 1.0, i + 1, -1.0, d);
        add2(i, -1.0, i + 1, 1.0, d);
    }
    for (int j = 0; j + 1 < m0; ++j) {
        const double d = L * (mu0.support[j + 1] - mu0.support[j]);
        add2(m1 + j, 1.0, m1 + j + 1, -1.0, d);
        add2(m1 + j, -1.0, m1 + j + 1, 1.0, d);
    }
    for (int i = 0; i < m1; ++i) {
        add1(i, 1.0, A);
        add1(i, -1.0, A);
    }
    for (int j = 0; j < m0; ++j) {
        add1(m1 + j, 1.0, 0.0);
        add1(m1 + j, -1.0, 2.0 * A);
    }

    LpProblem lp;
    lp.m = nv;
    lp.n = static_cast<int>(terms.size());
    lp.A.assign(static_cast<std::size_t>(lp.m) * lp.n, 0.0);
    lp.b.resize(nv);
    for (int i = 0; i < m1; ++i) lp.b[i] = mu1.weights[i];
    for (int j = 0; j < m0; ++j) lp.b[m1 + j] = mu0.weights[j];
    if (!objective_override.empty())
        std::copy(objective_override.begin(), objective_override.end(), lp.b.begin());
    lp.c = rhs;
    for (int col = 0; col < lp.n; ++col) {
        const auto& [t1, t2] = terms[col];
        lp.A[static_cast<std::size_t>(t1.first) * lp.n + col] = t1.second;
        if (t2.first >= 0) lp.A[static_cast<std::size_t>(t2.first) * lp.n + col] = t2.second;
    }

    LpSolution ls = solve_lp(lp);

    DualSolution sol;
    sol.iterations = ls.iterations;
    sol.phi.assign(ls.y.begin(), ls.y.begin() + m1);
    sol.psi.assign(ls.y.begin() + m1, ls.y.end());
    sol.objective = 0.0;
    for (int i = 0; i < m1; ++i) sol.objective += mu1.weights[i] * sol.phi[i];
    for (int j = 0; j < m0; ++j) sol.objective += mu0.weights[j] * sol.psi[j];
    if (objective_override.empty() && std::abs(sol.objective - ls.objective) > 1e-6)
        throw SolverError("restricted dual: duality gap in recovered potentials");
    sol.objective = objective_override.empty() ? ls.objective : sol.objective;

    for (int i = 0; i < m1; ++i)
        for (int j = 0; j < m0; ++j)
            sol.max_violation =
                std::max(sol.max_violation,
                         sol.phi[i] + sol.psi[j] - cost.c(mu1.support[i], mu0.support[j]));
    for (int i = 0; i < m1; ++i)
        sol.max_violation = std::max(sol.max_violation, std::abs(sol.phi[i]) - A);
    for (int j = 0; j < m0; ++j)
        sol.max_violation =
            std::max({sol.max_violation, sol.psi[j], -sol.psi[j] - 2.0 * A});
    sol.max_violation = std::max(sol.max_violation, 0.0);
    return sol;
}

}  // namespace

DualSolution solve_dual_smooth(const SignedMeasure& mu1, const SignedMeasure& mu0,
                               const SmoothCost& cost, const Rectangle& rect, bool restricted) {
    if (mu1.size() == 0 || mu0.size() == 0) throw SolverError("smooth dual: empty support");

    const bool strictly_positive =
        std::all_of(mu1.weights.begin(), mu1.weights.end(), [](double w) { return w > 0.0; }) &&
        std::all_of(mu0.weights.begin(), mu0.weights.end(), [](double w) { return w > 0.0; });

    if (!restricted) {
        if (!strictly_positive)
            throw ConfigError(
                "unrestricted smooth dual is unbounded for signed measures; use restricted=true");
        const CouplingHint hint = cost.cross_sign < 0   ? CouplingHint::comonotone
                                  : cost.cross_sign > 0 ? CouplingHint::antitone
                                                        : CouplingHint::none;
        TransportSolution ts = solve_transport(
            mu1.weights, mu0.weights,
            [&](int i, int j) { return cost.c(mu1.support[i], mu0.support[j]); }, hint);
        DualSolution sol;
        sol.phi = std::move(ts.u);
        sol.psi = std::move(ts.v);
        sol.objective = ts.objective;
        sol.max_violation = ts.max_violation;
        sol.iterations = ts.iterations;
        return sol;
    }
    return solve_smooth_restricted(mu1, mu0, cost, rect, {});
}

double primal_oracle(const SignedMeasure& p1, const SignedMeasure& p0,
                     const std::function<double(double, double)>& cost) {
    if (!p1.proper() || !p0.proper())
        throw ConfigError("primal transport is undefined for signed marginals");
    const int m1 = p1.size(), m0 = p0.size();

    LpProblem lp;
    lp.m = m1 + m0;
    lp.n = m1 * m0;
    lp.A.assign(static_cast<std::size_t>(lp.m) * lp.n, 0.0);
    lp.b.resize(lp.m);
    lp.c.resize(lp.n);
    for (int i = 0; i < m1; ++i) lp.b[i] = std::max(p1.weights[i], 0.0);
    for (int j = 0; j < m0; ++j) lp.b[m1 + j] = std::max(p0.weights[j], 0.0);
    for (int i = 0; i < m1; ++i)
        for (int j = 0; j < m0; ++j) {
            const int col = i * m0 + j;
            lp.c[col] = cost(p1.support[i], p0.support[j]);
            lp.A[static_cast<std::size_t>(i) * lp.n + col] = 1.0;
            lp.A[static_cast<std::size_t>(m1 + j) * lp.n + col] = 1.0;
        }
    return solve_lp(lp).objective;
}

double eval_piecewise_linear(const std::vector<double>& grid, const std::vector<double>& values,
                             double y) {
    if (y <= grid.front()) return values.front();
    if (y >= grid.back()) return values.back();
    const auto it = std::upper_bound(grid.begin(), grid.end(), y);
    const int k = static_cast<int>(it - grid.begin());
    const double t = (y - grid[k - 1]) / (grid[k] - grid[k - 1]);
    return values[k - 1] + t * (values[k] - values[k - 1]);
}

double DualCandidate::phi_at(double y) const {
    if (!indicator) return eval_piecewise_linear(s1, phi, y);
    if (i_is_empty) return 0.0;
    return (y >= i_lo_y && y <= i_hi_y) ? 1.0 : 0.0;
}

double DualCandidate::psi_at(double y) const {
    if (!indicator) return eval_piecewise_linear(s0, psi, y);
    if (j_is_empty) return -1.0;
    return (y >= j_lo_y && y <= j_hi_y) ? 0.0 : -1.0;
}

namespace {

// Canonical real-line intervals for an index-range pair: endpoints at support
// values, extended to +-infinity only past the support extremes and only in
// the direction the cost's feasibility allows.
DualCandidate make_indicator_candidate(const IndicatorInstance& in, const IntervalPair& pr,
                                       double value) {
    DualCandidate cand;
    cand.indicator = true;
    cand.objective = value;
    cand.s1 = in.s1;
    cand.s0 = in.s0;
    cand.i_is_empty = pr.i_empty();
    cand.j_is_empty = pr.j_empty();
    const int m1 = in.m1(), m0 = in.m0();
    if (!cand.i_is_empty) {
        if (in.family == IndicatorFamily::lower) {
            cand.i_lo_y = pr.i_lo == 0 ? -kInf : in.s1[pr.i_lo];
            cand.i_hi_y = in.s1[pr.i_hi];
        } else {
            cand.i_lo_y = in.s1[pr.i_lo];
            cand.i_hi_y = pr.i_hi == m1 - 1 ? kInf : in.s1[pr.i_hi];
        }
    }
    if (!cand.j_is_empty) {
        if (in.family == IndicatorFamily::lower) {
            cand.j_lo_y = in.s0[pr.j_lo];
            cand.j_hi_y = pr.j_hi == m0 - 1 ? kInf : in.s0[pr.j_hi];
        } else {
            cand.j_lo_y = pr.j_lo == 0 ? -kInf : in.s0[pr.j_lo];
            cand.j_hi_y = in.s0[pr.j_hi];
        }
    }
    cand.phi.assign(m1, 0.0);
    for (int i = pr.i_lo; i >= 0 && i <= pr.i_hi; ++i) cand.phi[i] = 1.0;
    cand.psi.assign(m0, cand.j_is_empty ? -1.0 : 0.0);
    if (!cand.j_is_empty)
        for (int j = 0; j < m0; ++j)
            if (j < pr.j_lo || j > pr.j_hi) cand.psi[j] = -1.0;
    return cand;
}

}  // namespace

std::vector<DualCandidate> approx_argmax_set(const SignedMeasure& mu1, const SignedMeasure& mu0,
                                             const CostSpec& cost, const Rectangle& rect,
                                             double slack) {
    std::vector<DualCandidate> out;

    if (const auto* ind = std::get_if<IndicatorCost>(&cost)) {
        IndicatorInstance in(mu1, mu0, *ind);
        double opt = -kInf;
        enumerate_pairs(in, [&](int, int, int, int, double v) { opt = std::max(opt, v); });
        enumerate_pairs(in, [&](int a, int b, int c, int d, double v) {
            if (v >= opt - slack)
                out.push_back(make_indicator_candidate(in, IntervalPair{a, b, c, d}, v));
        });
        return out;
    }

    const auto& sm = std::get<SmoothCost>(cost);
    DualSolution base = solve_smooth_restricted(mu1, mu0, sm, rect, {});
    auto push_unique = [&](const DualSolution& s, double objective) {
        if (objective < base.objective - slack - 1e-12) return;
        for (const auto& c : out) {
            double diff = 0.0;
            for (int i = 0; i < mu1.size(); ++i) diff = std::max(diff, std::abs(c.phi[i] - s.phi[i]));
            for (int j = 0; j < mu0.size(); ++j) diff = std::max(diff, std::abs(c.psi[j] - s.psi[j]));
            if (diff <= 1e-8) return;
        }
        DualCandidate cand;
        cand.indicator = false;
        cand.s1 = mu1.support;
        cand.s0 = mu0.support;
        cand.phi = s.phi;
        cand.psi = s.psi;
        cand.objective = objective;
        out.push_back(std::move(cand));
    };
    push_unique(base, base.objective);

    // deterministic objective perturbations pick out further vertices of the
    // near-optimal face (a vertex subsample, not the full face)
    const int kRounds = 16;
    const int nv = mu1.size() + mu0.size();
    std::vector<double> w(nv);
    for (int i = 0; i < mu1.size(); ++i) w[i] = mu1.weights[i];
    for (int j = 0; j < mu0.size(); ++j) w[mu1.size() + j] = mu0.weights[j];
    double scale = 0.0;
    for (double x : w) scale = std::max(scale, std::abs(x));
    for (int r = 0; r < kRounds; ++r) {
        Rng rng = Rng::stream(0x0bdadULL, static_cast<std::uint64_t>(r));
        std::vector<double> wp(w);
        for (double& x : wp) x += 1e-6 * scale * (2.0 * rng.next_double() - 1.0);
        DualSolution s = solve_smooth_restricted(mu1, mu0, sm, rect, wp);
        double objective = 0.0;
        for (int i = 0; i < mu1.size(); ++i) objective += mu1.weights[i] * s.phi[i];
        for (int j = 0; j < mu0.size(); ++j) objective += mu0.weights[j] * s.psi[j];
        push_unique(s, objective);
    }
    return out;
}

}  // namespace otb
