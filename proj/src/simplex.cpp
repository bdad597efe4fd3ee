#include "otb/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "otb/errors.hpp"

namespace otb {

namespace {

constexpr double kPivotTol = 1e-11;

// Tableau with columns [original | artificial] kept in reduced form
// (rows = B^{-1}[A | I], rhs = B^{-1}b). The artificial block doubles as
// B^{-1}, which yields the duals at the end.
struct Tableau {
    int m, n;                    // rows, original columns
    std::vector<double> t;       // m x (n + m)
    std::vector<double> rhs;     // m
    std::vector<int> basis;      // m, column index of the basic variable per row

    double& at(int i, int j) { return t[static_cast<std::size_t>(i) * (n + m) + j]; }
    double at(int i, int j) const { return t[static_cast<std::size_t>(i) * (n + m) + j]; }
    int width() const { return n + m; }

    void pivot(int pr, int pc) {
        const double piv = at(pr, pc);
        const double inv = 1.0 / piv;
        for (int j = 0; j < width(); ++j) at(pr, j) *= inv;
        rhs[pr] *= inv;
        at(pr, pc) = 1.0;
        for (int i = 0; i < m; ++i) {
            if (i == pr) continue;
            const double f = at(i, pc);
            if (f == 0.0) continue;
            for (int j = 0; j < width(); ++j) at(i, j) -= f * at(pr, j);
            at(i, pc) = 0.0;
            rhs[i] -= f * rhs[pr];
            if (rhs[i] < 0.0 && rhs[i] > -1e-13) rhs[i] = 0.0;
        }
    }
};

// One simplex phase: minimize cost over the current basis, entering columns
// restricted to [0, limit). Returns iterations used; throws on unboundedness.
int run_phase(Tableau& tb, const std::vector<double>& cost, int limit, int& total_iters) {
    const int max_dantzig = 20 * (tb.m + limit) + 200;
    const int max_total = 2000 * (tb.m + limit) + 20000;
    int iters = 0;
    std::vector<double> cb(tb.m);
    for (;;) {
        for (int i = 0; i < tb.m; ++i) cb[i] = cost[tb.basis[i]];

        // price: reduced cost z_j = c_j - cb' * column_j
        int enter = -1;
        double best = -1e-9;
        const bool bland = iters > max_dantzig;
        for (int j = 0; j < limit; ++j) {
            double z = cost[j];
            for (int i = 0; i < tb.m; ++i) {
                const double a = tb.at(i, j);
                if (a != 0.0) z -= cb[i] * a;
            }
            if (bland) {
                if (z < -1e-9) {
                    enter = j;
                    break;
                }
            } else if (z < best) {
                best = z;
                enter = j;
            }
        }
        if (enter < 0) return iters;

        // ratio test; ties broken by smallest basis index (Bland-compatible)
        int leave = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (int i = 0; i < tb.m; ++i) {
            const double a = tb.at(i, enter);
            if (a <= kPivotTol) continue;
            const double r = tb.rhs[i] / a;
            if (r < best_ratio - 1e-12 ||
                (r < best_ratio + 1e-12 && (leave < 0 || tb.basis[i] < tb.basis[leave])))
            {
                best_ratio = r;
                leave = i;
            }
        }
        if (leave < 0) throw SolverError("simplex: problem is unbounded");

        tb.pivot(leave, enter);
        tb.basis[leave] = enter;
        ++iters;
        ++total_iters;
        if (total_iters > max_total)
            throw SolverError("simplex: iteration limit exceeded");
    }
}

}  // namespace

LpSolution solve_lp(const LpProblem& lp, double feas_tol) {
    const int m = lp.m, n = lp.n;
    Tableau tb;
    tb.m = m;
    tb.n = n;
    tb.t.assign(static_cast<std::size_t>(m) * (n + m), 0.0);
    tb.rhs.resize(m);
    tb.basis.resize(m);

    for (int i = 0; i < m; ++i) {
        const double sign = lp.b[i] < 0.0 ? -1.0 : 1.0;
        for (int j = 0; j < n; ++j) tb.at(i, j) = sign * lp.A[static_cast<std::size_t>(i) * n + j];
        tb.rhs[i] = sign * lp.b[i];
        tb.at(i, n + i) = 1.0;  // artificial; note B^{-1} picks up the row sign
        tb.basis[i] = n + i;
    }
    std::vector<double> row_sign(m);
    for (int i = 0; i < m; ++i) row_sign[i] = lp.b[i] < 0.0 ? -1.0 : 1.0;

    int total_iters = 0;

    // phase 1: minimize the artificial mass
    std::vector<double> c1(n + m, 0.0);
    for (int i = 0; i < m; ++i) c1[n + i] = 1.0;
    run_phase(tb, c1, n, total_iters);
    double art_mass = 0.0;
    for (int i = 0; i < m; ++i)
        if (tb.basis[i] >= n) art_mass += tb.rhs[i];
    if (art_mass > feas_tol) throw SolverError("simplex: problem is infeasible");

    // pivot remaining (zero-valued) artificials out where possible
    for (int i = 0; i < m; ++i) {
        if (tb.basis[i] < n) continue;
        int pc = -1;
        for (int j = 0; j < n; ++j)
            if (std::abs(tb.at(i, j)) > 1e-9) {
                pc = j;
                break;
            }
        if (pc >= 0) {
            tb.pivot(i, pc);
            tb.basis[i] = pc;
        }
        // else: redundant row; the artificial stays basic at zero
    }

    // phase 2
    std::vector<double> c2(n + m, 0.0);
    std::copy(lp.c.begin(), lp.c.end(), c2.begin());
    run_phase(tb, c2, n, total_iters);

    LpSolution sol;
    sol.iterations = total_iters;
    sol.x.assign(n, 0.0);
    for (int i = 0; i < m; ++i)
        if (tb.basis[i] < n) sol.x[tb.basis[i]] = tb.rhs[i];

    sol.objective = 0.0;
    for (int j = 0; j < n; ++j) sol.objective += lp.c[j] * sol.x[j];

    // duals: artificial column i holds B^{-1} e_i (up to the row sign flip),
    // so y_i = cb' B^{-1} e_i
    sol.y.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
        double yi = 0.0;
        for (int k = 0; k < m; ++k)
            if (tb.basis[k] < n) yi += lp.c[tb.basis[k]] * tb.at(k, n + i);
        sol.y[i] = yi * row_sign[i];
    }

    sol.max_residual = 0.0;
    for (int i = 0; i < m; ++i) {
        double r = -lp.b[i];
        for (int j = 0; j < n; ++j) r += lp.A[static_cast<std::size_t>(i) * n + j] * sol.x[j];
        sol.max_residual = std::max(sol.max_residual, std::abs(r));
    }
    return sol;
}

}  // namespace otb
