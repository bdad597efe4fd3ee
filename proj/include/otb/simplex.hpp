#pragma once

#include <vector>

namespace otb {

/// Dense standard-form linear program: min c'x subject to Ax = b, x >= 0.
struct LpProblem {
    int m = 0;              // rows
    int n = 0;              // columns
    std::vector<double> A;  // row-major, m*n
    std::vector<double> b;  // m
    std::vector<double> c;  // n
};

struct LpSolution {
    std::vector<double> x;  // n, primal optimum
    std::vector<double> y;  // m, equality multipliers (A'y <= c at optimum)
    double objective = 0.0;
    double max_residual = 0.0;  // max |Ax - b| at the returned x
    int iterations = 0;
};

/// Two-phase tableau simplex. Dantzig pricing with a Bland fallback after an
/// iteration threshold, so termination is guaranteed. Throws SolverError on
/// infeasible or unbounded problems.
LpSolution solve_lp(const LpProblem& lp, double feas_tol = 1e-8);

}  // namespace otb
