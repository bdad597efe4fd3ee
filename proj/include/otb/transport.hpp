#pragma once

#include <functional>
#include <span>
#include <vector>

namespace otb {

/// Orientation hint for the initial basis. Costs with a constant-sign cross
/// difference admit a sorted (comonotone) or reversed (antitone) optimal
/// coupling, which the northwest-corner start then hits in zero pivots; the
/// pivoting loop still runs, so a wrong hint only costs time.
enum class CouplingHint { none, comonotone, antitone };

struct TransportSolution {
    double objective = 0.0;     // min sum_ij pi_ij c_ij
    std::vector<double> u, v;   // potentials: u_i + v_j <= c_ij + tol; v <= 0
    std::vector<double> flow;   // m1 x m0 row-major optimal coupling
    double max_violation = 0.0; // max over (i,j) of (u_i + v_j - c_ij)+
    int iterations = 0;
};

/// Transportation problem: min sum pi_ij cost(i,j) with row sums a and column
/// sums b (both strictly positive, equal totals). Network simplex on the
/// basis tree; Dantzig pricing with Bland fallback.
TransportSolution solve_transport(std::span<const double> a, std::span<const double> b,
                                  const std::function<double(int, int)>& cost,
                                  CouplingHint hint = CouplingHint::none);

}  // namespace otb
