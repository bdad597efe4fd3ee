#include "otb/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "otb/errors.hpp"

namespace otb {

namespace {

struct BasicCell {
    int i, j;
    double flow;
    bool alive;
};

}  // namespace

TransportSolution solve_transport(std::span<const double> a_in, std::span<const double> b_in,
                                  const std::function<double(int, int)>& cost_in,
                                  CouplingHint hint) {
    const int m1 = static_cast<int>(a_in.size());
    const int m0 = static_cast<int>(b_in.size());
    if (m1 == 0 || m0 == 0) throw SolverError("transport: empty marginal");

    std::vector<double> a(a_in.begin(), a_in.end());
    std::vector<double> b(b_in.begin(), b_in.end());
    double ta = 0.0, tb = 0.0;
    for (double x : a) {
        if (!(x > 0.0)) throw SolverError("transport: nonpositive supply");
        ta += x;
    }
    for (double x : b) {
        if (!(x > 0.0)) throw SolverError("transport: nonpositive demand");
        tb += x;
    }
    if (std::abs(ta - tb) > 1e-9 * std::max(1.0, ta))
        throw SolverError("transport: unbalanced marginals");
    b[m0 - 1] += ta - tb;  // absorb rounding so row/col totals match exactly

    // antitone hint: reverse the column order, map v back at the end
    const bool reversed = hint == CouplingHint::antitone;
    auto cost = [&](int i, int j) { return cost_in(i, reversed ? m0 - 1 - j : j); };
    if (reversed) std::reverse(b.begin(), b.end());

    // northwest-corner initial basis: exactly m1 + m0 - 1 cells
    std::vector<BasicCell> cells;
    cells.reserve(m1 + m0 - 1);
    {
        int i = 0, j = 0;
        double ra = a[0], rb = b[0];
        while (true) {
            const double f = std::min(ra, rb);
            cells.push_back({i, j, f, true});
            ra -= f;
            rb -= f;
            if (i == m1 - 1 && j == m0 - 1) break;
            if (ra <= rb && i < m1 - 1) {
                ++i;
                ra = a[i];
                rb -= 0.0;
            } else {
                ++j;
                rb = b[j];
            }
        }
    }

    std::vector<std::vector<int>> row_adj(m1), col_adj(m0);
    auto rebuild_adj = [&] {
        for (auto& v : row_adj) v.clear();
        for (auto& v : col_adj) v.clear();
        for (int k = 0; k < static_cast<int>(cells.size()); ++k) {
            if (!cells[k].alive) continue;
            row_adj[cells[k].i].push_back(k);
            col_adj[cells[k].j].push_back(k);
        }
    };

    std::vector<double> u(m1), v(m0);
    std::vector<char> useen(m1), vseen(m0);
    auto compute_potentials = [&] {
        std::fill(useen.begin(), useen.end(), 0);
        std::fill(vseen.begin(), vseen.end(), 0);
        u[0] = 0.0;
        useen[0] = 1;
        // BFS over the basis tree; stack of (is_row, node)
        std::vector<std::pair<bool, int>> stack{{true, 0}};
        while (!stack.empty()) {
            auto [is_row, node] = stack.back();
            stack.pop_back();
            if (is_row) {
                for (int k : row_adj[node]) {
                    const int j = cells[k].j;
                    if (!vseen[j]) {
                        v[j] = cost(cells[k].i, j) - u[node];
                        vseen[j] = 1;
                        stack.emplace_back(false, j);
                    }
                }
            } else {
                for (int k : col_adj[node]) {
                    const int i = cells[k].i;
                    if (!useen[i]) {
                        u[i] = cost(i, cells[k].j) - v[node];
                        useen[i] = 1;
                        stack.emplace_back(true, i);
                    }
                }
            }
        }
    };

    // path through the basis tree from row ei to col ej, as a cell sequence
    std::vector<int> parent_cell(m1 + m0);  // node id: rows 0..m1-1, cols m1..m1+m0-1
    std::vector<char> visited(m1 + m0);
    auto find_path = [&](int ei, int ej) {
        std::fill(visited.begin(), visited.end(), 0);
        std::vector<int> stack{ei};
        visited[ei] = 1;
        parent_cell[ei] = -1;
        while (!stack.empty()) {
            const int node = stack.back();
            stack.pop_back();
            const bool is_row = node < m1;
            const auto& adj = is_row ? row_adj[node] : col_adj[node - m1];
            for (int k : adj) {
                const int next = is_row ? m1 + cells[k].j : cells[k].i;
                if (visited[next]) continue;
                visited[next] = 1;
                parent_cell[next] = k;
                stack.push_back(next);
            }
        }
        std::vector<int> path;
        int node = m1 + ej;
        while (parent_cell[node] >= 0) {
            const int k = parent_cell[node];
            path.push_back(k);
            node = (node < m1) ? m1 + cells[k].j : cells[k].i;
        }
        return path;  // runs col ej -> ... -> row ei
    };

    const long max_dantzig = 4L * (m1 + m0) + 64;
    const long max_iters = 1000L * (m1 + m0) + 100000;
    long iters = 0;
    for (;;) {
        rebuild_adj();
        compute_potentials();

        int ei = -1, ej = -1;
        const bool bland = iters > max_dantzig;
        double best = -1e-10;
        for (int i = 0; i < m1 && ei < 0; ++i) {
            for (int j = 0; j < m0; ++j) {
                const double rc = cost(i, j) - u[i] - v[j];
                if (bland) {
                    if (rc < -1e-10) {
                        ei = i;
                        ej = j;
                        break;
                    }
                } else if (rc < best) {
                    best = rc;
                    ei = i;
                    ej = j;
                }
            }
            if (bland && ei >= 0) break;
        }
        if (ei < 0) break;

        // cycle = entering cell + tree path; signs alternate starting at +
        auto path = find_path(ei, ej);
        // walking from col ej toward row ei: the first path cell closes the
        // cycle against the entering (+) cell through col ej, so it is -
        double theta = std::numeric_limits<double>::infinity();
        int leave = -1;
        for (std::size_t p = 0; p < path.size(); p += 2) {
            const int k = path[p];
            if (cells[k].flow < theta - 1e-15 || (cells[k].flow < theta + 1e-15 && (leave < 0 || k < leave))) {
                theta = std::min(theta, cells[k].flow);
                leave = k;
            }
        }
        if (leave < 0) throw SolverError("transport: degenerate cycle");
        for (std::size_t p = 0; p < path.size(); ++p)
            cells[path[p]].flow += (p % 2 == 0 ? -theta : theta);
        cells[leave].alive = false;
        cells.push_back({ei, ej, theta, true});

        if (++iters > max_iters) throw SolverError("transport: iteration limit exceeded");
    }

    TransportSolution sol;
    sol.iterations = static_cast<int>(iters);
    sol.flow.assign(static_cast<std::size_t>(m1) * m0, 0.0);
    for (const auto& c : cells)
        if (c.alive) {
            const int j = reversed ? m0 - 1 - c.j : c.j;
            sol.flow[static_cast<std::size_t>(c.i) * m0 + j] += c.flow;
        }
    sol.objective = 0.0;
    for (const auto& c : cells)
        if (c.alive) sol.objective += c.flow * cost(c.i, c.j);

    // normalize potentials so v <= 0 with max v = 0
    double vmax = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < m0; ++j) vmax = std::max(vmax, v[j]);
    sol.u.resize(m1);
    sol.v.resize(m0);
    for (int i = 0; i < m1; ++i) sol.u[i] = u[i] + vmax;
    for (int j = 0; j < m0; ++j) sol.v[reversed ? m0 - 1 - j : j] = v[j] - vmax;

    sol.max_violation = 0.0;
    for (int i = 0; i < m1; ++i)
        for (int j = 0; j < m0; ++j)
            sol.max_violation =
                std::max(sol.max_violation, sol.u[i] + sol.v[reversed ? m0 - 1 - j : j] - cost(i, j));
    sol.max_violation = std::max(sol.max_violation, 0.0);
    return sol;
}

}  // namespace otb
