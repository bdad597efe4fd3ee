#include "otb/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "otb/errors.hpp"

namespace otb {

namespace {

SignedMeasure mix_measures(const std::vector<SignedMeasure>& ms,
                           const std::vector<double>& shares) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t x = 0; x < ms.size(); ++x)
        for (int i = 0; i < ms[x].size(); ++i)
            pts.emplace_back(ms[x].support[i], shares[x] * ms[x].weights[i]);
    return SignedMeasure::from_points(std::move(pts));
}

}  // namespace

AnalysisPoint analyze_point(const Sample& s, const AnalysisOptions& opts,
                            std::span<const double> weights) {
    AnalysisPoint out;
    out.cp = cell_probabilities(s, weights);
    const ComplierShares full = complier_share(out.cp);

    if (opts.subset) {
        if (opts.subset->empty()) throw ConfigError("analyze_point: empty cell subset");
        out.cells = *opts.subset;
        std::sort(out.cells.begin(), out.cells.end());
        out.cells.erase(std::unique(out.cells.begin(), out.cells.end()), out.cells.end());
        for (int x : out.cells)
            if (x < 0 || x >= s.num_cells())
                throw ConfigError("analyze_point: unknown cell in subset");
    } else {
        out.cells.resize(s.num_cells());
        for (int x = 0; x < s.num_cells(); ++x) out.cells[x] = x;
    }

    double mass = 0.0;
    for (int x : out.cells) mass += full.s[x];
    if (mass <= 0.0) throw DegenerateCellError("analyze_point: zero complier mass on subset");
    for (int x : out.cells) out.shares.push_back(full.s[x] / mass);

    for (int x : out.cells) {
        out.m1.push_back(complier_measure(s, out.cp, 1, x, weights));
        out.m0.push_back(complier_measure(s, out.cp, 0, x, weights));
    }
    for (const auto& ms : {out.m1, out.m0})
        for (const SignedMeasure& m : ms)
            if (!m.proper()) out.signed_measures = true;

    if (opts.rect) {
        out.rect = *opts.rect;
        if (out.rect.span() < 0.0) throw ConfigError("analyze_point: empty rectangle");
    } else {
        double lo = s.observations.front().y, hi = lo;
        for (const Observation& o : s.observations) {
            lo = std::min(lo, o.y);
            hi = std::max(hi, o.y);
        }
        out.rect = {lo, hi};
    }

    const int m = static_cast<int>(out.cells.size());
    out.cell_theta.resize(m);
    for (int i = 0; i < m; ++i)
        out.cell_theta[i] = theta_bounds_cell(out.m1[i], out.m0[i], opts.param.cost, out.rect);

    out.theta = {0.0, 0.0};
    for (int i = 0; i < m; ++i) {
        out.theta.lo += out.shares[i] * out.cell_theta[i].lo;
        out.theta.hi += out.shares[i] * out.cell_theta[i].hi;
    }

    out.eta = eta_hat(out.m1, out.m0, ComplierShares{out.shares}, opts.param.eta);
    out.gamma = gamma_bounds(out.theta.lo, out.theta.hi, out.eta.eta, opts.param);
    out.grads = grad_envelope(out.theta.lo, out.theta.hi, out.eta.eta, opts.param,
                              out.gamma.t_lo, out.gamma.t_hi);

    if (opts.pooled_check) {
        const SignedMeasure p1 = mix_measures(out.m1, out.shares);
        const SignedMeasure p0 = mix_measures(out.m0, out.shares);
        out.pooled = theta_bounds_cell(p1, p0, opts.param.cost, out.rect);
        const double tol = 1e-7 * (1.0 + std::abs(out.theta.hi) + std::abs(out.theta.lo));
        if (out.pooled.lo > out.theta.lo + tol || out.pooled.hi < out.theta.hi - tol)
            throw SolverError("analyze_point: pooled bounds are narrower than the aggregate");
    }
    return out;
}

}  // namespace otb
