#include "otb/inference.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>

#include "otb/errors.hpp"
#include "otb/parallel.hpp"

namespace otb {

namespace {

CostSpec upper_cost(const CostSpec& cost) {
    if (const auto* ind = std::get_if<IndicatorCost>(&cost)) return opposing_cost(*ind);
    return negate_cost(std::get<SmoothCost>(cost));
}

double resolve_kappa(const BootstrapConfig& cfg, int n) {
    const double kappa = cfg.kappa > 0.0 ? cfg.kappa : std::log(static_cast<double>(n));
    if (!(kappa > 0.0) || kappa / std::sqrt(static_cast<double>(n)) >= 1.0)
        throw ConfigError("bootstrap: kappa must satisfy 0 < kappa < sqrt(n)");
    return kappa;
}

void check_config(const BootstrapConfig& cfg) {
    if (cfg.replicates < 1) throw ConfigError("bootstrap: replicates must be >= 1");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw ConfigError("bootstrap: alpha not in (0,1)");
}

// Weighted cell frequencies can zero out an (x,z) cell under multinomial
// weights; complier_share would then propagate NaN instead of throwing.
void check_cells_alive(const CellProbs& cp, const std::vector<int>& cells) {
    for (int x : cells)
        for (int z : {0, 1})
            if (!(cp.p_xz[x][z] > 0.0))
                throw DegenerateCellError("bootstrap replicate emptied an (x,z) cell");
}

SignedMeasure scaled_difference(const SignedMeasure& star, const SignedMeasure& point,
                                double scale) {
    SignedMeasure d = measure_difference(star, point);
    for (double& w : d.weights) w *= scale;
    return d;
}

}  // namespace

std::vector<double> gen_bootstrap_weights(BootScheme scheme, int n, Rng& rng) {
    std::vector<double> w(n, 0.0);
    if (scheme == BootScheme::multinomial) {
        for (int i = 0; i < n; ++i)
            w[rng.next_below(static_cast<std::uint64_t>(n))] += 1.0;
        return w;
    }
    double total = 0.0;
    for (double& wi : w) {
        wi = rng.next_exponential();
        total += wi;
    }
    const double scale = static_cast<double>(n) / total;
    for (double& wi : w) wi *= scale;
    return w;
}

DerivativeMatrices build_derivative_matrices(const AnalysisPoint& pt) {
    DerivativeMatrices dm;
    dm.M = static_cast<int>(pt.cells.size());
    dm.K1 = dm.M > 0 ? static_cast<int>(pt.eta.eta1_cell[0].size()) : 0;
    dm.K0 = dm.M > 0 ? static_cast<int>(pt.eta.eta0_cell[0].size()) : 0;
    const int K = dm.K1 + dm.K0;
    const int rows = 2 + K, block = 3 + K, cols = dm.M * block;
    dm.d3.assign(static_cast<std::size_t>(rows) * cols, 0.0);
    auto d3 = [&](int r, int c) -> double& { return dm.d3[static_cast<std::size_t>(r) * cols + c]; };
    for (int i = 0; i < dm.M; ++i) {
        const int cb = i * block;
        const double sx = pt.shares[i];
        d3(0, cb + 0) = sx;
        d3(0, cb + 2 + K) = pt.cell_theta[i].lo;
        d3(1, cb + 1) = sx;
        d3(1, cb + 2 + K) = pt.cell_theta[i].hi;
        for (int k = 0; k < K; ++k) {
            d3(2 + k, cb + 2 + k) = sx;
            d3(2 + k, cb + 2 + K) =
                k < dm.K1 ? pt.eta.eta1_cell[i][k] : pt.eta.eta0_cell[i][k - dm.K1];
        }
    }
    dm.d4.assign(static_cast<std::size_t>(2) * rows, 0.0);
    if (static_cast<int>(pt.grads.gL.size()) != rows)
        throw SolverError("build_derivative_matrices: gradient length mismatch");
    std::copy(pt.grads.gL.begin(), pt.grads.gL.end(), dm.d4.begin());
    std::copy(pt.grads.gH.begin(), pt.grads.gH.end(), dm.d4.begin() + rows);
    return dm;
}

PsiSets build_psi_sets(const AnalysisPoint& pt, const ParameterSpec& param, double slack) {
    PsiSets psi;
    const CostSpec hi = upper_cost(param.cost);
    for (std::size_t i = 0; i < pt.cells.size(); ++i) {
        psi.lower.push_back(approx_argmax_set(pt.m1[i], pt.m0[i], param.cost, pt.rect, slack));
        psi.upper.push_back(approx_argmax_set(pt.m1[i], pt.m0[i], hi, pt.rect, slack));
    }
    return psi;
}

std::vector<double> evaluate_t2prime(const std::vector<CellIncrement>& incs, const PsiSets& psi) {
    const int M = static_cast<int>(incs.size());
    if (static_cast<int>(psi.lower.size()) != M || static_cast<int>(psi.upper.size()) != M)
        throw SolverError("evaluate_t2prime: candidate sets do not match cells");

    auto ot_prime = [](const CellIncrement& inc, const std::vector<DualCandidate>& cands) {
        if (cands.empty())
            throw SolverError("evaluate_t2prime: empty approximate-argmax set");
        double best = -std::numeric_limits<double>::infinity();
        for (const DualCandidate& cand : cands) {
            double v = 0.0;
            for (int j = 0; j < inc.h1.size(); ++j)
                v += inc.h1.weights[j] * cand.phi_at(inc.h1.support[j]);
            for (int j = 0; j < inc.h0.size(); ++j)
                v += inc.h0.weights[j] * cand.psi_at(inc.h0.support[j]);
            best = std::max(best, v);
        }
        return best;
    };

    std::vector<double> t2;
    for (int i = 0; i < M; ++i) {
        const CellIncrement& inc = incs[i];
        t2.push_back(ot_prime(inc, psi.lower[i]));
        t2.push_back(-ot_prime(inc, psi.upper[i]));
        t2.insert(t2.end(), inc.h_eta1.begin(), inc.h_eta1.end());
        t2.insert(t2.end(), inc.h_eta0.begin(), inc.h_eta0.end());
        t2.push_back(inc.h_s);
    }
    return t2;
}

InferenceResult confidence_set(std::vector<std::pair<double, double>> draws, double gamma_lo,
                               double gamma_hi, int n, double alpha) {
    const double rn = std::sqrt(static_cast<double>(n));
    const int B = static_cast<int>(draws.size());
    std::vector<double> stats;
    stats.reserve(B);
    for (const auto& [dl, dh] : draws)
        stats.push_back(std::max(rn * (dl - gamma_lo), -rn * (dh - gamma_hi)));
    std::sort(stats.begin(), stats.end());
    int idx = static_cast<int>(std::ceil((1.0 - alpha) * B));
    idx = std::clamp(idx, 1, B);

    InferenceResult out;
    out.draws = std::move(draws);
    out.c_hat = stats[idx - 1];
    out.lo = gamma_lo - out.c_hat / rn;
    out.hi = gamma_hi + out.c_hat / rn;
    return out;
}

InferenceResult bootstrap_draws(const Sample& s, const AnalysisPoint& pt,
                                const AnalysisOptions& opts, const BootstrapConfig& cfg) {
    check_config(cfg);
    const int n = s.n();
    const int B = cfg.replicates;
    const double rn = std::sqrt(static_cast<double>(n));

    DerivativeMatrices dm;
    PsiSets psi;
    if (cfg.method == BootMethod::derivative) {
        const double slack = resolve_kappa(cfg, n) / rn;
        dm = build_derivative_matrices(pt);
        psi = build_psi_sets(pt, opts.param, slack);
    }

    AnalysisOptions rep_opts = opts;
    rep_opts.pooled_check = false;

    auto one_draw = [&](std::span<const double> w) -> std::pair<double, double> {
        if (cfg.method == BootMethod::simple) {
            const AnalysisPoint bp = analyze_point(s, rep_opts, w);
            return {bp.gamma.lo, bp.gamma.hi};
        }
        const CellProbs cp = cell_probabilities(s, w);
        check_cells_alive(cp, pt.cells);
        const ComplierShares full = complier_share(cp);
        double mass = 0.0;
        for (int x : pt.cells) mass += full.s[x];
        if (!(mass > 0.0))
            throw DegenerateCellError("bootstrap replicate has zero complier mass");

        const int M = static_cast<int>(pt.cells.size());
        std::vector<CellIncrement> incs(M);
        for (int i = 0; i < M; ++i) {
            const int x = pt.cells[i];
            const SignedMeasure m1 = complier_measure(s, cp, 1, x, w);
            const SignedMeasure m0 = complier_measure(s, cp, 0, x, w);
            CellIncrement& inc = incs[i];
            inc.h1 = scaled_difference(m1, pt.m1[i], rn);
            inc.h0 = scaled_difference(m0, pt.m0[i], rn);
            for (std::size_t k = 0; k < pt.eta.eta1_cell[i].size(); ++k)
                inc.h_eta1.push_back(
                    rn * (m1.apply(opts.param.eta.eta1[k]) - pt.eta.eta1_cell[i][k]));
            for (std::size_t k = 0; k < pt.eta.eta0_cell[i].size(); ++k)
                inc.h_eta0.push_back(
                    rn * (m0.apply(opts.param.eta.eta0[k]) - pt.eta.eta0_cell[i][k]));
            inc.h_s = rn * (full.s[x] / mass - pt.shares[i]);
        }
        const std::vector<double> t2 = evaluate_t2prime(incs, psi);

        const int K = dm.K1 + dm.K0, rows = 2 + K, cols = M * (3 + K);
        std::vector<double> v(rows, 0.0);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c)
                v[r] += dm.d3[static_cast<std::size_t>(r) * cols + c] * t2[c];
        double uL = 0.0, uH = 0.0;
        for (int r = 0; r < rows; ++r) {
            uL += dm.d4[r] * v[r];
            uH += dm.d4[rows + r] * v[r];
        }
        return {pt.gamma.lo + uL / rn, pt.gamma.hi + uH / rn};
    };

    std::vector<std::pair<double, double>> draws(B);
    std::atomic<int> failed{0};
    parallel_for(B, cfg.threads, [&](int b) {
        for (int attempt = 0; attempt < 2; ++attempt) {
            Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(attempt == 0 ? b : B + b));
            const std::vector<double> w = gen_bootstrap_weights(cfg.scheme, n, rng);
            try {
                draws[b] = one_draw(w);
                return;
            } catch (const DegenerateCellError&) {
            } catch (const AssumptionError&) {
            }
            if (attempt == 0) failed.fetch_add(1);
        }
        // resample also failed: fall back to the point estimate for this draw
        draws[b] = {pt.gamma.lo, pt.gamma.hi};
    });

    if (failed.load() > 0.05 * B)
        throw SolverError("more than 5% of bootstrap replicates emptied a cell; "
                          "use the Bayesian scheme (strictly positive weights)");

    InferenceResult out = confidence_set(std::move(draws), pt.gamma.lo, pt.gamma.hi, n, cfg.alpha);
    out.failed_replicates = failed.load();
    if (cfg.method == BootMethod::derivative) {
        for (const auto& c : psi.lower) out.psi_sizes.push_back(static_cast<int>(c.size()));
        for (const auto& c : psi.upper) out.psi_sizes.push_back(static_cast<int>(c.size()));
    }
    return out;
}

QuantileBand quantile_confidence_set(const Sample& s, double tau,
                                     const std::vector<double>& grid,
                                     const BootstrapConfig& cfg) {
    check_config(cfg);
    if (grid.empty()) throw ConfigError("quantile_confidence_set: empty grid");
    const int n = s.n();
    const int B = cfg.replicates;
    const double rn = std::sqrt(static_cast<double>(n));

    const CellProbs cp = cell_probabilities(s);
    const ComplierShares shares = complier_share(cp);
    const int M = s.num_cells();
    std::vector<SignedMeasure> m1(M), m0(M);
    for (int x = 0; x < M; ++x) {
        m1[x] = complier_measure(s, cp, 1, x);
        m0[x] = complier_measure(s, cp, 0, x);
    }

    QuantileBand out;
    out.curve = cdf_bound_curve(m1, m0, shares, grid);

    // one shared set of replicate measures across the whole grid
    struct Replicate {
        ComplierShares shares;
        std::vector<SignedMeasure> m1, m0;
    };
    std::vector<Replicate> reps(B);
    std::vector<int> all_cells(M);
    std::iota(all_cells.begin(), all_cells.end(), 0);
    std::atomic<int> failed{0};
    parallel_for(B, cfg.threads, [&](int b) {
        for (int attempt = 0; attempt < 2; ++attempt) {
            Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(attempt == 0 ? b : B + b));
            const std::vector<double> w = gen_bootstrap_weights(cfg.scheme, n, rng);
            try {
                const CellProbs cpb = cell_probabilities(s, w);
                check_cells_alive(cpb, all_cells);
                Replicate rep;
                rep.shares = complier_share(cpb);
                for (int x = 0; x < M; ++x) {
                    rep.m1.push_back(complier_measure(s, cpb, 1, x, w));
                    rep.m0.push_back(complier_measure(s, cpb, 0, x, w));
                }
                reps[b] = std::move(rep);
                return;
            } catch (const DegenerateCellError&) {
            } catch (const AssumptionError&) {
            }
            if (attempt == 0) failed.fetch_add(1);
        }
        reps[b] = {shares, m1, m0};  // degenerate replicate, zero statistic
    });
    if (failed.load() > 0.05 * B)
        throw SolverError("more than 5% of bootstrap replicates emptied a cell; "
                          "use the Bayesian scheme (strictly positive weights)");

    const int Q = static_cast<int>(grid.size());
    out.c_hat.assign(Q, 0.0);
    out.kept.assign(Q, 0);
    parallel_for(Q, cfg.threads, [&](int qi) {
        const IndicatorCost cost{grid[qi], IndicatorFamily::lower, /*weak=*/false};
        const Rectangle dummy{};
        std::vector<std::pair<double, double>> draws;
        draws.reserve(B);
        for (const Replicate& rep : reps) {
            std::vector<CellBounds> cells(M);
            for (int x = 0; x < M; ++x)
                cells[x] = theta_bounds_cell(rep.m1[x], rep.m0[x], cost, dummy);
            const CellBounds agg = aggregate_theta(rep.shares, cells);
            draws.emplace_back(agg.lo, agg.hi);
        }
        const CurvePoint& pt = out.curve[qi];
        const InferenceResult r = confidence_set(std::move(draws), pt.lo, pt.hi, n, cfg.alpha);
        out.c_hat[qi] = r.c_hat;
        const double ci_lo = pt.lo - std::max(r.c_hat, 0.0) / rn;
        const double ci_hi = pt.hi + std::max(r.c_hat, 0.0) / rn;
        out.kept[qi] = (ci_lo <= tau && tau <= ci_hi) ? 1 : 0;
    });

    bool open = false;
    for (int qi = 0; qi < Q; ++qi) {
        if (out.kept[qi] && !open) {
            out.components.emplace_back(grid[qi], grid[qi]);
            open = true;
        } else if (out.kept[qi]) {
            out.components.back().second = grid[qi];
        } else {
            open = false;
        }
    }
    return out;
}

}  // namespace otb
