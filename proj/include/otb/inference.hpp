#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "otb/analysis.hpp"
#include "otb/dual.hpp"
#include "otb/rng.hpp"

namespace otb {

enum class BootScheme { multinomial, bayesian };
enum class BootMethod { simple, derivative };

struct BootstrapConfig {
    BootScheme scheme = BootScheme::bayesian;
    BootMethod method = BootMethod::simple;
    int replicates = 500;
    std::uint64_t seed = 1;
    double alpha = 0.05;
    double kappa = 0.0;  // approximate-argmax slack rule; 0 selects ln(n)
    int threads = 0;     // 0 = hardware concurrency
};

/// Multinomial(n, 1/n) counts or Exp(1) draws normalized to mean exactly one.
std::vector<double> gen_bootstrap_weights(BootScheme scheme, int n, Rng& rng);

/// D3: (2+K) x M*(3+K), per-cell column blocks ordered (thetaL, thetaH,
/// eta1-block, eta0-block, s). D4: 2 x (2+K), rows are the envelope
/// gradients of gL and gH.
struct DerivativeMatrices {
    int M = 0, K1 = 0, K0 = 0;
    std::vector<double> d3;  // row-major (2+K) x M*(3+K)
    std::vector<double> d4;  // row-major 2 x (2+K)
};

DerivativeMatrices build_derivative_matrices(const AnalysisPoint& pt);

/// Approximate-argmax sets per cell for the lower cost and for the upper
/// cost (complement / negation), built at the point estimate with slack
/// kappa_n / sqrt(n).
struct PsiSets {
    std::vector<std::vector<DualCandidate>> lower, upper;  // [cell]
};

PsiSets build_psi_sets(const AnalysisPoint& pt, const ParameterSpec& param, double slack);

/// Per-cell bootstrap increments, each scaled by sqrt(n).
struct CellIncrement {
    SignedMeasure h1, h0;           // sqrt(n) * (starred - point) measures
    std::vector<double> h_eta1, h_eta0;
    double h_s = 0.0;
};

/// Stacked T2' vector: per cell (OT'_{cL}, -OT'_{cH}, h_eta1, h_eta0, h_s)
/// where OT'_c = max over the cell's candidate set of H1(phi) + H0(psi).
std::vector<double> evaluate_t2prime(const std::vector<CellIncrement>& incs, const PsiSets& psi);

struct InferenceResult {
    std::vector<std::pair<double, double>> draws;  // (gammaL*, gammaH*) per replicate
    double c_hat = 0.0;
    double lo = 0.0, hi = 0.0;                     // [gammaL - c/sqrt(n), gammaH + c/sqrt(n)]
    int failed_replicates = 0;
    std::vector<int> psi_sizes;                    // lower then upper, derivative method only
};

/// Draws + confidence interval. Simple method: full analyze_point recompute
/// per replicate. Derivative method: (gammaL, gammaH) + D4 D3 T2' / sqrt(n).
/// Replicate b always uses the RNG stream(seed, b); a multinomial replicate
/// that empties a cell is resampled once from stream(seed, B + b), and more
/// than 5% failures is a hard error suggesting the Bayesian scheme.
InferenceResult bootstrap_draws(const Sample& s, const AnalysisPoint& pt,
                                const AnalysisOptions& opts, const BootstrapConfig& cfg);

/// c_hat = order statistic ceil((1-alpha) B) of
/// max{sqrt(n)(gammaL* - gammaL), -sqrt(n)(gammaH* - gammaH)}.
InferenceResult confidence_set(std::vector<std::pair<double, double>> draws, double gamma_lo,
                               double gamma_hi, int n, double alpha);

struct QuantileBand {
    std::vector<CurvePoint> curve;                        // point bounds per grid q
    std::vector<double> c_hat;                            // per grid q
    std::vector<char> kept;                               // tau not rejected at q
    std::vector<std::pair<double, double>> components;    // kept-set components
};

/// Test inversion of H0: thetaL(q) <= tau <= thetaH(q) over the grid, with
/// one shared set of weight draws across grid points (common random numbers).
/// Simple bootstrap of the per-q curve; identity g.
QuantileBand quantile_confidence_set(const Sample& s, double tau, const std::vector<double>& grid,
                                     const BootstrapConfig& cfg);

}  // namespace otb
