#pragma once

#include <optional>
#include <span>
#include <vector>

#include "otb/bounds.hpp"
#include "otb/measure.hpp"
#include "otb/parameters.hpp"
#include "otb/sample.hpp"

namespace otb {

struct AnalysisOptions {
    ParameterSpec param;
    std::optional<Rectangle> rect;            // default: observed outcome range
    std::optional<std::vector<int>> subset;   // covariate cells A; default all
    bool pooled_check = false;                // assert pooled bounds are wider
};

/// Everything the estimator computes at one weighting of the sample:
/// cell probabilities, complier shares and measures, per-cell and aggregated
/// theta bounds, nuisance moments, and the projected [gammaL, gammaH] with
/// its envelope gradients. Per-cell arrays are indexed by position in
/// `cells`, which lists the active covariate cells.
struct AnalysisPoint {
    CellProbs cp;
    std::vector<int> cells;
    std::vector<double> shares;               // renormalized over `cells`
    std::vector<SignedMeasure> m1, m0;
    Rectangle rect;
    std::vector<CellBounds> cell_theta;
    CellBounds theta;
    EtaHat eta;
    GammaBounds gamma;
    EnvelopeGrads grads;
    bool signed_measures = false;             // any complier weight < 0
    CellBounds pooled;                        // filled when pooled_check
};

/// The full point pass; also the per-replicate recompute of the simple
/// bootstrap (with W the replicate's weights). Throws DegenerateCellError /
/// AssumptionError when the weighting empties a cell or kills a first stage.
AnalysisPoint analyze_point(const Sample& s, const AnalysisOptions& opts,
                            std::span<const double> weights = {});

}  // namespace otb
