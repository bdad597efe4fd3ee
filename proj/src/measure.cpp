#include "otb/measure.hpp"

#include <algorithm>
#include <cmath>

#include "otb/errors.hpp"

namespace otb {

SignedMeasure SignedMeasure::from_points(std::vector<std::pair<double, double>> points) {
    std::sort(points.begin(), points.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    SignedMeasure m;
    for (const auto& [y, w] : points) {
        if (!m.support.empty() && m.support.back() == y)
            m.weights.back() += w;
        else {
            m.support.push_back(y);
            m.weights.push_back(w);
        }
    }
    // drop exact zeros produced by cancellation or zero-weight rows
    std::size_t out = 0;
    for (std::size_t i = 0; i < m.support.size(); ++i) {
        if (m.weights[i] != 0.0) {
            m.support[out] = m.support[i];
            m.weights[out] = m.weights[i];
            ++out;
        }
    }
    m.support.resize(out);
    m.weights.resize(out);
    return m;
}

double SignedMeasure::total() const {
    double t = 0.0;
    for (double w : weights) t += w;
    return t;
}

bool SignedMeasure::proper(double tol) const {
    return std::all_of(weights.begin(), weights.end(), [tol](double w) { return w >= -tol; });
}

double SignedMeasure::apply(const std::function<double(double)>& f) const {
    double acc = 0.0;
    for (int i = 0; i < size(); ++i) acc += weights[i] * f(support[i]);
    return acc;
}

double SignedMeasure::cdf(double y) const {
    double acc = 0.0;
    for (int i = 0; i < size() && support[i] <= y; ++i) acc += weights[i];
    return acc;
}

double SignedMeasure::cdf_strict(double y) const {
    double acc = 0.0;
    for (int i = 0; i < size() && support[i] < y; ++i) acc += weights[i];
    return acc;
}

double SignedMeasure::tail(double y) const {
    double acc = 0.0;
    for (int i = size() - 1; i >= 0 && support[i] >= y; --i) acc += weights[i];
    return acc;
}

double SignedMeasure::tail_strict(double y) const {
    double acc = 0.0;
    for (int i = size() - 1; i >= 0 && support[i] > y; --i) acc += weights[i];
    return acc;
}

SignedMeasure measure_difference(const SignedMeasure& m1, const SignedMeasure& m0) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(m1.size() + m0.size());
    for (int i = 0; i < m1.size(); ++i) pts.emplace_back(m1.support[i], m1.weights[i]);
    for (int j = 0; j < m0.size(); ++j) pts.emplace_back(m0.support[j], -m0.weights[j]);
    return SignedMeasure::from_points(std::move(pts));
}

ComplierShares complier_share(const CellProbs& cp) {
    ComplierShares out;
    out.s.resize(cp.num_cells);
    double denom = 0.0;
    for (int x = 0; x < cp.num_cells; ++x) {
        const double fs = cp.first_stage(x);
        if (!(fs > 0.0))
            throw AssumptionError("nonpositive first stage in cell " + std::to_string(x));
        out.s[x] = fs * cp.p_x[x];
        denom += out.s[x];
    }
    for (double& v : out.s) v /= denom;
    return out;
}

SignedMeasure complier_measure(const Sample& s, const CellProbs& cp, int d, int x,
                               std::span<const double> w) {
    const double p_same = cp.p_xz[x][d];          // p-hat_{x,d}
    const double p_other = cp.p_xz[x][1 - d];     // p-hat_{x,1-d}
    if (!(p_same > 0.0) || !(p_other > 0.0))
        throw DegenerateCellError("cell " + std::to_string(x) + " has an empty (x,z) stratum");

    const double denom = cp.p_dxz[x][d][d] / p_same - cp.p_dxz[x][1 - d][d] / p_other;
    if (std::abs(denom) <= 1e-10)
        throw DegenerateCellError("zero treatment-probability contrast for (d=" +
                                  std::to_string(d) + ", cell " + std::to_string(x) + ")");

    const int n = s.n();
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < n; ++i) {
        const Observation& o = s.observations[i];
        if (o.x != x || o.d != d) continue;
        // omega_{d,x,i}: the z=d rows enter with +1/p_{x,d}, the z=1-d rows
        // with -1/p_{x,1-d}; everything else has weight zero and is skipped.
        const double wi = w.empty() ? 1.0 : w[i];
        if (wi == 0.0) continue;
        const double sign = o.z == d ? 1.0 / p_same : -1.0 / p_other;
        pts.emplace_back(o.y, wi / n * sign / denom);
    }
    return SignedMeasure::from_points(std::move(pts));
}

EtaHat eta_hat(const std::vector<SignedMeasure>& m1_by_cell,
               const std::vector<SignedMeasure>& m0_by_cell, const ComplierShares& shares,
               const EtaFunctions& fns) {
    const int M = static_cast<int>(shares.s.size());
    EtaHat out;
    out.eta.assign(fns.k(), 0.0);
    out.eta1_cell.assign(M, std::vector<double>(fns.k1(), 0.0));
    out.eta0_cell.assign(M, std::vector<double>(fns.k0(), 0.0));
    for (int x = 0; x < M; ++x) {
        for (int k = 0; k < fns.k1(); ++k) {
            out.eta1_cell[x][k] = m1_by_cell[x].apply(fns.eta1[k]);
            out.eta[k] += shares.s[x] * out.eta1_cell[x][k];
        }
        for (int k = 0; k < fns.k0(); ++k) {
            out.eta0_cell[x][k] = m0_by_cell[x].apply(fns.eta0[k]);
            out.eta[fns.k1() + k] += shares.s[x] * out.eta0_cell[x][k];
        }
    }
    return out;
}

}  // namespace otb
