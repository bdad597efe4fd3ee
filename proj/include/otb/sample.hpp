#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace otb {

/// One row of the input sample. Treatment d and instrument z are binary;
/// x identifies a covariate cell (small integer after binning). When
/// treatment is exogenous, z == d for every row.
struct Observation {
    double y = 0.0;
    int d = 0;
    int z = 0;
    int x = 0;
};

/// Immutable indexed sample. Cells appear in first-appearance order.
struct Sample {
    std::vector<Observation> observations;
    std::vector<std::string> cell_labels;  // one label per registered cell
    bool exogenous = false;                // z column absent, z := d convention

    int n() const { return static_cast<int>(observations.size()); }
    int num_cells() const { return static_cast<int>(cell_labels.size()); }
};

/// Binning rule for one raw covariate: sorted breakpoints v_1 < ... < v_k
/// define bins (-inf, v_1), [v_1, v_2), ..., [v_k, inf). Values at a
/// breakpoint fall in the bin to its right (half-open convention).
struct BinRule {
    std::vector<double> breakpoints;

    int bin_of(double value) const;
    std::string bin_label(int bin) const;
};

/// Column mapping and binning for load_sample. Covariate columns without a
/// bin rule are treated as discrete labels matched exactly.
struct SampleSchema {
    std::string y_column;
    std::string d_column;
    std::optional<std::string> z_column;     // absent => exogenous, z := d
    std::vector<std::string> x_columns;      // empty => single cell "all"
    std::map<std::string, BinRule> bins;     // keyed by covariate column
    char delimiter = ',';
};

/// Parse a delimited text stream with a header row into a Sample.
/// Deterministic: identical bytes yield an identical Sample.
Sample load_sample(std::istream& in, const SampleSchema& schema);

/// Empirical cell frequencies, optionally under bootstrap weights W
/// (nonnegative, mean one): p*_{d,x,z} = (1/n) sum_i W_i 1{D_i=d,X_i=x,Z_i=z}.
struct CellProbs {
    int num_cells = 0;
    // indexed [x][z] and [x][z][d]
    std::vector<std::array<double, 2>> p_xz;
    std::vector<std::array<std::array<double, 2>, 2>> p_dxz;  // [x][z][d]
    std::vector<double> p_x;

    /// First stage P(D=1|Z=1,X=x) - P(D=1|Z=0,X=x); requires p_xz > 0.
    double first_stage(int x) const;
};

CellProbs cell_probabilities(const Sample& s, std::span<const double> weights = {});

/// Per-cell diagnostics from validate_assumptions.
struct CellDiagnostics {
    int cell = 0;
    std::string label;
    int count = 0;
    int count_z[2] = {0, 0};
    int count_d1_z[2] = {0, 0};
    double first_stage = 0.0;
};

struct SampleDiagnostics {
    std::vector<CellDiagnostics> cells;
    int min_cell_count = 0;
    std::vector<std::string> warnings;
};

/// Check the testable implications of the maintained assumptions:
/// every (x,z) cell nonempty and a strictly positive first stage per cell.
/// Violations throw AssumptionError; small-but-positive cells (below
/// `small_cell_floor`) only produce a warning.
SampleDiagnostics validate_assumptions(const Sample& s, int small_cell_floor = 10);

}  // namespace otb
