#include "otb/sample.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <istream>
#include <sstream>

#include "otb/errors.hpp"

namespace otb {

int BinRule::bin_of(double value) const {
    // number of breakpoints <= value
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), value);
    return static_cast<int>(it - breakpoints.begin());
}

std::string BinRule::bin_label(int bin) const {
    std::ostringstream os;
    if (bin == 0)
        os << "(-inf," << breakpoints.front() << ")";
    else if (bin == static_cast<int>(breakpoints.size()))
        os << "[" << breakpoints.back() << ",inf)";
    else
        os << "[" << breakpoints[bin - 1] << "," << breakpoints[bin] << ")";
    return os.str();
}

namespace {

std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, delim)) {
        // trim surrounding whitespace
        const auto a = field.find_first_not_of(" \t\r");
        const auto b = field.find_last_not_of(" \t\r");
        out.push_back(a == std::string::npos ? std::string{} : field.substr(a, b - a + 1));
    }
    if (!line.empty() && line.back() == delim) out.emplace_back();
    return out;
}

double parse_real(const std::string& field, const std::string& column, std::size_t row) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(field, &pos);
        if (pos != field.size()) throw std::invalid_argument(field);
        return v;
    } catch (const std::exception&) {
        throw SchemaError("row " + std::to_string(row) + ": cannot parse '" + field +
                          "' in column '" + column + "' as a real number");
    }
}

int parse_binary(const std::string& field, const std::string& column, std::size_t row) {
    if (field == "0") return 0;
    if (field == "1") return 1;
    throw SchemaError("row " + std::to_string(row) + ": column '" + column + "' must be 0 or 1, got '" +
                      field + "'");
}

}  // namespace

Sample load_sample(std::istream& in, const SampleSchema& schema) {
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("empty input: no header row");
    const auto header = split_line(line, schema.delimiter);

    auto column_index = [&](const std::string& name) {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw SchemaError("column '" + name + "' not found in header");
        return static_cast<int>(it - header.begin());
    };

    const int yi = column_index(schema.y_column);
    const int di = column_index(schema.d_column);
    const int zi = schema.z_column ? column_index(*schema.z_column) : -1;
    std::vector<int> xi;
    for (const auto& c : schema.x_columns) xi.push_back(column_index(c));

    Sample s;
    s.exogenous = !schema.z_column.has_value();
    std::map<std::string, int> cell_ids;

    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto fields = split_line(line, schema.delimiter);
        auto field = [&](int idx, const std::string& name) -> const std::string& {
            if (idx >= static_cast<int>(fields.size()))
                throw SchemaError("row " + std::to_string(row) + ": missing column '" + name + "'");
            return fields[idx];
        };

        Observation o;
        o.y = parse_real(field(yi, schema.y_column), schema.y_column, row);
        if (!std::isfinite(o.y))
            throw SchemaError("row " + std::to_string(row) + ": outcome is not finite");
        o.d = parse_binary(field(di, schema.d_column), schema.d_column, row);
        o.z = zi >= 0 ? parse_binary(field(zi, *schema.z_column), *schema.z_column, row) : o.d;

        std::string label;
        for (std::size_t k = 0; k < xi.size(); ++k) {
            const std::string& raw = field(xi[k], schema.x_columns[k]);
            if (!label.empty()) label += " & ";
            auto bin = schema.bins.find(schema.x_columns[k]);
            if (bin != schema.bins.end()) {
                const double v = parse_real(raw, schema.x_columns[k], row);
                label += schema.x_columns[k] + "=" + bin->second.bin_label(bin->second.bin_of(v));
            } else {
                label += schema.x_columns[k] + "=" + raw;
            }
        }
        if (label.empty()) label = "all";

        auto [it, inserted] = cell_ids.emplace(label, static_cast<int>(s.cell_labels.size()));
        if (inserted) s.cell_labels.push_back(label);
        o.x = it->second;
        s.observations.push_back(o);
    }
    if (s.observations.empty()) throw SchemaError("empty sample: no data rows");
    return s;
}

CellProbs cell_probabilities(const Sample& s, std::span<const double> weights) {
    const int n = s.n();
    if (!weights.empty()) {
        if (static_cast<int>(weights.size()) != n)
            throw ConfigError("weight vector length does not match sample size");
        double sum = 0.0;
        for (double w : weights) {
            if (w < 0.0) throw ConfigError("bootstrap weights must be nonnegative");
            sum += w;
        }
        if (std::abs(sum / n - 1.0) > 1e-10)
            throw ConfigError("bootstrap weights must average to one");
    }

    CellProbs cp;
    cp.num_cells = s.num_cells();
    cp.p_xz.assign(cp.num_cells, {0.0, 0.0});
    cp.p_dxz.assign(cp.num_cells, {{{0.0, 0.0}, {0.0, 0.0}}});
    cp.p_x.assign(cp.num_cells, 0.0);

    const double inv_n = 1.0 / n;
    for (int i = 0; i < n; ++i) {
        const Observation& o = s.observations[i];
        const double w = (weights.empty() ? 1.0 : weights[i]) * inv_n;
        cp.p_x[o.x] += w;
        cp.p_xz[o.x][o.z] += w;
        cp.p_dxz[o.x][o.z][o.d] += w;
    }
    return cp;
}

double CellProbs::first_stage(int x) const {
    return p_dxz[x][1][1] / p_xz[x][1] - p_dxz[x][0][1] / p_xz[x][0];
}

SampleDiagnostics validate_assumptions(const Sample& s, int small_cell_floor) {
    const CellProbs cp = cell_probabilities(s);
    SampleDiagnostics diag;
    diag.min_cell_count = s.n();

    std::vector<CellDiagnostics> cells(s.num_cells());
    for (int x = 0; x < s.num_cells(); ++x) {
        cells[x].cell = x;
        cells[x].label = s.cell_labels[x];
    }
    for (const Observation& o : s.observations) {
        CellDiagnostics& c = cells[o.x];
        ++c.count;
        ++c.count_z[o.z];
        if (o.d == 1) ++c.count_d1_z[o.z];
    }

    for (int x = 0; x < s.num_cells(); ++x) {
        CellDiagnostics& c = cells[x];
        for (int z = 0; z < 2; ++z) {
            if (c.count_z[z] == 0)
                throw AssumptionError("cell '" + c.label + "' has no observations with z=" +
                                      std::to_string(z));
        }
        c.first_stage = cp.first_stage(x);
        if (!(c.first_stage > 0.0))
            throw AssumptionError("nonpositive first stage " + std::to_string(c.first_stage) +
                                  " in cell '" + c.label + "' (weak or invalid instrument)");
        diag.min_cell_count = std::min(diag.min_cell_count, c.count);
        if (c.count < small_cell_floor)
            diag.warnings.push_back("cell '" + c.label + "' has only " + std::to_string(c.count) +
                                    " observations");
    }
    diag.cells = std::move(cells);
    return diag;
}

}  // namespace otb
