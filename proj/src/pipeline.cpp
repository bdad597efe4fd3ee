#include "otb/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>

#include "otb/bounds.hpp"
#include "otb/errors.hpp"

namespace otb {

namespace {

using nlohmann::ordered_json;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

AnalysisMode parse_mode(const std::string& m) {
    if (m == "bounds") return AnalysisMode::bounds;
    if (m == "cdf-curve") return AnalysisMode::cdf_curve;
    if (m == "quantile") return AnalysisMode::quantile;
    throw ConfigError("unknown mode '" + m + "' (expected bounds, cdf-curve or quantile)");
}

const ordered_json* find(const ordered_json& j, const char* key) {
    const auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

template <typename T>
T get_or(const ordered_json& j, const char* key, T fallback) {
    const ordered_json* v = find(j, key);
    return v ? v->get<T>() : fallback;
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    ordered_json j;
    try {
        j = ordered_json::parse(in);
    } catch (const std::exception& e) {
        throw ConfigError("config '" + path + "': " + e.what());
    }

    RunConfig cfg;
    cfg.raw = j;
    try {
        cfg.input = j.at("input").get<std::string>();

        const ordered_json& sc = j.at("schema");
        cfg.schema.y_column = sc.at("y").get<std::string>();
        cfg.schema.d_column = sc.at("d").get<std::string>();
        if (const auto* z = find(sc, "z")) cfg.schema.z_column = z->get<std::string>();
        if (const auto* x = find(sc, "x")) cfg.schema.x_columns = x->get<std::vector<std::string>>();
        if (const auto* d = find(sc, "delimiter")) {
            const std::string s = d->get<std::string>();
            if (s.size() != 1) throw ConfigError("schema.delimiter must be one character");
            cfg.schema.delimiter = s[0];
        }
        if (const auto* bins = find(sc, "bins"))
            for (auto it = bins->begin(); it != bins->end(); ++it) {
                BinRule rule{it.value().get<std::vector<double>>()};
                if (!std::is_sorted(rule.breakpoints.begin(), rule.breakpoints.end()))
                    throw ConfigError("schema.bins." + it.key() + ": breakpoints must be sorted");
                cfg.schema.bins[it.key()] = rule;
            }

        cfg.mode = parse_mode(get_or<std::string>(j, "mode", "bounds"));

        if (const auto* p = find(j, "parameter")) {
            if (p->is_string()) {
                cfg.parameter = p->get<std::string>();
            } else {
                cfg.parameter = p->at("name").get<std::string>();
                if (const auto* d = find(*p, "delta")) cfg.param_opts.delta = d->get<double>();
                if (const auto* c = find(*p, "cost")) cfg.param_opts.cost = c->get<std::string>();
                if (const auto* a = find(*p, "subset")) cfg.subset = a->get<std::vector<int>>();
            }
        }

        cfg.tau = get_or<double>(j, "tau", 0.5);
        if (const auto* g = find(j, "grid")) {
            cfg.grid_cap = get_or<int>(*g, "cap", 0);
            if (const auto* pts = find(*g, "points")) {
                cfg.grid = pts->get<std::vector<double>>();
                if (!std::is_sorted(cfg.grid->begin(), cfg.grid->end()))
                    throw ConfigError("grid.points must be sorted");
            }
        }

        if (const auto* co = find(j, "cost_overrides")) {
            if (find(*co, "lipschitz") || find(*co, "sup_norm")) {
                cfg.class_override = ClassBounds{co->at("lipschitz").get<double>(),
                                                co->at("sup_norm").get<double>()};
            }
            if (const auto* r = find(*co, "rectangle")) {
                const auto v = r->get<std::vector<double>>();
                if (v.size() != 2 || v[0] > v[1])
                    throw ConfigError("cost_overrides.rectangle must be [lo, hi]");
                cfg.rect = Rectangle{v[0], v[1]};
            }
        }

        if (const auto* b = find(j, "bootstrap")) {
            const std::string scheme = get_or<std::string>(*b, "scheme", "bayesian");
            if (scheme == "bayesian") cfg.boot.scheme = BootScheme::bayesian;
            else if (scheme == "multinomial") cfg.boot.scheme = BootScheme::multinomial;
            else throw ConfigError("unknown bootstrap scheme '" + scheme + "'");
            const std::string method = get_or<std::string>(*b, "method", "simple");
            if (method == "simple") cfg.boot.method = BootMethod::simple;
            else if (method == "derivative") cfg.boot.method = BootMethod::derivative;
            else throw ConfigError("unknown bootstrap method '" + method + "'");
            cfg.boot.replicates = get_or<int>(*b, "replicates", 500);
            cfg.boot.seed = get_or<std::uint64_t>(*b, "seed", 1);
            cfg.boot.alpha = get_or<double>(*b, "alpha", 0.05);
            cfg.boot.kappa = get_or<double>(*b, "kappa", 0.0);
            cfg.boot.threads = get_or<int>(*b, "threads", 0);
            cfg.inference = get_or<bool>(*b, "enabled", true);
        }

        if (const auto* o = find(j, "output")) {
            cfg.report_path = get_or<std::string>(*o, "report", "");
            if (const auto* d = find(*o, "draws")) cfg.draws_path = d->get<std::string>();
            if (const auto* c = find(*o, "curve")) cfg.curve_path = c->get<std::string>();
        }
    } catch (const ordered_json::exception& e) {
        throw ConfigError("config '" + path + "': " + e.what());
    }
    return cfg;
}

namespace {

ordered_json diagnostics_json(const SampleDiagnostics& diag) {
    ordered_json cells = ordered_json::array();
    for (const CellDiagnostics& c : diag.cells) {
        ordered_json row;
        row["cell"] = c.cell;
        row["label"] = c.label;
        row["count"] = c.count;
        row["count_z0"] = c.count_z[0];
        row["count_z1"] = c.count_z[1];
        row["count_d1_z0"] = c.count_d1_z[0];
        row["count_d1_z1"] = c.count_d1_z[1];
        row["first_stage"] = c.first_stage;
        cells.push_back(std::move(row));
    }
    ordered_json out;
    out["cells"] = std::move(cells);
    out["min_cell_count"] = diag.min_cell_count;
    out["warnings"] = diag.warnings;
    return out;
}

struct FilteredMeasures {
    std::vector<int> cells;
    std::vector<double> shares;
    std::vector<SignedMeasure> m1, m0;
};

FilteredMeasures filtered_measures(const Sample& s, const std::optional<std::vector<int>>& subset) {
    const CellProbs cp = cell_probabilities(s);
    const ComplierShares full = complier_share(cp);
    FilteredMeasures out;
    if (subset) {
        out.cells = *subset;
        std::sort(out.cells.begin(), out.cells.end());
        out.cells.erase(std::unique(out.cells.begin(), out.cells.end()), out.cells.end());
        for (int x : out.cells)
            if (x < 0 || x >= s.num_cells())
                throw ConfigError("unknown cell in subset");
    } else {
        out.cells.resize(s.num_cells());
        std::iota(out.cells.begin(), out.cells.end(), 0);
    }
    double mass = 0.0;
    for (int x : out.cells) mass += full.s[x];
    if (!(mass > 0.0)) throw DegenerateCellError("zero complier mass on subset");
    for (int x : out.cells) {
        out.shares.push_back(full.s[x] / mass);
        out.m1.push_back(complier_measure(s, cp, 1, x));
        out.m0.push_back(complier_measure(s, cp, 0, x));
    }
    return out;
}

std::string curve_to_csv(const std::vector<CurvePoint>& curve) {
    std::string csv = "delta,theta_lo,theta_hi\n";
    for (const CurvePoint& pt : curve)
        csv += fmt17(pt.delta) + "," + fmt17(pt.lo) + "," + fmt17(pt.hi) + "\n";
    return csv;
}

ordered_json curve_to_json(const std::vector<CurvePoint>& curve) {
    ordered_json rows = ordered_json::array();
    for (const CurvePoint& pt : curve) {
        ordered_json row;
        row["delta"] = pt.delta;
        row["theta_lo"] = pt.lo;
        row["theta_hi"] = pt.hi;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

Report run_analysis(const RunConfig& cfg) {
    std::ifstream in(cfg.input);
    if (!in) throw ConfigError("cannot open input '" + cfg.input + "'");
    const Sample s = load_sample(in, cfg.schema);
    const SampleDiagnostics diag = validate_assumptions(s);

    Report rep;
    ordered_json& doc = rep.doc;
    doc["schema_version"] = 1;
    doc["config"] = cfg.raw;
    doc["n"] = s.n();
    doc["exogenous"] = s.exogenous;
    doc["diagnostics"] = diagnostics_json(diag);
    std::vector<std::string> warnings = diag.warnings;

    if (cfg.mode == AnalysisMode::bounds) {
        ParameterSpec param = make_parameter(cfg.parameter, cfg.param_opts);
        if (cfg.class_override)
            if (auto* sm = std::get_if<SmoothCost>(&param.cost)) sm->declared = cfg.class_override;

        AnalysisOptions opts;
        opts.param = param;
        opts.rect = cfg.rect;
        opts.subset = cfg.subset;
        opts.pooled_check = true;
        const AnalysisPoint pt = analyze_point(s, opts);

        ordered_json cells = ordered_json::array();
        for (std::size_t i = 0; i < pt.cells.size(); ++i) {
            ordered_json row;
            row["cell"] = pt.cells[i];
            row["label"] = s.cell_labels[pt.cells[i]];
            row["share"] = pt.shares[i];
            row["theta_lo"] = pt.cell_theta[i].lo;
            row["theta_hi"] = pt.cell_theta[i].hi;
            cells.push_back(std::move(row));
        }
        doc["parameter"] = cfg.parameter;
        doc["cells"] = std::move(cells);
        doc["theta"] = {{"lo", pt.theta.lo}, {"hi", pt.theta.hi}};
        doc["eta"] = pt.eta.eta;
        doc["gamma"] = {{"lo", pt.gamma.lo},
                        {"hi", pt.gamma.hi},
                        {"t_lo", pt.gamma.t_lo},
                        {"t_hi", pt.gamma.t_hi}};
        doc["rectangle"] = {pt.rect.y_min, pt.rect.y_max};
        doc["pooled_theta"] = {{"lo", pt.pooled.lo}, {"hi", pt.pooled.hi}};

        if (pt.signed_measures && std::holds_alternative<IndicatorCost>(param.cost))
            warnings.push_back("signed complier measures: indicator bounds may fall outside "
                               "[0, 1] and are reported unclipped");
        if (param.monotone == Monotonicity::unknown) {
            const double tol = 1e-9 * (1.0 + std::abs(pt.theta.hi - pt.theta.lo));
            for (double t : {pt.gamma.t_lo, pt.gamma.t_hi}) {
                const double dist =
                    std::min(std::abs(t - pt.theta.lo), std::abs(t - pt.theta.hi));
                if (dist > tol && dist <= 1e-5)
                    warnings.push_back("gamma optimizer sits near an endpoint of "
                                       "[theta_lo, theta_hi]; envelope gradients may be unstable");
            }
        }

        if (cfg.inference && cfg.boot.replicates >= 1) {
            if (cfg.boot.method == BootMethod::derivative &&
                std::holds_alternative<SmoothCost>(param.cost))
                warnings.push_back("derivative bootstrap with a smooth cost uses a vertex "
                                   "subsample of the approximate-argmax set");
            const InferenceResult ir = bootstrap_draws(s, pt, opts, cfg.boot);
            ordered_json inf;
            inf["method"] = cfg.boot.method == BootMethod::simple ? "simple" : "derivative";
            inf["scheme"] = cfg.boot.scheme == BootScheme::bayesian ? "bayesian" : "multinomial";
            inf["replicates"] = cfg.boot.replicates;
            inf["seed"] = cfg.boot.seed;
            inf["alpha"] = cfg.boot.alpha;
            inf["c_hat"] = ir.c_hat;
            inf["interval"] = {{"lo", ir.lo}, {"hi", ir.hi}};
            inf["failed_replicates"] = ir.failed_replicates;
            if (!ir.psi_sizes.empty()) inf["psi_sizes"] = ir.psi_sizes;
            doc["inference"] = std::move(inf);

            if (cfg.draws_path) {
                rep.draws_csv = "gamma_lo_star,gamma_hi_star\n";
                for (const auto& [dl, dh] : ir.draws)
                    rep.draws_csv += fmt17(dl) + "," + fmt17(dh) + "\n";
            }
        }
    } else if (cfg.mode == AnalysisMode::cdf_curve) {
        const FilteredMeasures fm = filtered_measures(s, cfg.subset);
        const std::vector<double> grid =
            cfg.grid ? *cfg.grid : default_delta_grid(s, cfg.grid_cap > 0 ? cfg.grid_cap : 5000);
        const std::vector<CurvePoint> curve =
            cdf_bound_curve(fm.m1, fm.m0, ComplierShares{fm.shares}, grid);
        doc["curve"] = curve_to_json(curve);
        if (cfg.curve_path) rep.curve_csv = curve_to_csv(curve);
    } else {
        const std::vector<double> grid =
            cfg.grid ? *cfg.grid : default_delta_grid(s, cfg.grid_cap > 0 ? cfg.grid_cap : 200);
        const QuantileBand band = quantile_confidence_set(s, cfg.tau, grid, cfg.boot);
        doc["tau"] = cfg.tau;
        doc["curve"] = curve_to_json(band.curve);
        doc["c_hat"] = band.c_hat;
        ordered_json kept = ordered_json::array();
        for (char k : band.kept) kept.push_back(static_cast<bool>(k));
        doc["kept"] = std::move(kept);
        ordered_json comps = ordered_json::array();
        for (const auto& [lo, hi] : band.components) comps.push_back({lo, hi});
        doc["components"] = std::move(comps);
        if (cfg.curve_path) {
            rep.curve_csv = "delta,theta_lo,theta_hi,c_hat,kept\n";
            for (std::size_t i = 0; i < band.curve.size(); ++i)
                rep.curve_csv += fmt17(band.curve[i].delta) + "," + fmt17(band.curve[i].lo) +
                                 "," + fmt17(band.curve[i].hi) + "," + fmt17(band.c_hat[i]) +
                                 "," + (band.kept[i] ? "1" : "0") + "\n";
        }
    }

    doc["warnings"] = warnings;
    return rep;
}

void emit_report(const Report& report, const RunConfig& cfg) {
    const std::string body = report.doc.dump(2) + "\n";
    if (cfg.report_path.empty()) {
        std::cout << body;
    } else {
        std::ofstream out(cfg.report_path);
        if (!out) throw ConfigError("cannot write report '" + cfg.report_path + "'");
        out << body;
    }
    auto write_file = [](const std::string& path, const std::string& content) {
        std::ofstream out(path);
        if (!out) throw ConfigError("cannot write '" + path + "'");
        out << content;
    };
    if (cfg.draws_path && !report.draws_csv.empty()) write_file(*cfg.draws_path, report.draws_csv);
    if (cfg.curve_path && !report.curve_csv.empty()) write_file(*cfg.curve_path, report.curve_csv);
}

}  // namespace otb
