/* Copyright 2026 The nsbf-dirac Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "nsbf/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "nsbf/error.hpp"

namespace nsbf {

namespace {

using json = nlohmann::json;

void write_json(const std::filesystem::path& path, const json& doc)
{
    std::ofstream os(path);
    if (!os) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    os << doc.dump(2) << '\n';
}

json number_or_null(double x)
{
    return std::isfinite(x) ? json(x) : json(nullptr);
}

std::string format_g(double x, int digits = 15)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

// |r Q_j| / 100 style threshold curve, as plotted next to e_j.
GridFunction threshold_curve(const DerivedPotentials& dp, int j, double threshold, double shift)
{
    auto const& Q = j == 1 ? dp.Q1 : dp.Q2;
    return combine(OriginLimit{0.0},
                   [threshold, shift](double r, double q) { return threshold * std::abs(r * (q + shift * r)); }, Q);
}

void write_figure2(const std::filesystem::path& path, const PreparedProblem& prepared)
{
    if (!prepared.diagnostics) {
        return;
    }
    auto const& d   = *prepared.diagnostics;
    auto const curve = threshold_curve(prepared.dp, 2, d.threshold, 0.0);
    write_csv(path, {"r", "e2", "abs_rQ2_scaled"}, {&d.e[1], &curve});
}

CoefficientFamily read_family(const std::filesystem::path& path, const Grid& grid, std::size_t N)
{
    CoefficientFamily fam;
    auto cols = read_csv_columns(path);
    if (cols.size() != N + 2) {
        throw ConfigError("coefficient_cache", path.string() + ": expected " + std::to_string(N + 2) + " columns");
    }
    if (cols[0].size() != grid.size()) {
        throw ConfigError("coefficient_cache", path.string() + ": row count does not match n_points");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (std::abs(cols[0][i] - grid[i]) > 1e-12 * (1.0 + grid.b())) {
            throw ConfigError("coefficient_cache", path.string() + ": r column does not match the grid");
        }
    }
    for (std::size_t n = 0; n <= N; ++n) {
        fam.beta.emplace_back(grid, std::move(cols[n + 1]));
    }
    return fam;
}

std::vector<GridFunction> read_gamma(const std::filesystem::path& path, const Grid& grid, std::size_t N)
{
    return read_family(path, grid, N).beta;
}

void write_family(const std::filesystem::path& path, const std::vector<GridFunction>& fs, const char* prefix)
{
    std::vector<std::string> names{"r"};
    std::vector<const GridFunction*> cols;
    for (std::size_t n = 0; n < fs.size(); ++n) {
        names.push_back(std::string(prefix) + std::to_string(n));
        cols.push_back(&fs[n]);
    }
    write_csv(path, names, cols);
}

struct TableRow
{
    std::optional<int> n;
    std::optional<double> exact;
    double approx = std::numeric_limits<double>::quiet_NaN();
    std::optional<double> abs_error;
    double residual = std::numeric_limits<double>::quiet_NaN(); ///< |f(B)| at the root, reduced bracket
    double eigenfunction_residual = std::numeric_limits<double>::quiet_NaN();
    std::string flag;
};

std::string flags_of(const EigenResult& r)
{
    std::string out;
    auto add = [&](const char* f) { out += out.empty() ? f : std::string("|") + f; };
    if (r.low_confidence) {
        add("low_confidence");
    }
    if (r.truncation_sensitive) {
        add("truncation_sensitive");
    }
    return out.empty() ? "ok" : out;
}

// Both equation residuals on [0.01, B] over the larger of sup |f| and sup |g| on [0, B].
// Near B the truncated coefficients dominate, so this is far above the interior level.
double relative_residual(const EigenResult& r, double B)
{
    if (!r.eigenfunction) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    double const scale =
        std::max(sup_norm(r.eigenfunction->f, 0.0, B), sup_norm(r.eigenfunction->g, 0.0, B));
    return std::max(r.residual1_sup, r.residual2_sup) / (scale > 0.0 ? scale : 1.0);
}

void write_table(const std::filesystem::path& dir, const std::vector<TableRow>& rows)
{
    bool const with_exact = std::any_of(rows.begin(), rows.end(), [](const TableRow& r) { return r.exact; });
    {
        std::ofstream os(dir / "eigs.csv");
        if (!os) {
            throw Error("cannot open " + (dir / "eigs.csv").string() + " for writing");
        }
        os << (with_exact ? "n,exact,approximate,abs_error,residual,flag\n" : "index,approximate,residual,flag\n");
        for (std::size_t k = 0; k < rows.size(); ++k) {
            auto const& r = rows[k];
            if (with_exact) {
                os << (r.n ? std::to_string(*r.n) : "") << ',' << (r.exact ? format_g(*r.exact, 17) : "") << ','
                   << format_g(r.approx, 17) << ',' << (r.abs_error ? format_g(*r.abs_error, 17) : "") << ','
                   << format_g(r.residual, 17) << ',' << r.flag << '\n';
            } else {
                os << k << ',' << format_g(r.approx, 17) << ',' << format_g(r.residual, 17) << ',' << r.flag << '\n';
            }
        }
    }
    std::ofstream os(dir / "eigs.txt");
    if (!os) {
        throw Error("cannot open " + (dir / "eigs.txt").string() + " for writing");
    }
    char line[256];
    if (with_exact) {
        std::snprintf(line, sizeof line, "%5s  %12s  %24s  %12s  %12s  %s\n", "n", "exact", "approximate", "abs error",
                      "residual", "flag");
    } else {
        std::snprintf(line, sizeof line, "%5s  %24s  %12s  %s\n", "index", "approximate", "residual", "flag");
    }
    os << line;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        auto const& r = rows[k];
        if (with_exact) {
            std::snprintf(line, sizeof line, "%5s  %12s  %24.16g  %12.3e  %12.3e  %s\n",
                          r.n ? std::to_string(*r.n).c_str() : "-", r.exact ? format_g(*r.exact, 10).c_str() : "-",
                          r.approx, r.abs_error ? *r.abs_error : std::numeric_limits<double>::quiet_NaN(), r.residual,
                          r.flag.c_str());
        } else {
            std::snprintf(line, sizeof line, "%5zu  %24.16g  %12.3e  %s\n", k, r.approx, r.residual, r.flag.c_str());
        }
        os << line;
    }
}

json table_json(const std::vector<TableRow>& rows)
{
    json out = json::array();
    for (auto const& r : rows) {
        json row{{"approximate", number_or_null(r.approx)},
                 {"residual", number_or_null(r.residual)},
                 {"eigenfunction_residual", number_or_null(r.eigenfunction_residual)},
                 {"flag", r.flag}};
        if (r.n) {
            row["n"] = *r.n;
        }
        if (r.exact) {
            row["exact"] = *r.exact;
        }
        if (r.abs_error) {
            row["abs_error"] = number_or_null(*r.abs_error);
        }
        out.push_back(row);
    }
    return out;
}

json prepared_json(const RunConfig& cfg, const PreparedProblem& pp)
{
    json out{{"kappa", pp.problem.kappa},
             {"b", cfg.b},
             {"n_points", cfg.n_points},
             {"budget_N", pp.coeffs.N},
             {"B", pp.B},
             {"N_f", pp.N_f},
             {"N_g", pp.N_g},
             {"shift", pp.coeffs.shift}};
    if (pp.diagnostics) {
        out["r0"] = {pp.diagnostics->r0[0], pp.diagnostics->r0[1]};
    }
    return out;
}

// Oscillator roots matched to the closed form: the nearest root within half a gap.
std::vector<TableRow> oscillator_table(const OscillatorParams& params, const std::vector<EigenResult>& roots,
                                       std::size_t count, double B)
{
    double const gap = 4.0 * params.m * params.freq;
    std::vector<TableRow> rows;
    std::vector<bool> used(roots.size(), false);
    for (std::size_t n = 0; n < count; ++n) {
        double const exact = exact_eigenvalue(params, static_cast<int>(n));
        TableRow row;
        row.n     = static_cast<int>(n);
        row.exact = exact;
        std::optional<std::size_t> best;
        for (std::size_t k = 0; k < roots.size(); ++k) {
            double const d = std::abs(roots[k].lambda - exact);
            if (!used[k] && d < 0.5 * gap && (!best || d < std::abs(roots[*best].lambda - exact))) {
                best = k;
            }
        }
        if (best) {
            used[*best]   = true;
            auto const& r = roots[*best];
            row.approx    = r.lambda;
            row.abs_error = std::abs(r.lambda - exact);
            row.residual  = r.dispersion_residual;
            row.eigenfunction_residual = relative_residual(r, B);
            row.flag      = flags_of(r);
        } else {
            row.flag = "missing";
        }
        rows.push_back(row);
    }
    // roots with no closed-form partner (spurious or beyond the requested count)
    for (std::size_t k = 0; k < roots.size(); ++k) {
        if (!used[k] && roots[k].lambda <= exact_eigenvalue(params, static_cast<int>(count) - 1)) {
            TableRow row;
            row.approx   = roots[k].lambda;
            row.residual = roots[k].dispersion_residual;
            row.eigenfunction_residual = relative_residual(roots[k], B);
            row.flag     = "unmatched";
            rows.push_back(row);
        }
    }
    return rows;
}

std::filesystem::path output_dir_of(const RunConfig& cfg, const RunOptions& options)
{
    auto dir = options.output_dir.value_or(cfg.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw ConfigError("output_dir", "cannot create " + dir.string() + ": " + ec.message());
    }
    return dir;
}

void run_solve(const RunConfig& cfg, const PreparedProblem& pp, const std::filesystem::path& dir)
{
    json points = json::array();
    double const b = pp.problem.grid().b();
    for (std::size_t k = 0; k < cfg.spectral_points.size(); ++k) {
        auto const& sp = cfg.spectral_points[k];
        EvaluationOptions opts;
        opts.N_f    = pp.N_f;
        opts.N_g    = pp.N_g;
        auto sample = evaluate(pp.coeffs, sp, pp.problem, pp.dp, opts);
        if (cfg.g_via_f) {
            auto [g, gp]     = g_via_f(sample.f, sample.f_prime, sp, pp.problem);
            sample.g         = std::move(g);
            sample.g_prime   = std::move(gp);
            auto [r1, r2]    = residuals(sample.f, sample.g, sample.f_prime, sample.g_prime, sp, pp.problem);
            sample.residual1 = std::move(r1);
            sample.residual2 = std::move(r2);
        }
        std::string const name = "solution_" + std::to_string(k) + ".csv";
        write_sample_csv(dir / name, sample);
        points.push_back({{"omega1", sp.omega1},
                          {"omega2", sp.omega2},
                          {"file", name},
                          {"f_sup", number_or_null(sup_norm(sample.f, 0.0, b))},
                          {"g_sup", number_or_null(sup_norm(sample.g, 0.0, b))},
                          {"residual1_sup_to_B", number_or_null(sup_norm(sample.residual1, 0.01, pp.B))},
                          {"residual2_sup_to_B", number_or_null(sup_norm(sample.residual2, 0.01, pp.B))},
                          {"residual1_sup", number_or_null(sup_norm(sample.residual1, 0.01, b))},
                          {"residual2_sup", number_or_null(sup_norm(sample.residual2, 0.01, b))}});
    }
    json summary    = prepared_json(cfg, pp);
    summary["mode"] = "solve";
    summary["g_via_f"] = cfg.g_via_f;
    summary["spectral_points"] = points;
    write_json(dir / "summary.json", summary);
}

void run_eigs(const RunConfig& cfg, const PreparedProblem& pp, const std::filesystem::path& dir)
{
    json summary    = prepared_json(cfg, pp);
    summary["mode"] = "eigs";
    if (cfg.potential.builtin == "oscillator") {
        auto const& params = cfg.potential.oscillator;
        auto const ep      = oscillator_eigenproblem(params, pp, cfg.eigen_count, cfg.scan);
        auto const roots   = find_eigenvalues(ep);
        auto const rows    = oscillator_table(params, roots, cfg.eigen_count, pp.B);
        write_table(dir, rows);
        summary["scan"]        = {{"lambda_min", ep.lambda_min}, {"lambda_max", ep.lambda_max}, {"step", ep.scan_step}};
        summary["eigenvalues"] = table_json(rows);
    } else {
        EigenProblem ep;
        ep.coeffs     = &pp.coeffs;
        ep.problem    = &pp.problem;
        ep.dp         = &pp.dp;
        ep.B          = pp.B;
        ep.N          = pp.N_f;
        ep.lambda_min = cfg.scan.lambda_min.value_or(0.0);
        ep.lambda_max = *cfg.scan.lambda_max;
        ep.scan_step  = *cfg.scan.step;
        auto const roots = find_eigenvalues(ep);
        std::vector<TableRow> rows;
        for (auto const& r : roots) {
            TableRow row;
            row.approx   = r.lambda;
            row.residual = r.dispersion_residual;
            row.eigenfunction_residual = relative_residual(r, pp.B);
            row.flag     = flags_of(r);
            rows.push_back(row);
        }
        write_table(dir, rows);
        summary["scan"]        = {{"lambda_min", ep.lambda_min}, {"lambda_max", ep.lambda_max}, {"step", ep.scan_step}};
        summary["eigenvalues"] = table_json(rows);
    }
    write_json(dir / "summary.json", summary);
}

void run_verify(const RunConfig& cfg, const PreparedProblem& pp, const std::filesystem::path& dir)
{
    auto const& d  = *pp.diagnostics;
    auto const& ps = *pp.seeds;
    json doc       = prepared_json(cfg, pp);
    doc["mode"]    = "verify";
    doc["g0_min_modulus"]  = ps.g0_min_modulus;
    doc["g0_nonvanishing"] = ps.g0_nonvanishing;
    doc["threshold"]       = d.threshold;

    json families = json::array();
    for (int j : {1, 2}) {
        auto const& fam = pp.coeffs.family(j);
        std::size_t const Nj = j == 1 ? pp.N_g : pp.N_f;
        auto const S   = alternating_sum(pp.coeffs, j, Nj);
        auto const& Q  = j == 1 ? pp.dp.Q1 : pp.dp.Q2;
        double const c = j == 1 ? pp.coeffs.shift : 0.0;
        auto const& e  = d.e[static_cast<std::size_t>(j - 1)];
        double worst_abs = 0.0, worst_ratio = 0.0;
        for (std::size_t i = 0; i < S.size() && S.grid()[i] <= pp.B; ++i) {
            double const r     = S.grid()[i];
            double const rq    = r * (Q[i] + c * r);
            double const diff  = std::abs(S[i] - 0.5 * rq);
            double const bound = std::max(1e-10 * (1.0 + std::abs(rq)), e[i]);
            worst_abs   = std::max(worst_abs, diff);
            worst_ratio = std::max(worst_ratio, diff / bound);
        }
        json beta_sup = json::array(), gamma_sup = json::array();
        for (std::size_t n = 0; n <= pp.coeffs.N; ++n) {
            beta_sup.push_back(number_or_null(sup_norm(fam.beta[n], 0.0, pp.B)));
            if (!fam.gamma.empty()) {
                gamma_sup.push_back(number_or_null(sup_norm(fam.gamma[n], 0.0, pp.B)));
            }
        }
        json g = json::array();
        for (double x : d.global_discrepancy[static_cast<std::size_t>(j - 1)]) {
            g.push_back(number_or_null(x));
        }
        families.push_back({{"j", j},
                            {"N", Nj},
                            {"r0", d.r0[static_cast<std::size_t>(j - 1)]},
                            {"alternating_sum_max_abs", number_or_null(worst_abs)},
                            {"alternating_sum_max_ratio_to_plateau", number_or_null(worst_ratio)},
                            {"beta_sup", beta_sup},
                            {"gamma_sup", gamma_sup},
                            {"global_discrepancy", g},
                            {"first_nonfinite", fam.first_nonfinite ? json(*fam.first_nonfinite) : json(nullptr)}});
    }
    doc["families"] = families;

    // gamma-series derivatives against finite differences of the beta-series solution
    if (pp.coeffs.has_gamma()) {
        EvaluationOptions opts;
        opts.normalization = Normalization::entire;
        opts.N_f           = pp.N_f;
        opts.N_g           = pp.N_g;
        opts.r_max         = pp.B;
        auto const s   = evaluate(pp.coeffs, SpectralPoint{1.0, 1.0}, pp.problem, pp.dp, opts);
        auto const dfd = finite_difference_derivative(s.f);
        auto const dgd = finite_difference_derivative(s.g);
        auto rel = [&](const GridFunction& a, const GridFunction& b) {
            double num = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                double const r = a.grid()[i];
                if (r >= 0.1 * pp.B && r <= 0.9 * pp.B) {
                    num = std::max(num, std::abs(a[i] - b[i]));
                }
            }
            double const den = sup_norm(a, 0.1 * pp.B, 0.9 * pp.B);
            return den > 0.0 ? num / den : num;
        };
        doc["derivative_consistency"] = {{"omega", 1.0},
                                         {"f_prime_rel", number_or_null(rel(s.f_prime, dfd))},
                                         {"g_prime_rel", number_or_null(rel(s.g_prime, dgd))}};
    }
    write_json(dir / "diagnostics.json", doc);
    write_figure2(dir / "figure2.csv", pp);
}

void run_oscillator_demo(const RunConfig& cfg, const PreparedProblem& pp, const std::filesystem::path& dir)
{
    auto const& params = cfg.potential.oscillator;
    auto const ep      = oscillator_eigenproblem(params, pp, cfg.eigen_count, cfg.scan);
    auto const roots   = find_eigenvalues(ep);
    auto const rows    = oscillator_table(params, roots, cfg.eigen_count, pp.B);
    write_table(dir, rows);
    write_figure2(dir / "figure2.csv", pp);

    json states = json::array();
    for (int n : cfg.figure_states) {
        auto const cmp = compare_oscillator_state(params, n, pp);
        write_csv(dir / ("figure1_n" + std::to_string(n) + ".csv"), {"r", "F_error", "G_error", "G_via_f_error"},
                  {&cmp.F_error, &cmp.G_error, &cmp.G_via_f_error});
        states.push_back({{"n", n},
                          {"lambda", cmp.lambda},
                          {"F_sup", number_or_null(cmp.F_sup)},
                          {"G_sup", number_or_null(cmp.G_sup)},
                          {"G_via_f_sup", number_or_null(cmp.G_via_f_sup)},
                          {"g_degenerate", cmp.g_degenerate}});
    }
    json summary           = prepared_json(cfg, pp);
    summary["mode"]        = "oscillator-demo";
    summary["oscillator"]  = {{"j", params.j_total}, {"epsilon", params.epsilon}, {"m", params.m}, {"freq", params.freq}};
    summary["scan"]        = {{"lambda_min", ep.lambda_min}, {"lambda_max", ep.lambda_max}, {"step", ep.scan_step}};
    summary["eigenvalues"] = table_json(rows);
    summary["figure_states"] = states;
    write_json(dir / "summary.json", summary);
}

} // namespace

DiracProblem build_problem(const RunConfig& cfg)
{
    Grid const grid(cfg.b, cfg.n_points);
    auto const& spec = cfg.potential;
    if (spec.csv) {
        try {
            return potential_from_csv(*spec.csv, cfg.kappa, grid);
        } catch (const Error& e) {
            throw ConfigError("potential.csv", e.what());
        }
    }
    if (spec.builtin == "zero") {
        return zero_potential_problem(cfg.kappa, grid);
    }
    if (spec.builtin == "oscillator") {
        return oscillator_problem(spec.oscillator, grid);
    }
    if (spec.builtin == "polynomial") {
        auto const& c = spec.coefficients;
        auto p        = GridFunction::sample(grid, [&c](double r) {
            double s = 0.0;
            for (auto it = c.rbegin(); it != c.rend(); ++it) {
                s = s * r + *it;
            }
            return s;
        });
        auto dp = GridFunction::sample(grid, [&c](double r) {
            double s = 0.0;
            for (std::size_t k = c.size(); k-- > 1;) {
                s = s * r + static_cast<double>(k) * c[k];
            }
            return s;
        });
        return DiracProblem(cfg.kappa, std::move(p), std::move(dp));
    }
    throw ConfigError("potential.builtin", "unknown builtin \"" + spec.builtin + "\"");
}

PreparedProblem prepare(const RunConfig& cfg)
{
    auto problem = build_problem(cfg);
    auto dp      = derive_potentials(problem);
    auto ps      = spectral_shift(problem, dp, particular_solutions(problem, dp));
    auto coeffs  = compute_coefficients(ps, dp, problem.kappa, cfg.budget_N);
    auto diag    = select_truncation(coeffs, dp, cfg.budget_N, cfg.threshold);
    double const B = diag.B_selected;
    std::size_t const N_f = cfg.N.value_or(diag.N_selected_per_j[1]);
    std::size_t const N_g = cfg.N.value_or(diag.N_selected_per_j[0]);
    return PreparedProblem{std::move(problem), std::move(dp), std::move(coeffs), B, N_f, N_g, std::move(diag),
                           std::move(ps)};
}

void write_coefficient_dump(const std::filesystem::path& dir, const PreparedProblem& pp)
{
    std::filesystem::create_directories(dir);
    auto const& c = pp.coeffs;
    write_family(dir / "beta1.csv", c.families[0].beta, "beta_1_");
    write_family(dir / "beta2.csv", c.families[1].beta, "beta_2_");
    if (c.has_gamma()) {
        write_family(dir / "gamma1.csv", c.families[0].gamma, "gamma_1_");
        write_family(dir / "gamma2.csv", c.families[1].gamma, "gamma_2_");
    }
    auto const& grid = c.grid();
    // %.17g-equivalent: nlohmann prints doubles in shortest round-trip form
    write_json(dir / "metadata.json", {{"kappa", c.kappa},
                                       {"shift", c.shift},
                                       {"N", c.N},
                                       {"B", pp.B},
                                       {"N_f", pp.N_f},
                                       {"N_g", pp.N_g},
                                       {"b", grid.b()},
                                       {"n_points", grid.size()},
                                       {"gamma", c.has_gamma()}});
}

PreparedProblem load_coefficient_dump(const std::filesystem::path& dir, const RunConfig& cfg)
{
    json meta;
    {
        std::ifstream is(dir / "metadata.json");
        if (!is) {
            throw ConfigError("coefficient_cache", "cannot read " + (dir / "metadata.json").string());
        }
        try {
            is >> meta;
        } catch (const json::exception& e) {
            throw ConfigError("coefficient_cache", std::string("invalid metadata.json: ") + e.what());
        }
    }
    auto problem = build_problem(cfg);
    auto const& grid = problem.grid();
    try {
        if (std::abs(meta.at("kappa").get<double>() - problem.kappa) > 1e-12 ||
            meta.at("n_points").get<std::size_t>() != grid.size() || meta.at("b").get<double>() != grid.b()) {
            throw ConfigError("coefficient_cache", "kappa, b or n_points differ from the configuration");
        }
        NsbfCoefficients coeffs;
        coeffs.kappa = problem.kappa;
        coeffs.N     = meta.at("N").get<std::size_t>();
        coeffs.shift = meta.at("shift").get<double>();
        coeffs.families[0] = read_family(dir / "beta1.csv", grid, coeffs.N);
        coeffs.families[1] = read_family(dir / "beta2.csv", grid, coeffs.N);
        coeffs.families[0].ell = problem.kappa;
        coeffs.families[1].ell = problem.kappa - 1.0;
        if (meta.value("gamma", false)) {
            coeffs.families[0].gamma = read_gamma(dir / "gamma1.csv", grid, coeffs.N);
            coeffs.families[1].gamma = read_gamma(dir / "gamma2.csv", grid, coeffs.N);
        }
        double const B        = meta.at("B").get<double>();
        std::size_t const N_f = cfg.N.value_or(meta.at("N_f").get<std::size_t>());
        std::size_t const N_g = cfg.N.value_or(meta.at("N_g").get<std::size_t>());
        if (N_f > coeffs.N || N_g > coeffs.N) {
            throw ConfigError("N", "exceeds the cached coefficient count");
        }
        auto dp = derive_potentials(problem);
        return PreparedProblem{std::move(problem), std::move(dp), std::move(coeffs), B, N_f, N_g, std::nullopt,
                               std::nullopt};
    } catch (const json::exception& e) {
        throw ConfigError("coefficient_cache", std::string("incomplete metadata.json: ") + e.what());
    }
}

OscillatorComparison compare_oscillator_state(const OscillatorParams& params, int n, const PreparedProblem& pp)
{
    auto const& grid = pp.problem.grid();
    double const B   = pp.B;
    OscillatorComparison out{n, exact_eigenvalue(params, n), GridFunction(grid), GridFunction(grid),
                             GridFunction(grid), 0.0, 0.0, 0.0, false};
    SpectralPoint const sp = oscillator_coupling(params, out.lambda);
    EvaluationOptions opts;
    opts.normalization = Normalization::entire;
    opts.N_f           = pp.N_f;
    opts.N_g           = pp.N_g;
    opts.r_max         = B;
    auto const s       = evaluate(pp.coeffs, sp, pp.problem, pp.dp, opts);
    auto const [gv, gvp] = g_via_f(s.f, s.f_prime, sp, pp.problem);
    auto const [F, G]    = to_oscillator_components(params, s.f, s.g);
    auto const [Fv, Gv]  = to_oscillator_components(params, s.f, gv);
    auto const ex        = exact_eigenfunction(params, n, grid);
    out.g_degenerate     = ex.g_degenerate;

    // Regular solutions agree up to one constant. It is fitted on the component
    // computed from f (F for eps = -1, G for eps = +1) over [0, B/2], away from
    // the truncation tail near B.
    auto const& fit_num   = params.epsilon == -1 ? F : G;
    auto const& fit_exact = params.epsilon == -1 ? ex.F : ex.G;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < grid.size() && grid[i] <= 0.5 * B; ++i) {
        sxy += fit_num[i] * fit_exact[i];
        sxx += fit_num[i] * fit_num[i];
    }
    if (!(sxx > 0.0)) {
        throw EvaluationError("oscillator comparison: the NSBF solution vanishes on [0, B/2]");
    }
    double const a     = sxy / sxx;
    double const Fnorm = sup_norm(ex.F, 0.0, B);
    double const Gnorm = ex.g_degenerate ? Fnorm : sup_norm(ex.G, 0.0, B);
    for (std::size_t i = 0; i < grid.size() && grid[i] <= B; ++i) {
        out.F_error[i] = (a * F[i] - ex.F[i]) / Fnorm;
        // eps = +1: the g-route affects F, eps = -1: G
        out.G_error[i]       = (a * G[i] - ex.G[i]) / Gnorm;
        out.G_via_f_error[i] = params.epsilon == -1 ? (a * Gv[i] - ex.G[i]) / Gnorm : (a * Fv[i] - ex.F[i]) / Fnorm;
    }
    out.F_sup       = sup_norm(out.F_error, 0.0, B);
    out.G_sup       = sup_norm(out.G_error, 0.0, B);
    out.G_via_f_sup = sup_norm(out.G_via_f_error, 0.0, B);
    return out;
}

EigenProblem oscillator_eigenproblem(const OscillatorParams& params, const PreparedProblem& pp, std::size_t count,
                                     const ScanSpec& scan)
{
    if (count < 1) {
        throw DomainError("eigenvalue count must be >= 1");
    }
    double const gap = 4.0 * params.m * params.freq;
    EigenProblem ep;
    ep.coeffs    = &pp.coeffs;
    ep.problem   = &pp.problem;
    ep.dp        = &pp.dp;
    ep.B         = pp.B;
    ep.N         = pp.N_f;
    ep.scan_step = scan.step.value_or(0.25 * gap);
    // start below the lowest level (which may be exactly 0) but above -m^2, where E is complex
    ep.lambda_min = scan.lambda_min.value_or(exact_eigenvalue(params, 0) -
                                             0.5 * std::min(ep.scan_step, params.m * params.m));
    ep.lambda_max = scan.lambda_max.value_or(exact_eigenvalue(params, static_cast<int>(count) - 1) + 0.5 * gap);
    ep.coupling   = [params](double lambda) { return oscillator_coupling(params, lambda); };
    return ep;
}

std::filesystem::path run_pipeline(const RunConfig& cfg, const RunOptions& options)
{
    auto const dir = output_dir_of(cfg, options);
    bool const cached = cfg.coefficient_cache && cfg.mode == RunMode::eigs;
    auto const pp     = cached ? load_coefficient_dump(*cfg.coefficient_cache, cfg) : prepare(cfg);
    if (options.coefficient_dump) {
        write_coefficient_dump(dir / "coefficients", pp);
    }
    switch (cfg.mode) {
    case RunMode::solve:
        run_solve(cfg, pp, dir);
        break;
    case RunMode::eigs:
        run_eigs(cfg, pp, dir);
        break;
    case RunMode::verify:
        run_verify(cfg, pp, dir);
        break;
    case RunMode::oscillator_demo:
        run_oscillator_demo(cfg, pp, dir);
        break;
    }
    return dir;
}

} // namespace nsbf
