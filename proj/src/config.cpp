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

#include "nsbf/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "nsbf/error.hpp"

namespace nsbf {

namespace {

using json = nlohmann::json;

std::string join(const std::string& prefix, const std::string& key)
{
    return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown(const json& obj, const std::string& prefix, const std::set<std::string>& allowed)
{
    if (!obj.is_object()) {
        throw ConfigError(prefix, "must be a JSON object");
    }
    for (auto const& [key, value] : obj.items()) {
        if (!allowed.count(key)) {
            throw ConfigError(join(prefix, key), "unknown key");
        }
    }
}

double number(const json& obj, const std::string& key, const std::string& prefix)
{
    auto const& v = obj.at(key);
    if (!v.is_number()) {
        throw ConfigError(join(prefix, key), "must be a number");
    }
    double const x = v.get<double>();
    if (!std::isfinite(x)) {
        throw ConfigError(join(prefix, key), "must be finite");
    }
    return x;
}

std::optional<double> optional_number(const json& obj, const std::string& key, const std::string& prefix)
{
    if (!obj.contains(key)) {
        return std::nullopt;
    }
    return number(obj, key, prefix);
}

std::size_t count(const json& obj, const std::string& key, const std::string& prefix, std::size_t minimum)
{
    auto const& v = obj.at(key);
    if (!v.is_number_integer() && !v.is_number_unsigned()) {
        throw ConfigError(join(prefix, key), "must be an integer");
    }
    auto const x = v.get<long long>();
    if (x < static_cast<long long>(minimum)) {
        throw ConfigError(join(prefix, key), "must be >= " + std::to_string(minimum));
    }
    return static_cast<std::size_t>(x);
}

RunMode parse_mode(const json& v)
{
    if (!v.is_string()) {
        throw ConfigError("mode", "must be a string");
    }
    auto const s = v.get<std::string>();
    if (s == "solve") {
        return RunMode::solve;
    }
    if (s == "eigs") {
        return RunMode::eigs;
    }
    if (s == "verify") {
        return RunMode::verify;
    }
    if (s == "oscillator-demo") {
        return RunMode::oscillator_demo;
    }
    throw ConfigError("mode", "must be one of solve, eigs, verify, oscillator-demo (got \"" + s + "\")");
}

std::filesystem::path resolve(const std::filesystem::path& p, const std::filesystem::path& base)
{
    return p.is_absolute() || base.empty() ? p : base / p;
}

PotentialSpec parse_potential(const json& v, const std::filesystem::path& base)
{
    std::string const prefix = "potential";
    reject_unknown(v, prefix, {"builtin", "csv", "j", "epsilon", "m", "freq", "coefficients"});
    PotentialSpec spec;
    if (v.contains("builtin") == v.contains("csv")) {
        throw ConfigError(prefix, "needs exactly one of \"builtin\" and \"csv\"");
    }
    if (v.contains("csv")) {
        if (!v["csv"].is_string()) {
            throw ConfigError("potential.csv", "must be a path string");
        }
        for (auto const* key : {"j", "epsilon", "m", "freq", "coefficients"}) {
            if (v.contains(key)) {
                throw ConfigError(join(prefix, key), "only applies to builtin potentials");
            }
        }
        spec.csv = resolve(v["csv"].get<std::string>(), base);
        return spec;
    }
    if (!v["builtin"].is_string()) {
        throw ConfigError("potential.builtin", "must be a string");
    }
    spec.builtin = v["builtin"].get<std::string>();
    auto forbid  = [&](std::initializer_list<const char*> keys) {
        for (auto const* key : keys) {
            if (v.contains(key)) {
                throw ConfigError(join(prefix, key), "does not apply to builtin \"" + spec.builtin + "\"");
            }
        }
    };
    if (spec.builtin == "zero") {
        forbid({"j", "epsilon", "m", "freq", "coefficients"});
    } else if (spec.builtin == "oscillator") {
        forbid({"coefficients"});
        auto& o = spec.oscillator;
        o.j_total = optional_number(v, "j", prefix).value_or(o.j_total);
        o.m       = optional_number(v, "m", prefix).value_or(o.m);
        o.freq    = optional_number(v, "freq", prefix).value_or(o.freq);
        if (v.contains("epsilon")) {
            auto const& e = v["epsilon"];
            if (!e.is_number_integer()) {
                throw ConfigError("potential.epsilon", "must be +1 or -1");
            }
            o.epsilon = e.get<int>();
        }
        try {
            o.validate();
        } catch (const ConfigError& e) {
            std::string const field = e.field() == "j_total" ? "j" : e.field();
            throw ConfigError(join(prefix, field), std::string(e.what()).substr(e.field().size() + 2));
        }
    } else if (spec.builtin == "polynomial") {
        forbid({"j", "epsilon", "m", "freq"});
        if (!v.contains("coefficients") || !v["coefficients"].is_array() || v["coefficients"].empty()) {
            throw ConfigError("potential.coefficients", "must be a nonempty array of numbers");
        }
        for (auto const& c : v["coefficients"]) {
            if (!c.is_number()) {
                throw ConfigError("potential.coefficients", "must be a nonempty array of numbers");
            }
            spec.coefficients.push_back(c.get<double>());
        }
    } else {
        throw ConfigError("potential.builtin", "must be one of zero, oscillator, polynomial (got \"" +
                                                   spec.builtin + "\")");
    }
    return spec;
}

} // namespace

std::string_view to_string(RunMode mode)
{
    switch (mode) {
    case RunMode::solve:
        return "solve";
    case RunMode::eigs:
        return "eigs";
    case RunMode::verify:
        return "verify";
    case RunMode::oscillator_demo:
        return "oscillator-demo";
    }
    return "unknown";
}

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir)
{
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("invalid JSON: ") + e.what());
    }
    reject_unknown(doc, "",
                   {"mode", "potential", "kappa", "b", "n_points", "budget_N", "threshold", "N", "scan",
                    "spectral_points", "g_via_f", "eigen_count", "figure_states", "output_dir",
                    "coefficient_cache"});
    RunConfig cfg;
    if (!doc.contains("mode")) {
        throw ConfigError("mode", "is required");
    }
    cfg.mode = parse_mode(doc["mode"]);
    if (!doc.contains("potential")) {
        throw ConfigError("potential", "is required");
    }
    cfg.potential         = parse_potential(doc["potential"], base_dir);
    bool const oscillator = cfg.potential.builtin == "oscillator";
    if (cfg.mode == RunMode::oscillator_demo && !oscillator) {
        throw ConfigError("potential.builtin", "mode oscillator-demo needs the oscillator builtin");
    }

    if (doc.contains("kappa")) {
        cfg.kappa = number(doc, "kappa", "");
        if (oscillator && std::abs(cfg.kappa - cfg.potential.oscillator.kappa()) > 1e-12) {
            throw ConfigError("kappa", "must equal j + 1/2 for the oscillator");
        }
    } else if (oscillator) {
        cfg.kappa = cfg.potential.oscillator.kappa();
    } else {
        throw ConfigError("kappa", "is required");
    }
    if (!(cfg.kappa >= 0.5)) {
        throw ConfigError("kappa", "must be >= 1/2");
    }

    if (doc.contains("b")) {
        cfg.b = number(doc, "b", "");
    } else if (oscillator) {
        cfg.b = 20.0;
    } else {
        throw ConfigError("b", "is required");
    }
    if (!(cfg.b > 0.0)) {
        throw ConfigError("b", "must be positive");
    }
    if (doc.contains("n_points")) {
        // six-point stencils need at least seven grid points
        cfg.n_points = count(doc, "n_points", "", 7);
    }
    if (doc.contains("budget_N")) {
        cfg.budget_N = count(doc, "budget_N", "", 1);
    }
    if (doc.contains("threshold")) {
        cfg.threshold = number(doc, "threshold", "");
        if (!(cfg.threshold > 0.0)) {
            throw ConfigError("threshold", "must be positive");
        }
    }
    if (doc.contains("N")) {
        cfg.N = count(doc, "N", "", 0);
        if (*cfg.N > cfg.budget_N) {
            throw ConfigError("N", "must not exceed budget_N");
        }
    }
    if (doc.contains("scan")) {
        auto const& s = doc["scan"];
        reject_unknown(s, "scan", {"lambda_min", "lambda_max", "step"});
        cfg.scan.lambda_min = optional_number(s, "lambda_min", "scan");
        cfg.scan.lambda_max = optional_number(s, "lambda_max", "scan");
        cfg.scan.step       = optional_number(s, "step", "scan");
        if (cfg.scan.step && !(*cfg.scan.step > 0.0)) {
            throw ConfigError("scan.step", "must be positive");
        }
        if (cfg.scan.lambda_min && cfg.scan.lambda_max && !(*cfg.scan.lambda_max > *cfg.scan.lambda_min)) {
            throw ConfigError("scan.lambda_max", "must exceed scan.lambda_min");
        }
    }
    if (cfg.mode == RunMode::eigs && !oscillator && (!cfg.scan.lambda_max || !cfg.scan.step)) {
        throw ConfigError("scan", "mode eigs needs scan.lambda_max and scan.step");
    }
    if (doc.contains("spectral_points")) {
        auto const& sp = doc["spectral_points"];
        if (!sp.is_array()) {
            throw ConfigError("spectral_points", "must be an array");
        }
        for (std::size_t k = 0; k < sp.size(); ++k) {
            std::string const prefix = "spectral_points[" + std::to_string(k) + "]";
            reject_unknown(sp[k], prefix, {"omega1", "omega2"});
            if (!sp[k].contains("omega1") || !sp[k].contains("omega2")) {
                throw ConfigError(prefix, "needs omega1 and omega2");
            }
            SpectralPoint p{number(sp[k], "omega1", prefix), number(sp[k], "omega2", prefix)};
            if (p.omega2 == 0.0) {
                throw ConfigError(join(prefix, "omega2"), "must be nonzero");
            }
            if (p.omega_squared() < 0.0) {
                throw ConfigError(prefix, "omega1 omega2 must be >= 0");
            }
            cfg.spectral_points.push_back(p);
        }
    }
    if (cfg.mode == RunMode::solve && cfg.spectral_points.empty()) {
        throw ConfigError("spectral_points", "mode solve needs at least one spectral point");
    }
    if (doc.contains("g_via_f")) {
        if (!doc["g_via_f"].is_boolean()) {
            throw ConfigError("g_via_f", "must be true or false");
        }
        cfg.g_via_f = doc["g_via_f"].get<bool>();
    }
    if (doc.contains("eigen_count")) {
        cfg.eigen_count = count(doc, "eigen_count", "", 1);
    }
    if (doc.contains("figure_states")) {
        auto const& fs = doc["figure_states"];
        if (!fs.is_array()) {
            throw ConfigError("figure_states", "must be an array of integers >= 0");
        }
        cfg.figure_states.clear();
        for (auto const& v : fs) {
            if (!v.is_number_integer() || v.get<long long>() < 0) {
                throw ConfigError("figure_states", "must be an array of integers >= 0");
            }
            cfg.figure_states.push_back(v.get<int>());
        }
    }
    if (doc.contains("output_dir")) {
        if (!doc["output_dir"].is_string()) {
            throw ConfigError("output_dir", "must be a path string");
        }
        cfg.output_dir = doc["output_dir"].get<std::string>();
    }
    if (doc.contains("coefficient_cache")) {
        if (!doc["coefficient_cache"].is_string()) {
            throw ConfigError("coefficient_cache", "must be a path string");
        }
        if (cfg.mode != RunMode::eigs) {
            throw ConfigError("coefficient_cache", "only mode eigs reuses cached coefficients");
        }
        cfg.coefficient_cache = resolve(doc["coefficient_cache"].get<std::string>(), base_dir);
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is) {
        throw ConfigError("", "cannot read config file " + path.string());
    }
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str(), path.parent_path());
}

} // namespace nsbf
