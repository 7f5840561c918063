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


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nsbf/config.hpp"
#include "nsbf/error.hpp"
#include "nsbf/grid.hpp"
#include "nsbf/pipeline.hpp"

using namespace nsbf;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    auto const dir = fs::temp_directory_path() / ("nsbf_pipeline_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

// Second column of eigs.csv; the flag column is text, so read_csv_columns does not apply.
std::vector<double> approximate_column(const fs::path& p)
{
    std::ifstream is(p);
    std::string line;
    std::getline(is, line);
    std::vector<double> out;
    while (std::getline(is, line)) {
        auto const a = line.find(',');
        out.push_back(std::stod(line.substr(a + 1, line.find(',', a + 1) - a - 1)));
    }
    return out;
}

void write_file(const fs::path& p, const std::string& text)
{
    std::ofstream(p) << text;
}

constexpr const char* solve_config = R"({"mode": "solve", "potential": {"builtin": "polynomial",
    "coefficients": [0, 0.8, -0.3]}, "kappa": 1.5, "b": 3, "n_points": 3001, "budget_N": 40,
    "spectral_points": [{"omega1": 2, "omega2": 2}, {"omega1": 1, "omega2": 9}], "g_via_f": true})";

constexpr const char* eigs_config = R"({"mode": "eigs", "potential": {"builtin": "polynomial",
    "coefficients": [0, 1]}, "kappa": 2, "b": 8, "n_points": 8001, "budget_N": 40,
    "scan": {"lambda_min": 0.5, "lambda_max": 30, "step": 0.5}})";

int run_cli(const std::string& args)
{
    std::string const cmd = std::string(NSBF_DIRAC_CLI) + " " + args + " > /dev/null 2>&1";
    int const status      = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_CASE("repeated runs are byte-identical, whatever the thread count")
{
    auto const cfg = parse_config(solve_config);
    auto const a   = scratch("det_a");
    auto const b   = scratch("det_b");
    setenv("NSBF_DIRAC_THREADS", "1", 1);
    run_pipeline(cfg, {a, false});
    setenv("NSBF_DIRAC_THREADS", "4", 1);
    run_pipeline(cfg, {b, false});
    unsetenv("NSBF_DIRAC_THREADS");
    for (auto const* name : {"solution_0.csv", "solution_1.csv", "summary.json"}) {
        REQUIRE(fs::exists(a / name));
        CHECK(slurp(a / name) == slurp(b / name));
    }
    auto const cols = read_csv_columns(a / "solution_0.csv");
    CHECK(cols.size() >= 5);
    CHECK(cols[0].size() == 3001);
}

TEST_CASE("eigenvalues from a coefficient dump match the fresh run")
{
    auto const fresh = scratch("fresh");
    run_pipeline(parse_config(eigs_config), {fresh, true});
    REQUIRE(fs::exists(fresh / "coefficients" / "metadata.json"));

    auto const cached_dir = scratch("cached");
    auto doc              = nlohmann::json::parse(eigs_config);
    doc["coefficient_cache"] = (fresh / "coefficients").string();
    run_pipeline(parse_config(doc.dump()), {cached_dir, false});

    auto const x = approximate_column(fresh / "eigs.csv");
    auto const y = approximate_column(cached_dir / "eigs.csv");
    REQUIRE(x.size() == y.size());
    REQUIRE(x.size() >= 3);
    for (std::size_t k = 0; k < x.size(); ++k) {
        CHECK(std::abs(x[k] - y[k]) <= 1e-13 * (1.0 + std::abs(x[k])));
    }
}

TEST_CASE("a cache from a different grid is rejected")
{
    auto const fresh = scratch("grid_a");
    run_pipeline(parse_config(eigs_config), {fresh, true});
    auto doc                 = nlohmann::json::parse(eigs_config);
    doc["n_points"]          = 4001;
    doc["coefficient_cache"] = (fresh / "coefficients").string();
    CHECK_THROWS_AS(run_pipeline(parse_config(doc.dump()), {scratch("grid_b"), false}), ConfigError);
}

TEST_CASE("verify writes its diagnostics")
{
    auto const dir = scratch("verify");
    run_pipeline(parse_config(R"({"mode": "verify", "potential": {"builtin": "zero"}, "kappa": 1, "b": 3.14,
                                  "n_points": 2001, "budget_N": 10})"),
                 {dir, false});
    auto const diag = nlohmann::json::parse(slurp(dir / "diagnostics.json"));
    CHECK(diag.at("g0_nonvanishing").get<bool>());
    CHECK(fs::exists(dir / "figure2.csv"));
}

TEST_CASE("CLI exit codes and error reports")
{
    auto const dir = scratch("cli");
    write_file(dir / "ok.json", R"({"potential": {"builtin": "zero"}, "kappa": 1, "b": 3.14, "n_points": 1001,
                                    "budget_N": 5})");
    write_file(dir / "no_kappa.json", R"({"mode": "verify", "potential": {"builtin": "zero"}, "b": 3})");
    write_file(dir / "unknown.json", R"({"mode": "verify", "potential": {"builtin": "zero"}, "kappa": 1, "b": 3,
                                         "extra": 1})");
    write_file(dir / "degenerate.json", R"({"mode": "verify", "potential": {"builtin": "polynomial",
        "coefficients": [0, 1]}, "kappa": 1, "b": 3, "n_points": 1001, "budget_N": 5, "threshold": 1e-300})");

    CHECK(run_cli("verify --config " + (dir / "ok.json").string() + " --out " + (dir / "ok").string()) == 0);
    CHECK(fs::exists(dir / "ok" / "diagnostics.json"));

    CHECK(run_cli("verify --config " + (dir / "no_kappa.json").string() + " --out " + (dir / "e1").string()) == 2);
    auto const err = nlohmann::json::parse(slurp(dir / "e1" / "error.json"));
    CHECK(err.at("field") == "kappa");
    CHECK(err.at("exit_code") == 2);

    CHECK(run_cli("verify --config " + (dir / "unknown.json").string() + " --out " + (dir / "e2").string()) == 2);
    CHECK(nlohmann::json::parse(slurp(dir / "e2" / "error.json")).at("field") == "extra");

    // the mode argument must agree with the file
    CHECK(run_cli("solve --config " + (dir / "no_kappa.json").string() + " --out " + (dir / "e3").string()) == 2);
    CHECK(run_cli("fit --config " + (dir / "ok.json").string()) == 2);
    CHECK(run_cli("verify --config " + (dir / "missing.json").string()) == 2);

    CHECK(run_cli("verify --config " + (dir / "degenerate.json").string() + " --out " + (dir / "e4").string()) == 3);
    CHECK(nlohmann::json::parse(slurp(dir / "e4" / "error.json")).at("kind") == "numeric");
}
