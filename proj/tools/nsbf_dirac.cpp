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

// nsbf-dirac <mode> --config <file> [--out <dir>] [--coeff-dump]
//
// Exit codes: 0 success, 2 configuration or input error, 3 numerical failure.
// Failures print a JSON report on stderr and, when the output directory is
// writable, into <out>/error.json.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nsbf/config.hpp"
#include "nsbf/error.hpp"
#include "nsbf/pipeline.hpp"

namespace {

using json = nlohmann::json;

constexpr int exit_config  = 2;
constexpr int exit_numeric = 3;

int report(const std::optional<std::filesystem::path>& out, int code, const std::string& kind,
           const std::string& field, const std::string& message)
{
    json doc{{"status", "error"}, {"exit_code", code}, {"kind", kind}, {"message", message}};
    if (!field.empty()) {
        doc["field"] = field;
    }
    std::cerr << doc.dump() << '\n';
    if (out) {
        std::error_code ec;
        std::filesystem::create_directories(*out, ec);
        std::ofstream os(*out / "error.json");
        if (os) {
            os << doc.dump(2) << '\n';
        }
    }
    return code;
}

// The mode on the command line fills in a missing "mode" key and must agree with a present one.
std::string with_mode(const std::string& text, const std::string& mode)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw nsbf::ConfigError("", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw nsbf::ConfigError("", "the configuration must be a JSON object");
    }
    if (!doc.contains("mode")) {
        doc["mode"] = mode;
    } else if (doc["mode"] != mode) {
        throw nsbf::ConfigError("mode", "the command line asks for " + mode + " but the configuration says " +
                                            doc["mode"].dump());
    }
    return doc.dump();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"NSBF solver for the radial Dirac system"};
    std::string mode;
    std::filesystem::path config_path;
    std::optional<std::filesystem::path> out;
    bool coeff_dump = false;
    app.add_option("mode", mode, "solve, eigs, verify or oscillator-demo")
        ->required()
        ->check(CLI::IsMember({"solve", "eigs", "verify", "oscillator-demo"}));
    app.add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    app.add_option("--out", out, "output directory (overrides output_dir)");
    app.add_flag("--coeff-dump", coeff_dump, "also write the coefficients to <out>/coefficients/");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return report(std::nullopt, exit_config, "usage", "", e.what());
    }

    try {
        std::ifstream is(config_path);
        if (!is) {
            throw nsbf::ConfigError("", "cannot read " + config_path.string());
        }
        std::ostringstream ss;
        ss << is.rdbuf();
        auto const cfg = nsbf::parse_config(with_mode(ss.str(), mode), config_path.parent_path());
        if (!out) {
            out = cfg.output_dir;
        }
        auto const dir = nsbf::run_pipeline(cfg, {out, coeff_dump});
        std::cout << json{{"status", "ok"}, {"mode", mode}, {"output_dir", dir.string()}}.dump() << '\n';
        if (cfg.mode == nsbf::RunMode::eigs || cfg.mode == nsbf::RunMode::oscillator_demo) {
            std::ifstream table(dir / "eigs.txt");
            std::cout << table.rdbuf();
        }
        return 0;
    } catch (const nsbf::ConfigError& e) {
        return report(out, exit_config, "config", e.field(), e.what());
    } catch (const nsbf::Error& e) {
        return report(out, exit_numeric, "numeric", "", e.what());
    } catch (const std::exception& e) {
        return report(out, exit_numeric, "internal", "", e.what());
    }
}
