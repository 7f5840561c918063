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

/** \file config.hpp
 *
 *  \brief JSON run configuration of the nsbf-dirac pipeline.
 *
 *  Example:
 *
 *      {"mode": "verify", "potential": {"builtin": "zero"}, "kappa": 1, "b": 3.14}
 *
 *  Unknown keys are rejected at every level. Errors are ConfigError with the
 *  offending field in dotted form ("potential.builtin", "scan.step").
 */

#ifndef NSBF_CONFIG_HPP
#define NSBF_CONFIG_HPP

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nsbf/oscillator.hpp"
#include "nsbf/solution.hpp"

namespace nsbf {

enum class RunMode
{
    solve,
    eigs,
    verify,
    oscillator_demo,
};

std::string_view to_string(RunMode mode);

struct PotentialSpec
{
    /// "zero", "oscillator" or "polynomial"; empty when `csv` is used.
    std::string builtin;
    std::optional<std::filesystem::path> csv;
    OscillatorParams oscillator;     ///< builtin "oscillator"
    std::vector<double> coefficients; ///< builtin "polynomial": p(r) = sum_k c_k r^k
};

struct ScanSpec
{
    std::optional<double> lambda_min;
    std::optional<double> lambda_max;
    std::optional<double> step;
};

struct RunConfig
{
    RunMode mode = RunMode::verify;
    PotentialSpec potential;
    double kappa         = 0.0;
    double b             = 0.0;
    std::size_t n_points = 100001;
    std::size_t budget_N = 100;
    double threshold     = 0.01;
    /// Overrides the selected series length for both families.
    std::optional<std::size_t> N;
    ScanSpec scan;
    std::vector<SpectralPoint> spectral_points; ///< mode solve
    /// Recover g from f and f' instead of summing the g-series (mode solve).
    bool g_via_f = false;
    /// Eigenvalues compared against the closed form in oscillator-demo.
    std::size_t eigen_count = 12;
    /// Oscillator states n written as eigenfunction error tables in oscillator-demo.
    std::vector<int> figure_states{1, 10, 125};
    std::filesystem::path output_dir = ".";
    /// Directory of a coefficient dump to reuse in mode eigs instead of recomputing.
    std::optional<std::filesystem::path> coefficient_cache;
};

/// Parses and validates a JSON document. Relative CSV and cache paths are taken
/// relative to `base_dir`.
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});

RunConfig load_config(const std::filesystem::path& path);

} // namespace nsbf

#endif
