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

/** \file pipeline.hpp
 *
 *  \brief End-to-end runs: particular solutions, coefficients, truncation, evaluation.
 *
 *  Every mode writes its artifacts into the output directory:
 *
 *      solve            solution_<k>.csv per spectral point, summary.json
 *      eigs             eigs.csv, eigs.txt, summary.json
 *      verify           diagnostics.json, figure2.csv
 *      oscillator-demo  eigs.csv, eigs.txt, figure1_n<n>.csv, figure2.csv, summary.json
 */

#ifndef NSBF_PIPELINE_HPP
#define NSBF_PIPELINE_HPP

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nsbf/config.hpp"
#include "nsbf/nsbf_coefficients.hpp"
#include "nsbf/oscillator.hpp"
#include "nsbf/potential.hpp"
#include "nsbf/solution.hpp"
#include "nsbf/spectral.hpp"

namespace nsbf {

/// Problem, coefficients and truncation choice shared by every mode.
struct PreparedProblem
{
    DiracProblem problem;
    DerivedPotentials dp;
    NsbfCoefficients coeffs;
    double B = 0.0;        ///< on the grid
    std::size_t N_f = 0;   ///< terms of the f-series (family j = 2)
    std::size_t N_g = 0;   ///< terms of the g-series (family j = 1)
    std::optional<TruncationDiagnostics> diagnostics; ///< absent when loaded from a cache
    std::optional<ParticularSolutions> seeds;         ///< absent when loaded from a cache
};

/// The potential of `cfg` sampled on its grid. CSV read failures become ConfigError.
DiracProblem build_problem(const RunConfig& cfg);

/// Steps 1 and 2: seeds (with the shift fallback), beta and gamma up to budget_N,
/// truncation diagnostics and B, N. `cfg.N` overrides both series lengths.
PreparedProblem prepare(const RunConfig& cfg);

/// Coefficient dump: beta1.csv, beta2.csv (columns r, beta_{j,0..N}), gamma1.csv and
/// gamma2.csv when present, and metadata.json with kappa, shift, N, B, N_f, N_g, b, n_points.
void write_coefficient_dump(const std::filesystem::path& dir, const PreparedProblem& prepared);

/// Reads a dump written by write_coefficient_dump. The problem and its derived
/// potentials come from `cfg`, whose kappa and grid must match the metadata.
PreparedProblem load_coefficient_dump(const std::filesystem::path& dir, const RunConfig& cfg);

/// One NSBF eigenfunction set against the closed form, both rescaled by the
/// least-squares factor on F over [0, B]. Errors are relative to max |F_exact| on [0, B].
struct OscillatorComparison
{
    int n = 0;
    double lambda = 0.0;
    GridFunction F_error;     ///< scaled F - F_exact
    GridFunction G_error;     ///< from the g-series
    GridFunction G_via_f_error;
    double F_sup       = 0.0; ///< over [0, B]
    double G_sup       = 0.0;
    double G_via_f_sup = 0.0;
    bool g_degenerate  = false;
};

/// Evaluates the NSBF solution at the exact eigenvalue of state n and compares it
/// with the exact eigenfunction.
OscillatorComparison compare_oscillator_state(const OscillatorParams& params, int n, const PreparedProblem& prepared);

/// Oscillator eigenproblem over the range covering `count` closed-form eigenvalues.
EigenProblem oscillator_eigenproblem(const OscillatorParams& params, const PreparedProblem& prepared,
                                     std::size_t count, const ScanSpec& scan = {});

struct RunOptions
{
    std::optional<std::filesystem::path> output_dir; ///< overrides cfg.output_dir
    bool coefficient_dump = false;                   ///< also write <out>/coefficients/
};

/// Runs the configured mode and returns the path of the directory written to.
/// Throws ConfigError for bad input and other nsbf::Error types on numerical failure.
std::filesystem::path run_pipeline(const RunConfig& cfg, const RunOptions& options = {});

} // namespace nsbf

#endif
