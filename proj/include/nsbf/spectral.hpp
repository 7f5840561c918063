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

/** \file spectral.hpp
 *
 *  \brief Eigenvalues of the Dirac system truncated to [0, B] with f(B) = 0, by shooting.
 *
 *  The NSBF coefficients do not depend on the spectral parameter, so the
 *  boundary value f_{kappa,N}(B) is a cheap function of lambda = omega^2 once
 *  the coefficients exist. Its zeros do not depend on how omega^2 is split
 *  into omega1 omega2; the split only fixes the scale of g.
 */

#ifndef NSBF_SPECTRAL_HPP
#define NSBF_SPECTRAL_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "nsbf/solution.hpp"

namespace nsbf {

/// Maps lambda = omega^2 to the coupling constants (omega1, omega2), omega1 omega2 = lambda.
using CouplingMap = std::function<SpectralPoint(double lambda)>;

/// omega1 = omega2 = sqrt(lambda) for lambda >= 0, omega1 = -omega2 = sqrt(-lambda) otherwise.
SpectralPoint symmetric_coupling(double lambda);

struct EigenProblem
{
    const NsbfCoefficients* coeffs = nullptr;
    const DiracProblem* problem    = nullptr;
    const DerivedPotentials* dp    = nullptr;
    double B                       = 0.0; ///< snapped down to the grid
    std::size_t N                  = 0;   ///< terms of the f-series (and of the g-series for eigenfunctions)
    double lambda_min              = 0.0;
    double lambda_max              = 0.0;
    double scan_step               = 0.25;
    CouplingMap coupling           = symmetric_coupling;
    bool with_eigenfunctions       = true;
    /// Flag a root as truncation sensitive when dropping the last term moves it
    /// by more than this times (1 + |lambda|).
    double sensitivity_tolerance = 1e-6;
};

struct EigenResult
{
    double lambda = 0.0;              ///< omega^2; E^2 - m^2 for the oscillator
    double dispersion_residual = 0.0; ///< |f_{kappa,N}(B)| in the entire normalisation, over B^kappa
    int iterations             = 0;
    /// |lambda_N - lambda_{N-1}|, the shift from dropping the last series term (inf when
    /// the N-1 problem has no root near lambda).
    double truncation_shift   = 0.0;
    bool low_confidence       = false; ///< the bracket lost its sign structure at roundoff level
    bool truncation_sensitive = false;
    double residual1_sup      = 0.0; ///< over [0.01, B], entire normalisation
    double residual2_sup      = 0.0;
    std::optional<SolutionSample> eigenfunction; ///< entire normalisation
};

/// f_{kappa,N}(B) at lambda in the standard normalisation; DomainError where that
/// normalisation is undefined (lambda < 0 or omega2 = 0).
double dispersion(const EigenProblem& ep, double lambda);

/// f_{kappa,N}(B) in the entire normalisation, divided by -B^kappa. Entire in lambda,
/// with the same zeros as `dispersion`.
double reduced_dispersion(const EigenProblem& ep, double lambda);

/// Scan [lambda_min, lambda_max] with `scan_step`, bisect every sign change to
/// |d lambda| <= 1e-13 (1 + |lambda|), polish by secant steps. Sorted ascending.
/// An empty result is not an error.
std::vector<EigenResult> find_eigenvalues(const EigenProblem& ep);

} // namespace nsbf

#endif
