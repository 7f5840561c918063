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

/** \file solution.hpp
 *
 *  \brief Truncated NSBF regular solution of the radial Dirac system.
 *
 *  With z = omega^2 r^2 and the reduced Bessel function jhat_nu(z) = j_nu(omega r) / (omega r)^nu,
 *
 *      f = -(omega^(kappa+1) / omega2) r^kappa [jhat_{kappa-1}(z) + sum_n beta_{2,n} z^n jhat_{kappa+2n}(z)],
 *      g =   omega^(kappa+1) r^(kappa+1) [jhat_kappa(z) + sum_n beta_{1,n} z^n jhat_{kappa+2n+1}(z)].
 *
 *  The brackets are entire in omega^2, so the evaluator works with them directly and
 *  applies the prefactor last. Dropping the common factor omega^(kappa+1) / omega2
 *  gives the "entire" normalisation (fhat, ghat) = (f, g) omega2 / omega^(kappa+1),
 *  which stays finite for omega^2 <= 0 and for omega2 = 0.
 */

#ifndef NSBF_SOLUTION_HPP
#define NSBF_SOLUTION_HPP

#include <cstddef>
#include <filesystem>
#include <optional>
#include <utility>

#include "nsbf/nsbf_coefficients.hpp"
#include "nsbf/potential.hpp"

namespace nsbf {

/// Coupling constants of one spectral point, omega^2 = omega1 omega2.
struct SpectralPoint
{
    double omega1 = 1.0;
    double omega2 = 1.0;

    double omega_squared() const noexcept
    {
        return omega1 * omega2;
    }
    /// Principal root; DomainError when omega^2 < 0.
    double omega() const;

    static SpectralPoint symmetric(double omega)
    {
        return {omega, omega};
    }
};

enum class Normalization
{
    standard, ///< f ~ -(omega^(kappa+1)/omega2) d(kappa-1) r^kappa at the origin
    entire,   ///< f ~ -d(kappa-1) r^kappa, g ~ omega2 d(kappa) r^(kappa+1)
};

struct SolutionSample
{
    GridFunction f;
    GridFunction g;
    GridFunction f_prime;
    GridFunction g_prime;
    GridFunction residual1;
    GridFunction residual2;
};

struct EvaluationOptions
{
    Normalization normalization = Normalization::standard;
    /// Series lengths; nullopt uses every coefficient available.
    std::optional<std::size_t> N_f;
    std::optional<std::size_t> N_g;
    /// Evaluate only on r <= r_max (the rest of the sample is left at zero).
    std::optional<double> r_max;
};

/// f_{kappa,N}, g_{kappa,N} and their derivatives from the beta and gamma series, plus residuals.
///
/// Derivatives need gamma; without it they are taken by finite differences of f and g.
/// Throws DomainError for omega2 = 0 or omega^2 < 0 in the standard normalisation.
SolutionSample evaluate(const NsbfCoefficients& coeffs, const SpectralPoint& sp, const DiracProblem& problem,
                        const DerivedPotentials& dp, const EvaluationOptions& options = {});

/// g and g' recovered from f and f' alone through the first and second equations.
/// Throws DomainError for omega1 = 0.
std::pair<GridFunction, GridFunction> g_via_f(const GridFunction& f, const GridFunction& f_prime,
                                              const SpectralPoint& sp, const DiracProblem& problem);

/// residual1 = f' - (kappa/r) f + p f - omega1 g, residual2 = g' + (kappa/r) g - p g + omega2 f,
/// both zero at r = 0.
std::pair<GridFunction, GridFunction> residuals(const GridFunction& f, const GridFunction& g,
                                                const GridFunction& f_prime, const GridFunction& g_prime,
                                                const SpectralPoint& sp, const DiracProblem& problem);

/// Bracket of f in the entire normalisation at a single grid index, divided by r^kappa:
/// jhat_{kappa-1}(z) + sum_{n<=N} beta_{2,n}(r) z^n jhat_{kappa+2n}(z), z = lambda r^2.
/// Its zeros in lambda = omega^2 are those of f_{kappa,N}(r).
double reduced_f_bracket(const NsbfCoefficients& coeffs, std::size_t index, double lambda, std::size_t N);

/// Sup norm of `f` over grid points with r in [r_lo, r_hi].
double sup_norm(const GridFunction& f, double r_lo, double r_hi);

/// CSV with columns r, f, g, residual1, residual2.
void write_sample_csv(const std::filesystem::path& path, const SolutionSample& sample);

} // namespace nsbf

#endif
