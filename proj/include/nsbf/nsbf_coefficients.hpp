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

/** \file nsbf_coefficients.hpp
 *
 *  \brief Coefficients of the Neumann series of Bessel functions for both solution components.
 *
 *  Family j = 1 expands g (seed u1 = g0, ell = kappa), family j = 2 expands f
 *  (seed u2 = f0, ell = kappa - 1). With u the seed and Q the integral of its potential,
 *
 *      beta_0  = (2 ell + 3) (u / r^(ell+1) - 1)
 *      eta_n   = int_0^r (t u' + (2n + ell) u) t^(2n+ell-1) beta_{n-1} dt
 *      theta_n = int_0^r (eta_n - t^(2n+ell) beta_{n-1} u) / u^2 dt
 *      beta_n  = -(4n+2ell+3)/(4n+2ell-1) [beta_{n-1} + 2(4n+2ell+1) u theta_n / r^(2n+ell+1)]
 *
 *      gamma_0 = (2 ell + 3) (u' / r^(ell+1) - (ell+1)/r - Q/2)
 *      gamma_n = -(4n+2ell+3)/(4n+2ell-1) [gamma_{n-1} + (4n+2ell+1)
 *                (2 u' theta_n / r^(2n+ell+1) + 2 eta_n / (u r^(2n+ell+1)) - beta_{n-1} / r)]
 *
 *  All coefficients vanish at r = 0. None depends on omega.
 */

#ifndef NSBF_NSBF_COEFFICIENTS_HPP
#define NSBF_NSBF_COEFFICIENTS_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "nsbf/potential.hpp"

namespace nsbf {

struct CoefficientFamily
{
    double ell = 0.0;
    std::vector<GridFunction> beta;  ///< n = 0..N
    std::vector<GridFunction> gamma; ///< n = 0..N, empty when not requested
    /// Scaled theta_n / r^(2n) and eta_n / r^(2n+2ell+1) for n = 1..N when retained
    /// (index n - 1), else only n = N. The scaling keeps both O(beta) and finite.
    std::vector<GridFunction> theta;
    std::vector<GridFunction> eta;
    /// Smallest n whose beta_n (or gamma_n) has a non-finite value somewhere on the grid.
    std::optional<std::size_t> first_nonfinite;
};

struct NsbfCoefficients
{
    double kappa = 0.0;
    std::size_t N = 0;
    /// Shift c of the g-family seed (0 unless the non-vanishing fallback was used).
    double shift = 0.0;
    std::array<CoefficientFamily, 2> families; ///< [0] is j = 1, [1] is j = 2

    const Grid& grid() const
    {
        return families[1].beta.front().grid();
    }
    const CoefficientFamily& family(int j) const;
    const GridFunction& beta(int j, std::size_t n) const;
    const GridFunction& gamma(int j, std::size_t n) const;
    bool has_gamma() const noexcept
    {
        return !families[0].gamma.empty() && !families[1].gamma.empty();
    }
};

struct CoefficientOptions
{
    bool with_gamma   = true;
    bool keep_scratch = false; ///< retain theta_n, eta_n for every n
};

/// beta (and gamma) for j = 1, 2 and n = 0..N. The two families are computed concurrently.
NsbfCoefficients compute_coefficients(const ParticularSolutions& ps, const DerivedPotentials& dp, double kappa,
                                      std::size_t N, CoefficientOptions options = {});

/// beta only.
NsbfCoefficients compute_beta(const ParticularSolutions& ps, const DerivedPotentials& dp, double kappa,
                              std::size_t N);

/// Adds gamma to coefficients produced by compute_beta (recomputes the families; beta is unchanged).
void compute_gamma(const ParticularSolutions& ps, const DerivedPotentials& dp, NsbfCoefficients& coeffs);

/// One family by itself; `keep_scratch` as in CoefficientOptions.
CoefficientFamily compute_family(const SeedFunction& seed, std::size_t N, bool with_gamma, bool keep_scratch);

/// S_N(r) = sum_{n<=N} (-1)^n beta_{j,n}(r), which tends to r Q_j(r) / 2.
GridFunction alternating_sum(const NsbfCoefficients& coeffs, int j, std::size_t N);

struct TruncationDiagnostics
{
    /// e_j(r) = min over N <= budget of |S_N(r) - r Q_j(r) / 2|, non-finite partial sums ignored.
    std::array<GridFunction, 2> e;
    /// Index of the first grid point from r_1 on where e_j >= threshold |r Q_j|, per j.
    std::array<std::size_t, 2> first_failure{};
    std::array<double, 2> r0{};
    double B_selected = 0.0;
    /// Per j: the index where the running minimum of max_{r < B} |S_N - r Q_j / 2| stalls.
    std::array<std::size_t, 2> N_selected_per_j{};
    /// max_{r < B} |S_N - r Q_j / 2| for N = 0..budget, per j.
    std::array<std::vector<double>, 2> global_discrepancy;
    double threshold = 0.01;
    int driving_family = 0; ///< 0: both families, else the j whose r0 fixes B
};

/// Chooses B as the grid point at or below 0.99 r0, with r0 the smaller of the two families'
/// values (driving_family = 0) or that of family j = driving_family, and N per family.
/// r0 is the first grid point r >= r_1 with e_j(r) >= threshold |r Q_j(r)| (b if none).
/// N: starting from the largest global discrepancy, the running minimum stops at the best index
/// once 5 consecutive indices fail to improve on it by a factor 0.9.
/// Throws DegenerateTruncation when the criterion fails already at r_1.
TruncationDiagnostics select_truncation(const NsbfCoefficients& coeffs, const DerivedPotentials& dp,
                                        std::size_t budget_N, double threshold = 0.01,
                                        int driving_family = 0);

} // namespace nsbf

#endif
