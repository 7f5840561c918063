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

/** \file potential.hpp
 *
 *  \brief Problem data of the radial Dirac system and the omega = 0 particular solutions.
 *
 *  The system is
 *
 *      f' - (kappa/r) f + p f = omega1 g,
 *      g' + (kappa/r) g - p g = -omega2 f,
 *
 *  and its components solve perturbed Bessel equations with potentials
 *  q1 = p' - 2 kappa p / r + p^2 (for g) and q2 = -p' - 2 kappa p / r + p^2 (for f).
 */

#ifndef NSBF_POTENTIAL_HPP
#define NSBF_POTENTIAL_HPP

#include <array>
#include <complex>
#include <filesystem>
#include <optional>

#include "nsbf/grid.hpp"

namespace nsbf {

/// Potential p sampled on a grid together with kappa and the coupling constants.
struct DiracProblem
{
    /// Validates kappa >= 1/2, omega2 != 0 and matching grids. Without `p_prime`
    /// the derivative is taken by fourth order finite differences.
    DiracProblem(double kappa, GridFunction p, std::optional<GridFunction> p_prime = std::nullopt,
                 double omega1 = 1.0, double omega2 = 1.0);

    const Grid& grid() const noexcept
    {
        return p.grid();
    }
    double omega_squared() const noexcept
    {
        return omega1 * omega2;
    }

    double kappa;
    GridFunction p;
    GridFunction p_prime;
    double omega1;
    double omega2;
};

/// p == 0 on [0, b].
DiracProblem zero_potential_problem(double kappa, const Grid& grid);

/// Potential read from a CSV file with columns r, p[, p'] and resampled onto `grid`
/// by local six-point interpolation. Without a grid the file's own r column must
/// be uniform starting at 0 and is used directly.
DiracProblem potential_from_csv(const std::filesystem::path& path, double kappa,
                                std::optional<Grid> grid = std::nullopt);

struct DerivedPotentials
{
    GridFunction antiderivative; ///< P(r) = integral_0^r p
    GridFunction q1;
    GridFunction q2;
    GridFunction Q1; ///< integral_0^r q1
    GridFunction Q2; ///< integral_0^r q2
    /// p(0) != 0: q_j has a 1/r singularity at the origin and Q_j a logarithmic one.
    /// The r = 0 slots then hold the signed infinite limit.
    bool singular_at_origin = false;
};

DerivedPotentials derive_potentials(const DiracProblem& problem);

/// Scaled seed data in extended precision. The coefficient recursion cancels
/// many orders of magnitude, so double rounding noise here would dominate its error.
struct WideSeed
{
    WideGridFunction w;           ///< u / r^(ell+1)
    WideGridFunction w_minus_one; ///< u / r^(ell+1) - 1
    WideGridFunction s;           ///< u' / r^ell
    WideGridFunction sigma;       ///< u' / r^(ell+1) - (ell+1)/r
};

/// Regular solution u of -u'' + (ell(ell+1)/r^2 + q) u = 0 with u ~ r^(ell+1),
/// stored together with the cancellation-free reduced forms used near r = 0.
struct SeedFunction
{
    double ell = 0.0;
    GridFunction u;
    GridFunction u_prime;
    GridFunction reduced;            ///< u / r^(ell+1), 1 at the origin
    GridFunction reduced_derivative; ///< u' / r^ell, ell + 1 at the origin
    GridFunction reduced_minus_one;  ///< u / r^(ell+1) - 1, accurate where it is small
    GridFunction scaled_derivative;  ///< u' / r^(ell+1) - (ell+1)/r
    GridFunction Q;                  ///< integral of q
    WideSeed wide;
};

struct ParticularSolutions
{
    GridFunction f0;
    GridFunction g0;
    GridFunction f0_prime;
    GridFunction g0_prime;
    GridFunction f0_reduced_minus_one;
    GridFunction g0_reduced_minus_one;
    GridFunction f0_scaled_derivative;
    GridFunction g0_scaled_derivative;
    /// min over (0, b] of |w|, w = g0 / r^(kappa+1), each value taken relative to max |w| on [0, r].
    double g0_min_modulus = 0.0;
    bool g0_nonvanishing  = false;
    /// Constant c added to q1 when g0 was replaced by a solution of the shifted equation.
    double shift_applied = 0.0;
    /// Extended-precision seeds for j = 1 (g0) and j = 2 (f0); an empty slot is
    /// filled from the double data by `seed`.
    std::array<std::optional<WideSeed>, 2> wide;

    /// u_1 := g0 (ell = kappa, j = 1) and u_2 := f0 (ell = kappa - 1, j = 2).
    SeedFunction seed(int j, double kappa, const DerivedPotentials& dp) const;
};

/// Relative minimum modulus below which a particular solution counts as vanishing.
inline constexpr double default_vanishing_threshold = 1e-8;

/// f0 = r^kappa exp(-P), g0 = (2 kappa + 1) r^(-kappa) exp(P) integral_0^r t^(2 kappa) exp(-2 P) dt
/// and their derivatives.
ParticularSolutions particular_solutions(const DiracProblem& problem, const DerivedPotentials& dp,
                                         double vanishing_threshold = default_vanishing_threshold);

/// Replaces g0 by the regular solution of -u'' + (kappa(kappa+1)/r^2 + q1 + c) u = 0,
/// integrated directly from its series start at the origin.
ParticularSolutions apply_spectral_shift(const DiracProblem& problem, const DerivedPotentials& dp,
                                         const ParticularSolutions& ps, double c,
                                         double vanishing_threshold = default_vanishing_threshold);

/// Returns `ps` unchanged when g0 is non-vanishing. Otherwise tries c = 1, -1, 2, -2, 4, -4, ...
/// up to 2^20 and returns the first shifted set whose g0 passes the minimum-modulus scan.
/// Throws UnsupportedPotential when the ladder is exhausted.
ParticularSolutions spectral_shift(const DiracProblem& problem, const DerivedPotentials& dp,
                                   const ParticularSolutions& ps,
                                   double vanishing_threshold = default_vanishing_threshold);

/// Complex-valued potentials: diagnostics of the non-vanishing assumption on g0 only.
struct ComplexSeedCheck
{
    ComplexGridFunction g0;    ///< regular solution (shifted when shift != 0)
    double min_modulus = 0.0;  ///< as ParticularSolutions::g0_min_modulus
    bool nonvanishing  = false;
    double shift       = 0.0;
};

/// g0 from the closed-form construction for complex p.
ComplexSeedCheck check_nonvanishing_seed(double kappa, const ComplexGridFunction& p,
                                    double vanishing_threshold = default_vanishing_threshold);

/// Shift search for complex p, each candidate verified by direct ODE integration.
ComplexSeedCheck find_spectral_shift(double kappa, const ComplexGridFunction& p,
                                     const ComplexGridFunction& p_prime,
                                     double vanishing_threshold = default_vanishing_threshold);

} // namespace nsbf

#endif
