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

/** \file oscillator.hpp
 *
 *  \brief Closed-form Dirac oscillator, the reference problem for the solver.
 *
 *  The large and small components F, G satisfy
 *
 *      -G' + (eps (j + 1/2) / r + m w r) G = (E - m) F,
 *       F' + (eps (j + 1/2) / r + m w r) F = (E + m) G.
 *
 *  In terms of the system f' - (kappa/r) f + p f = omega1 g, g' + (kappa/r) g - p g = -omega2 f
 *  this is kappa = j + 1/2, p = -eps m w r and
 *
 *      eps = -1:  f = F,  g = G,  omega1 = E + m, omega2 = E - m,
 *      eps = +1:  f = G,  g = -F, omega1 = E - m, omega2 = E + m.
 *
 *  In both cases omega1 omega2 = E^2 - m^2.
 */

#ifndef NSBF_OSCILLATOR_HPP
#define NSBF_OSCILLATOR_HPP

#include <utility>
#include <vector>

#include "nsbf/potential.hpp"
#include "nsbf/solution.hpp"

namespace nsbf {

struct OscillatorParams
{
    double j_total = 2.5; ///< half-integer >= 1/2
    int epsilon    = -1;  ///< +1 or -1
    double m       = 1.0; ///< mass
    double freq    = 1.0; ///< oscillator frequency, not the spectral omega

    /// Throws ConfigError on a violated invariant.
    void validate() const;
    int l() const; ///< orbital number j + eps/2
    double kappa() const
    {
        return j_total + 0.5;
    }
    double kappa_eff() const
    {
        return epsilon * (j_total + 0.5);
    }
};

enum class EnergyBranch
{
    positive,
    negative,
};

/// E^2 - m^2 for n = 0 .. count-1, with N = 2n + l.
std::vector<double> exact_eigenvalues(const OscillatorParams& params, int count,
                                      EnergyBranch branch = EnergyBranch::positive);

double exact_eigenvalue(const OscillatorParams& params, int n, EnergyBranch branch = EnergyBranch::positive);

struct OscillatorPair
{
    GridFunction F;
    GridFunction G;
    /// eps = -1, n = 0: the G Laguerre degree would be -1 and G vanishes identically.
    bool g_degenerate = false;
};

/// F = (r sqrt(m w))^(l+1) exp(-m w r^2 / 2) L_n^(l+1/2)(m w r^2) (unit amplitude) and the
/// matching positive-energy G. G carries the relative constant that makes the pair solve
/// the system: -(E-m)/(2n sqrt(m w)) for eps = -1, (E-m)/(2 sqrt(m w)) for eps = +1.
OscillatorPair exact_eigenfunction(const OscillatorParams& params, int n, const Grid& grid);

/// The oscillator as a DiracProblem on `grid` with the omega1, omega2 of energy E.
/// The default E = m + 1 only serves to make the coupling constants nonzero.
DiracProblem oscillator_problem(const OscillatorParams& params, const Grid& grid);

/// (omega1, omega2) for lambda = E^2 - m^2 on the positive-energy branch.
SpectralPoint oscillator_coupling(const OscillatorParams& params, double lambda);

/// (F, G) from a solution (f, g) of the reduced system.
std::pair<GridFunction, GridFunction> to_oscillator_components(const OscillatorParams& params,
                                                               const GridFunction& f, const GridFunction& g);

/// Residuals of the two oscillator equations for (F, G) at energy E, with F' and G'
/// by finite differences. Used to validate the closed forms.
std::pair<GridFunction, GridFunction> oscillator_residuals(const OscillatorParams& params, double energy,
                                                           const GridFunction& F, const GridFunction& G);

} // namespace nsbf

#endif
