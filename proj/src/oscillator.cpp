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

#include "nsbf/oscillator.hpp"

#include <cmath>

#include "nsbf/error.hpp"
#include "nsbf/special_functions.hpp"

namespace nsbf {

void OscillatorParams::validate() const
{
    double const twice_l = 2.0 * j_total + epsilon;
    if (!(j_total >= 0.5) || std::abs(j_total - 0.5 - std::round(j_total - 0.5)) > 1e-12) {
        throw ConfigError("j_total", "must be a half-integer >= 1/2");
    }
    if (epsilon != 1 && epsilon != -1) {
        throw ConfigError("epsilon", "must be +1 or -1");
    }
    if (!(m > 0.0)) {
        throw ConfigError("m", "must be positive");
    }
    if (!(freq > 0.0)) {
        throw ConfigError("freq", "must be positive");
    }
    if (twice_l < 0.0) {
        throw ConfigError("j_total", "orbital number l = j + eps/2 must be >= 0");
    }
}

int OscillatorParams::l() const
{
    return static_cast<int>(std::lround(j_total + 0.5 * epsilon));
}

double exact_eigenvalue(const OscillatorParams& params, int n, EnergyBranch branch)
{
    params.validate();
    if (n < 0) {
        throw DomainError("oscillator quantum number n must be >= 0");
    }
    double const N     = 2.0 * n + params.l();
    double const shift = branch == EnergyBranch::positive ? 1.0 : 2.0;
    return params.m * params.freq * (2.0 * (N + shift) + params.epsilon * (2.0 * params.j_total + 1.0));
}

std::vector<double> exact_eigenvalues(const OscillatorParams& params, int count, EnergyBranch branch)
{
    if (count < 1) {
        throw DomainError("eigenvalue count must be >= 1");
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int n = 0; n < count; ++n) {
        out.push_back(exact_eigenvalue(params, n, branch));
    }
    return out;
}

OscillatorPair exact_eigenfunction(const OscillatorParams& params, int n, const Grid& grid)
{
    double const lambda = exact_eigenvalue(params, n);
    double const mw     = params.m * params.freq;
    double const root   = std::sqrt(mw);
    double const E      = std::sqrt(params.m * params.m + lambda);
    int const l         = params.l();
    int const eps       = params.epsilon;
    int const g_degree  = n + (eps - 1) / 2;

    OscillatorPair out{GridFunction(grid), GridFunction(grid), g_degree < 0};
    double const c = eps == -1 ? (g_degree < 0 ? 0.0 : -(E - params.m) / (2.0 * n * root))
                               : (E - params.m) / (2.0 * root);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double const x     = grid[i] * root;
        double const gauss = std::exp(-0.5 * x * x);
        out.F[i] = std::pow(x, l + 1) * gauss * laguerre(n, l + 0.5, x * x);
        if (g_degree >= 0) {
            out.G[i] = c * std::pow(x, l + 1 - eps) * gauss * laguerre(g_degree, l - eps + 0.5, x * x);
        }
    }
    return out;
}

DiracProblem oscillator_problem(const OscillatorParams& params, const Grid& grid)
{
    params.validate();
    double const slope = -params.epsilon * params.m * params.freq;
    auto p             = GridFunction::sample(grid, [slope](double r) { return slope * r; });
    auto dp            = GridFunction::sample(grid, [slope](double) { return slope; });
    SpectralPoint const sp = oscillator_coupling(params, 2.0 * params.m + 1.0);
    return DiracProblem(params.kappa(), std::move(p), std::move(dp), sp.omega1, sp.omega2);
}

SpectralPoint oscillator_coupling(const OscillatorParams& params, double lambda)
{
    double const m2 = params.m * params.m;
    if (!(lambda > -m2)) {
        throw DomainError("E^2 - m^2 must exceed -m^2");
    }
    double const E = std::sqrt(m2 + lambda);
    // omega2 = E - m cancels for small lambda; lambda / (E + m) does not.
    double const small = lambda / (E + params.m);
    double const large = E + params.m;
    return params.epsilon == -1 ? SpectralPoint{large, small} : SpectralPoint{small, large};
}

std::pair<GridFunction, GridFunction> to_oscillator_components(const OscillatorParams& params,
                                                               const GridFunction& f, const GridFunction& g)
{
    if (params.epsilon == -1) {
        return {f, g};
    }
    auto F = combine([](double, double v) { return -v; }, g);
    return {std::move(F), f};
}

std::pair<GridFunction, GridFunction> oscillator_residuals(const OscillatorParams& params, double energy,
                                                           const GridFunction& F, const GridFunction& G)
{
    require_same_grid(F.grid(), G.grid());
    auto const Fp    = finite_difference_derivative(F);
    auto const Gp    = finite_difference_derivative(G);
    auto const& grid = F.grid();
    double const K   = params.kappa_eff();
    double const mw  = params.m * params.freq;
    GridFunction r1(grid), r2(grid);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        double const r    = grid[i];
        double const coef = K / r + mw * r;
        r1[i]             = -Gp[i] + coef * G[i] - (energy - params.m) * F[i];
        r2[i]             = Fp[i] + coef * F[i] - (energy + params.m) * G[i];
    }
    r1.set_origin_limit(0.0);
    r2.set_origin_limit(0.0);
    return {std::move(r1), std::move(r2)};
}

} // namespace nsbf
