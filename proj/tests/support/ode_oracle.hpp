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

// Direct integration of
//
//     f' = (kappa/r) f - p f + omega1 g,
//     g' = -(kappa/r) g + p g - omega2 f
//
// with an adaptive Dormand-Prince pair, started at r0 from the leading terms of the
// regular solution with the standard normalisation:
//
//     f ~ A r^kappa exp(-P) (1 - z / (2 (2 kappa + 1))),
//     g ~ -omega2 A r^(kappa+1) / (2 kappa + 1) (1 - z / (2 (2 kappa + 3))),
//     A = -(omega^(kappa+1) / omega2) d(kappa - 1),  z = omega^2 r^2,
//
// the free-Bessel series to first order in z. The neglected corrections are
// O(p r0) relative in g and O(z^2, p omega^2 r0^3) elsewhere.

#ifndef NSBF_TESTS_ODE_ORACLE_HPP
#define NSBF_TESTS_ODE_ORACLE_HPP

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/numeric/odeint.hpp>

namespace oracle {

struct DiracSolution
{
    std::vector<double> r;
    std::vector<double> f;
    std::vector<double> g;
};

inline double d_constant(double nu)
{
    return std::sqrt(M_PI) / (std::pow(2.0, nu + 1.0) * boost::math::tgamma(nu + 1.5));
}

/// Solution at the requested radii (ascending, all > r0).
inline DiracSolution integrate_dirac(const std::function<double(double)>& p, double kappa, double omega1,
                                     double omega2, const std::vector<double>& radii, double r0 = 1e-6,
                                     double tol = 1e-14)
{
    namespace odeint = boost::numeric::odeint;
    using state      = std::array<double, 2>;
    double const omega = std::sqrt(omega1 * omega2);
    double const A     = -std::pow(omega, kappa + 1.0) / omega2 * d_constant(kappa - 1.0);
    // P(r0) by the midpoint rule is exact to O(r0^3).
    double const P0 = r0 * p(0.5 * r0);
    double const z  = omega1 * omega2 * r0 * r0;
    state x{A * std::pow(r0, kappa) * std::exp(-P0) * (1.0 - z / (2.0 * (2.0 * kappa + 1.0))),
            -omega2 * A * std::pow(r0, kappa + 1.0) / (2.0 * kappa + 1.0) * (1.0 - z / (2.0 * (2.0 * kappa + 3.0)))};

    auto rhs = [&](const state& s, state& ds, double r) {
        double const pr = p(r);
        ds[0]           = (kappa / r - pr) * s[0] + omega1 * s[1];
        ds[1]           = (pr - kappa / r) * s[1] - omega2 * s[0];
    };
    std::vector<double> times{r0};
    times.insert(times.end(), radii.begin(), radii.end());
    DiracSolution out;
    auto observe = [&](const state& s, double r) {
        if (r > r0) {
            out.r.push_back(r);
            out.f.push_back(s[0]);
            out.g.push_back(s[1]);
        }
    };
    // purely relative control: the solution starts at O(r0^kappa)
    auto stepper = odeint::make_dense_output(0.0, tol, odeint::runge_kutta_dopri5<state>());
    odeint::integrate_times(stepper, rhs, x, times.begin(), times.end(), r0 * 1e-3, observe);
    return out;
}

} // namespace oracle

#endif
