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

// Smooth test potentials with p(0) = 0 and their exact derivatives.

#ifndef NSBF_TESTS_TEST_POTENTIALS_HPP
#define NSBF_TESTS_TEST_POTENTIALS_HPP

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "nsbf/oscillator.hpp"
#include "nsbf/potential.hpp"

namespace testing_support {

struct SmoothPotential
{
    std::string name;
    std::function<double(double)> p;
    std::function<double(double)> dp;

    nsbf::DiracProblem on(const nsbf::Grid& grid, double kappa, double omega1 = 1.0, double omega2 = 1.0) const
    {
        return nsbf::DiracProblem(kappa, nsbf::GridFunction::sample(grid, p), nsbf::GridFunction::sample(grid, dp),
                                  omega1, omega2);
    }
};

/// p = a1 r + a2 r^2 + a3 r^3 + c sin(k r), coefficients drawn from a fixed seed.
inline std::vector<SmoothPotential> random_potentials(std::size_t count, unsigned seed = 20260418u)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_real_distribution<double> freq(0.5, 3.0);
    std::vector<SmoothPotential> out;
    for (std::size_t k = 0; k < count; ++k) {
        double const a1 = coef(rng), a2 = 0.5 * coef(rng), a3 = 0.2 * coef(rng), c = coef(rng), w = freq(rng);
        out.push_back({"random_" + std::to_string(k),
                       [=](double r) { return r * (a1 + r * (a2 + r * a3)) + c * std::sin(w * r); },
                       [=](double r) { return a1 + r * (2.0 * a2 + 3.0 * a3 * r) + c * w * std::cos(w * r); }});
    }
    return out;
}

inline SmoothPotential sine_over_one_plus_r()
{
    return {"sin(r)/(1+r)", [](double r) { return std::sin(r) / (1.0 + r); },
            [](double r) { return std::cos(r) / (1.0 + r) - std::sin(r) / ((1.0 + r) * (1.0 + r)); }};
}

} // namespace testing_support

#endif
