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


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nsbf/error.hpp"
#include "nsbf/nsbf_coefficients.hpp"
#include "nsbf/oscillator.hpp"
#include "nsbf/potential.hpp"
#include "nsbf/spectral.hpp"

using namespace nsbf;

namespace {

struct Prepared
{
    DiracProblem problem;
    DerivedPotentials dp;
    NsbfCoefficients coeffs;
    TruncationDiagnostics diag;

    EigenProblem eigenproblem(double B, double lo, double hi, double step) const
    {
        EigenProblem ep;
        ep.coeffs     = &coeffs;
        ep.problem    = &problem;
        ep.dp         = &dp;
        ep.B          = B;
        ep.N          = diag.N_selected_per_j[1];
        ep.lambda_min = lo;
        ep.lambda_max = hi;
        ep.scan_step  = step;
        return ep;
    }
};

Prepared prepare(const DiracProblem& pr, std::size_t budget)
{
    auto dp = derive_potentials(pr);
    auto ps = spectral_shift(pr, dp, particular_solutions(pr, dp));
    auto c  = compute_coefficients(ps, dp, pr.kappa, budget);
    auto d  = select_truncation(c, dp, budget);
    return {pr, std::move(dp), std::move(c), std::move(d)};
}

// eps = -1, j = 5/2 on [0, 20]: exact eigenvalues 0, 4, 8, ...
const Prepared& oscillator()
{
    static Prepared const pp = [] {
        OscillatorParams const params{2.5, -1, 1.0, 1.0};
        Grid const grid(20.0, 40001);
        return prepare(oscillator_problem(params, grid), 60);
    }();
    return pp;
}

} // namespace

TEST_CASE("zero potential, kappa = 1, B = pi: omega = 1, 2, 3")
{
    Grid const grid(std::numbers::pi, 20001);
    auto const pp    = prepare(zero_potential_problem(1.0, grid), 10);
    auto const roots = find_eigenvalues(pp.eigenproblem(std::numbers::pi, 0.5, 10.0, 0.25));
    REQUIRE(roots.size() == 3);
    for (int k = 0; k < 3; ++k) {
        double const omega = std::sqrt(roots[k].lambda);
        CHECK(std::abs(omega - (k + 1.0)) <= 1e-12);
        CHECK_FALSE(roots[k].low_confidence);
        CHECK(roots[k].eigenfunction.has_value());
    }
}

TEST_CASE("dispersion and its reduced form share their zeros")
{
    Grid const grid(std::numbers::pi, 2001);
    auto const pp = prepare(zero_potential_problem(1.0, grid), 10);
    auto const ep = pp.eigenproblem(std::numbers::pi, 0.5, 10.0, 0.25);
    for (double lambda : {0.7, 2.0, 5.5}) {
        // f(B) = -sin(omega B), reduced: sin(omega B) / (omega B)
        double const w = std::sqrt(lambda);
        CHECK(dispersion(ep, lambda) == doctest::Approx(-std::sin(w * std::numbers::pi)).epsilon(1e-12));
        CHECK(reduced_dispersion(ep, lambda) ==
              doctest::Approx(std::sin(w * std::numbers::pi) / (w * std::numbers::pi)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(dispersion(ep, -1.0), DomainError);
    CHECK(reduced_dispersion(ep, -1.0) > 0.0);
}

TEST_CASE("an empty range is not an error")
{
    Grid const grid(std::numbers::pi, 2001);
    auto const pp = prepare(zero_potential_problem(1.0, grid), 10);
    CHECK(find_eigenvalues(pp.eigenproblem(std::numbers::pi, 1.2, 3.8, 0.25)).empty());
    CHECK_THROWS_AS(find_eigenvalues(pp.eigenproblem(std::numbers::pi, 2.0, 1.0, 0.25)), DomainError);
    CHECK_THROWS_AS(find_eigenvalues(pp.eigenproblem(4.0, 0.5, 2.0, 0.25)), DomainError);
}

TEST_CASE("oscillator: first eigenvalues and their spacing")
{
    auto const& pp = oscillator();
    double const B = pp.diag.B_selected;
    CHECK(B > 8.5);
    CHECK(B < 9.5);
    auto const roots = find_eigenvalues(pp.eigenproblem(B, -0.5, 26.0, 1.0));
    REQUIRE(roots.size() == 7);
    for (int k = 0; k < 7; ++k) {
        CHECK(std::abs(roots[k].lambda - 4.0 * k) <= 1e-6);
        CHECK_FALSE(roots[k].truncation_sensitive);
    }
    for (int k = 1; k < 7; ++k) {
        CHECK(roots[k].lambda - roots[k - 1].lambda == doctest::Approx(4.0).epsilon(1e-5));
    }
}

TEST_CASE("oscillator: the bracket between eigenvalues stays away from zero")
{
    auto const& pp = oscillator();
    auto const ep  = pp.eigenproblem(pp.diag.B_selected, -0.5, 26.0, 1.0);
    for (int k = 0; k < 6; ++k) {
        double const mid   = 4.0 * k + 2.0;
        double const left  = reduced_dispersion(ep, 4.0 * k + 0.5);
        double const right = reduced_dispersion(ep, 4.0 * k + 3.5);
        CHECK(left * right > 0.0);
        CHECK(std::abs(reduced_dispersion(ep, mid)) > 1e-3 * std::max(std::abs(left), std::abs(right)));
    }
}

TEST_CASE("oscillator: a shorter interval pushes the higher levels up")
{
    auto const& pp = oscillator();
    auto const at9 = find_eigenvalues(pp.eigenproblem(9.0, 30.0, 50.0, 1.0));
    auto const at7 = find_eigenvalues(pp.eigenproblem(7.0, 30.0, 50.0, 1.0));
    REQUIRE_FALSE(at9.empty());
    REQUIRE_FALSE(at7.empty());
    // confinement to [0, 7] raises the first level above 30 further from the exact 32
    CHECK(std::abs(at9.front().lambda - 32.0) < 1e-3);
    CHECK(at7.front().lambda - 32.0 > 10.0 * std::abs(at9.front().lambda - 32.0));
}

TEST_CASE("oscillator: eigenvalue count and separation up to 50")
{
    auto const& pp   = oscillator();
    double const step = 1.0;
    auto const roots = find_eigenvalues(pp.eigenproblem(pp.diag.B_selected, -0.5, 50.0, step));
    CHECK(roots.size() == 13);
    for (std::size_t k = 1; k < roots.size(); ++k) {
        CHECK(roots[k].lambda - roots[k - 1].lambda >= step);
    }
}

TEST_CASE("oscillator: the low levels barely move between B = 7 and B = 9")
{
    auto const& pp = oscillator();
    auto const at9 = find_eigenvalues(pp.eigenproblem(9.0, -0.5, 18.0, 1.0));
    auto const at7 = find_eigenvalues(pp.eigenproblem(7.0, -0.5, 18.0, 1.0));
    REQUIRE(at9.size() == 5);
    REQUIRE(at7.size() == 5);
    for (int k = 0; k < 4; ++k) {
        INFO("level " << k);
        CHECK(std::abs(at9[k].lambda - at7[k].lambda) <= 1e-8);
    }
    // The fifth level genuinely moves by ~3e-7 at B = 7. Reference root of f(7) = 0 from
    // direct Dormand-Prince shooting (tolerance 1e-15), independent of the series.
    CHECK(std::abs(at7[4].lambda - 16.000000285334789) <= 1e-9);
    CHECK(std::abs(at9[4].lambda - 16.0) <= 1e-9);
}
