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
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "nsbf/error.hpp"
#include "nsbf/special_functions.hpp"
#include "support/bessel_oracle.hpp"

using namespace nsbf;

namespace {

double rel(double a, double b)
{
    return std::abs(a - b) / std::abs(b);
}

} // namespace

TEST_CASE("closed forms of the lowest orders")
{
    CHECK(std::abs(spherical_bessel(0.0, std::numbers::pi)) < 1e-16);
    CHECK(rel(spherical_bessel(1.0, 1e-8), 1e-8 / 3.0) < 1e-14);
    for (double x : {0.3, 1.0, 2.5, 17.0, 250.0}) {
        CHECK(rel(spherical_bessel(0.0, x), std::sin(x) / x) < 1e-14);
        CHECK(rel(spherical_bessel(-1.0, x), std::cos(x) / x) < 1e-13);
        double const j1 = std::sin(x) / (x * x) - std::cos(x) / x;
        CHECK(std::abs(spherical_bessel(1.0, x) - j1) < 1e-14 * (1.0 + 1.0 / x));
    }
}

TEST_CASE("limits at x = 0")
{
    auto v = spherical_bessel_batch(BesselOrderSet(0.0, 3.0), 0.0);
    CHECK(v == std::vector<double>{1.0, 0.0, 0.0, 0.0});
    CHECK_THROWS_AS(spherical_bessel_batch(BesselOrderSet(-1.0, 2.0), 0.0), DomainError);
    CHECK(reduced_spherical_bessel(2.5, 0.0) == doctest::Approx(d_constant(2.5)).epsilon(1e-15));
}

TEST_CASE("order set invariants")
{
    CHECK_THROWS_AS(BesselOrderSet(0.0, 1.5), DomainError);
    CHECK_THROWS_AS(BesselOrderSet(2.0, 1.0), DomainError);
    CHECK_THROWS_AS(BesselOrderSet(-2.0, 1.0), DomainError);
    BesselOrderSet const s = BesselOrderSet::from_count(1.5, 4);
    CHECK(s.max_order() == 4.5);
    CHECK_FALSE(s.integer_orders());
}

TEST_CASE("kappa = 3 batch at x = 200 against the high-precision series")
{
    BesselOrderSet const orders(2.0, 64.0);
    auto const v = spherical_bessel_batch(orders, 200.0);
    for (std::size_t k = 0; k < orders.size(); ++k) {
        double const exact = oracle::spherical_bessel(orders.order(k), 200.0);
        // near a zero of j_nu compare against the 1/x envelope
        CHECK(std::abs(v[k] - exact) <= 1e-12 * std::max(std::abs(exact), 1.0 / 200.0));
    }
}

TEST_CASE("long batches keep their normalisation")
{
    // up to 204 orders, as needed by a 100-term series
    for (double base : {-1.0, -0.5, 1.0}) {
        for (double x : {1.5, 5.0, 30.0}) {
            auto const v = spherical_bessel_batch(BesselOrderSet::from_count(base, 204), x);
            for (std::size_t k : {0u, 5u, 40u}) {
                double const exact = oracle::spherical_bessel(base + static_cast<double>(k), x);
                CHECK(std::abs(v[k] - exact) <= 1e-12 * std::max(std::abs(exact), 1.0 / x));
            }
        }
    }
}

TEST_CASE("high orders up to 300")
{
    for (double x : {10.0, 150.0, 250.0}) {
        auto const v = spherical_bessel_batch(BesselOrderSet(280.0, 300.0), x);
        for (std::size_t k : {0u, 20u}) {
            double const exact = oracle::spherical_bessel(280.0 + static_cast<double>(k), x);
            if (std::abs(exact) > 1e-290) {
                CHECK(std::abs(v[k] - exact) <= 1e-12 * std::max(std::abs(exact), 1.0 / x));
            }
        }
    }
}

TEST_CASE("recurrence j_{nu-1} + j_{nu+1} = (2 nu + 1)/x j_nu")
{
    for (double base : {-1.0, -0.5, 0.25, 2.0}) {
        for (double x : {0.1, 0.7, 1.0, 3.3, 25.0, 120.0, 500.0}) {
            BesselOrderSet const orders = BesselOrderSet::from_count(base, 40);
            auto const v = spherical_bessel_batch(orders, x);
            for (std::size_t k = 1; k + 1 < v.size(); ++k) {
                double const nu  = orders.order(k);
                double const lhs = v[k - 1] + v[k + 1];
                double const rhs = (2.0 * nu + 1.0) / x * v[k];
                double const mag = std::max({std::abs(v[k - 1]), std::abs(v[k + 1]), std::abs(rhs)});
                if (mag > 1e-280) {
                    CHECK(std::abs(lhs - rhs) <= 1e-12 * mag);
                }
            }
        }
    }
}

TEST_CASE("small-argument constant j_nu(x) / x^nu -> d(nu)")
{
    for (double nu : {-1.0, -0.5, 0.0, 0.5, 1.0, 2.5, 3.0, 10.0}) {
        double const x = 1e-4;
        CHECK(rel(spherical_bessel(nu, x) / std::pow(x, nu), d_constant(nu)) < 1e-6);
    }
}

TEST_CASE("reduced Bessel functions for negative z are modified Bessel functions")
{
    // jhat_0(-y^2) = sinh(y) / y
    for (double y : {0.5, 2.0, 7.0}) {
        CHECK(rel(reduced_spherical_bessel(0.0, -y * y), std::sinh(y) / y) < 1e-13);
    }
}

TEST_CASE("gamma")
{
    CHECK(nsbf::gamma(1.0) == 1.0);
    CHECK(rel(nsbf::gamma(0.5), std::sqrt(std::numbers::pi)) < 1e-15);
    // Gamma(7.5) = (13/2)(11/2)...(1/2) Gamma(1/2)
    double prod = std::sqrt(std::numbers::pi);
    for (double a = 0.5; a < 7.0; a += 1.0) {
        prod *= a;
    }
    CHECK(rel(nsbf::gamma(7.5), prod) < 1e-14);
    CHECK(rel(nsbf::gamma(7.5), 1871.2543057977883) < 1e-14);
    CHECK_THROWS_AS(nsbf::gamma(0.0), DomainError);
    CHECK_THROWS_AS(nsbf::gamma(-2.0), DomainError);
}

TEST_CASE("d constant")
{
    CHECK(rel(d_constant(0.5), std::sqrt(std::numbers::pi) / std::pow(2.0, 1.5)) < 1e-15);
    CHECK(rel(d_constant(1.0), 1.0 / 3.0) < 1e-15);
    CHECK(rel(d_constant(3.0), 1.0 / 105.0) < 1e-15);
    CHECK_THROWS_AS(d_constant(-1.5), DomainError);
}

TEST_CASE("Laguerre polynomials")
{
    CHECK(laguerre(0, 0.7, 3.0) == 1.0);
    CHECK(laguerre(1, 0.7, 3.0) == doctest::Approx(1.0 + 0.7 - 3.0).epsilon(1e-15));
    // L_3^s(x) = C(3+s,3) - C(3+s,2) x + C(3+s,1) x^2/2 - x^3/6; at s = 1/2, x = 2:
    // 35/16 - 35/4 + 7 - 4/3 = -43/48
    CHECK(laguerre(3, 0.5, 2.0) == doctest::Approx(-43.0 / 48.0).epsilon(1e-15));
    CHECK_THROWS_AS(laguerre(-1, 0.5, 1.0), DomainError);
    CHECK_THROWS_AS(laguerre(2, -1.0, 1.0), DomainError);
}

TEST_CASE("Laguerre orthogonality for degrees up to 4")
{
    boost::math::quadrature::exp_sinh<double> integrator;
    for (double s : {0.5, 2.5}) {
        for (int m = 0; m <= 4; ++m) {
            for (int n = m + 1; n <= 4; ++n) {
                double const v = integrator.integrate([&](double x) {
                    if (x > 700.0) {
                        return 0.0;
                    }
                    return std::pow(x, s) * std::exp(-x) * laguerre(m, s, x) * laguerre(n, s, x);
                });
                CHECK(std::abs(v) < 1e-8);
            }
        }
    }
}

TEST_CASE("parity j_n(-x) = (-1)^n j_n(x) for integer orders")
{
    BesselOrderSet const orders(0.0, 12.0);
    for (double x : {0.4, 3.0, 45.0}) {
        auto const plus  = spherical_bessel_batch(orders, x);
        auto const minus = spherical_bessel_batch(orders, -x);
        for (std::size_t k = 0; k < orders.size(); ++k) {
            CHECK(minus[k] == (k % 2 == 0 ? plus[k] : -plus[k]));
        }
    }
    CHECK_THROWS_AS(spherical_bessel_batch(BesselOrderSet(0.5, 2.5), -1.0), DomainError);
}
