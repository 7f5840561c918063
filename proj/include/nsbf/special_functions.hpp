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

/** \file special_functions.hpp
 *
 *  \brief Spherical Bessel functions of real order, Gamma, associated Laguerre polynomials.
 */

#ifndef NSBF_SPECIAL_FUNCTIONS_HPP
#define NSBF_SPECIAL_FUNCTIONS_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace nsbf {

/// A run of consecutive Bessel orders base, base+1, ..., max.
///
/// All orders of one evaluation batch differ by integers, so a single
/// downward recurrence produces the whole batch.
class BesselOrderSet
{
  public:
    /// Throws DomainError unless max_order - base_order is a nonnegative integer
    /// and base_order >= -3/2.
    BesselOrderSet(double base_order, double max_order);

    /// Orders base_order .. base_order + count - 1.
    static BesselOrderSet from_count(double base_order, std::size_t count);

    double base_order() const noexcept
    {
        return base_;
    }
    double max_order() const noexcept
    {
        return base_ + static_cast<double>(count_ - 1);
    }
    std::size_t size() const noexcept
    {
        return count_;
    }
    double order(std::size_t k) const noexcept
    {
        return base_ + static_cast<double>(k);
    }
    bool integer_orders() const noexcept;

  private:
    double base_;
    std::size_t count_;
};

/// j_nu(x) for every nu in `orders`, written to `out` (size must match).
///
/// For x > 1 the batch is produced by Miller's downward recurrence, normalised
/// against independently evaluated values at the two lowest orders of the
/// recurrence ladder. For |x| <= 1 every order is summed from its power series.
/// x = 0 returns the analytic limit; a negative order at x = 0 is a DomainError.
/// Negative x is accepted only for integer orders (parity j_nu(-x) = (-1)^nu j_nu(x)).
void spherical_bessel_batch(const BesselOrderSet& orders, double x, std::span<double> out);

std::vector<double> spherical_bessel_batch(const BesselOrderSet& orders, double x);

/// Single spherical Bessel value, j_nu(x).
double spherical_bessel(double nu, double x);

/// Reduced spherical Bessel function jhat_nu(z) = j_nu(sqrt z) / (sqrt z)^nu.
///
/// jhat_nu is entire in z = x^2. Negative z corresponds to imaginary argument,
/// where jhat_nu(-y^2) = i_nu(y) / y^nu with the modified spherical Bessel i_nu.
/// jhat_nu(0) = d(nu).
void reduced_spherical_bessel_batch(const BesselOrderSet& orders, double z, std::span<double> out);

double reduced_spherical_bessel(double nu, double z);

/// Gamma function for x > 0. Nonpositive integers raise a pole DomainError.
double gamma(double x);

/// d(nu) = sqrt(pi) / (2^(nu+1) Gamma(nu + 3/2)), the small-argument constant
/// j_nu(x) ~ d(nu) x^nu. Defined for nu > -3/2.
double d_constant(double nu);

/// Associated Laguerre polynomial L_n^s(x) by the three-term recurrence in n.
double laguerre(int n, double s, double x);

} // namespace nsbf

#endif
