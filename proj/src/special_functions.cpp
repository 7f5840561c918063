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

#include "nsbf/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/bessel.hpp>

#include "nsbf/error.hpp"

namespace nsbf {

namespace {

constexpr double rescale_threshold = 1e250;
constexpr double rescale_factor    = 1e-250;

bool is_integer(double v)
{
    return std::floor(v) == v;
}

// 1 / Gamma(a) for a > -1 with the pole at a = 0 mapped to zero.
double reciprocal_gamma(double a)
{
    if (a == 0.0) {
        return 0.0;
    }
    return 1.0 / std::tgamma(a);
}

// sqrt(pi) / 2^(nu+1) * sum_k (-z/4)^k / (k! Gamma(k + nu + 3/2)).
double reduced_series(double nu, double z)
{
    double const a = nu + 1.5;
    double term    = reciprocal_gamma(a);
    int k0         = 0;
    if (a == 0.0) {
        // first term vanishes; start from k = 1 whose Gamma argument is 1
        k0   = 1;
        term = -z / 4.0;
    }
    double sum = term;
    for (int k = k0 + 1; k < 2000; ++k) {
        term *= (-z / 4.0) / (static_cast<double>(k) * (static_cast<double>(k) + nu + 0.5));
        sum += term;
        if (std::abs(term) <= 1e-18 * std::abs(sum) && static_cast<double>(k) > std::abs(z) / 4.0) {
            break;
        }
    }
    return std::sqrt(std::numbers::pi) / std::exp2(nu + 1.0) * sum;
}

// Independent value of j_nu(x), x > 1, used to normalise the Miller ladder.
double anchor_value(double nu, double x)
{
    if (nu == -1.0) {
        return std::cos(x) / x;
    }
    if (nu == 0.0) {
        return std::sin(x) / x;
    }
    return std::sqrt(std::numbers::pi / (2.0 * x)) * boost::math::cyl_bessel_j(nu + 0.5, x);
}

void check_finite(double v, double nu, double x)
{
    if (!std::isfinite(v)) {
        throw EvaluationError("spherical Bessel evaluation overflowed for order " + std::to_string(nu) +
                              " at x = " + std::to_string(x));
    }
}

void miller_batch(const BesselOrderSet& orders, double x, std::span<double> out)
{
    double const nu0 = orders.base_order();
    // extend the ladder down to an order in [-1, 0) so that both anchors are cheap
    std::size_t const ext  = nu0 >= -1.0 ? static_cast<std::size_t>(std::floor(nu0 + 1.0)) : 0;
    double const nu_low    = nu0 - static_cast<double>(ext);
    std::size_t const last = ext + orders.size() - 1;

    auto const start = static_cast<std::size_t>(
        std::max(static_cast<double>(last), std::ceil(x - nu_low)) + 20.0 + std::ceil(10.0 * std::cbrt(x)));

    thread_local std::vector<double> ladder;
    ladder.assign(last + 1, 0.0);

    double upper   = 0.0;
    double current = 1e-30;
    for (std::size_t i = start; i > 0; --i) {
        if (i <= last) {
            ladder[i] = current;
        }
        double const nu    = nu_low + static_cast<double>(i);
        double const lower = (2.0 * nu + 1.0) / x * current - upper;
        upper              = current;
        current            = lower;
        if (std::abs(current) > rescale_threshold) {
            current *= rescale_factor;
            upper *= rescale_factor;
            for (std::size_t k = i; k <= last; ++k) {
                ladder[k] *= rescale_factor;
            }
        }
    }
    ladder[0] = current;

    double const a0 = anchor_value(nu_low, x);
    double const a1 = anchor_value(nu_low + 1.0, x);
    // least-squares fit of both anchors; t0, t1 may be ~1e250, so square only their ratios
    double const s     = std::max(std::abs(ladder[0]), std::abs(ladder[1]));
    double const t0    = ladder[0] / s;
    double const t1    = ladder[1] / s;
    double const scale = (a0 * t0 + a1 * t1) / (t0 * t0 + t1 * t1) / s;

    for (std::size_t k = 0; k < orders.size(); ++k) {
        out[k] = scale * ladder[ext + k];
        check_finite(out[k], orders.order(k), x);
    }
}

} // namespace

BesselOrderSet::BesselOrderSet(double base_order, double max_order)
    : base_(base_order)
    , count_(0)
{
    double const span = max_order - base_order;
    if (!std::isfinite(span) || span < 0.0 || !is_integer(span)) {
        throw DomainError("Bessel order batch must span a nonnegative integer range");
    }
    if (base_order < -1.5) {
        throw DomainError("Bessel orders below -3/2 are not supported");
    }
    count_ = static_cast<std::size_t>(span) + 1;
}

BesselOrderSet BesselOrderSet::from_count(double base_order, std::size_t count)
{
    if (count == 0) {
        throw DomainError("empty Bessel order batch");
    }
    return BesselOrderSet(base_order, base_order + static_cast<double>(count - 1));
}

bool BesselOrderSet::integer_orders() const noexcept
{
    return is_integer(base_);
}

void spherical_bessel_batch(const BesselOrderSet& orders, double x, std::span<double> out)
{
    if (out.size() != orders.size()) {
        throw DomainError("output span does not match the Bessel order batch");
    }
    if (!std::isfinite(x)) {
        throw DomainError("spherical Bessel argument must be finite");
    }
    if (x < 0.0) {
        if (!orders.integer_orders()) {
            throw DomainError("negative argument requires integer Bessel orders");
        }
        spherical_bessel_batch(orders, -x, out);
        for (std::size_t k = 0; k < out.size(); ++k) {
            if (static_cast<long long>(orders.order(k)) % 2 != 0) {
                out[k] = -out[k];
            }
        }
        return;
    }
    if (x == 0.0) {
        if (orders.base_order() < 0.0) {
            throw DomainError("j_nu(0) is unbounded for negative order " + std::to_string(orders.base_order()));
        }
        for (std::size_t k = 0; k < out.size(); ++k) {
            out[k] = orders.order(k) == 0.0 ? 1.0 : 0.0;
        }
        return;
    }
    if (x <= 1.0) {
        double const z = x * x;
        for (std::size_t k = 0; k < out.size(); ++k) {
            double const nu = orders.order(k);
            out[k]          = std::pow(x, nu) * reduced_series(nu, z);
            check_finite(out[k], nu, x);
        }
        return;
    }
    miller_batch(orders, x, out);
}

std::vector<double> spherical_bessel_batch(const BesselOrderSet& orders, double x)
{
    std::vector<double> out(orders.size());
    spherical_bessel_batch(orders, x, out);
    return out;
}

double spherical_bessel(double nu, double x)
{
    double v = 0.0;
    spherical_bessel_batch(BesselOrderSet(nu, nu), x, std::span<double>(&v, 1));
    return v;
}

void reduced_spherical_bessel_batch(const BesselOrderSet& orders, double z, std::span<double> out)
{
    if (out.size() != orders.size()) {
        throw DomainError("output span does not match the Bessel order batch");
    }
    if (!std::isfinite(z)) {
        throw DomainError("reduced spherical Bessel argument must be finite");
    }
    if (z <= 1.0) {
        for (std::size_t k = 0; k < out.size(); ++k) {
            out[k] = reduced_series(orders.order(k), z);
            check_finite(out[k], orders.order(k), z);
        }
        return;
    }
    double const x = std::sqrt(z);
    spherical_bessel_batch(orders, x, out);
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] /= std::pow(x, orders.order(k));
    }
}

double reduced_spherical_bessel(double nu, double z)
{
    double v = 0.0;
    reduced_spherical_bessel_batch(BesselOrderSet(nu, nu), z, std::span<double>(&v, 1));
    return v;
}

double gamma(double x)
{
    if (x <= 0.0 && is_integer(x)) {
        throw DomainError("Gamma has a pole at " + std::to_string(x));
    }
    if (!(x > 0.0)) {
        throw DomainError("Gamma is only provided for positive arguments");
    }
    double const v = std::tgamma(x);
    if (!std::isfinite(v)) {
        throw EvaluationError("Gamma overflow at " + std::to_string(x));
    }
    return v;
}

double d_constant(double nu)
{
    if (!(nu > -1.5)) {
        throw DomainError("d(nu) requires nu > -3/2");
    }
    return std::sqrt(std::numbers::pi) / (std::exp2(nu + 1.0) * gamma(nu + 1.5));
}

double laguerre(int n, double s, double x)
{
    if (n < 0) {
        throw DomainError("Laguerre degree must be nonnegative");
    }
    if (!(s > -1.0)) {
        throw DomainError("Laguerre parameter must exceed -1");
    }
    if (n == 0) {
        return 1.0;
    }
    double prev = 1.0;
    double cur  = 1.0 + s - x;
    for (int k = 1; k < n; ++k) {
        double const next = ((2.0 * k + 1.0 + s - x) * cur - (k + s) * prev) / (k + 1.0);
        prev              = cur;
        cur               = next;
    }
    return cur;
}

} // namespace nsbf
