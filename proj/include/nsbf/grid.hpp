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

/** \file grid.hpp
 *
 *  \brief Uniform grid on [0, b], functions sampled on it, and cumulative integration.
 */

#ifndef NSBF_GRID_HPP
#define NSBF_GRID_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nsbf/error.hpp"

namespace nsbf {

/// Uniformly spaced points r_i = i b / (n - 1); first point is exactly 0, last exactly b.
class Grid
{
  public:
    Grid(double b, std::size_t n_points);

    double b() const noexcept
    {
        return b_;
    }
    std::size_t size() const noexcept
    {
        return n_;
    }
    double step() const noexcept
    {
        return h_;
    }
    double operator[](std::size_t i) const noexcept
    {
        return i + 1 == n_ ? b_ : static_cast<double>(i) * h_;
    }
    std::vector<double> points() const;

    /// Index of the largest grid point not exceeding r (clamped to the grid).
    std::size_t index_below(double r) const noexcept;

    bool operator==(const Grid&) const = default;

  private:
    double b_;
    std::size_t n_;
    double h_;
};

/// Values of a function at the points of a Grid.
///
/// The value at r = 0 may have been filled in from an analytic limit rather
/// than computed; `origin_from_limit()` records that.
template <typename T>
class BasicGridFunction
{
  public:
    using value_type = T;

    explicit BasicGridFunction(Grid grid)
        : grid_(grid)
        , values_(grid.size(), T{})
    {
    }

    BasicGridFunction(Grid grid, std::vector<T> values)
        : grid_(grid)
        , values_(std::move(values))
    {
        if (values_.size() != grid_.size()) {
            throw GridMismatch("grid function length " + std::to_string(values_.size()) +
                               " does not match grid size " + std::to_string(grid_.size()));
        }
    }

    template <typename F>
    static BasicGridFunction sample(const Grid& grid, F&& fn)
    {
        BasicGridFunction out(grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            out.values_[i] = fn(grid[i]);
        }
        return out;
    }

    const Grid& grid() const noexcept
    {
        return grid_;
    }
    std::size_t size() const noexcept
    {
        return values_.size();
    }
    T operator[](std::size_t i) const noexcept
    {
        return values_[i];
    }
    T& operator[](std::size_t i) noexcept
    {
        return values_[i];
    }
    std::span<const T> values() const noexcept
    {
        return values_;
    }
    std::span<T> values() noexcept
    {
        return values_;
    }
    T front() const noexcept
    {
        return values_.front();
    }
    T back() const noexcept
    {
        return values_.back();
    }

    bool origin_from_limit() const noexcept
    {
        return origin_from_limit_;
    }
    void set_origin_limit(T value) noexcept
    {
        values_.front()    = value;
        origin_from_limit_ = true;
    }

  private:
    Grid grid_;
    std::vector<T> values_;
    bool origin_from_limit_ = false;
};

using GridFunction        = BasicGridFunction<double>;
using ComplexGridFunction = BasicGridFunction<std::complex<double>>;
/// Extended precision, for data that later passes through heavy cancellation.
using WideGridFunction = BasicGridFunction<long double>;

void require_same_grid(const Grid& a, const Grid& b);

/// Value placed in the r = 0 slot of a combination whose rule is singular there.
struct OriginLimit
{
    double value;
};

/// Elementwise rule(r, f1[i], f2[i], ...) over grid functions sharing one grid.
template <typename Rule, typename... Fs>
GridFunction combine(Rule&& rule, const GridFunction& first, const Fs&... rest)
{
    (require_same_grid(first.grid(), rest.grid()), ...);
    Grid const& grid = first.grid();
    GridFunction out(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out[i] = rule(grid[i], first[i], rest[i]...);
    }
    return out;
}

/// As combine(), but the r = 0 slot is set from `limit` instead of evaluating the rule.
template <typename Rule, typename... Fs>
GridFunction combine(OriginLimit limit, Rule&& rule, const GridFunction& first, const Fs&... rest)
{
    (require_same_grid(first.grid(), rest.grid()), ...);
    Grid const& grid = first.grid();
    GridFunction out(grid);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        out[i] = rule(grid[i], first[i], rest[i]...);
    }
    out.set_origin_limit(limit.value);
    return out;
}

namespace detail {

/// Integrals over [0, 1] of the Lagrange basis polynomials on the integer nodes
/// first, first+1, ..., first+count-1.
std::vector<double> lagrange_interval_weights(int first, int count);

struct CumulativeStencil
{
    int width;                           // number of nodes (<= 6)
    std::array<std::vector<double>, 6> w; // weights per placement class
};

const CumulativeStencil& cumulative_stencil(std::size_t n_points);

/// First node of the stencil used on interval [i, i+1] and the placement class.
std::pair<std::size_t, std::size_t> stencil_placement(std::size_t i, std::size_t n_points, int width);

} // namespace detail

/// F(r_i) = integral_0^{r_i} f, with F(0) = 0.
///
/// Each interval [r_i, r_{i+1}] is integrated with the six-point Newton-Cotes
/// interpolant centred on it (shifted at the ends of the grid), which is exact
/// for quintics and sixth order accurate. Grids with fewer than six points use
/// the interpolant through all points.
template <typename T>
BasicGridFunction<T> cumulative_integral(const BasicGridFunction<T>& f)
{
    Grid const& grid = f.grid();
    std::size_t const n = grid.size();
    auto const& st = detail::cumulative_stencil(n);
    BasicGridFunction<T> out(grid);
    T acc{};
    double const h = grid.step();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        auto const [first, cls] = detail::stencil_placement(i, n, st.width);
        auto const& w = st.w[cls];
        T s{};
        for (int k = 0; k < st.width; ++k) {
            s += w[k] * f[first + k];
        }
        acc += h * s;
        out[i + 1] = acc;
    }
    return out;
}

/// Power-weighted mean r_i^-(a+1) integral_0^{r_i} t^a v(t) dt, for a > -1.
///
/// t^a is integrated exactly against the local six-point interpolant of v
/// (exact moments on the first interval, 16-point Gauss-Legendre elsewhere,
/// subdivided where t^a varies fast). The result is accumulated in scaled form,
/// so it keeps full relative accuracy at the origin and cannot overflow for
/// large a. The r = 0 slot holds the limit v(0) / (a + 1).
template <typename T>
BasicGridFunction<T> scaled_weighted_integral(const BasicGridFunction<T>& v, double a);

extern template GridFunction scaled_weighted_integral(const GridFunction&, double);
extern template ComplexGridFunction scaled_weighted_integral(const ComplexGridFunction&, double);
extern template WideGridFunction scaled_weighted_integral(const WideGridFunction&, double);

/// Derivative on the grid by five-point finite differences (one-sided at the ends).
GridFunction finite_difference_derivative(const GridFunction& f);

/// Second derivative by five-point finite differences (one-sided at the ends).
GridFunction finite_difference_second_derivative(const GridFunction& f);

/// Local six-point Lagrange interpolation of grid samples at an arbitrary r in [0, b].
double interpolate(const GridFunction& f, double r);

/// Writes a CSV table: header line, then one row per grid point with r in the first
/// column and every value printed with 17 significant digits.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& names,
               const std::vector<const GridFunction*>& columns);

/// Reads a numeric CSV table (optional header line). Returns the columns.
std::vector<std::vector<double>> read_csv_columns(const std::filesystem::path& path,
                                                  std::vector<std::string>* header = nullptr);

} // namespace nsbf

#endif
