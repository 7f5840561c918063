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

#include "nsbf/grid.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

namespace nsbf {

Grid::Grid(double b, std::size_t n_points)
    : b_(b)
    , n_(n_points)
    , h_(0.0)
{
    if (!(b > 0.0) || !std::isfinite(b)) {
        throw DomainError("grid endpoint b must be positive and finite");
    }
    if (n_points < 2) {
        throw DomainError("a grid needs at least 2 points");
    }
    h_ = b / static_cast<double>(n_points - 1);
}

std::vector<double> Grid::points() const
{
    std::vector<double> r(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        r[i] = (*this)[i];
    }
    return r;
}

std::size_t Grid::index_below(double r) const noexcept
{
    if (!(r > 0.0)) {
        return 0;
    }
    auto i = static_cast<std::size_t>(std::floor(r / h_));
    i      = std::min(i, n_ - 1);
    while (i > 0 && (*this)[i] > r) {
        --i;
    }
    return i;
}

void require_same_grid(const Grid& a, const Grid& b)
{
    if (!(a == b)) {
        throw GridMismatch("grid functions live on different grids");
    }
}

namespace detail {

std::vector<double> lagrange_interval_weights(int first, int count)
{
    std::vector<double> weights(count);
    for (int k = 0; k < count; ++k) {
        // monomial coefficients of prod_{m != k} (x - x_m), lowest degree first
        std::vector<double> poly{1.0};
        double denom = 1.0;
        double const xk = first + k;
        for (int m = 0; m < count; ++m) {
            if (m == k) {
                continue;
            }
            double const xm = first + m;
            std::vector<double> next(poly.size() + 1, 0.0);
            for (std::size_t d = 0; d < poly.size(); ++d) {
                next[d + 1] += poly[d];
                next[d] -= xm * poly[d];
            }
            poly = std::move(next);
            denom *= xk - xm;
        }
        double integral = 0.0;
        for (std::size_t d = 0; d < poly.size(); ++d) {
            integral += poly[d] / static_cast<double>(d + 1);
        }
        weights[k] = integral / denom;
    }
    return weights;
}

const CumulativeStencil& cumulative_stencil(std::size_t n_points)
{
    static std::mutex mutex;
    static std::map<int, CumulativeStencil> cache;
    int const width = static_cast<int>(std::min<std::size_t>(n_points, 6));
    std::lock_guard lock(mutex);
    auto it = cache.find(width);
    if (it == cache.end()) {
        CumulativeStencil st{width, {}};
        for (int cls = 0; cls < width - 1; ++cls) {
            st.w[cls] = lagrange_interval_weights(-cls, width);
        }
        it = cache.emplace(width, std::move(st)).first;
    }
    return it->second;
}

std::pair<std::size_t, std::size_t> stencil_placement(std::size_t i, std::size_t n_points, int width)
{
    auto const w          = static_cast<std::size_t>(width);
    std::size_t const lead = w / 2 - 1;
    std::size_t first     = i > lead ? i - lead : 0;
    first                 = std::min(first, n_points - w);
    return {first, i - first};
}

} // namespace detail

namespace {

// Lagrange basis on nodes (m - cls), m = 0..width-1, evaluated at s (interval [0, 1]).
double lagrange_basis(int k, int cls, int width, double s)
{
    double basis = 1.0;
    double const xk = k - cls;
    for (int m = 0; m < width; ++m) {
        if (m != k) {
            double const xm = m - cls;
            basis *= (s - xm) / (xk - xm);
        }
    }
    return basis;
}

// Monomial coefficients of the Lagrange basis polynomial k on nodes 0..width-1.
std::vector<double> lagrange_monomials(int k, int width)
{
    std::vector<double> poly{1.0};
    double denom = 1.0;
    for (int m = 0; m < width; ++m) {
        if (m == k) {
            continue;
        }
        std::vector<double> next(poly.size() + 1, 0.0);
        for (std::size_t d = 0; d < poly.size(); ++d) {
            next[d + 1] += poly[d];
            next[d] -= m * poly[d];
        }
        poly = std::move(next);
        denom *= k - m;
    }
    for (auto& c : poly) {
        c /= denom;
    }
    return poly;
}

// Gauss-Legendre rule on [0, 1] with the Lagrange basis values of every placement
// class and log((i + s_q) / (i + 1)) for every interval i >= 1 of one grid size.
struct WeightedTable
{
    int width = 0;
    std::vector<double> s, w;                 // nodes and weights on [0, 1]
    std::vector<std::vector<double>> basis;   // [cls][k * Q + q]
    std::vector<std::vector<double>> monomials; // [k] monomial coefficients on nodes 0..width-1
    std::vector<double> logs;                 // [i * Q + q]
};

const WeightedTable& weighted_table(std::size_t n)
{
    static std::mutex mutex;
    static std::map<std::size_t, WeightedTable> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) {
        return it->second;
    }
    if (cache.size() > 8) {
        cache.clear();
    }
    using rule = boost::math::quadrature::gauss<double, 16>;
    WeightedTable t;
    t.width = static_cast<int>(std::min<std::size_t>(n, 6));
    for (std::size_t q = 0; q < rule::abscissa().size(); ++q) {
        double const x = rule::abscissa()[q];
        double const wq = rule::weights()[q];
        t.s.push_back(0.5 * (1.0 + x));
        t.w.push_back(0.5 * wq);
        if (x != 0.0) {
            t.s.push_back(0.5 * (1.0 - x));
            t.w.push_back(0.5 * wq);
        }
    }
    std::size_t const Q = t.s.size();
    t.basis.resize(static_cast<std::size_t>(t.width - 1));
    for (int cls = 0; cls < t.width - 1; ++cls) {
        for (int k = 0; k < t.width; ++k) {
            for (double s : t.s) {
                t.basis[cls].push_back(lagrange_basis(k, cls, t.width, s));
            }
        }
    }
    for (int k = 0; k < t.width; ++k) {
        t.monomials.push_back(lagrange_monomials(k, t.width));
    }
    t.logs.assign(n * Q, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        for (std::size_t q = 0; q < Q; ++q) {
            t.logs[i * Q + q] = std::log1p((t.s[q] - 1.0) / (static_cast<double>(i) + 1.0));
        }
    }
    return cache.emplace(n, std::move(t)).first->second;
}

} // namespace

template <typename T>
BasicGridFunction<T> scaled_weighted_integral(const BasicGridFunction<T>& v, double a)
{
    if (!(a > -1.0)) {
        throw DomainError("weighted integral requires a power > -1");
    }
    Grid const& grid    = v.grid();
    std::size_t const n = grid.size();
    auto const& tab     = weighted_table(n);
    int const width     = tab.width;
    std::size_t const Q = tab.s.size();

    BasicGridFunction<T> out(grid);
    std::array<double, 6> wk{};
    std::vector<double> e(Q);
    T acc{};
    for (std::size_t i = 0; i + 1 < n; ++i) {
        auto const [first, cls] = detail::stencil_placement(i, n, width);
        double const di = static_cast<double>(i);
        wk.fill(0.0);
        if (i == 0) {
            // integral_0^1 s^a L_k(s) ds from the monomial coefficients
            for (int k = 0; k < width; ++k) {
                auto const& c = tab.monomials[k];
                for (std::size_t d = 0; d < c.size(); ++d) {
                    wk[k] += c[d] / (a + static_cast<double>(d) + 1.0);
                }
            }
        } else if (a > 8.0 * di) {
            // ((i + s)/(i + 1))^a varies fast on this interval: split into panels
            int const panels = static_cast<int>(std::ceil(a / (8.0 * di)));
            for (int pnl = 0; pnl < panels; ++pnl) {
                double const lo  = static_cast<double>(pnl) / panels;
                double const len = 1.0 / panels;
                for (std::size_t q = 0; q < Q; ++q) {
                    double const s  = lo + len * tab.s[q];
                    double const wt = len * tab.w[q] * std::exp(a * std::log1p((s - 1.0) / (di + 1.0)));
                    for (int k = 0; k < width; ++k) {
                        wk[k] += wt * lagrange_basis(k, static_cast<int>(cls), width, s);
                    }
                }
            }
        } else {
            double const* logs = &tab.logs[i * Q];
            for (std::size_t q = 0; q < Q; ++q) {
                e[q] = tab.w[q] * std::exp(a * logs[q]);
            }
            auto const& b = tab.basis[cls];
            for (int k = 0; k < width; ++k) {
                double const* bk = &b[static_cast<std::size_t>(k) * Q];
                double sum       = 0.0;
                for (std::size_t q = 0; q < Q; ++q) {
                    sum += e[q] * bk[q];
                }
                wk[k] = sum;
            }
        }
        T interval{};
        for (int k = 0; k < width; ++k) {
            interval += wk[k] * v[first + k];
        }
        double const scale = 1.0 / (di + 1.0);
        double const decay = i == 0 ? 0.0 : std::exp((a + 1.0) * std::log1p(-scale));
        acc                = decay * acc + scale * interval;
        out[i + 1]         = acc;
    }
    out.set_origin_limit(v[0] / (a + 1.0));
    return out;
}

template GridFunction scaled_weighted_integral(const GridFunction&, double);
template ComplexGridFunction scaled_weighted_integral(const ComplexGridFunction&, double);
template WideGridFunction scaled_weighted_integral(const WideGridFunction&, double);

namespace {

// Five-point first-derivative weights at node `pos` of a stencil on nodes 0..4, times h.
constexpr double d1[5][5] = {
    {-25.0 / 12, 4.0, -3.0, 4.0 / 3, -1.0 / 4},
    {-1.0 / 4, -5.0 / 6, 3.0 / 2, -1.0 / 2, 1.0 / 12},
    {1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12},
    {-1.0 / 12, 1.0 / 2, -3.0 / 2, 5.0 / 6, 1.0 / 4},
    {1.0 / 4, -4.0 / 3, 3.0, -4.0, 25.0 / 12},
};

// Five-point second-derivative weights, times h^2.
constexpr double d2[5][5] = {
    {35.0 / 12, -26.0 / 3, 19.0 / 2, -14.0 / 3, 11.0 / 12},
    {11.0 / 12, -5.0 / 3, 1.0 / 2, 1.0 / 3, -1.0 / 12},
    {-1.0 / 12, 4.0 / 3, -5.0 / 2, 4.0 / 3, -1.0 / 12},
    {-1.0 / 12, 1.0 / 3, 1.0 / 2, -5.0 / 3, 11.0 / 12},
    {11.0 / 12, -14.0 / 3, 19.0 / 2, -26.0 / 3, 35.0 / 12},
};

template <typename Weights>
GridFunction five_point(const GridFunction& f, const Weights& w, int power)
{
    Grid const& grid = f.grid();
    std::size_t const n = grid.size();
    if (n < 5) {
        throw DomainError("finite differences need at least 5 grid points");
    }
    double const scale = std::pow(grid.step(), -power);
    GridFunction out(grid);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t first = i >= 2 ? i - 2 : 0;
        first             = std::min(first, n - 5);
        std::size_t const pos = i - first;
        double s = 0.0;
        for (std::size_t k = 0; k < 5; ++k) {
            s += w[pos][k] * f[first + k];
        }
        out[i] = s * scale;
    }
    return out;
}

} // namespace

GridFunction finite_difference_derivative(const GridFunction& f)
{
    return five_point(f, d1, 1);
}

GridFunction finite_difference_second_derivative(const GridFunction& f)
{
    return five_point(f, d2, 2);
}

double interpolate(const GridFunction& f, double r)
{
    Grid const& grid = f.grid();
    std::size_t const n = grid.size();
    int const width = static_cast<int>(std::min<std::size_t>(n, 6));
    std::size_t i = std::min(grid.index_below(r), n - 2);
    auto const [first, cls] = detail::stencil_placement(i, n, width);
    double const s = (r - grid[first]) / grid.step();
    double value = 0.0;
    for (int k = 0; k < width; ++k) {
        double basis = 1.0;
        for (int m = 0; m < width; ++m) {
            if (m != k) {
                basis *= (s - m) / static_cast<double>(k - m);
            }
        }
        value += basis * f[first + k];
    }
    return value;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& names,
               const std::vector<const GridFunction*>& columns)
{
    if (columns.empty() || names.size() != columns.size() + 1) {
        throw DomainError("write_csv expects one name for r plus one per column");
    }
    for (auto const* c : columns) {
        require_same_grid(columns.front()->grid(), c->grid());
    }
    std::ofstream os(path);
    if (!os) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    for (std::size_t k = 0; k < names.size(); ++k) {
        os << (k ? "," : "") << names[k];
    }
    os << '\n';
    Grid const& grid = columns.front()->grid();
    char buf[64];
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", grid[i]);
        os << buf;
        for (auto const* c : columns) {
            std::snprintf(buf, sizeof buf, ",%.17g", (*c)[i]);
            os << buf;
        }
        os << '\n';
    }
}

std::vector<std::vector<double>> read_csv_columns(const std::filesystem::path& path,
                                                  std::vector<std::string>* header)
{
    std::ifstream is(path);
    if (!is) {
        throw Error("cannot open " + path.string());
    }
    std::vector<std::vector<double>> cols;
    std::string line;
    bool first_line = true;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        std::vector<double> row;
        bool numeric = true;
        for (auto const& c : cells) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(c, &used));
            } catch (const std::exception&) {
                numeric = false;
                break;
            }
        }
        if (!numeric) {
            if (first_line) {
                if (header) {
                    *header = cells;
                }
                first_line = false;
                continue;
            }
            throw Error(path.string() + ":" + std::to_string(line_no) + ": non-numeric value");
        }
        first_line = false;
        if (cols.empty()) {
            cols.resize(row.size());
        }
        if (row.size() != cols.size()) {
            throw Error(path.string() + ":" + std::to_string(line_no) + ": inconsistent column count");
        }
        for (std::size_t k = 0; k < row.size(); ++k) {
            cols[k].push_back(row[k]);
        }
    }
    return cols;
}

} // namespace nsbf
