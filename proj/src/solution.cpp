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

#include "nsbf/solution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "nsbf/error.hpp"
#include "nsbf/parallel.hpp"
#include "nsbf/special_functions.hpp"

namespace nsbf {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

/// Reduced Bessel quantities at one z for orders kappa-2 .. kappa+2N+1:
/// low[k] = jhat_{kappa-2+k}(z) for k = 0, 1, 2 and
/// even[n] = z^n jhat_{kappa+2n}(z), odd[n] = z^n jhat_{kappa+2n+1}(z).
class ReducedBesselRow
{
  public:
    ReducedBesselRow(double kappa, std::size_t N)
        : kappa_(kappa)
        , orders_(BesselOrderSet::from_count(kappa - 2.0, 2 * N + 4))
        , raw_(orders_.size())
        , even_(N + 1)
        , odd_(N + 1)
    {
    }

    void fill(double z)
    {
        std::size_t const N = even_.size() - 1;
        if (z > 1.0) {
            // z^n jhat_{kappa+2n}(z) = j_{kappa+2n}(x) / x^kappa needs no large powers.
            double const x = std::sqrt(z);
            spherical_bessel_batch(orders_, x, raw_);
            double const xk = std::pow(x, kappa_);
            low_[0]         = raw_[0] / std::pow(x, kappa_ - 2.0);
            low_[1]         = raw_[1] / std::pow(x, kappa_ - 1.0);
            low_[2]         = raw_[2] / xk;
            for (std::size_t n = 0; n <= N; ++n) {
                even_[n] = raw_[2 + 2 * n] / xk;
                odd_[n]  = raw_[3 + 2 * n] / (xk * x);
            }
            return;
        }
        reduced_spherical_bessel_batch(orders_, z, raw_);
        low_[0]   = raw_[0];
        low_[1]   = raw_[1];
        low_[2]   = raw_[2];
        double zn = 1.0;
        for (std::size_t n = 0; n <= N; ++n) {
            even_[n] = zn * raw_[2 + 2 * n];
            odd_[n]  = zn * raw_[3 + 2 * n];
            zn *= z;
        }
    }

    double low(std::size_t k) const
    {
        return low_[k];
    }
    double even(std::size_t n) const
    {
        return even_[n];
    }
    double odd(std::size_t n) const
    {
        return odd_[n];
    }

  private:
    double kappa_;
    BesselOrderSet orders_;
    std::vector<double> raw_;
    double low_[3] = {0.0, 0.0, 0.0};
    std::vector<double> even_;
    std::vector<double> odd_;
};

std::size_t series_length(const NsbfCoefficients& coeffs, std::optional<std::size_t> requested)
{
    std::size_t const N = requested.value_or(coeffs.N);
    if (N > coeffs.N) {
        throw DomainError("series length " + std::to_string(N) + " exceeds the " + std::to_string(coeffs.N) +
                          " computed coefficients");
    }
    return N;
}

} // namespace

double SpectralPoint::omega() const
{
    double const w2 = omega_squared();
    if (w2 < 0.0) {
        throw DomainError("omega^2 = omega1 omega2 is negative");
    }
    return std::sqrt(w2);
}

SolutionSample evaluate(const NsbfCoefficients& coeffs, const SpectralPoint& sp, const DiracProblem& problem,
                        const DerivedPotentials& dp, const EvaluationOptions& options)
{
    auto const& grid = coeffs.grid();
    require_same_grid(grid, problem.grid());
    if (!std::isfinite(sp.omega1) || !std::isfinite(sp.omega2)) {
        throw DomainError("coupling constants must be finite");
    }
    double const lambda = sp.omega_squared();
    double scale        = 1.0; // f = scale * (-F), g = scale * omega2 * G with F, G the brackets
    if (options.normalization == Normalization::standard) {
        if (sp.omega2 == 0.0) {
            throw DomainError("omega2 = 0: the representation divides by omega2");
        }
        scale = std::pow(sp.omega(), problem.kappa + 1.0) / sp.omega2;
    }
    std::size_t const Nf  = series_length(coeffs, options.N_f);
    std::size_t const Ng  = series_length(coeffs, options.N_g);
    std::size_t const Nmx = std::max(Nf, Ng);
    bool const with_gamma = coeffs.has_gamma();
    double const kappa    = problem.kappa;
    double const shift    = coeffs.shift;
    double const w2       = sp.omega2;

    std::size_t const m    = grid.size();
    std::size_t const last = options.r_max ? std::min(grid.index_below(*options.r_max), m - 1) : m - 1;

    SolutionSample out{GridFunction(grid), GridFunction(grid), GridFunction(grid),
                       GridFunction(grid), GridFunction(grid), GridFunction(grid)};

    // Origin: f ~ -d(kappa-1) r^kappa, g ~ omega2 d(kappa) r^(kappa+1) (entire normalisation).
    out.f.set_origin_limit(0.0);
    out.g.set_origin_limit(0.0);
    double const fp0 = kappa == 1.0 ? -scale * d_constant(0.0) : (kappa > 1.0 ? 0.0 : -scale * inf);
    out.f_prime.set_origin_limit(fp0);
    out.g_prime.set_origin_limit(0.0);

    std::size_t const chunks = std::min<std::size_t>(worker_count() * 4, std::max<std::size_t>(last, 1));
    parallel_for(chunks, [&](std::size_t c) {
        std::size_t const lo = 1 + c * last / chunks;
        std::size_t const hi = 1 + (c + 1) * last / chunks;
        ReducedBesselRow fr(kappa, Nmx);
        ReducedBesselRow gr(kappa, Nmx);
        for (std::size_t i = lo; i < hi; ++i) {
            double const r  = grid[i];
            double const r2 = r * r;
            fr.fill(lambda * r2);
            ReducedBesselRow const* g_row = &fr;
            if (shift != 0.0) {
                gr.fill((lambda + shift) * r2);
                g_row = &gr;
            }
            double const rk = std::pow(r, kappa);

            double F = fr.low(1);
            for (std::size_t n = 0; n <= Nf; ++n) {
                F += coeffs.beta(2, n)[i] * fr.even(n);
            }
            double G = g_row->low(2);
            for (std::size_t n = 0; n <= Ng; ++n) {
                G += coeffs.beta(1, n)[i] * g_row->odd(n);
            }
            out.f[i] = -scale * rk * F;
            out.g[i] = scale * w2 * rk * r * G;

            if (with_gamma) {
                double Fp = fr.low(0) + (r * dp.Q2[i] / 2.0 - kappa + 1.0) * fr.low(1);
                double sf = 0.0;
                for (std::size_t n = 0; n <= Nf; ++n) {
                    sf += coeffs.gamma(2, n)[i] * fr.even(n);
                }
                Fp = Fp / r + sf;
                double const Q1 = dp.Q1[i] + shift * r;
                double Gp       = g_row->low(1) + (r * Q1 / 2.0 - kappa) * g_row->low(2);
                double sg       = 0.0;
                for (std::size_t n = 0; n <= Ng; ++n) {
                    sg += coeffs.gamma(1, n)[i] * g_row->odd(n);
                }
                Gp += r * sg;
                // Under a shift the g-bracket is in z~ = (omega^2 + c) r^2; the prefactor is unchanged.
                out.f_prime[i] = -scale * rk * Fp;
                out.g_prime[i] = scale * w2 * rk * Gp;
            }
        }
    });

    if (!with_gamma) {
        double const fp_origin = out.f_prime[0];
        out.f_prime            = finite_difference_derivative(out.f);
        out.g_prime            = finite_difference_derivative(out.g);
        out.f_prime.set_origin_limit(fp_origin);
        out.g_prime.set_origin_limit(0.0);
    }
    // The system is linear, so the residuals need no rescaling in either normalisation.
    auto [r1, r2]  = residuals(out.f, out.g, out.f_prime, out.g_prime, sp, problem);
    out.residual1  = std::move(r1);
    out.residual2  = std::move(r2);
    if (last + 1 < m) {
        for (std::size_t i = last + 1; i < m; ++i) {
            out.residual1[i] = 0.0;
            out.residual2[i] = 0.0;
        }
    }
    return out;
}

std::pair<GridFunction, GridFunction> g_via_f(const GridFunction& f, const GridFunction& f_prime,
                                              const SpectralPoint& sp, const DiracProblem& problem)
{
    require_same_grid(f.grid(), problem.grid());
    require_same_grid(f_prime.grid(), problem.grid());
    if (sp.omega1 == 0.0) {
        throw DomainError("omega1 = 0: g cannot be recovered from f");
    }
    auto const& grid   = f.grid();
    double const kappa = problem.kappa;
    GridFunction g(grid);
    GridFunction gp(grid);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        double const r = grid[i];
        g[i]           = (f_prime[i] - kappa / r * f[i] + problem.p[i] * f[i]) / sp.omega1;
        gp[i]          = -sp.omega2 * f[i] - kappa / r * g[i] + problem.p[i] * g[i];
    }
    g.set_origin_limit(0.0);
    gp.set_origin_limit(0.0);
    return {std::move(g), std::move(gp)};
}

std::pair<GridFunction, GridFunction> residuals(const GridFunction& f, const GridFunction& g,
                                                const GridFunction& f_prime, const GridFunction& g_prime,
                                                const SpectralPoint& sp, const DiracProblem& problem)
{
    auto const& grid = f.grid();
    for (auto const* h : {&g, &f_prime, &g_prime}) {
        require_same_grid(grid, h->grid());
    }
    require_same_grid(grid, problem.grid());
    double const kappa = problem.kappa;
    GridFunction r1(grid);
    GridFunction r2(grid);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        double const r = grid[i];
        double const p = problem.p[i];
        r1[i]          = f_prime[i] - kappa / r * f[i] + p * f[i] - sp.omega1 * g[i];
        r2[i]          = g_prime[i] + kappa / r * g[i] - p * g[i] + sp.omega2 * f[i];
    }
    r1.set_origin_limit(0.0);
    r2.set_origin_limit(0.0);
    return {std::move(r1), std::move(r2)};
}

double reduced_f_bracket(const NsbfCoefficients& coeffs, std::size_t index, double lambda, std::size_t N)
{
    auto const& grid = coeffs.grid();
    if (index >= grid.size()) {
        throw DomainError("grid index out of range");
    }
    N = series_length(coeffs, N);
    double const r = grid[index];
    ReducedBesselRow row(coeffs.kappa, N);
    row.fill(lambda * r * r);
    double F = row.low(1);
    for (std::size_t n = 0; n <= N; ++n) {
        F += coeffs.beta(2, n)[index] * row.even(n);
    }
    return F;
}

double sup_norm(const GridFunction& f, double r_lo, double r_hi)
{
    auto const& grid = f.grid();
    double worst     = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double const r = grid[i];
        if (r < r_lo || r > r_hi) {
            continue;
        }
        double const v = std::abs(f[i]);
        worst          = std::isnan(v) ? inf : std::max(worst, v);
    }
    return worst;
}

void write_sample_csv(const std::filesystem::path& path, const SolutionSample& sample)
{
    write_csv(path, {"r", "f", "g", "residual1", "residual2"},
              {&sample.f, &sample.g, &sample.residual1, &sample.residual2});
}

} // namespace nsbf
