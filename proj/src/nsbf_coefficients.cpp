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

#include "nsbf/nsbf_coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nsbf/parallel.hpp"

namespace nsbf {

namespace {

// Absolute floor of the truncation criterion, so that identically vanishing
// r Q_j (zero potential) counts as converged.
constexpr double criterion_floor = 1e-14;

bool all_finite(const GridFunction& f)
{
    return std::all_of(f.values().begin(), f.values().end(), [](double v) { return std::isfinite(v); });
}

GridFunction half_r_Q(const NsbfCoefficients& coeffs, const DerivedPotentials& dp, int j)
{
    auto const& Q = j == 1 ? dp.Q1 : dp.Q2;
    double const shift = j == 1 ? coeffs.shift : 0.0;
    require_same_grid(Q.grid(), coeffs.grid());
    auto out = combine(OriginLimit{0.0}, [shift](double r, double q) { return 0.5 * r * (q + shift * r); }, Q);
    return out;
}

} // namespace

const CoefficientFamily& NsbfCoefficients::family(int j) const
{
    if (j != 1 && j != 2) {
        throw DomainError("coefficient family index must be 1 or 2");
    }
    return families[static_cast<std::size_t>(j - 1)];
}

const GridFunction& NsbfCoefficients::beta(int j, std::size_t n) const
{
    auto const& f = family(j);
    if (n >= f.beta.size()) {
        throw DomainError("beta index " + std::to_string(n) + " exceeds N");
    }
    return f.beta[n];
}

const GridFunction& NsbfCoefficients::gamma(int j, std::size_t n) const
{
    auto const& f = family(j);
    if (n >= f.gamma.size()) {
        throw DomainError("gamma index " + std::to_string(n) + " not computed");
    }
    return f.gamma[n];
}

CoefficientFamily compute_family(const SeedFunction& seed, std::size_t N, bool with_gamma, bool keep_scratch)
{
    using W             = long double;
    Grid const& grid    = seed.u.grid();
    std::size_t const m = grid.size();
    W const ell         = seed.ell;
    auto const& ws      = seed.wide;

    CoefficientFamily fam;
    fam.ell = seed.ell;
    fam.beta.reserve(N + 1);
    if (with_gamma) {
        fam.gamma.reserve(N + 1);
    }
    auto narrow = [&](const WideGridFunction& v) {
        GridFunction out(grid);
        for (std::size_t i = 0; i < m; ++i) {
            out[i] = static_cast<double>(v[i]);
        }
        return out;
    };
    auto keep = [&](std::size_t n, std::vector<GridFunction>& dest, const WideGridFunction& v) {
        dest.push_back(narrow(v));
        if (!fam.first_nonfinite && !all_finite(dest.back())) {
            fam.first_nonfinite = n;
        }
    };

    // The recursion runs in long double throughout; beta_n drops by up to
    // ~13 orders of magnitude from its peak, and that cancellation eats the
    // low digits of every intermediate.
    WideGridFunction bprev(grid), gprev(grid);
    for (std::size_t i = 1; i < m; ++i) {
        bprev[i] = (2.0L * ell + 3.0L) * ws.w_minus_one[i];
        if (with_gamma) {
            gprev[i] = (2.0L * ell + 3.0L) * (ws.sigma[i] - 0.5L * seed.Q[i]);
        }
    }
    keep(0, fam.beta, bprev);
    if (with_gamma) {
        keep(0, fam.gamma, gprev);
    }

    WideGridFunction integrand(grid), eta(grid), theta(grid);
    for (std::size_t n = 1; n <= N; ++n) {
        W const dn   = static_cast<W>(n);
        W const k    = 2.0L * dn + ell;
        W const pref = -(4.0L * dn + 2.0L * ell + 3.0L) / (4.0L * dn + 2.0L * ell - 1.0L);
        W const mid  = 4.0L * dn + 2.0L * ell + 1.0L;

        // eta_n = r^(2n+2ell+1) eta: power mean of (s + k w) beta_{n-1} under t^(2n+2ell)
        for (std::size_t i = 0; i < m; ++i) {
            integrand[i] = (ws.s[i] + k * ws.w[i]) * bprev[i];
        }
        eta = scaled_weighted_integral(integrand, static_cast<double>(2.0L * dn + 2.0L * ell));

        // theta_n = r^(2n) theta: power mean of (eta - beta_{n-1} w) / w^2 under t^(2n-1)
        for (std::size_t i = 0; i < m; ++i) {
            integrand[i] = (eta[i] - bprev[i] * ws.w[i]) / (ws.w[i] * ws.w[i]);
        }
        theta = scaled_weighted_integral(integrand, static_cast<double>(2.0L * dn - 1.0L));

        for (std::size_t i = 1; i < m; ++i) {
            W const w = ws.w[i];
            if (with_gamma) {
                W const bracket = 2.0L * ws.s[i] * theta[i] + 2.0L * eta[i] / w - bprev[i];
                gprev[i]        = pref * (gprev[i] + mid * bracket / static_cast<W>(grid[i]));
            }
            bprev[i] = pref * (bprev[i] + 2.0L * mid * w * theta[i]);
        }
        keep(n, fam.beta, bprev);
        if (with_gamma) {
            keep(n, fam.gamma, gprev);
        }
        if (keep_scratch || n == N) {
            if (!keep_scratch) {
                fam.theta.clear();
                fam.eta.clear();
            }
            fam.theta.push_back(narrow(theta));
            fam.eta.push_back(narrow(eta));
        }
    }
    return fam;
}

NsbfCoefficients compute_coefficients(const ParticularSolutions& ps, const DerivedPotentials& dp, double kappa,
                                      std::size_t N, CoefficientOptions options)
{
    if (!ps.g0_nonvanishing) {
        throw UnsupportedPotential("the particular solution g0 vanishes on (0, b]; apply a spectral shift first");
    }
    require_same_grid(ps.f0.grid(), dp.Q1.grid());
    NsbfCoefficients out;
    out.kappa = kappa;
    out.N     = N;
    out.shift = ps.shift_applied;
    parallel_for(2, [&](std::size_t k) {
        int const j        = static_cast<int>(k) + 1;
        out.families[k]    = compute_family(ps.seed(j, kappa, dp), N, options.with_gamma, options.keep_scratch);
    });
    return out;
}

NsbfCoefficients compute_beta(const ParticularSolutions& ps, const DerivedPotentials& dp, double kappa,
                              std::size_t N)
{
    return compute_coefficients(ps, dp, kappa, N, {false, false});
}

void compute_gamma(const ParticularSolutions& ps, const DerivedPotentials& dp, NsbfCoefficients& coeffs)
{
    // gamma_n needs the extended-precision intermediates of the beta pass, so the
    // families are recomputed; beta comes out bit-identical.
    auto full = compute_coefficients(ps, dp, coeffs.kappa, coeffs.N, {true, false});
    for (std::size_t k = 0; k < 2; ++k) {
        coeffs.families[k].gamma = std::move(full.families[k].gamma);
    }
}

GridFunction alternating_sum(const NsbfCoefficients& coeffs, int j, std::size_t N)
{
    auto const& fam = coeffs.family(j);
    if (N >= fam.beta.size()) {
        throw DomainError("alternating sum beyond the computed coefficients");
    }
    GridFunction s(coeffs.grid());
    for (std::size_t n = 0; n <= N; ++n) {
        double const sign = n % 2 == 0 ? 1.0 : -1.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            s[i] += sign * fam.beta[n][i];
        }
    }
    return s;
}

TruncationDiagnostics select_truncation(const NsbfCoefficients& coeffs, const DerivedPotentials& dp,
                                        std::size_t budget_N, double threshold, int driving_family)
{
    if (budget_N > coeffs.N) {
        throw DomainError("truncation budget exceeds the computed coefficients");
    }
    if (!(threshold > 0.0)) {
        throw DomainError("truncation threshold must be positive");
    }
    if (driving_family < 0 || driving_family > 2) {
        throw DomainError("driving family must be 0 (both), 1 or 2");
    }
    Grid const& grid    = coeffs.grid();
    std::size_t const m = grid.size();
    constexpr double inf = std::numeric_limits<double>::infinity();

    TruncationDiagnostics diag{{GridFunction(grid), GridFunction(grid)}, {}, {}, 0.0, {}, {}};
    diag.threshold      = threshold;
    diag.driving_family = driving_family;

    std::array<GridFunction, 2> target{half_r_Q(coeffs, dp, 1), half_r_Q(coeffs, dp, 2)};

    for (int j = 1; j <= 2; ++j) {
        auto const k    = static_cast<std::size_t>(j - 1);
        auto const& fam = coeffs.family(j);
        auto& e         = diag.e[k];
        std::vector<double> sum(m, 0.0);
        std::fill(e.values().begin(), e.values().end(), inf);
        for (std::size_t n = 0; n <= budget_N; ++n) {
            double const sign = n % 2 == 0 ? 1.0 : -1.0;
            for (std::size_t i = 0; i < m; ++i) {
                sum[i] += sign * fam.beta[n][i];
                double const d = std::abs(sum[i] - target[k][i]);
                if (std::isfinite(d)) {
                    e[i] = std::min(e[i], d);
                }
            }
        }
        e[0] = 0.0;
        std::size_t fail = m;
        for (std::size_t i = 1; i < m; ++i) {
            double const bound = std::max(threshold * 2.0 * std::abs(target[k][i]), criterion_floor);
            if (!(e[i] < bound)) {
                fail = i;
                break;
            }
        }
        diag.first_failure[k] = fail;
        diag.r0[k]            = fail < m ? grid[fail] : grid.b();
    }

    // family 0 means both: the criterion must hold for j = 1 and j = 2 below B
    std::size_t drive = 0;
    if (driving_family == 0) {
        drive = diag.first_failure[0] <= diag.first_failure[1] ? 0 : 1;
    } else {
        drive = static_cast<std::size_t>(driving_family - 1);
    }
    if (diag.first_failure[drive] <= 1) {
        throw DegenerateTruncation("the truncation criterion fails at the first grid point; use a smaller b or a finer grid");
    }
    // B is snapped to the grid so that the boundary condition needs no interpolation.
    diag.B_selected = grid[grid.index_below(0.99 * diag.r0[drive])];

    for (int j = 1; j <= 2; ++j) {
        auto const k    = static_cast<std::size_t>(j - 1);
        auto const& fam = coeffs.family(j);
        std::vector<double> sum(m, 0.0);
        auto& disc = diag.global_discrepancy[k];
        disc.assign(budget_N + 1, 0.0);
        for (std::size_t n = 0; n <= budget_N; ++n) {
            double const sign = n % 2 == 0 ? 1.0 : -1.0;
            double worst      = 0.0;
            for (std::size_t i = 0; i < m && grid[i] < diag.B_selected; ++i) {
                sum[i] += sign * fam.beta[n][i];
                double const d = std::abs(sum[i] - target[k][i]);
                worst          = std::isfinite(d) ? std::max(worst, d) : inf;
            }
            disc[n] = worst;
        }
        // The partial sums first grow (beta_n peaks before it decays), so the running
        // minimum starts at the largest finite discrepancy rather than at n = 0.
        std::size_t best = 0;
        for (std::size_t n = 1; n <= budget_N; ++n) {
            if (std::isfinite(disc[n]) && (!std::isfinite(disc[best]) || disc[n] > disc[best])) {
                best = n;
            }
        }
        std::size_t stall = 0;
        for (std::size_t n = best + 1; n <= budget_N && stall < 5; ++n) {
            if (disc[n] < 0.9 * disc[best]) {
                best  = n;
                stall = 0;
            } else {
                ++stall;
            }
        }
        diag.N_selected_per_j[k] = best;
    }
    return diag;
}

} // namespace nsbf
