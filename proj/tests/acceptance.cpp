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


// Acceptance gate. Prints one PASS/FAIL line per criterion and exits nonzero
// when any criterion fails. Tolerances are pinned below and never adapted.

#include <chrono>
#include <cmath>
#include <algorithm>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "nsbf/config.hpp"
#include "nsbf/nsbf_coefficients.hpp"
#include "nsbf/oscillator.hpp"
#include "nsbf/pipeline.hpp"
#include "nsbf/special_functions.hpp"
#include "nsbf/spectral.hpp"
#include "support/bessel_oracle.hpp"
#include "support/ode_oracle.hpp"
#include "support/test_potentials.hpp"

using namespace nsbf;

namespace {

constexpr double c1_B_lo = 8.5, c1_B_hi = 9.5, c1_tol = 1e-6, c1_seconds = 300.0;
constexpr int c1_count   = 10;
constexpr double c2_B_lo = 7.0, c2_B_hi = 8.0, c2_tol = 1e-5;
constexpr int c2_count   = 6;
constexpr double c3_ratio = 1e2;
constexpr double c4_zero_coeff = 1e-10, c4_zero_solution = 1e-12, c4_threshold = 0.01;
constexpr double c5_rel = 1e-7, c5_residual = 1e-6;
constexpr double c6_rel = 1e-6;
constexpr double c7_tol = 1e-12;

int failures = 0;

void report(int k, bool pass, const std::string& detail)
{
    std::printf("criterion %d: %s  %s\n", k, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    failures += pass ? 0 : 1;
}

std::string fmt(const char* f, double a)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

RunConfig oscillator_config(int eps)
{
    return parse_config(R"({"mode": "oscillator-demo", "potential": {"builtin": "oscillator", "j": 2.5,
        "epsilon": )" + std::to_string(eps) + R"(, "m": 1, "freq": 1}, "b": 20, "n_points": 100001, "budget_N": 100})");
}

struct Match
{
    double exact     = 0.0;
    double error     = std::numeric_limits<double>::infinity();
    bool flagged     = false;
};

// Closed-form level k against the nearest computed eigenvalue.
std::vector<Match> match_levels(const OscillatorParams& params, const std::vector<EigenResult>& roots, int count)
{
    std::vector<Match> out;
    for (int k = 0; k < count; ++k) {
        Match m;
        m.exact = exact_eigenvalue(params, k);
        for (auto const& r : roots) {
            double const e = std::abs(r.lambda - m.exact);
            if (e < m.error) {
                m.error   = e;
                m.flagged = r.low_confidence || r.truncation_sensitive;
            }
        }
        out.push_back(m);
    }
    return out;
}

// max over [lo, hi] of |gamma-series derivative - finite difference of the beta-series value|,
// relative to the sup of the derivative there.
double derivative_mismatch(const SolutionSample& s, double lo, double hi)
{
    auto const df = finite_difference_derivative(s.f);
    auto const dg = finite_difference_derivative(s.g);
    double ef = 0.0, eg = 0.0;
    for (std::size_t i = 0; i < s.f.size(); ++i) {
        double const r = s.f.grid()[i];
        if (r >= lo && r <= hi) {
            ef = std::max(ef, std::abs(df[i] - s.f_prime[i]));
            eg = std::max(eg, std::abs(dg[i] - s.g_prime[i]));
        }
    }
    return std::max(ef / sup_norm(s.f_prime, lo, hi), eg / sup_norm(s.g_prime, lo, hi));
}

// Interior of [0, B] for the derivative check: the five-point stencil is one-sided
// within two steps of either end.
std::pair<double, double> interior(double B)
{
    return {0.01 * B, 0.99 * B};
}

void criteria_1_3_4(double& c6_oscillator, double& c6_oscillator_inner)
{
    OscillatorParams const params{2.5, -1, 1.0, 1.0};
    auto const t0 = std::chrono::steady_clock::now();
    auto const cfg = oscillator_config(-1);
    auto const pp  = prepare(cfg);
    auto const ep  = oscillator_eigenproblem(params, pp, 12);
    auto const roots = find_eigenvalues(ep);
    double const seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    auto const levels = match_levels(params, roots, c1_count);
    double worst = 0.0;
    for (auto const& m : levels) {
        worst = std::max(worst, m.error);
    }
    bool const pass1 = pp.B >= c1_B_lo && pp.B <= c1_B_hi && worst <= c1_tol && seconds <= c1_seconds;
    report(1, pass1,
           "B=" + fmt("%.4f", pp.B) + " N_f=" + std::to_string(pp.N_f) + " N_g=" + std::to_string(pp.N_g) +
               " max|err| first 10=" + fmt("%.2e", worst) + " (tol 1e-6) runtime=" + fmt("%.1f", seconds) + "s");

    // criterion 3: sup error of the f-derived component, n = 125 against n = 1
    auto const low  = compare_oscillator_state(params, 1, pp);
    auto const high = compare_oscillator_state(params, 125, pp);
    double const ratio   = high.F_sup / low.F_sup;
    double const ratio_g = high.G_sup / low.G_sup;
    report(3, ratio <= c3_ratio && ratio_g <= c3_ratio,
           "sup err F n=1 " + fmt("%.3e", low.F_sup) + ", n=125 " + fmt("%.3e", high.F_sup) + ", ratio " +
               fmt("%.3e", ratio) + "; G ratio " + fmt("%.3e", ratio_g) + " (limit 1e2)");

    // criterion 4: alternating sums on [r_1, B] for both families, then the zero potential
    double worst_sum = 0.0;
    auto const& grid = pp.problem.grid();
    for (int j : {1, 2}) {
        auto const N  = j == 1 ? pp.N_g : pp.N_f;
        auto const S  = alternating_sum(pp.coeffs, j, N);
        auto const& Q = j == 1 ? pp.dp.Q1 : pp.dp.Q2;
        for (std::size_t i = 1; i < grid.size() && grid[i] <= pp.B; ++i) {
            double const rQ = grid[i] * Q[i];
            worst_sum = std::max(worst_sum, std::abs(S[i] - rQ / 2.0) / std::max(std::abs(rQ), 1e-300));
        }
    }
    auto zero_cfg = parse_config(R"({"mode": "verify", "potential": {"builtin": "zero"}, "kappa": 1,
                                     "b": 3.14159, "n_points": 100001, "budget_N": 100})");
    auto const zp = prepare(zero_cfg);
    double worst_coeff = 0.0;
    for (int j : {1, 2}) {
        for (std::size_t n = 0; n <= zp.coeffs.N; ++n) {
            worst_coeff = std::max({worst_coeff, sup_norm(zp.coeffs.beta(j, n), 0.0, zp.B),
                                    sup_norm(zp.coeffs.gamma(j, n), 0.0, zp.B)});
        }
    }
    double worst_closed = 0.0;
    for (double w : {1.0, 10.0, 50.0}) {
        EvaluationOptions o;
        o.N_f = zp.N_f;
        o.N_g = zp.N_g;
        auto const s = evaluate(zp.coeffs, SpectralPoint::symmetric(w), zp.problem, zp.dp, o);
        auto const& zg = zp.problem.grid();
        for (std::size_t i = 0; i < zg.size(); ++i) {
            double const x  = w * zg[i];
            double const j1 = x < 1e-3 ? x / 3.0 - x * x * x / 30.0 : std::sin(x) / (x * x) - std::cos(x) / x;
            worst_closed = std::max({worst_closed, std::abs(s.f[i] + std::sin(x)), std::abs(s.g[i] - x * j1)});
        }
    }
    report(4, worst_sum <= c4_threshold && worst_coeff <= c4_zero_coeff && worst_closed <= c4_zero_solution,
           "max |S_N - rQ/2|/|rQ| on [r1,B]=" + fmt("%.3e", worst_sum) + " (tol 1e-2); zero potential: max|beta|,|gamma|=" +
               fmt("%.2e", worst_coeff) + " (tol 1e-10), max|sol - closed form|=" + fmt("%.2e", worst_closed) +
               " (tol 1e-12)");

    // contribution to criterion 6: the first ten eigenfunctions
    auto const [lo, hi] = interior(pp.B);
    for (int k = 0; k < c1_count; ++k) {
        EvaluationOptions o;
        o.normalization = Normalization::entire;
        o.N_f = pp.N_f;
        o.N_g = pp.N_g;
        o.r_max = pp.B;
        auto const s = evaluate(pp.coeffs, oscillator_coupling(params, exact_eigenvalue(params, k)), pp.problem,
                                pp.dp, o);
        c6_oscillator       = std::max(c6_oscillator, derivative_mismatch(s, lo, hi));
        c6_oscillator_inner = std::max(c6_oscillator_inner, derivative_mismatch(s, 0.1 * pp.B, 0.9 * pp.B));
    }
}

void criterion_2()
{
    OscillatorParams const params{2.5, 1, 1.0, 1.0};
    auto const pp     = prepare(oscillator_config(1));
    auto const roots  = find_eigenvalues(oscillator_eigenproblem(params, pp, 12));
    auto const levels = match_levels(params, roots, 12);
    double worst      = 0.0;
    bool unflagged_degradation = false;
    for (int k = 0; k < 12; ++k) {
        if (k < c2_count) {
            worst = std::max(worst, levels[k].error);
        } else if (levels[k].error > c2_tol && !levels[k].flagged) {
            unflagged_degradation = true;
        }
    }
    bool const pass = pp.B >= c2_B_lo && pp.B <= c2_B_hi && worst <= c2_tol && !unflagged_degradation &&
                      levels[11].flagged;
    report(2, pass,
           "B=" + fmt("%.4f", pp.B) + " N_f=" + std::to_string(pp.N_f) + " max|err| first 6=" + fmt("%.2e", worst) +
               " (tol 1e-5); level 58: err " + fmt("%.3e", levels[11].error) +
               (levels[11].flagged ? " flagged" : " NOT flagged") +
               (unflagged_degradation ? "; unflagged degraded level" : ""));
}

void criterion_5(double& c6_random)
{
    auto const pots            = testing_support::random_potentials(5);
    double const kappas[5]     = {1.0, 1.5, 2.0, 1.0, 1.5};
    double worst_rel = 0.0, worst_res = 0.0;
    for (std::size_t k = 0; k < pots.size(); ++k) {
        Grid const grid(3.0, 10001);
        std::size_t const budget = 100;
        auto const pr = pots[k].on(grid, kappas[k]);
        auto const dp = derive_potentials(pr);
        auto const ps = spectral_shift(pr, dp, particular_solutions(pr, dp));
        auto const c  = compute_coefficients(ps, dp, kappas[k], budget);
        auto const d  = select_truncation(c, dp, budget);

        std::vector<double> radii;
        std::vector<std::size_t> idx;
        for (std::size_t i = grid.index_below(0.1); i < grid.size(); i += 10) {
            radii.push_back(grid[i]);
            idx.push_back(i);
        }
        for (double w : {1.0, 10.0, 50.0}) {
            EvaluationOptions o;
            o.N_f = d.N_selected_per_j[1];
            o.N_g = d.N_selected_per_j[0];
            auto const s   = evaluate(c, SpectralPoint::symmetric(w), pr, dp, o);
            auto const ref = oracle::integrate_dirac(pots[k].p, kappas[k], w, w, radii);
            double ef = 0.0, eg = 0.0, mf = 0.0, mg = 0.0;
            for (std::size_t q = 0; q < idx.size(); ++q) {
                ef = std::max(ef, std::abs(s.f[idx[q]] - ref.f[q]));
                eg = std::max(eg, std::abs(s.g[idx[q]] - ref.g[q]));
                mf = std::max(mf, std::abs(ref.f[q]));
                mg = std::max(mg, std::abs(ref.g[q]));
            }
            worst_rel = std::max({worst_rel, ef / mf, eg / mg});
            worst_res = std::max({worst_res, sup_norm(s.residual1, 0.1, grid.b()), sup_norm(s.residual2, 0.1, grid.b())});
            auto const [lo, hi] = interior(d.B_selected);
            c6_random = std::max(c6_random, derivative_mismatch(s, lo, hi));
        }
    }
    report(5, worst_rel <= c5_rel && worst_res <= c5_residual,
           "5 potentials x omega {1,10,50}: max rel sup err on [0.1,3]=" + fmt("%.2e", worst_rel) +
               " (tol 1e-7), max residual=" + fmt("%.2e", worst_res) + " (tol 1e-6)");
}

void criterion_7()
{
    // 5 bases x 10 arguments x 4 offsets = 200 lattice points
    double const bases[]   = {-1.0, -0.5, 0.0, 1.5, 2.0};
    double const xs[]      = {0.05, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0, 60.0, 100.0, 150.0};
    std::size_t const offs[] = {0, 1, 7, 61};
    double worst = 0.0;
    int points   = 0;
    for (double base : bases) {
        for (double x : xs) {
            auto const v = spherical_bessel_batch(BesselOrderSet::from_count(base, 62), x);
            for (std::size_t k : offs) {
                double const nu    = base + static_cast<double>(k);
                double const exact = oracle::spherical_bessel(nu, x);
                // relative where j_nu has no zeros (x < nu), else against the 1/x envelope
                double const scale = x < nu + 1.0 ? std::abs(exact) : std::max(std::abs(exact), 1.0 / x);
                worst = std::max(worst, std::abs(v[k] - exact) / scale);
                ++points;
            }
        }
    }
    double worst_rec = 0.0;
    for (double base : bases) {
        for (double x = 0.1; x <= 500.0; x *= 1.37) {
            BesselOrderSet const orders = BesselOrderSet::from_count(base, 62);
            auto const v = spherical_bessel_batch(orders, x);
            for (std::size_t k = 1; k + 1 < v.size(); ++k) {
                double const rhs = (2.0 * orders.order(k) + 1.0) / x * v[k];
                double const mag = std::max({std::abs(v[k - 1]), std::abs(v[k + 1]), std::abs(rhs)});
                if (mag > 1e-280) {
                    worst_rec = std::max(worst_rec, std::abs(v[k - 1] + v[k + 1] - rhs) / mag);
                }
            }
        }
    }
    report(7, points == 200 && worst <= c7_tol && worst_rec <= c7_tol,
           std::to_string(points) + " lattice points: max err=" + fmt("%.2e", worst) +
               " (tol 1e-12); recurrence on [0.1,500]: max rel defect=" + fmt("%.2e", worst_rec) + " (tol 1e-12)");
}

} // namespace

int main()
{
    double c6_oscillator = 0.0, c6_oscillator_inner = 0.0, c6_random = 0.0;
    criteria_1_3_4(c6_oscillator, c6_oscillator_inner);
    criterion_2();
    criterion_5(c6_random);
    report(6, c6_oscillator <= c6_rel && c6_random <= c6_rel,
           "gamma vs finite differences on [0.01B, 0.99B]: oscillator " + fmt("%.2e", c6_oscillator) +
               ", random potentials " + fmt("%.2e", c6_random) + " (tol 1e-6); for reference oscillator on [0.1B, 0.9B] " +
               fmt("%.2e", c6_oscillator_inner));
    criterion_7();
    std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
    return failures == 0 ? 0 : 1;
}
