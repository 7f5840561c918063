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

#include "nsbf/potential.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include <boost/numeric/odeint.hpp>

namespace nsbf {

namespace {

using cplx = std::complex<double>;

constexpr double infinity = std::numeric_limits<double>::infinity();

void require_finite(const GridFunction& f, const char* what, std::size_t from = 0)
{
    for (std::size_t i = from; i < f.size(); ++i) {
        if (!std::isfinite(f[i])) {
            throw DomainError(std::string(what) + " is not finite at r = " + std::to_string(f.grid()[i]));
        }
    }
}

// Minimum of |w(r)| / max_{t <= r} |w(t)| over (0, b]. The running maximum keeps
// the measure meaningful for seeds that grow like exp(r^2).
template <typename T>
double relative_min_modulus(const BasicGridFunction<T>& w)
{
    double running_max = std::abs(w[0]);
    double result      = 1.0;
    for (std::size_t i = 1; i < w.size(); ++i) {
        double const m = std::abs(w[i]);
        if (!std::isfinite(m)) {
            return 0.0;
        }
        running_max = std::max(running_max, m);
        if (running_max > 0.0) {
            result = std::min(result, m / running_max);
        }
    }
    return result;
}

bool changes_sign(const GridFunction& w)
{
    for (std::size_t i = 1; i < w.size(); ++i) {
        if (!(w[i] > 0.0)) {
            return true;
        }
    }
    return false;
}

// w = u / r^(kappa+1) for the regular solution u of
// -u'' + (kappa(kappa+1)/r^2 + V) u = 0, V = q1 + c, i.e. w'' + 2(kappa+1)/r w' = V w, w(0) = 1.
// Returned as (w, w') on the grid. p and p' enter through V = p' - 2 kappa p / r + p^2 + c.
struct ShiftedSeed
{
    ComplexGridFunction w;
    ComplexGridFunction w_prime;
};

ShiftedSeed integrate_shifted_seed(double kappa, const ComplexGridFunction& p, const ComplexGridFunction& p_prime,
                                   double c)
{
    namespace ode = boost::numeric::odeint;
    Grid const& grid = p.grid();
    std::size_t const n = grid.size();

    GridFunction pr(grid), pi(grid), dpr(grid), dpi(grid);
    for (std::size_t i = 0; i < n; ++i) {
        pr[i]  = p[i].real();
        pi[i]  = p[i].imag();
        dpr[i] = p_prime[i].real();
        dpi[i] = p_prime[i].imag();
    }
    auto potential = [&](double r) {
        cplx const pv(interpolate(pr, r), interpolate(pi, r));
        cplx const dv(interpolate(dpr, r), interpolate(dpi, r));
        return dv - 2.0 * kappa * pv / r + pv * pv + c;
    };

    // series start w = 1 + w1 r + w2 r^2
    cplx const p0  = p[0];
    cplx const dp0 = p_prime[0];
    cplx const a   = -2.0 * kappa * p0;
    cplx const w1  = a / (2.0 * kappa + 2.0);
    cplx const v0  = dp0 - 2.0 * kappa * dp0 + p0 * p0 + c;
    cplx const w2  = (v0 + a * w1) / (4.0 * kappa + 6.0);
    double const r_start = std::min(1e-7 * grid.b(), 0.5 * grid.step());

    using state = std::array<double, 4>; // Re w, Im w, Re w', Im w'
    auto rhs = [&](const state& y, state& dy, double r) {
        cplx const w(y[0], y[1]);
        cplx const dw(y[2], y[3]);
        cplx const d2w = potential(r) * w - 2.0 * (kappa + 1.0) / r * dw;
        dy[0]          = y[2];
        dy[1]          = y[3];
        dy[2]          = d2w.real();
        dy[3]          = d2w.imag();
    };

    cplx const ws  = 1.0 + w1 * r_start + w2 * r_start * r_start;
    cplx const dws = w1 + 2.0 * w2 * r_start;
    state y{ws.real(), ws.imag(), dws.real(), dws.imag()};

    ShiftedSeed out{ComplexGridFunction(grid), ComplexGridFunction(grid)};
    out.w.set_origin_limit(1.0);
    out.w_prime.set_origin_limit(w1);

    std::vector<double> times;
    times.reserve(n);
    times.push_back(r_start);
    for (std::size_t i = 1; i < n; ++i) {
        times.push_back(grid[i]);
    }
    auto stepper = ode::make_dense_output(1e-13, 1e-13, ode::runge_kutta_dopri5<state>());
    std::size_t k = 0;
    ode::integrate_times(stepper, rhs, y, times.begin(), times.end(), grid.step() * 0.5,
                         [&](const state& s, double) {
                             if (k > 0) {
                                 out.w[k]       = cplx(s[0], s[1]);
                                 out.w_prime[k] = cplx(s[2], s[3]);
                             }
                             ++k;
                         });
    return out;
}

} // namespace

DiracProblem::DiracProblem(double kappa_, GridFunction p_, std::optional<GridFunction> p_prime_, double omega1_,
                           double omega2_)
    : kappa(kappa_)
    , p(std::move(p_))
    , p_prime(p_prime_ ? std::move(*p_prime_) : finite_difference_derivative(p))
    , omega1(omega1_)
    , omega2(omega2_)
{
    if (!(kappa >= 0.5) || !std::isfinite(kappa)) {
        throw DomainError("kappa must be a finite number >= 1/2");
    }
    if (omega2 == 0.0 || !std::isfinite(omega2) || !std::isfinite(omega1)) {
        throw DomainError("omega2 must be finite and nonzero, omega1 finite");
    }
    require_same_grid(p.grid(), p_prime.grid());
    require_finite(p, "p");
    require_finite(p_prime, "p'");
}

DiracProblem zero_potential_problem(double kappa, const Grid& grid)
{
    return DiracProblem(kappa, GridFunction(grid), GridFunction(grid));
}

DiracProblem potential_from_csv(const std::filesystem::path& path, double kappa, std::optional<Grid> grid)
{
    auto const cols = read_csv_columns(path);
    if (cols.size() < 2 || cols[0].size() < 2) {
        throw Error(path.string() + ": expected columns r, p[, p'] with at least 2 rows");
    }
    auto const& r = cols[0];
    if (r.front() != 0.0) {
        throw Error(path.string() + ": the r column must start at 0");
    }
    Grid const file_grid(r.back(), r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (std::abs(r[i] - file_grid[i]) > 1e-9 * file_grid.b()) {
            throw Error(path.string() + ": the r column must be uniformly spaced");
        }
    }
    GridFunction const p_file(file_grid, cols[1]);
    std::optional<GridFunction> dp_file;
    if (cols.size() >= 3) {
        dp_file.emplace(file_grid, cols[2]);
    }
    if (!grid || *grid == file_grid) {
        return DiracProblem(kappa, p_file, dp_file);
    }
    if (grid->b() > file_grid.b() * (1.0 + 1e-12)) {
        throw DomainError("target grid extends beyond the tabulated potential");
    }
    auto const p = GridFunction::sample(*grid, [&](double x) { return interpolate(p_file, std::min(x, file_grid.b())); });
    if (!dp_file) {
        auto const dp = finite_difference_derivative(p_file);
        return DiracProblem(kappa, p, GridFunction::sample(*grid, [&](double x) {
                                return interpolate(dp, std::min(x, file_grid.b()));
                            }));
    }
    return DiracProblem(kappa, p, GridFunction::sample(*grid, [&](double x) {
                            return interpolate(*dp_file, std::min(x, file_grid.b()));
                        }));
}

DerivedPotentials derive_potentials(const DiracProblem& problem)
{
    Grid const& grid   = problem.grid();
    double const kappa = problem.kappa;
    auto const& p      = problem.p;
    auto const& dp     = problem.p_prime;
    double const p0    = p[0];
    bool const singular = p0 != 0.0;

    DerivedPotentials out{cumulative_integral(p), GridFunction(grid), GridFunction(grid), GridFunction(grid),
                          GridFunction(grid), singular};

    for (std::size_t i = 1; i < grid.size(); ++i) {
        double const r    = grid[i];
        double const term = -2.0 * kappa * p[i] / r + p[i] * p[i];
        out.q1[i]         = dp[i] + term;
        out.q2[i]         = -dp[i] + term;
    }
    if (singular) {
        double const lim = p0 > 0.0 ? -infinity : infinity;
        out.q1.set_origin_limit(lim);
        out.q2.set_origin_limit(lim);
    } else {
        out.q1.set_origin_limit((1.0 - 2.0 * kappa) * dp[0]);
        out.q2.set_origin_limit((-1.0 - 2.0 * kappa) * dp[0]);
    }

    // Q_j = +-(p - p0) - 2 kappa [ int (p - p0)/t + p0 ln r ] + int p^2
    auto const ratio = combine(OriginLimit{dp[0]}, [p0](double r, double v) { return (v - p0) / r; }, p);
    auto const ratio_int = cumulative_integral(ratio);
    auto const sq_int    = cumulative_integral(combine([](double, double v) { return v * v; }, p));
    for (std::size_t i = 1; i < grid.size(); ++i) {
        double const r   = grid[i];
        double const log = singular ? p0 * std::log(r) : 0.0;
        double const common = -2.0 * kappa * (ratio_int[i] + log) + sq_int[i];
        out.Q1[i] = (p[i] - p0) + common;
        out.Q2[i] = -(p[i] - p0) + common;
    }
    double const q_origin = singular ? (p0 > 0.0 ? infinity : -infinity) : 0.0;
    out.Q1.set_origin_limit(q_origin);
    out.Q2.set_origin_limit(q_origin);
    return out;
}

namespace {

// The same closed forms as particular_solutions, evaluated in long double from an
// extended-precision antiderivative of p.
std::array<std::optional<WideSeed>, 2> wide_seeds(const DiracProblem& problem)
{
    using W              = long double;
    Grid const& grid     = problem.grid();
    std::size_t const n  = grid.size();
    W const kappa        = problem.kappa;
    W const twok1        = 2.0L * kappa + 1.0L;
    WideGridFunction p(grid);
    for (std::size_t i = 0; i < n; ++i) {
        p[i] = problem.p[i];
    }
    auto const P = cumulative_integral(p);
    WideGridFunction weight(grid), weight_m1(grid);
    for (std::size_t i = 0; i < n; ++i) {
        weight[i]    = std::exp(-2.0L * P[i]);
        weight_m1[i] = std::expm1(-2.0L * P[i]);
    }
    auto const moment     = scaled_weighted_integral(weight, 2.0 * problem.kappa);
    auto const moment_dev = scaled_weighted_integral(weight_m1, 2.0 * problem.kappa);

    WideSeed g{WideGridFunction(grid), WideGridFunction(grid), WideGridFunction(grid), WideGridFunction(grid)};
    WideSeed f = g;
    for (std::size_t i = 1; i < n; ++i) {
        W const r   = grid[i];
        W const eP  = std::exp(P[i]);
        W const emP = std::exp(-P[i]);

        f.w[i]           = emP;
        f.w_minus_one[i] = std::expm1(-P[i]);
        f.s[i]           = (kappa - p[i] * r) * emP;
        f.sigma[i]       = kappa * f.w_minus_one[i] / r - p[i] * emP;

        W w         = twok1 * eP * moment[i];
        W const dev = std::expm1(P[i]) + eP * twok1 * moment_dev[i];
        W wm1       = w - 1.0L;
        if (std::abs(dev) < 0.25L) {
            wm1 = dev;
            w   = 1.0L + dev;
        }
        g.w[i]           = w;
        g.w_minus_one[i] = wm1;
        g.s[i]           = (p[i] * r - kappa) * w + twok1 * emP;
        g.sigma[i]       = p[i] * w + (twok1 * f.w_minus_one[i] - kappa * wm1) / r;
    }
    W const p0 = p[0];
    f.w.set_origin_limit(1.0L);
    f.w_minus_one.set_origin_limit(0.0L);
    f.s.set_origin_limit(kappa);
    f.sigma.set_origin_limit(-(kappa + 1.0L) * p0);
    g.w.set_origin_limit(1.0L);
    g.w_minus_one.set_origin_limit(0.0L);
    g.s.set_origin_limit(kappa + 1.0L);
    g.sigma.set_origin_limit(-p0 * kappa * (kappa + 2.0L) / (kappa + 1.0L));
    return {std::move(g), std::move(f)};
}

WideGridFunction widen(const GridFunction& f)
{
    WideGridFunction out(f.grid());
    for (std::size_t i = 0; i < f.size(); ++i) {
        out[i] = f[i];
    }
    return out;
}

} // namespace

SeedFunction ParticularSolutions::seed(int j, double kappa, const DerivedPotentials& dp) const
{
    if (j != 1 && j != 2) {
        throw DomainError("seed index must be 1 or 2");
    }
    double const ell = j == 1 ? kappa : kappa - 1.0;
    auto const& u    = j == 1 ? g0 : f0;
    auto const& du   = j == 1 ? g0_prime : f0_prime;
    auto reduced     = combine(OriginLimit{1.0}, [ell](double r, double v) { return v / std::pow(r, ell + 1.0); }, u);
    auto reduced_d   = combine(OriginLimit{ell + 1.0}, [ell](double r, double v) { return v / std::pow(r, ell); }, du);
    auto const& rm1 = j == 1 ? g0_reduced_minus_one : f0_reduced_minus_one;
    auto const& sd  = j == 1 ? g0_scaled_derivative : f0_scaled_derivative;
    auto const& ws  = wide[static_cast<std::size_t>(j - 1)];
    WideSeed w      = ws ? *ws : WideSeed{widen(reduced), widen(rm1), widen(reduced_d), widen(sd)};
    if (j == 2) {
        return {ell, f0, f0_prime, reduced, reduced_d, rm1, sd, dp.Q2, std::move(w)};
    }
    GridFunction Q = dp.Q1;
    if (shift_applied != 0.0) {
        for (std::size_t i = 1; i < Q.size(); ++i) {
            Q[i] += shift_applied * Q.grid()[i];
        }
    }
    return {ell, g0, g0_prime, reduced, reduced_d, rm1, sd, Q, std::move(w)};
}

ParticularSolutions particular_solutions(const DiracProblem& problem, const DerivedPotentials& dp,
                                         double vanishing_threshold)
{
    Grid const& grid     = problem.grid();
    std::size_t const n  = grid.size();
    double const kappa   = problem.kappa;
    double const twok1   = 2.0 * kappa + 1.0;
    auto const& P        = dp.antiderivative;
    auto const& p        = problem.p;
    double const p0      = p[0];

    GridFunction f0(grid), g0(grid), f0p(grid), g0p(grid), f0m(grid), g0m(grid), f0s(grid), g0s(grid);

    // r^-(2 kappa + 1) int_0^r t^(2 kappa) exp(-2P) dt, directly and as the deviation from 1/(2 kappa + 1)
    auto const weight     = combine([](double, double v) { return std::exp(-2.0 * v); }, P);
    auto const weight_m1  = combine([](double, double v) { return std::expm1(-2.0 * v); }, P);
    auto const moment     = scaled_weighted_integral(weight, 2.0 * kappa);
    auto const moment_dev = scaled_weighted_integral(weight_m1, 2.0 * kappa);

    for (std::size_t i = 1; i < n; ++i) {
        double const r      = grid[i];
        double const eP     = std::exp(P[i]);
        double const emP    = std::exp(-P[i]);
        double const rk     = std::pow(r, kappa);

        f0m[i] = std::expm1(-P[i]);
        f0[i]  = rk * emP;
        f0p[i] = (kappa / r - p[i]) * f0[i];
        f0s[i] = kappa * f0m[i] / r - p[i] * emP;

        double w = twok1 * eP * moment[i];
        double wm1;
        double const dev = std::expm1(P[i]) + eP * twok1 * moment_dev[i];
        if (std::abs(dev) < 0.25) {
            // cancellation-free near the origin
            wm1 = dev;
            w   = 1.0 + dev;
        } else {
            wm1 = w - 1.0;
        }
        g0m[i] = wm1;
        g0[i]  = r * rk * w;
        g0p[i] = (p[i] - kappa / r) * g0[i] + twok1 * f0[i];
        g0s[i] = p[i] * w + (twok1 * f0m[i] - kappa * wm1) / r;
    }
    f0.set_origin_limit(kappa == 0.0 ? 1.0 : 0.0);
    g0.set_origin_limit(0.0);
    f0p.set_origin_limit(kappa == 1.0 ? 1.0 : (kappa > 1.0 ? 0.0 : infinity));
    g0p.set_origin_limit(0.0);
    f0m.set_origin_limit(0.0);
    g0m.set_origin_limit(0.0);
    f0s.set_origin_limit(-(kappa + 1.0) * p0);
    g0s.set_origin_limit(-p0 * kappa * (kappa + 2.0) / (kappa + 1.0));

    ParticularSolutions ps{f0, g0, f0p, g0p, f0m, g0m, f0s, g0s, 0.0, false, 0.0, {}};
    ps.wide = wide_seeds(problem);
    auto const w = combine([](double, double v) { return 1.0 + v; }, g0m);
    ps.g0_min_modulus  = relative_min_modulus(w);
    ps.g0_nonvanishing = !changes_sign(w) && ps.g0_min_modulus >= vanishing_threshold;
    return ps;
}

ParticularSolutions apply_spectral_shift(const DiracProblem& problem, const DerivedPotentials& dp,
                                         const ParticularSolutions& ps, double c, double vanishing_threshold)
{
    Grid const& grid   = problem.grid();
    double const kappa = problem.kappa;
    ComplexGridFunction p(grid), dpp(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        p[i]   = problem.p[i];
        dpp[i] = problem.p_prime[i];
    }
    auto const seed = integrate_shifted_seed(kappa, p, dpp, c);
    (void)dp;

    ParticularSolutions out = ps;
    GridFunction w(grid);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        double const r  = grid[i];
        double const wi = seed.w[i].real();
        double const dw = seed.w_prime[i].real();
        double const rk1 = std::pow(r, kappa + 1.0);
        w[i]                         = wi;
        out.g0[i]                    = rk1 * wi;
        out.g0_prime[i]              = (kappa + 1.0) * rk1 / r * wi + rk1 * dw;
        out.g0_reduced_minus_one[i]  = wi - 1.0;
        out.g0_scaled_derivative[i]  = dw + (kappa + 1.0) * (wi - 1.0) / r;
    }
    w.set_origin_limit(1.0);
    out.g0_scaled_derivative.set_origin_limit(seed.w_prime[0].real() + (kappa + 1.0) * seed.w_prime[0].real());
    out.g0_min_modulus  = relative_min_modulus(w);
    out.g0_nonvanishing = !changes_sign(w) && out.g0_min_modulus >= vanishing_threshold;
    out.shift_applied   = c;
    out.wide[0].reset();
    return out;
}

ParticularSolutions spectral_shift(const DiracProblem& problem, const DerivedPotentials& dp,
                                   const ParticularSolutions& ps, double vanishing_threshold)
{
    if (ps.g0_nonvanishing) {
        return ps;
    }
    for (double mag = 1.0; mag <= std::exp2(20.0); mag *= 2.0) {
        for (double c : {mag, -mag}) {
            if (problem.omega_squared() + c <= 0.0) {
                continue;
            }
            auto shifted = apply_spectral_shift(problem, dp, ps, c, vanishing_threshold);
            if (shifted.g0_nonvanishing) {
                return shifted;
            }
        }
    }
    throw UnsupportedPotential("no spectral shift up to 2^20 gives a non-vanishing particular solution");
}

ComplexSeedCheck check_nonvanishing_seed(double kappa, const ComplexGridFunction& p, double vanishing_threshold)
{
    if (!(kappa >= 0.5)) {
        throw DomainError("kappa must be >= 1/2");
    }
    Grid const& grid  = p.grid();
    double const twok1 = 2.0 * kappa + 1.0;
    auto const P      = cumulative_integral(p);
    ComplexGridFunction weight(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        weight[i] = std::exp(-2.0 * P[i]);
    }
    auto const moment = scaled_weighted_integral(weight, 2.0 * kappa);

    ComplexSeedCheck out{ComplexGridFunction(grid)};
    ComplexGridFunction w(grid);
    w.set_origin_limit(1.0);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        double const r = grid[i];
        w[i]           = twok1 * std::exp(P[i]) * moment[i];
        out.g0[i]      = std::pow(r, kappa + 1.0) * w[i];
    }
    out.g0.set_origin_limit(0.0);
    out.min_modulus  = relative_min_modulus(w);
    out.nonvanishing = out.min_modulus >= vanishing_threshold;
    return out;
}

ComplexSeedCheck find_spectral_shift(double kappa, const ComplexGridFunction& p, const ComplexGridFunction& p_prime,
                                     double vanishing_threshold)
{
    require_same_grid(p.grid(), p_prime.grid());
    auto check = check_nonvanishing_seed(kappa, p, vanishing_threshold);
    if (check.nonvanishing) {
        return check;
    }
    Grid const& grid = p.grid();
    for (double mag = 1.0; mag <= std::exp2(20.0); mag *= 2.0) {
        for (double c : {mag, -mag}) {
            auto const seed = integrate_shifted_seed(kappa, p, p_prime, c);
            ComplexSeedCheck out{ComplexGridFunction(grid)};
            for (std::size_t i = 1; i < grid.size(); ++i) {
                out.g0[i] = std::pow(grid[i], kappa + 1.0) * seed.w[i];
            }
            out.g0.set_origin_limit(0.0);
            out.min_modulus  = relative_min_modulus(seed.w);
            out.nonvanishing = out.min_modulus >= vanishing_threshold;
            out.shift        = c;
            if (out.nonvanishing) {
                return out;
            }
        }
    }
    throw UnsupportedPotential("no spectral shift up to 2^20 gives a non-vanishing particular solution");
}

} // namespace nsbf
