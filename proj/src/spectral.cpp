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

#include "nsbf/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nsbf/error.hpp"
#include "nsbf/parallel.hpp"

namespace nsbf {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

void validate(const EigenProblem& ep)
{
    if (!ep.coeffs || !ep.problem || !ep.dp) {
        throw DomainError("eigenproblem is missing its coefficients, problem or derived potentials");
    }
    if (!(ep.B > 0.0) || ep.B > ep.coeffs->grid().b()) {
        throw DomainError("truncation point B must lie in (0, b]");
    }
    if (ep.N > ep.coeffs->N) {
        throw DomainError("eigenproblem N exceeds the computed coefficients");
    }
    if (!(ep.scan_step > 0.0) || !(ep.lambda_max > ep.lambda_min)) {
        throw DomainError("scan range must be nonempty with a positive step");
    }
}

std::size_t boundary_index(const EigenProblem& ep)
{
    // tolerate B given with a few ulps of noise relative to the grid point
    auto const& grid = ep.coeffs->grid();
    return grid.index_below(ep.B + 1e-9 * grid.step());
}

struct Root
{
    double lambda;
    double value;
    int iterations;
    bool low_confidence;
};

// Bisection on a sign-changing bracket, then secant steps that must stay inside it.
template <typename F>
Root refine(F&& fn, double a, double b, double fa, double fb)
{
    int it                 = 0;
    bool low_confidence    = false;
    double const slope0    = (fb - fa) / (b - a);
    while (b - a > 1e-13 * (1.0 + std::max(std::abs(a), std::abs(b))) && it < 300) {
        double const mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) {
            break;
        }
        double const fm = fn(mid);
        ++it;
        if (fm == 0.0) {
            return {mid, 0.0, it, false};
        }
        if ((fm > 0.0) == (fa > 0.0)) {
            a  = mid;
            fa = fm;
        } else {
            b  = mid;
            fb = fm;
        }
    }
    // At roundoff level the local slope is noise; its sign no longer follows the bracket.
    if ((fb - fa) / (b - a) * slope0 <= 0.0) {
        low_confidence = true;
    }
    double x  = std::abs(fa) < std::abs(fb) ? a : b;
    double fx = std::abs(fa) < std::abs(fb) ? fa : fb;
    double x0 = a, f0 = fa, x1 = b, f1 = fb;
    for (int k = 0; k < 3 && f1 != f0; ++k) {
        double const x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if (!(x2 >= a && x2 <= b)) {
            break;
        }
        double const f2 = fn(x2);
        ++it;
        if (std::abs(f2) < std::abs(fx)) {
            x  = x2;
            fx = f2;
        }
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
    }
    return {x, fx, it, low_confidence};
}

} // namespace

SpectralPoint symmetric_coupling(double lambda)
{
    double const w = std::sqrt(std::abs(lambda));
    return lambda >= 0.0 ? SpectralPoint{w, w} : SpectralPoint{w, -w};
}

double reduced_dispersion(const EigenProblem& ep, double lambda)
{
    validate(ep);
    return reduced_f_bracket(*ep.coeffs, boundary_index(ep), lambda, ep.N);
}

double dispersion(const EigenProblem& ep, double lambda)
{
    validate(ep);
    SpectralPoint const sp = ep.coupling(lambda);
    if (sp.omega2 == 0.0) {
        throw DomainError("omega2 = 0 at lambda = " + std::to_string(lambda));
    }
    double const scale = std::pow(sp.omega(), ep.problem->kappa + 1.0) / sp.omega2;
    double const B     = ep.coeffs->grid()[boundary_index(ep)];
    return -scale * std::pow(B, ep.problem->kappa) * reduced_dispersion(ep, lambda);
}

std::vector<EigenResult> find_eigenvalues(const EigenProblem& ep)
{
    validate(ep);
    std::size_t const iB = boundary_index(ep);
    auto const& coeffs   = *ep.coeffs;
    auto fN              = [&](double l) { return reduced_f_bracket(coeffs, iB, l, ep.N); };

    auto const steps = static_cast<std::size_t>(std::ceil((ep.lambda_max - ep.lambda_min) / ep.scan_step));
    std::vector<double> lam(steps + 1), val(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) {
        lam[k] = std::min(ep.lambda_min + static_cast<double>(k) * ep.scan_step, ep.lambda_max);
    }
    parallel_for(lam.size(), [&](std::size_t k) { val[k] = fN(lam[k]); });

    std::vector<std::size_t> brackets;
    for (std::size_t k = 0; k + 1 < lam.size(); ++k) {
        if (val[k] == 0.0 || (val[k] > 0.0) != (val[k + 1] > 0.0)) {
            brackets.push_back(k);
        }
    }

    std::vector<EigenResult> out(brackets.size());
    parallel_for(brackets.size(), [&](std::size_t q) {
        std::size_t const k = brackets[q];
        auto& res           = out[q];
        if (val[k] == 0.0) {
            res.lambda = lam[k];
        } else {
            auto const root        = refine(fN, lam[k], lam[k + 1], val[k], val[k + 1]);
            res.lambda             = root.lambda;
            res.dispersion_residual = std::abs(root.value);
            res.iterations         = root.iterations;
            res.low_confidence     = root.low_confidence;
        }
        // The same root with one series term fewer, searched within one scan step.
        if (ep.N > 0) {
            auto fM       = [&](double l) { return reduced_f_bracket(coeffs, iB, l, ep.N - 1); };
            double const a = res.lambda - ep.scan_step, b = res.lambda + ep.scan_step;
            double const fa = fM(a), fc = fM(res.lambda), fb = fM(b);
            res.truncation_shift = inf;
            if ((fa > 0.0) != (fc > 0.0)) {
                res.truncation_shift = std::abs(refine(fM, a, res.lambda, fa, fc).lambda - res.lambda);
            }
            if ((fc > 0.0) != (fb > 0.0)) {
                res.truncation_shift = std::min(res.truncation_shift,
                                                std::abs(refine(fM, res.lambda, b, fc, fb).lambda - res.lambda));
            }
            if (fc == 0.0) {
                res.truncation_shift = 0.0;
            }
            res.truncation_sensitive = res.truncation_shift > ep.sensitivity_tolerance * (1.0 + std::abs(res.lambda));
        }
    });

    // Sign changes from adjacent scan cells can land on the same root.
    std::sort(out.begin(), out.end(), [](const EigenResult& x, const EigenResult& y) { return x.lambda < y.lambda; });
    std::vector<EigenResult> unique;
    for (auto& r : out) {
        if (!unique.empty() && r.lambda - unique.back().lambda < 0.5 * ep.scan_step) {
            continue;
        }
        unique.push_back(std::move(r));
    }

    if (ep.with_eigenfunctions) {
        EvaluationOptions opts;
        opts.normalization = Normalization::entire;
        opts.N_f           = ep.N;
        opts.N_g           = std::min(ep.N, coeffs.N);
        opts.r_max         = ep.B;
        for (auto& r : unique) {
            SpectralPoint const sp = ep.coupling(r.lambda);
            auto sample            = evaluate(coeffs, sp, *ep.problem, *ep.dp, opts);
            r.residual1_sup        = sup_norm(sample.residual1, 0.01, ep.B);
            r.residual2_sup        = sup_norm(sample.residual2, 0.01, ep.B);
            r.eigenfunction        = std::move(sample);
        }
    }
    return unique;
}

} // namespace nsbf
