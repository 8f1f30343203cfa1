#pragma once

#include <cmath>
#include <optional>

#include "mlopc/contour_solver.hpp"

namespace mlopc {

// ---------------------------------------------------------------------------
// Evaluation of e^gamma_{alpha,beta}(t; lambda): trapezoidal quadrature of the
// contour integrand plus the residues of the poles right of the contour.
// ---------------------------------------------------------------------------

struct EvalResult {
    Complex value{0.0, 0.0};
    ContourPlan plan{};
    Complex residue_sum{0.0, 0.0};
    Complex quadrature_sum{0.0, 0.0};
    long n_integrand_evals = 0;
    double scaled_tau = 1.0;
};

/// Contour integrand g(u) = e^(z t) z^(alpha*gamma-beta) z'(u) / (z^alpha - lambda)^gamma
/// on the parabola z(u) = mu (iu+1)^2, z'(u) = 2 i mu (iu+1).
inline Complex integrand(double u, double mu, const MLParams& params, double t,
                         Complex lambda) {
    const Complex z{mu * (1.0 - u * u), 2.0 * mu * u};
    const Complex zp{-2.0 * mu * u, 2.0 * mu};
    const double num_exp = params.alpha * params.gamma - params.beta;
    Complex g = std::exp(z * t) * zp;
    if (num_exp != 0.0) g *= cpow_principal(z, num_exp);
    Complex base = cpow_principal(z, params.alpha) - lambda;
    Complex den = (params.gamma == 1.0) ? base : cpow_principal(base, params.gamma);
    return g / den;
}

namespace detail {

struct QuadratureOutcome {
    Complex value;
    long evals;
};

inline QuadratureOutcome trapezoid_impl(const ContourPlan& plan, const MLParams& params,
                                        double t, Complex lambda) {
    const long n = plan.n;
    const double h = plan.h, mu = plan.mu;
    if (lambda.imag() == 0.0) {
        // Schwarz symmetry: g(-u) = -conj(g(u)), so the sum is i times a real
        // number assembled from imaginary parts only.  The result is exactly real.
        XPAccumulator acc;
        acc.add(integrand(0.0, mu, params, t, lambda).imag());
        for (long k = 1; k <= n; ++k)
            acc.add(2.0 * integrand(k * h, mu, params, t, lambda).imag());
        return {Complex{acc.value() * h / (2.0 * pi), 0.0}, n + 1};
    }
    XPComplexAccumulator acc;
    for (long k = -n; k <= n; ++k) acc.add(integrand(k * h, mu, params, t, lambda));
    Complex s = acc.value();
    // 1/(2*pi*i) prefactor
    return {Complex{s.imag() * h / (2.0 * pi), -s.real() * h / (2.0 * pi)}, 2 * n + 1};
}

} // namespace detail

/// (h / 2 pi i) * sum_{k=-N..N} g(kh) for an admissible plan.
inline Complex trapezoid(const ContourPlan& plan, const MLParams& params, double t,
                         Complex lambda) {
    if (!plan.admissible) throw domain_error("trapezoid: plan is not admissible");
    return detail::trapezoid_impl(plan, params, t, lambda).value;
}

/// Residues (1/alpha) (s*)^(1-beta) e^(s* t) summed over the selected entries.
/// Only meaningful for gamma = 1 (simple poles with elementary residues);
/// charts with gamma != 1 never produce subtractable poles.
inline Complex residues(const MLParams& params, const SingularityChart& chart,
                        const std::vector<int>& indices, double t) {
    if (indices.empty()) return {0.0, 0.0};
    if (params.gamma != 1.0)
        throw std::logic_error("residues: non-empty residue set requires gamma = 1");
    XPComplexAccumulator acc;
    for (int idx : indices) {
        for (Complex s : chart.entries[idx].merged_poles) {
            Complex r = std::exp(s * t) / params.alpha;
            if (params.beta != 1.0) r *= cpow_principal(s, 1.0 - params.beta);
            acc.add(r);
        }
    }
    return acc.value();
}

// ---------------------------------------------------------------------------
// Full pipeline.  Every evaluation is rescaled to t' = 1 with tau = t, which
// caps e^(mu t') uniformly and leaves Arg(lambda) unchanged.
// ---------------------------------------------------------------------------

inline EvalResult ml_lt(const MLParams& params, double t, Complex lambda,
                        const Tolerances& tol = Tolerances{},
                        std::optional<int> force_region = {}) {
    tol.validate();
    if (!(t > 0.0) || !std::isfinite(t))
        throw domain_error("ml_lt: t must be positive and finite");
    if (!(std::isfinite(lambda.real()) && std::isfinite(lambda.imag())))
        throw domain_error("ml_lt: lambda must be finite");

    EvalResult out;
    out.scaled_tau = t;
    if (lambda == Complex{0.0, 0.0}) {
        out.value = Complex{std::pow(t, params.beta - 1.0) * rgamma_real(params.beta), 0.0};
        out.quadrature_sum = out.value;
        out.plan.region_index = -1;
        return out;
    }
    if (params.gamma != 1.0) {
        if (!(params.alpha < 1.0))
            throw unsupported_parameters(
                "gamma != 1 requires 0 < alpha < 1 (got alpha >= 1)");
        if (!(std::fabs(arg_principal(lambda)) > params.alpha * pi))
            throw unsupported_parameters(
                "gamma != 1 requires |Arg lambda| > alpha*pi");
    }

    const double scale = std::pow(t, params.beta - 1.0);
    const Complex lam = std::pow(t, params.alpha) * lambda;
    if (!(std::isfinite(lam.real()) && std::isfinite(lam.imag()) && std::isfinite(scale)))
        throw domain_error("ml_lt: t^alpha lambda overflows the working range");

    SingularityChart chart = build_chart(params, lam);
    // Far-right poles can make every region round-off dominated at the
    // requested eps.  The value is then residue-dominated (magnitude at least
    // e^(phi t)), so a relaxed absolute target still meets the mixed-error
    // goal; retry with loosened eps before giving up.
    Tolerances eff = tol;
    PlanSet ps;
    for (;;) {
        try {
            ps = plan_all(chart, 1.0, eff);
            break;
        } catch (const no_admissible_region&) {
            if (eff.eps >= 1e-2) throw;
            eff.eps = std::min(eff.eps * 100.0, 1e-2);
        }
    }
    int sel = ps.selected;
    if (force_region) {
        if (*force_region < 0 || *force_region >= chart.n_regions())
            throw domain_error("ml_lt: force_region out of range");
        if (!ps.plans[*force_region].admissible)
            throw no_admissible_region("ml_lt: forced region was rejected (" +
                                       std::string(to_string(*ps.plans[*force_region].rejection)) +
                                       ")");
        sel = *force_region;
    }
    const ContourPlan& plan = ps.plans[sel];

    Complex res = residues(params, chart, plan.residue_indices, 1.0);
    auto quad = detail::trapezoid_impl(plan, params, 1.0, lam);

    out.plan = plan;
    out.residue_sum = scale * res;
    out.quadrature_sum = scale * quad.value;
    out.value = out.residue_sum + out.quadrature_sum;
    out.n_integrand_evals = quad.evals;
    return out;
}

} // namespace mlopc
