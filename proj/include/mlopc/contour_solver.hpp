#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mlopc/singularity_map.hpp"

namespace mlopc {

// ---------------------------------------------------------------------------
// Quadrature targets and the admissible safety-factor interval.
// ---------------------------------------------------------------------------

struct Tolerances {
    double eps = 1e-15;                                      // target accuracy
    double mach = std::numeric_limits<double>::epsilon();    // round-off unit
    double fbar_min_floor = 1.0;
    double fbar_max = 10.0;
    std::optional<double> fbar_tar{}; // default: geometric mean of the admissible interval

    void validate() const {
        if (!(mach < eps && eps < 1.0))
            throw domain_error("Tolerances: require mach < eps < 1");
        if (fbar_tar && !(*fbar_tar >= 1.0 && *fbar_tar <= fbar_max))
            throw domain_error("Tolerances: fbar_tar outside [1, fbar_max]");
    }
};

enum class Rejection { narrow_region, roundoff_dominated, fbar_too_large };

inline const char* to_string(Rejection r) {
    switch (r) {
        case Rejection::narrow_region: return "narrow_region";
        case Rejection::roundoff_dominated: return "roundoff_dominated";
        case Rejection::fbar_too_large: return "fbar_too_large";
    }
    return "?";
}

/// Geometry of one region solve: the phi interval, the reduced interval the
/// contour is confined to, and the analyticity-strip bounds in the w-plane.
struct BoundedRegionGeometry {
    double phi_left = 0.0, phi_right = 0.0;       // phi of the boundary singularities
    double phibar_left = 0.0, phibar_right = 0.0; // reduced interval
    double cstar = 0.0, dstar = 0.0;              // full strip bounds
    double cbar = 0.0, dbar = 0.0;                // reduced strip bounds
    double w = 0.0;                               // auxiliary -phibar_right*t/log(eps_bar)
    double fbar = 0.0, fbar_min = 0.0;
    double eps_bar = 0.0;
};

/// One region's quadrature recipe.  Rejections are data, not failures.
struct ContourPlan {
    int region_index = 0;
    double mu = 0.0;
    double h = 0.0;
    long n = 0;           // node count N (2N+1 quadrature points), rounded up
    double n_exact = 0.0; // pre-rounding N, used by the balancing checks
    double phibar_left = 0.0;
    double fbar = 1.0;
    bool roundoff_branch = false;
    std::optional<BoundedRegionGeometry> geometry{};
    bool admissible = false;
    std::optional<Rejection> rejection{};
    std::vector<int> residue_indices{};
};

namespace detail {

inline double resolve_fbar_target(const Tolerances& tol, double fbar_min) {
    double lo = std::min(1.05 * fbar_min, tol.fbar_max);
    double tar = tol.fbar_tar ? *tol.fbar_tar
                              : std::sqrt(std::max(fbar_min, 1.0) * tol.fbar_max);
    return std::clamp(tar, std::max(lo, tol.fbar_min_floor), tol.fbar_max);
}

inline std::vector<int> indices_right_of(const SingularityChart& chart, int j) {
    std::vector<int> out;
    for (int k = j + 1; k < chart.n_regions(); ++k) out.push_back(k);
    return out;
}

/// Root of the strip-matching quadratic for the unbounded region, written in
/// the rationalized form (A-2)/(3+A+sqrt(1+12A)) so the A = 4 point of the
/// raw expression (3+A-sqrt(1+12A))/(A-4) is an ordinary value.
inline double unbounded_cbar(double A) {
    return (A - 2.0) / (3.0 + A + std::sqrt(1.0 + 12.0 * A));
}

} // namespace detail

// ---------------------------------------------------------------------------
// Region bounded to the right: balance both discretization errors and the
// truncation error against eps_bar = eps/fbar, confining the contour to the
// reduced interval [phibar_left, phibar_right].
// ---------------------------------------------------------------------------

inline ContourPlan solve_bounded(const SingularityChart& chart, int j, double t,
                                 const Tolerances& tol) {
    tol.validate();
    if (!(t > 0.0)) throw domain_error("solve_bounded: t must be positive");
    if (j < 0 || j >= chart.last_region())
        throw domain_error("solve_bounded: region is not bounded to the right");

    ContourPlan plan;
    plan.region_index = j;
    plan.residue_indices = detail::indices_right_of(chart, j);

    const double phi_l = chart.entries[j].phi;
    const double phi_r = chart.entries[j + 1].phi;
    const double p = chart.strengths[j].p;
    const double q = chart.strengths[j].q.value_or(0.0);
    if (!(q > 0.0))
        throw std::logic_error(
            "solve_bounded: right boundary of a bounded region must carry q > 0");
    const double sl = std::sqrt(phi_l), sr = std::sqrt(phi_r);
    const double le = std::log(tol.eps), lm = std::log(tol.mach);
    const double re_threshold = le - lm; // admissible mu*t ceiling

    // Minimum safety factor keeping the reduced interval non-degenerate.
    double fbar_min = (p == 0.0) ? std::pow(sl / (sr - sl), q)
                                 : std::pow((sl + sr) / (sr - sl), std::max(p, q));
    if (!(fbar_min <= tol.fbar_max)) {
        plan.rejection = Rejection::fbar_too_large;
        return plan;
    }

    double fbar = std::clamp(detail::resolve_fbar_target(tol, fbar_min),
                             std::min(fbar_min * (1.0 + 1e-6), tol.fbar_max), tol.fbar_max);
    const double eps_bar = tol.eps / fbar;
    const double leb = std::log(eps_bar);
    const double a = (p > 0.0) ? std::pow(fbar, -1.0 / p) : 0.0;
    const double b = std::pow(fbar, -1.0 / q);

    // The auxiliary w depends on phibar_right, itself part of the solution:
    // iterate the 2x2 solve to a fixed point so the balancing equalities and
    // the safety-factor certificate hold together at full precision.
    double w = -phi_r * t / leb;
    double sbl = sl, sbr = sr;
    bool w_consistent = false;
    for (int it = 0; it < 200; ++it) {
        double den = 2.0 + w - (1.0 + w) * a + b;
        sbl = ((2.0 + w + b) * sl + a * sr) / den;
        sbr = (-(1.0 + w) * b * sl + (2.0 + w - (1.0 + w) * a) * sr) / den;
        double w_implied = -(sbr * sbr) * t / leb;
        if (std::fabs(w_implied - w) <= 4e-16 * std::max(1.0, std::fabs(w))) {
            w_consistent = true;
            break;
        }
        // plain fixed point first, damped once it dawdles
        w = it < 20 ? w_implied : 0.5 * (w + w_implied);
    }

    if (!w_consistent || !(sl <= sbl && sbl < sbr && sbr < sr)) {
        plan.rejection = Rejection::narrow_region;
        return plan;
    }
    plan.phibar_left = sbl * sbl;
    plan.fbar = fbar;

    BoundedRegionGeometry geo;
    geo.phi_left = phi_l;
    geo.phi_right = phi_r;
    geo.phibar_left = sbl * sbl;
    geo.phibar_right = sbr * sbr;
    geo.w = w;
    geo.fbar = fbar;
    geo.fbar_min = fbar_min;
    geo.eps_bar = eps_bar;

    // Round-off guard: e^(mu t) * mach must stay below eps.
    if (sbl + sbr >= 2.0 * std::sqrt(re_threshold / t)) {
        plan.geometry = geo;
        plan.rejection = Rejection::roundoff_dominated;
        return plan;
    }

    double smu = ((1.0 + w) * sbl + sbr) / (2.0 + w);
    plan.mu = smu * smu;
    plan.h = -(2.0 * pi / leb) * (sbr - sbl) / ((1.0 + w) * sbl + sbr);
    plan.n_exact = (1.0 / plan.h) * std::sqrt(1.0 - leb / (t * plan.mu));
    plan.n = std::max(1L, static_cast<long>(std::ceil(plan.n_exact)));

    geo.cstar = 1.0 - sl / smu;
    geo.dstar = sr / smu - 1.0;
    geo.cbar = 1.0 - sbl / smu;
    geo.dbar = sbr / smu - 1.0;
    plan.geometry = geo;
    plan.admissible = true;
    return plan;
}

// ---------------------------------------------------------------------------
// Right-unbounded region: balance against eps directly; the safety factor is
// controlled through phibar only.  Falls back to the round-off-dominated
// parameter set when the balanced mu would amplify rounding beyond eps.
// ---------------------------------------------------------------------------

inline ContourPlan solve_unbounded(const SingularityChart& chart, double t,
                                   const Tolerances& tol) {
    tol.validate();
    if (!(t > 0.0)) throw domain_error("solve_unbounded: t must be positive");

    const int j = chart.last_region();
    ContourPlan plan;
    plan.region_index = j;

    const double phi_l = chart.entries[j].phi;
    const double p = chart.strengths[j].p;
    const double le = std::log(tol.eps), lm = std::log(tol.mach);
    const double re_threshold = le - lm;
    const double inf = std::numeric_limits<double>::infinity();
    const double ftar = detail::resolve_fbar_target(tol, tol.fbar_min_floor);

    double phibar = phi_l * (1.0 + 1e-8) + 1e-8;
    double mu = 0.0, h = 0.0, n_exact = 0.0, cb = 0.0, fbar = 1.0;

    auto balance = [&](double pb) {
        n_exact = (pb * t / pi) *
                  (1.0 - 1.5 * le / (pb * t) + std::sqrt(1.0 - 2.0 * le / (t * pb)));
        double A = pi * n_exact / (t * pb);
        cb = detail::unbounded_cbar(A);
        h = (1.0 + 2.0 * cb) / n_exact;
        mu = pb / ((1.0 - cb) * (1.0 - cb));
    };

    bool in_range = false;
    for (int it = 0; it < 10; ++it) {
        balance(phibar);
        if (p == 0.0) {
            fbar = 1.0;
            in_range = true;
            break;
        }
        fbar = std::pow((std::sqrt(phibar) - std::sqrt(phi_l)) / std::sqrt(mu), -p);
        if (fbar >= tol.fbar_min_floor && fbar <= tol.fbar_max) {
            in_range = true;
            break;
        }
        phibar = std::pow(std::pow(ftar, -1.0 / p) * std::sqrt(mu) + std::sqrt(phi_l), 2.0);
    }
    if (!in_range)
        throw std::runtime_error(
            "solve_unbounded: safety-factor iteration failed to enter range");

    if (mu * t > re_threshold) {
        // Round-off dominated: pin mu by e^(mu t) * mach = eps, re-derive the
        // contour placement from the safety factor at the fixed mu.
        plan.roundoff_branch = true;
        mu = re_threshold / t;
        if (p > 0.0) {
            auto place = [&](double f) {
                return std::pow(std::pow(f, -1.0 / p) * std::sqrt(mu) + std::sqrt(phi_l),
                                2.0);
            };
            fbar = ftar;
            phibar = place(fbar);
            if (phibar > (re_threshold / t) * (1.0 + 1e-12)) {
                fbar = tol.fbar_max;
                phibar = place(fbar);
            }
        } else {
            fbar = 1.0;
        }
        if (phibar > (re_threshold / t) * (1.0 + 1e-12)) {
            // even the accuracy fbar_max * eps is out of reach here
            plan.rejection = Rejection::roundoff_dominated;
            return plan;
        }
        n_exact = le * std::sqrt(-lm) /
                  (2.0 * pi * (std::sqrt(phibar * t) - std::sqrt(re_threshold)));
        h = (1.0 / n_exact) * std::sqrt(lm / (lm - le));
        plan.mu = mu;
        plan.h = h;
        plan.n_exact = n_exact;
        plan.n = std::max(1L, static_cast<long>(std::ceil(n_exact)));
        plan.phibar_left = phibar;
        plan.fbar = fbar;
        plan.admissible = true; // geometry deliberately absent on this branch
        return plan;
    }

    plan.mu = mu;
    plan.h = h;
    plan.n_exact = n_exact;
    plan.n = std::max(1L, static_cast<long>(std::ceil(n_exact)));
    plan.phibar_left = phibar;
    plan.fbar = fbar;

    BoundedRegionGeometry geo;
    geo.phi_left = phi_l;
    geo.phi_right = inf;
    geo.phibar_left = phibar;
    geo.phibar_right = inf;
    geo.cstar = 1.0 - std::sqrt(phi_l / mu);
    geo.dstar = inf;
    geo.cbar = cb;
    geo.dbar = inf;
    geo.w = 0.0;
    geo.fbar = fbar;
    geo.fbar_min = tol.fbar_min_floor;
    geo.eps_bar = tol.eps;
    plan.geometry = geo;
    plan.admissible = true;
    return plan;
}

// ---------------------------------------------------------------------------
// Plan every region, keep the cheapest admissible one.
// ---------------------------------------------------------------------------

struct PlanSet {
    std::vector<ContourPlan> plans;
    int selected = -1;
};

inline PlanSet plan_all(const SingularityChart& chart, double t, const Tolerances& tol) {
    PlanSet out;
    const int n = chart.n_regions();
    for (int j = 0; j < n - 1; ++j) out.plans.push_back(solve_bounded(chart, j, t, tol));
    out.plans.push_back(solve_unbounded(chart, t, tol));
    for (ContourPlan& plan : out.plans)
        plan.residue_indices = detail::indices_right_of(chart, plan.region_index);

    for (int j = 0; j < n; ++j) {
        const ContourPlan& plan = out.plans[j];
        if (!plan.admissible) continue;
        if (out.selected < 0 || plan.n < out.plans[out.selected].n ||
            (plan.n == out.plans[out.selected].n && plan.mu < out.plans[out.selected].mu))
            out.selected = j;
    }
    if (out.selected < 0) {
        std::ostringstream msg;
        msg << "no admissible region among " << n << " (";
        for (int j = 0; j < n; ++j) {
            if (j) msg << ", ";
            msg << "R" << j << ": "
                << (out.plans[j].rejection ? to_string(*out.plans[j].rejection) : "?");
        }
        msg << ")";
        throw no_admissible_region(msg.str());
    }
    return out;
}

} // namespace mlopc
