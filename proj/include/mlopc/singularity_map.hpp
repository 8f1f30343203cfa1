#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "mlopc/scalar_kernels.hpp"

namespace mlopc {

// ---------------------------------------------------------------------------
// Parameters of E^gamma_{alpha,beta}.
// ---------------------------------------------------------------------------

struct MLParams {
    double alpha = 1.0;
    double beta = 1.0;
    double gamma = 1.0;

    MLParams() = default;
    MLParams(double a, double b, double g = 1.0) : alpha(a), beta(b), gamma(g) {
        if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(g)))
            throw domain_error("MLParams: parameters must be finite");
        if (!(a > 0.0)) throw domain_error("MLParams: alpha must be positive");
        if (!(g > 0.0)) throw domain_error("MLParams: gamma must be positive");
    }
};

// ---------------------------------------------------------------------------
// Singularities of the transform s^(alpha*gamma-beta) / (s^alpha - lambda)^gamma:
// the branch point at the origin plus the poles on the main Riemann sheet.
// ---------------------------------------------------------------------------

enum class SingularityKind { branch_point, pole };

struct Singularity {
    Complex value{0.0, 0.0};
    double phi = 0.0;
    SingularityKind kind = SingularityKind::branch_point;
    // All poles sharing this phi.  Poles lying on the branch cut are grouped
    // with the origin entry and are never subtracted as residues.
    std::vector<Complex> merged_poles{};
};

/// Per-region boundary strengths: p for the left boundary, q for the right
/// (the last, right-unbounded region has no q).
struct RegionStrength {
    double p = 0.0;
    std::optional<double> q{};
};

struct SingularityChart {
    MLParams params{};
    Complex lambda{0.0, 0.0};
    double theta = 0.0; // Arg(lambda) in (-pi, pi]
    std::vector<Singularity> entries{};
    std::vector<RegionStrength> strengths{}; // one per region, entries.size() of them

    int n_regions() const { return static_cast<int>(entries.size()); }
    int last_region() const { return n_regions() - 1; }
};

/// phi(s) = (Re s + |s|)/2: s lies on the parabola mu*(iu+1)^2 iff phi(s) = mu.
inline double phi(Complex s) {
    return 0.5 * (s.real() + std::hypot(s.real(), s.imag()));
}

/// Indices j for which |lambda|^(1/alpha) e^(i(theta+2j pi)/alpha) lies on the
/// main sheet: -alpha/2 - theta/(2pi) < j <= alpha/2 - theta/(2pi).
inline std::vector<int> pole_index_set(double alpha, double theta) {
    double lo = -0.5 * alpha - theta / (2.0 * pi);
    double hi = 0.5 * alpha - theta / (2.0 * pi);
    int jmin = static_cast<int>(std::floor(lo)) + 1; // strict left bound
    int jmax = static_cast<int>(std::floor(hi));     // inclusive right bound
    std::vector<int> out;
    for (int j = jmin; j <= jmax; ++j) out.push_back(j);
    return out;
}

/// Solutions of s^alpha = lambda on the main sheet.
inline std::vector<Complex> poles(double alpha, Complex lambda) {
    if (lambda == Complex{0.0, 0.0})
        throw domain_error("poles: lambda must be non-zero");
    double theta = arg_principal(lambda);
    double radius = std::pow(std::abs(lambda), 1.0 / alpha);
    std::vector<Complex> out;
    for (int j : pole_index_set(alpha, theta)) {
        double psi = (theta + 2.0 * pi * j) / alpha;
        Complex s{radius * std::cos(psi), radius * std::sin(psi)};
        // Snap near-axis poles onto the real axis so conjugate symmetry and
        // the phi = 0 grouping are exact.
        if (std::fabs(s.imag()) <= 8.0 * std::numeric_limits<double>::epsilon() * radius)
            s = {std::copysign(radius, s.real()), 0.0};
        out.push_back(s);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Chart assembly: merge coincident-phi singularities, sort by phi, assign
// boundary strengths.
// ---------------------------------------------------------------------------

inline SingularityChart build_chart(const MLParams& params, Complex lambda) {
    if (lambda == Complex{0.0, 0.0})
        throw domain_error("build_chart: lambda = 0 has no chart (closed form applies)");

    SingularityChart chart;
    chart.params = params;
    chart.lambda = lambda;
    chart.theta = arg_principal(lambda);

    chart.entries.push_back(Singularity{}); // origin entry, phi = 0

    double radius = std::pow(std::abs(lambda), 1.0 / params.alpha);
    struct PolePhi {
        Complex s;
        double phi;
    };
    std::vector<PolePhi> ps;
    for (Complex s : poles(params.alpha, lambda)) ps.push_back({s, phi(s)});
    std::sort(ps.begin(), ps.end(), [](const PolePhi& a, const PolePhi& b) {
        if (a.phi != b.phi) return a.phi < b.phi;
        return a.s.imag() > b.s.imag();
    });

    const double rel_tol = 1e-14;
    for (const PolePhi& p : ps) {
        if (p.phi <= rel_tol * radius) {
            // on (or numerically on) the branch cut: group with the origin
            chart.entries.front().merged_poles.push_back(p.s);
            continue;
        }
        if (chart.entries.size() > 1) {
            Singularity& last = chart.entries.back();
            if (p.phi - last.phi <= rel_tol * std::max(p.phi, radius)) {
                last.merged_poles.push_back(p.s);
                continue;
            }
        }
        Singularity entry;
        entry.value = p.s;
        entry.phi = p.phi;
        entry.kind = SingularityKind::pole;
        entry.merged_poles = {p.s};
        chart.entries.push_back(entry);
    }

    // Boundary strengths.  Left boundary at the origin: algebraic exponent
    // from the branch-point strength (beta against alpha*gamma + 1); left
    // boundary at a pole contributes gamma, as does every right boundary.
    const double a = params.alpha, b = params.beta, g = params.gamma;
    const int n = chart.n_regions();
    chart.strengths.resize(n);
    for (int j = 0; j < n; ++j) {
        if (j == 0) {
            double crit = a * g + 1.0;
            if (b < crit)
                chart.strengths[j].p = 0.0;
            else if (b == crit)
                chart.strengths[j].p = 1.0; // majorizes the logarithmic case
            else
                chart.strengths[j].p = 2.0 * (b - crit);
        } else {
            chart.strengths[j].p = g;
        }
        if (j < n - 1) chart.strengths[j].q = g;
    }
    return chart;
}

} // namespace mlopc
