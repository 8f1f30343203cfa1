#pragma once

#include "mlopc/lt_inversion.hpp"

namespace mlopc {

/// Mixed absolute/relative error |ref - approx| / (1 + |ref|).
inline double mixed_error(Complex approx, Complex reference) {
    return std::abs(reference - approx) / (1.0 + std::abs(reference));
}

/// E^gamma_{alpha,beta}(z), evaluated by optimal-parabolic-contour inversion
/// of the Laplace transform at t = 1.
inline Complex mittag_leffler(double alpha, double beta, double gamma, Complex z,
                              double tol = 1e-15) {
    MLParams params(alpha, beta, gamma); // validates alpha > 0, gamma > 0
    if (!(tol >= 1e-15 && tol <= 1e-1))
        throw domain_error("mittag_leffler: tol must lie in [1e-15, 1e-1]");
    if (z == Complex{0.0, 0.0}) return {rgamma_real(beta), 0.0};
    Tolerances t;
    t.eps = tol;
    return ml_lt(params, 1.0, z, t).value;
}

inline Complex mittag_leffler(double alpha, double beta, Complex z, double tol = 1e-15) {
    return mittag_leffler(alpha, beta, 1.0, z, tol);
}

} // namespace mlopc
