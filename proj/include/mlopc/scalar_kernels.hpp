#pragma once

#include <cmath>
#include <complex>
#include <limits>

#include "mlopc/errors.hpp"

namespace mlopc {

using Complex = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

// ---------------------------------------------------------------------------
// sin(pi*x), cos(pi*x) with exact values at half-integer multiples.
// ---------------------------------------------------------------------------

inline double sinpi(double x) {
    double r = x - 2.0 * std::round(0.5 * x); // r in [-1, 1], exact for |x| < 2^52
    double ar = std::fabs(r);
    if (ar == 0.0 || ar == 1.0) return 0.0;
    if (ar == 0.5) return r > 0 ? 1.0 : -1.0;
    if (ar <= 0.5) return std::sin(pi * r);
    return r > 0 ? std::sin(pi * (1.0 - ar)) : -std::sin(pi * (1.0 - ar));
}

inline double cospi(double x) {
    double r = x - 2.0 * std::round(0.5 * x);
    double ar = std::fabs(r);
    if (ar == 0.0) return 1.0;
    if (ar == 1.0) return -1.0;
    if (ar == 0.5) return 0.0;
    if (ar <= 0.5) return std::cos(pi * r);
    return -std::cos(pi * (1.0 - ar));
}

// ---------------------------------------------------------------------------
// Real gamma function, Lanczos rational approximation (g = 6.0246800407...,
// 13-term numerator over x(x+1)...(x+11)), reflection for x < 0.5.
// ---------------------------------------------------------------------------

namespace detail {

inline constexpr double lanczos_g = 6.024680040776729583740234375;

inline double lanczos_sum(double x) {
    // numerator coefficients, ascending powers
    static const double num[13] = {
        23531376880.410759688572007674451636754734846804940,
        42919803642.649098768957899047001988850926355848959,
        35711959237.355668049440185451547166705960488635843,
        17921034426.037209699919755754458931112671403265390,
        6039542586.3520280050642916443072979210699388420708,
        1439720407.3117216736632230727949123939715485786772,
        248874557.86205415651146038641322942321632125127801,
        31426415.585400194380614231628318205362874684987640,
        2876370.6289353724412254090516208496135991145378768,
        186056.26539522349504029498971604569928220784236328,
        8071.6720023658162106380029022722506138218516325024,
        210.82427775157934587250973392071336271166969580291,
        2.5066282746310002701649081771338373386264310793408};
    double p = num[12];
    for (int i = 11; i >= 0; --i) p = p * x + num[i];
    double q = 1.0;
    for (int i = 0; i < 12; ++i) q *= x + i;
    return p / q;
}

inline bool is_nonpositive_integer(double x) {
    return x <= 0.0 && x == std::floor(x);
}

inline double gamma_positive(double x) {
    // x >= 0.5; overflows to +inf past x ~ 171.62
    const double gmh = lanczos_g - 0.5;
    double zgh = x + gmh;
    // rounding residual of zgh, amplified by the (x-0.5) power
    double bv = zgh - x;
    double e = (x - (zgh - bv)) + (gmh - bv);
    double core = lanczos_sum(x) * std::exp(-zgh) * std::pow(zgh, x - 0.5);
    return core * (1.0 + e * ((x - 0.5) / zgh - 1.0));
}

} // namespace detail

/// Gamma(x) for real x; throws on the poles x = 0, -1, -2, ...
inline double gamma_real(double x) {
    if (!std::isfinite(x)) throw domain_error("gamma_real: non-finite argument");
    if (detail::is_nonpositive_integer(x))
        throw domain_error("gamma_real: pole at non-positive integer argument");
    if (x >= 0.5) return detail::gamma_positive(x);
    // reflection: Gamma(x) = pi / (sin(pi x) Gamma(1-x)); for x <= -0.5 use
    // Gamma(1-x) = (-x) Gamma(-x) so the gamma argument is exact
    if (x <= -0.5) return pi / (sinpi(x) * -x * detail::gamma_positive(-x));
    return pi / (sinpi(x) * detail::gamma_positive(1.0 - x));
}

/// 1/Gamma(x); entire, returns exactly 0 at non-positive integers.
inline double rgamma_real(double x) {
    if (!std::isfinite(x)) throw domain_error("rgamma_real: non-finite argument");
    if (detail::is_nonpositive_integer(x)) return 0.0;
    if (x >= 0.5) return 1.0 / detail::gamma_positive(x);
    if (x <= -0.5) return sinpi(x) * -x * detail::gamma_positive(-x) / pi;
    return sinpi(x) * detail::gamma_positive(1.0 - x) / pi;
}

// ---------------------------------------------------------------------------
// Principal-branch complex power, Arg in (-pi, pi].  The branch cut runs
// along the negative real axis; -0.0 imaginary parts are folded onto +0.0 so
// the cut itself takes the upper-edge value.
// ---------------------------------------------------------------------------

inline double arg_principal(Complex s) {
    double im = s.imag() == 0.0 ? 0.0 : s.imag();
    return std::atan2(im, s.real());
}

inline Complex cpow_principal(Complex s, double a) {
    if (s.real() == 0.0 && s.imag() == 0.0) {
        if (a > 0.0) return {0.0, 0.0};
        throw domain_error("cpow_principal: 0 raised to non-positive power");
    }
    if (a == 0.0) return {1.0, 0.0};
    double m = std::pow(std::hypot(s.real(), s.imag()), a);
    double phase = a * arg_principal(s);
    return {m * std::cos(phase), m * std::sin(phase)};
}

// ---------------------------------------------------------------------------
// Complementary error function, relative accuracy ~1e-15.
// Series below |x| = 1, Legendre continued fraction (modified Lentz) above.
// ---------------------------------------------------------------------------

namespace detail {

inline double erf_series(double x) {
    // erf(x) = 2/sqrt(pi) * sum (-1)^k x^(2k+1) / (k! (2k+1)),  |x| < 1
    double term = x, sum = x, x2 = x * x;
    for (int k = 1; k < 60; ++k) {
        term *= -x2 / k;
        double add = term / (2 * k + 1);
        sum += add;
        if (std::fabs(add) < 1e-18 * std::fabs(sum)) break;
    }
    return 1.1283791670955125738961589031215452 * sum; // 2/sqrt(pi)
}

inline double erfc_cf(double x) {
    // erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + (2/2)/(x + ...))),  x >= 1
    const double tiny = 1e-300;
    double f = x, c = x, d = 0.0;
    for (int n = 1; n < 300; ++n) {
        double an = 0.5 * n;
        d = x + an * d;
        if (d == 0.0) d = tiny;
        c = x + an / c;
        if (c == 0.0) c = tiny;
        d = 1.0 / d;
        double delta = c * d;
        f *= delta;
        if (std::fabs(delta - 1.0) < 1e-17) break;
    }
    return std::exp(-x * x) * 0.56418958354775628694807945156077259 / f; // 1/sqrt(pi)
}

} // namespace detail

inline double erfc_real(double x) {
    if (!std::isfinite(x)) throw domain_error("erfc_real: non-finite argument");
    if (x >= 1.0) return detail::erfc_cf(x);
    if (x <= -1.0) return 2.0 - detail::erfc_cf(-x);
    return 1.0 - detail::erf_series(x);
}

// ---------------------------------------------------------------------------
// Compensated (hi/lo pair) accumulator.  hi+lo tracks the running sum with
// roughly twice the working precision; |lo| <= ulp(hi)/2 after each add.
// ---------------------------------------------------------------------------

struct XPAccumulator {
    double hi = 0.0;
    double lo = 0.0;

    void add(double x) {
        // Knuth two-sum of hi and x, error folded into lo, then renormalize.
        double s = hi + x;
        double bv = s - hi;
        double err = (hi - (s - bv)) + (x - bv);
        double l = lo + err;
        double s2 = s + l;
        double bv2 = s2 - s;
        lo = (s - (s2 - bv2)) + (l - bv2);
        hi = s2;
    }

    XPAccumulator& operator+=(double x) {
        add(x);
        return *this;
    }

    double value() const { return hi + lo; }
};

/// Compensated accumulator for complex sums (independent re/im pairs).
struct XPComplexAccumulator {
    XPAccumulator re, im;

    void add(Complex z) {
        re.add(z.real());
        im.add(z.imag());
    }

    Complex value() const { return {re.value(), im.value()}; }
};

} // namespace mlopc
