#pragma once

#include <mpfr.h>

#include <string>
#include <utility>

#include "mlopc/scalar_kernels.hpp"

namespace mlopc {

// ---------------------------------------------------------------------------
// Minimal RAII wrapper over mpfr_t.  All high-precision arithmetic lives in
// the oracle; the OPC evaluation path never touches it.
// ---------------------------------------------------------------------------

class Big {
public:
    explicit Big(mpfr_prec_t prec_bits) {
        mpfr_init2(v_, prec_bits);
        mpfr_set_zero(v_, 1);
    }
    Big(double x, mpfr_prec_t prec_bits) {
        mpfr_init2(v_, prec_bits);
        mpfr_set_d(v_, x, MPFR_RNDN);
    }
    Big(const Big& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    Big(Big&& o) noexcept {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_swap(v_, o.v_);
    }
    Big& operator=(const Big& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Big& operator=(Big&& o) noexcept {
        if (this != &o) mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Big() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

private:
    mpfr_t v_;
};

struct BigComplex {
    Big re, im;

    explicit BigComplex(mpfr_prec_t prec_bits) : re(prec_bits), im(prec_bits) {}
    BigComplex(Complex z, mpfr_prec_t prec_bits)
        : re(z.real(), prec_bits), im(z.imag(), prec_bits) {}

    Complex to_complex() const { return {re.to_double(), im.to_double()}; }
    mpfr_prec_t prec() const { return re.prec(); }
};

namespace bigref {

// Reference helpers in big arithmetic, used by the oracle's identity checks.

inline BigComplex exp(const BigComplex& z) {
    mpfr_prec_t p = z.prec();
    Big ex(p), s(p), c(p);
    mpfr_exp(ex.get(), z.re.get(), MPFR_RNDN);
    mpfr_sin_cos(s.get(), c.get(), z.im.get(), MPFR_RNDN);
    BigComplex out(p);
    mpfr_mul(out.re.get(), ex.get(), c.get(), MPFR_RNDN);
    mpfr_mul(out.im.get(), ex.get(), s.get(), MPFR_RNDN);
    return out;
}

inline BigComplex mul(const BigComplex& a, const BigComplex& b) {
    mpfr_prec_t p = a.prec();
    BigComplex out(p);
    Big t1(p), t2(p);
    mpfr_mul(t1.get(), a.re.get(), b.re.get(), MPFR_RNDN);
    mpfr_mul(t2.get(), a.im.get(), b.im.get(), MPFR_RNDN);
    mpfr_sub(out.re.get(), t1.get(), t2.get(), MPFR_RNDN);
    mpfr_mul(t1.get(), a.re.get(), b.im.get(), MPFR_RNDN);
    mpfr_mul(t2.get(), a.im.get(), b.re.get(), MPFR_RNDN);
    mpfr_add(out.im.get(), t1.get(), t2.get(), MPFR_RNDN);
    return out;
}

inline Big abs(const BigComplex& z) {
    Big out(z.prec());
    mpfr_hypot(out.get(), z.re.get(), z.im.get(), MPFR_RNDN);
    return out;
}

/// Principal square root.
inline BigComplex sqrt(const BigComplex& z) {
    mpfr_prec_t p = z.prec();
    BigComplex out(p);
    Big m = abs(z), t(p);
    // re = sqrt((|z| + Re z)/2), im = sign(Im z) * sqrt((|z| - Re z)/2)
    mpfr_add(t.get(), m.get(), z.re.get(), MPFR_RNDN);
    mpfr_div_ui(t.get(), t.get(), 2, MPFR_RNDN);
    mpfr_sqrt(out.re.get(), t.get(), MPFR_RNDN);
    mpfr_sub(t.get(), m.get(), z.re.get(), MPFR_RNDN);
    mpfr_div_ui(t.get(), t.get(), 2, MPFR_RNDN);
    mpfr_sqrt(out.im.get(), t.get(), MPFR_RNDN);
    if (mpfr_signbit(z.im.get())) mpfr_neg(out.im.get(), out.im.get(), MPFR_RNDN);
    return out;
}

/// cosh(w) for complex w: cosh(x)cos(y) + i sinh(x)sin(y).
inline BigComplex cosh(const BigComplex& w) {
    mpfr_prec_t p = w.prec();
    Big ch(p), sh(p), s(p), c(p);
    mpfr_cosh(ch.get(), w.re.get(), MPFR_RNDN);
    mpfr_sinh(sh.get(), w.re.get(), MPFR_RNDN);
    mpfr_sin_cos(s.get(), c.get(), w.im.get(), MPFR_RNDN);
    BigComplex out(p);
    mpfr_mul(out.re.get(), ch.get(), c.get(), MPFR_RNDN);
    mpfr_mul(out.im.get(), sh.get(), s.get(), MPFR_RNDN);
    return out;
}

} // namespace bigref

} // namespace mlopc
