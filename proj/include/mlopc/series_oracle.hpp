#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <vector>

#include "mlopc/bigfloat.hpp"
#include "mlopc/singularity_map.hpp"

namespace mlopc {

// ---------------------------------------------------------------------------
// Brute-force reference evaluator: direct summation of
//   E^gamma_{alpha,beta}(z) = sum_k Gamma(gamma+k) z^k / (k! Gamma(gamma) Gamma(alpha k + beta))
// in big-float arithmetic.  Used for testing and the CLI comparison harness
// only; the OPC path never depends on it.
// ---------------------------------------------------------------------------

struct OracleConfig {
    int working_digits = 100;
    long max_terms = 10000;
    double stop_ratio = 0.0; // <= 0 means 10^(-working_digits)

    void validate() const {
        if (working_digits < 30) throw domain_error("OracleConfig: working_digits >= 30");
        if (max_terms < 100) throw domain_error("OracleConfig: max_terms >= 100");
    }
};

namespace detail {

constexpr double log10_e = 0.43429448190325182765112891891660508;

/// Double-precision reconnaissance of the series: term magnitudes drive the
/// internal precision (cancellation headroom) and the term-count estimate.
struct SeriesScan {
    double max_log10 = 0.0; // max over k of log10 |term_k|
    long k_peak = 0;
    long k_needed = 0;               // estimated index where the stopping rule fires
    std::vector<float> term_log10{}; // per-term magnitude estimates

    double term_estimate(long k) const {
        return k < (long)term_log10.size() ? double(term_log10[k]) : -320.0;
    }
};

inline SeriesScan scan_series(const MLParams& p, double abs_z, int working_digits) {
    SeriesScan scan;
    const long hard_cap = 4'000'000;
    const double lz = abs_z > 0.0 ? std::log10(abs_z) : -1e9;
    const double lgg = std::lgamma(p.gamma);
    const double floor_log = -(working_digits + 40.0);
    scan.max_log10 = -1e300;
    for (long k = 0; k < hard_cap; ++k) {
        double x = p.alpha * k + p.beta;
        double lt;
        if (x <= 0.0 && x == std::floor(x)) {
            lt = -1e300; // gamma pole: zero term
        } else {
            lt = k * lz + (std::lgamma(p.gamma + k) - std::lgamma(double(k) + 1.0) - lgg -
                           std::lgamma(x)) *
                              log10_e;
        }
        scan.term_log10.push_back(static_cast<float>(std::max(lt, -3e38)));
        if (lt > scan.max_log10) {
            scan.max_log10 = lt;
            scan.k_peak = k;
        }
        scan.k_needed = k + 12;
        if (k > scan.k_peak && lt < floor_log) break;
    }
    if (scan.max_log10 < -1e200) scan.max_log10 = 0.0;
    return scan;
}

inline mpfr_prec_t bits_for_digits(double digits) {
    return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 32;
}

// Cache of 1/Gamma(alpha k + beta).  For alpha with an exact small dyadic
// stride (alpha * 2^m integral) the values advance by an exact integer
// recurrence; otherwise each entry is an independent mpfr_gamma call at the
// precision its term actually needs.
class GammaTable {
public:
    GammaTable(double alpha, double beta) : alpha_(alpha), beta_(beta) {
        for (long den = 1; den <= 64; den *= 2) {
            double prod = alpha * den; // exact: den is a power of two
            if (prod == std::floor(prod) && prod < 1e15) {
                den_ = den;
                num_ = static_cast<long>(prod);
                break;
            }
        }
    }

    bool dyadic() const { return den_ > 0; }
    long size() const { return static_cast<long>(entries_.size()); }

    /// Make entries [0, k_max] available with at least need_bits(k) precision.
    /// need_bits must be callable for any k >= 0.
    template <typename PrecFn>
    void ensure(long k_max, PrecFn&& need_bits) {
        if (dyadic())
            ensure_dyadic(k_max, need_bits);
        else
            ensure_direct(k_max, need_bits);
    }

    bool is_zero(long k) const { return entries_[k].zero; }
    mpfr_srcptr inv(long k) const { return entries_[k].inv.get(); }

private:
    struct Entry {
        mpfr_prec_t built = 0;
        bool zero = false;
        Big inv{MPFR_PREC_MIN};
    };

    // x_k = alpha*k + beta, exact in big precision.
    void set_xk(mpfr_ptr x, long k) const {
        mpfr_set_d(x, alpha_, MPFR_RNDN);
        mpfr_mul_si(x, x, k, MPFR_RNDN);
        mpfr_add_d(x, x, beta_, MPFR_RNDN);
    }

    static bool gamma_pole(mpfr_srcptr x) {
        return mpfr_sgn(x) <= 0 && mpfr_integer_p(x);
    }

    void store_inverse_of_gamma(Entry& e, mpfr_srcptr gam, mpfr_prec_t bits) {
        e.inv = Big(bits);
        mpfr_ui_div(e.inv.get(), 1, gam, MPFR_RNDN);
        e.built = bits;
        e.zero = false;
    }

    template <typename PrecFn>
    void ensure_direct(long k_max, PrecFn& need_bits) {
        if (size() <= k_max) entries_.resize(k_max + 1);
        for (long k = 0; k <= k_max; ++k) {
            Entry& e = entries_[k];
            mpfr_prec_t bits = need_bits(k);
            if (e.built >= bits || e.zero) continue;
            if (e.built > 0) bits = std::max<mpfr_prec_t>(bits, (e.built * 4) / 3);
            Big x(bits + 16), g(bits + 16);
            set_xk(x.get(), k);
            if (gamma_pole(x.get())) {
                e.zero = true;
                e.built = bits;
                continue;
            }
            mpfr_gamma(g.get(), x.get(), MPFR_RNDN);
            store_inverse_of_gamma(e, g.get(), bits);
        }
    }

    template <typename PrecFn>
    void ensure_dyadic(long k_max, PrecFn& need_bits) {
        long k_hi = std::max(k_max, size() - 1);
        mpfr_prec_t want = 0;
        for (long k = 0; k <= k_hi; ++k) want = std::max(want, need_bits(k));
        long chain_guard = 2 * static_cast<long>(std::log2(double(k_hi + 4))) + 16;
        mpfr_prec_t chain_bits = want + chain_guard;
        if (chain_bits <= chain_built_ && k_hi < size()) return;
        chain_bits = std::max(chain_bits, chain_built_);
        entries_.clear();
        entries_.resize(k_hi + 1);

        // Seed values until the argument clears 2+num, then the exact
        // integer-step recurrence Gamma(x+num) = x (x+1) ... (x+num-1) Gamma(x)
        // along each residue class mod den.
        std::vector<Big> chain; // Gamma(x_k) for the last den_ indices
        chain.reserve(den_);
        for (long i = 0; i < den_; ++i) chain.emplace_back(chain_bits);
        Big x(chain_bits), f(chain_bits);
        for (long k = 0; k <= k_hi; ++k) {
            Entry& e = entries_[k];
            mpfr_prec_t bits = need_bits(k);
            set_xk(x.get(), k);
            if (gamma_pole(x.get())) {
                e.zero = true;
                e.built = bits;
                continue;
            }
            Big& g = chain[k % den_];
            if (k < den_ || mpfr_cmp_si(x.get(), 2 + num_) <= 0) {
                mpfr_gamma(g.get(), x.get(), MPFR_RNDN);
            } else {
                // g holds Gamma(x_{k-den}); x_{k-den} = x_k - num > 2
                set_xk(x.get(), k - den_);
                for (long i = 0; i < num_; ++i) {
                    mpfr_add_si(f.get(), x.get(), i, MPFR_RNDN);
                    mpfr_mul(g.get(), g.get(), f.get(), MPFR_RNDN);
                }
            }
            store_inverse_of_gamma(e, g.get(), bits);
        }
        chain_built_ = chain_bits;
    }

    double alpha_, beta_;
    long den_ = 0, num_ = 0;
    mpfr_prec_t chain_built_ = 0;
    std::vector<Entry> entries_;
};

} // namespace detail

// ---------------------------------------------------------------------------
// Reusable evaluator.  Sharing one instance across the points of a sweep
// reuses the gamma table, which dominates the cost for non-dyadic alpha.
// The cached table makes an instance single-threaded; use one per thread
// (the one-shot ml_series below is reentrant).
// ---------------------------------------------------------------------------

class SeriesEvaluator {
    auto precision_fn(const detail::SeriesScan& scan) const {
        int wd = cfg_.working_digits;
        return [scan, wd](long k) {
            return detail::bits_for_digits(wd + 25.0 + std::max(0.0, scan.term_estimate(k)));
        };
    }

public:
    explicit SeriesEvaluator(const MLParams& params, OracleConfig cfg = {})
        : params_(params), cfg_(cfg), table_(params.alpha, params.beta) {
        cfg_.validate();
    }

    /// Pre-size the gamma table for arguments up to |z| = max_abs_z.
    void prepare(double max_abs_z) {
        auto scan = detail::scan_series(params_, max_abs_z, cfg_.working_digits);
        table_.ensure(std::min(scan.k_needed, cfg_.max_terms), precision_fn(scan));
    }

    Complex evaluate(Complex z) { return evaluate_big(z).to_complex(); }

    /// Full-precision partial sum (pre-rounding), for identity checks.
    BigComplex evaluate_big(Complex z) {
        const double absz = std::abs(z);
        if (!(absz <= 1e3)) throw domain_error("ml_series: |z| exceeds the 1e3 guard");
        if (absz == 0.0) {
            // k = 0 term only: 1/Gamma(beta)
            BigComplex out(detail::bits_for_digits(cfg_.working_digits + 8.0));
            Big x(params_.beta, out.prec()), g(out.prec());
            if (mpfr_sgn(x.get()) <= 0 && mpfr_integer_p(x.get())) {
                mpfr_set_zero(out.re.get(), 1);
            } else {
                mpfr_gamma(g.get(), x.get(), MPFR_RNDN);
                mpfr_ui_div(out.re.get(), 1, g.get(), MPFR_RNDN);
            }
            mpfr_set_zero(out.im.get(), 1);
            return out;
        }

        const auto scan = detail::scan_series(params_, absz, cfg_.working_digits);
        const long k_cap = cfg_.max_terms;
        auto need_bits = precision_fn(scan);
        long built_k = std::min(scan.k_needed, k_cap);
        table_.ensure(built_k, need_bits);

        const mpfr_prec_t P = detail::bits_for_digits(
            cfg_.working_digits + 25.0 + std::max(0.0, scan.max_log10));
        const bool prabhakar = params_.gamma != 1.0;

        Big zkr(1.0, P), zki(0.0, P);        // z^k
        Big sumr(P), sumi(P);                // partial sum
        Big c(1.0, P), gk(params_.gamma, P); // Prabhakar coefficient, gamma+k
        Big tr(P), ti(P), t1(P), t2(P), mag(P), smag(P), thresh(P);
        Big sr(P); // stopping ratio
        if (cfg_.stop_ratio > 0.0) {
            mpfr_set_d(sr.get(), cfg_.stop_ratio, MPFR_RNDN);
        } else {
            mpfr_set_ui(sr.get(), 10, MPFR_RNDN);
            mpfr_pow_si(sr.get(), sr.get(), -cfg_.working_digits, MPFR_RNDN);
        }

        int consecutive_small = 0;
        bool converged = false;
        for (long k = 0; k < k_cap; ++k) {
            if (k >= built_k) {
                built_k = std::min(k + 256, k_cap);
                table_.ensure(built_k, need_bits);
            }
            if (!table_.is_zero(k)) {
                mpfr_mul(tr.get(), zkr.get(), table_.inv(k), MPFR_RNDN);
                mpfr_mul(ti.get(), zki.get(), table_.inv(k), MPFR_RNDN);
                if (prabhakar) {
                    mpfr_mul(tr.get(), tr.get(), c.get(), MPFR_RNDN);
                    mpfr_mul(ti.get(), ti.get(), c.get(), MPFR_RNDN);
                }
                mpfr_add(sumr.get(), sumr.get(), tr.get(), MPFR_RNDN);
                mpfr_add(sumi.get(), sumi.get(), ti.get(), MPFR_RNDN);
                // |term| vs |partial| in the 1-norm (the sqrt(2) slack is
                // irrelevant against a 10^-working_digits threshold)
                mpfr_abs(t1.get(), tr.get(), MPFR_RNDN);
                mpfr_abs(t2.get(), ti.get(), MPFR_RNDN);
                mpfr_add(mag.get(), t1.get(), t2.get(), MPFR_RNDN);
                mpfr_abs(t1.get(), sumr.get(), MPFR_RNDN);
                mpfr_abs(t2.get(), sumi.get(), MPFR_RNDN);
                mpfr_add(smag.get(), t1.get(), t2.get(), MPFR_RNDN);
                mpfr_mul(thresh.get(), smag.get(), sr.get(), MPFR_RNDN);
                if (mpfr_cmp(mag.get(), thresh.get()) < 0) {
                    if (++consecutive_small >= 10 && k > scan.k_peak) {
                        converged = true;
                        break;
                    }
                } else {
                    consecutive_small = 0;
                }
            }
            // z^(k+1)
            mpfr_mul_d(t1.get(), zkr.get(), z.real(), MPFR_RNDN);
            mpfr_mul_d(t2.get(), zki.get(), z.imag(), MPFR_RNDN);
            mpfr_mul_d(tr.get(), zkr.get(), z.imag(), MPFR_RNDN);
            mpfr_mul_d(ti.get(), zki.get(), z.real(), MPFR_RNDN);
            mpfr_sub(zkr.get(), t1.get(), t2.get(), MPFR_RNDN);
            mpfr_add(zki.get(), tr.get(), ti.get(), MPFR_RNDN);
            if (prabhakar) {
                // c_{k+1} = c_k (gamma + k)/(k + 1)
                mpfr_mul(c.get(), c.get(), gk.get(), MPFR_RNDN);
                mpfr_div_ui(c.get(), c.get(), static_cast<unsigned long>(k + 1), MPFR_RNDN);
                mpfr_add_ui(gk.get(), gk.get(), 1, MPFR_RNDN);
            }
        }
        if (!converged)
            throw oracle_non_convergence("ml_series: stopping rule not met within " +
                                         std::to_string(k_cap) + " terms");
        BigComplex out(P);
        mpfr_set(out.re.get(), sumr.get(), MPFR_RNDN);
        mpfr_set(out.im.get(), sumi.get(), MPFR_RNDN);
        return out;
    }

    const MLParams& params() const { return params_; }
    const OracleConfig& config() const { return cfg_; }

private:
    MLParams params_;
    OracleConfig cfg_;
    detail::GammaTable table_;
};

/// One-shot series evaluation (see SeriesEvaluator for sweep reuse).
inline Complex ml_series(const MLParams& params, Complex z, const OracleConfig& cfg = {}) {
    SeriesEvaluator ev(params, cfg);
    return ev.evaluate(z);
}

/// Config with max_terms sized for arguments up to |z| = max_abs_z.
inline OracleConfig suggested_config(const MLParams& params, double max_abs_z,
                                     OracleConfig base = {}) {
    base.validate();
    auto scan = detail::scan_series(params, max_abs_z, base.working_digits);
    base.max_terms = std::max(base.max_terms, scan.k_needed + scan.k_needed / 16 + 64);
    return base;
}

// ---------------------------------------------------------------------------
// Elementary closed forms (host precision).
// ---------------------------------------------------------------------------

inline std::optional<Complex> ml_closed_form(const MLParams& p, Complex z) {
    if (z == Complex{0.0, 0.0}) return Complex{rgamma_real(p.beta), 0.0};
    if (p.beta == 1.0 && p.gamma == 1.0) {
        if (p.alpha == 1.0) return std::exp(z);
        if (p.alpha == 2.0) return std::cosh(std::sqrt(z));
        if (p.alpha == 0.5 && z.imag() == 0.0) {
            double x = z.real();
            return Complex{std::exp(x * x) * erfc_real(-x), 0.0};
        }
    }
    if (p.alpha == 1.0 && p.beta == 1.0 && p.gamma == 2.0)
        return (1.0 + z) * std::exp(z);
    return std::nullopt;
}

/// Same identities in big arithmetic (oracle self-consistency checks).
inline std::optional<BigComplex> ml_closed_form_big(const MLParams& p, Complex z,
                                                    mpfr_prec_t prec_bits) {
    BigComplex bz(z, prec_bits);
    if (p.beta == 1.0 && p.gamma == 1.0) {
        if (p.alpha == 1.0) return bigref::exp(bz);
        if (p.alpha == 2.0) return bigref::cosh(bigref::sqrt(bz));
        if (p.alpha == 0.5 && z.imag() == 0.0) {
            // e^{x^2} erfc(-x)
            Big x(z.real(), prec_bits), x2(prec_bits), e(prec_bits);
            mpfr_sqr(x2.get(), x.get(), MPFR_RNDN);
            mpfr_exp(e.get(), x2.get(), MPFR_RNDN);
            mpfr_neg(x.get(), x.get(), MPFR_RNDN);
            mpfr_erfc(x.get(), x.get(), MPFR_RNDN);
            BigComplex out(prec_bits);
            mpfr_mul(out.re.get(), e.get(), x.get(), MPFR_RNDN);
            mpfr_set_zero(out.im.get(), 1);
            return out;
        }
    }
    if (p.alpha == 1.0 && p.beta == 1.0 && p.gamma == 2.0) {
        BigComplex one_z(z, prec_bits);
        mpfr_add_ui(one_z.re.get(), one_z.re.get(), 1, MPFR_RNDN);
        return bigref::mul(one_z, bigref::exp(bz));
    }
    return std::nullopt;
}

} // namespace mlopc
