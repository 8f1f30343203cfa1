#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "mlopc/series_oracle.hpp"

using namespace mlopc;

namespace {

// relative distance |a-b| / |b| computed in big arithmetic
double big_rel_err(const BigComplex& a, const BigComplex& b) {
    mpfr_prec_t p = std::max(a.prec(), b.prec());
    BigComplex d(p);
    mpfr_sub(d.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
    mpfr_sub(d.im.get(), a.im.get(), b.im.get(), MPFR_RNDN);
    Big nd = bigref::abs(d), nb = bigref::abs(b);
    if (mpfr_zero_p(nb.get())) return mpfr_zero_p(nd.get()) ? 0.0 : 1e300;
    mpfr_div(nd.get(), nd.get(), nb.get(), MPFR_RNDN);
    // log-scale safe conversion
    long exp10;
    double m = mpfr_get_d_2exp(&exp10, nd.get(), MPFR_RNDN);
    return m * std::pow(2.0, double(exp10) > -1060 ? double(exp10) : -1060.0);
}

Complex random_disc(std::mt19937_64& rng, double radius) {
    std::uniform_real_distribution<double> ur(0.01, radius), ut(-pi, pi);
    double r = ur(rng), th = ut(rng);
    return {r * std::cos(th), r * std::sin(th)};
}

} // namespace

TEST_CASE("series matches elementary values") {
    MLParams exp_p(1.0, 1.0, 1.0);
    Complex e1 = ml_series(exp_p, {1.0, 0.0});
    CHECK(e1.real() == Catch::Approx(2.718281828459045).epsilon(1e-15));
    CHECK(e1.imag() == 0.0);

    Complex c1 = ml_series(MLParams(2.0, 1.0, 1.0), {-1.0, 0.0});
    CHECK(c1.real() == Catch::Approx(0.5403023058681398).epsilon(1e-15));

    Complex p1 = ml_series(MLParams(1.0, 1.0, 2.0), {1.0, 0.0});
    CHECK(p1.real() == Catch::Approx(5.43656365691809).epsilon(1e-14));
}

TEST_CASE("series guards and non-convergence") {
    CHECK_THROWS_AS(ml_series(MLParams(1.0, 1.0), {2000.0, 0.0}), domain_error);
    OracleConfig tiny;
    tiny.max_terms = 100;
    CHECK_THROWS_AS(ml_series(MLParams(0.5, 1.0), {30.0, 0.0}, tiny),
                    oracle_non_convergence);
    OracleConfig bad;
    bad.working_digits = 10;
    CHECK_THROWS_AS(bad.validate(), domain_error);
}

TEST_CASE("closed forms") {
    MLParams p(1.0, 1.0, 1.0);
    auto v = ml_closed_form(p, {-1.0, 0.0});
    REQUIRE(v.has_value());
    CHECK(v->real() == Catch::Approx(0.36787944117144233).epsilon(1e-15));

    auto z0 = ml_closed_form(MLParams(1.7, 2.0, 1.3), {0.0, 0.0});
    REQUIRE(z0.has_value());
    CHECK(z0->real() == Catch::Approx(1.0).epsilon(1e-15)); // 1/Gamma(2)

    auto erfcv = ml_closed_form(MLParams(0.5, 1.0, 1.0), {1.0, 0.0});
    REQUIRE(erfcv.has_value());
    CHECK(erfcv->real() ==
          Catch::Approx(std::exp(1.0) * erfc_real(-1.0)).epsilon(1e-14));

    CHECK_FALSE(ml_closed_form(MLParams(0.7, 1.0, 1.0), {1.0, 0.0}).has_value());
}

TEST_CASE("oracle self-consistency against big closed forms") {
    std::mt19937_64 rng(1001);
    OracleConfig cfg; // 100 digits
    const double tol = 1e-95;
    const MLParams cases[4] = {MLParams(1.0, 1.0, 1.0), MLParams(2.0, 1.0, 1.0),
                               MLParams(0.5, 1.0, 1.0), MLParams(1.0, 1.0, 2.0)};
    for (const MLParams& p : cases) {
        SeriesEvaluator ev(p, cfg);
        for (int i = 0; i < 50; ++i) {
            Complex z = random_disc(rng, 5.0);
            if (p.alpha == 0.5) z = {z.real(), 0.0}; // erfc identity: real z
            BigComplex got = ev.evaluate_big(z);
            auto ref = ml_closed_form_big(p, z, got.prec() + 64);
            REQUIRE(ref.has_value());
            CHECK(big_rel_err(got, *ref) <= tol);
        }
    }
}

TEST_CASE("index-shift recurrence at oracle precision") {
    // E_{a,b}(z) = z E_{a,a+b}(z) + 1/Gamma(b), checked to 1e-25 relative
    std::mt19937_64 rng(2002);
    // dyadic grid keeps alpha + beta exactly representable
    std::uniform_int_distribution<int> ua(20, 140), ub(26, 128);
    OracleConfig cfg;
    cfg.working_digits = 40;
    for (int i = 0; i < 40; ++i) {
        double a = ua(rng) / 64.0, b = ub(rng) / 64.0;
        Complex z = random_disc(rng, 5.0);
        BigComplex lhs = SeriesEvaluator(MLParams(a, b), cfg).evaluate_big(z);
        BigComplex rhs_tail = SeriesEvaluator(MLParams(a, a + b), cfg).evaluate_big(z);
        mpfr_prec_t p = lhs.prec();
        BigComplex rhs(p);
        // rhs = z * tail + 1/Gamma(b)
        BigComplex bz(z, p);
        rhs = bigref::mul(bz, rhs_tail);
        Big gb(b, p);
        mpfr_gamma(gb.get(), gb.get(), MPFR_RNDN);
        mpfr_ui_div(gb.get(), 1, gb.get(), MPFR_RNDN);
        mpfr_add(rhs.re.get(), rhs.re.get(), gb.get(), MPFR_RNDN);
        CHECK(big_rel_err(lhs, rhs) <= 1e-25);
    }
}

TEST_CASE("conjugation symmetry is exact in big arithmetic") {
    std::mt19937_64 rng(3003);
    OracleConfig cfg;
    cfg.working_digits = 60;
    for (int i = 0; i < 25; ++i) {
        MLParams p(0.3 + 0.2 * (i % 9), 0.5 + 0.1 * (i % 7), 1.0 + 0.25 * (i % 3));
        SeriesEvaluator ev(p, cfg);
        Complex z = random_disc(rng, 4.0);
        BigComplex a = ev.evaluate_big(z);
        BigComplex b = ev.evaluate_big(std::conj(z));
        CHECK(mpfr_equal_p(a.re.get(), b.re.get()));
        Big negim(a.prec());
        mpfr_neg(negim.get(), a.im.get(), MPFR_RNDN);
        CHECK(mpfr_equal_p(negim.get(), b.im.get()));
    }
}

TEST_CASE("evaluator reuse and prepare") {
    MLParams p(0.7, 1.0);
    OracleConfig cfg = suggested_config(p, 100.0);
    CHECK(cfg.max_terms >= 10000);
    SeriesEvaluator ev(p, cfg);
    ev.prepare(100.0);
    Complex a = ev.evaluate({-100.0, 0.0});
    Complex b = SeriesEvaluator(p, cfg).evaluate({-100.0, 0.0});
    CHECK(a == b); // cache must not change results
    CHECK(std::isfinite(a.real()));
}

TEST_CASE("heavy cancellation case agrees with erfc identity") {
    // E_{1/2,1}(x) for x = -20: e^{x^2} erfc(-x) with ~170 digits of blow-up
    MLParams p(0.5, 1.0);
    OracleConfig cfg = suggested_config(p, 25.0);
    SeriesEvaluator ev(p, cfg);
    BigComplex got = ev.evaluate_big({-20.0, 0.0});
    auto ref = ml_closed_form_big(p, {-20.0, 0.0}, got.prec() + 64);
    REQUIRE(ref.has_value());
    CHECK(big_rel_err(got, *ref) <= 1e-90);
    // and the rounded value against the double erfc path
    Complex d = got.to_complex();
    CHECK(d.real() == Catch::Approx(std::exp(400.0) * erfc_real(20.0)).epsilon(1e-13));
}
