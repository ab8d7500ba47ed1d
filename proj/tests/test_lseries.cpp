#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "normone/config.hpp"
#include "normone/lseries.hpp"

using namespace normone;

TEST_CASE("riemann zeta values") {
    // independent closed forms: pi^2/6 and pi^4/90 via mpfr's pi constant
    BigFloat pi = BigFloat::pi(256);
    double z2_ref = (pi * pi / BigFloat::of(6L, 256)).to_double();
    double z4_ref = (pi * pi * pi * pi / BigFloat::of(90L, 256)).to_double();
    CHECK(riemann_zeta(2.0).value == Catch::Approx(z2_ref).margin(1e-13));
    CHECK(riemann_zeta(4.0).value == Catch::Approx(z4_ref).margin(1e-13));
    CHECK(riemann_zeta(2.0).value == Catch::Approx(1.644934066848226).margin(1e-9));
    CHECK(riemann_zeta(4.0).value == Catch::Approx(1.082323233711138).margin(1e-9));
    CHECK(riemann_zeta(2.0).err <= 1e-12);
    CHECK_THROWS_AS(riemann_zeta(1.0), ConfigError);
    CHECK_THROWS_AS(riemann_zeta(0.5), ConfigError);
}

TEST_CASE("truncated L-series for Q(sqrt2)") {
    FieldPtr f = make_real_quadratic(2);
    UnitSystem us = UnitSystem::real_quadratic(f);
    auto rep = enumerate_visible(us, 40.0);

    TruncatedSeries l0 = l_truncated(us, rep, {{0}}, 2.0, 2.0);
    CHECK(l0.value.real() == Catch::Approx(1.25).margin(1e-12));
    CHECK(l0.value.imag() == Catch::Approx(0.0).margin(1e-12));

    TruncatedSeries l1 = l_truncated(us, rep, {{1}}, 2.0, 2.0);
    CHECK(l1.value.real() == Catch::Approx(1.25).margin(1e-9));

    TruncatedSeries lempty = l_truncated(us, rep, {{0}}, 2.0, 0.5);
    CHECK(lempty.value == std::complex<double>(0.0, 0.0));

    CHECK_THROWS_AS(l_truncated(us, rep, {{0}}, 1.0, 2.0), ConfigError);
    CHECK_THROWS_AS(l_truncated(us, rep, {{0}}, 2.0, 100.0), ConfigError);
}

TEST_CASE("truncated Xi_1 for Q(sqrt2)") {
    FieldPtr f = make_real_quadratic(2);
    UnitSystem us = UnitSystem::real_quadratic(f);
    auto rep = enumerate_visible(us, 40.0);

    TruncatedSeries x4 = xi1_truncated(us, rep, {{0}}, 2.0, 4.0);
    CHECK(x4.value.real() == Catch::Approx(1.3125).margin(1e-12));

    TruncatedSeries x1 = xi1_truncated(us, rep, {{0}}, 2.0, 1.0);
    CHECK(x1.value.real() == Catch::Approx(1.0).margin(1e-12));

    TruncatedSeries x0 = xi1_truncated(us, rep, {{0}}, 2.0, 0.5);
    CHECK(x0.value == std::complex<double>(0.0, 0.0));

    // monotone in the cutoff for the trivial character
    double prev = 0.0;
    for (double X : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
        double v = xi1_truncated(us, rep, {{0}}, 2.0, X).value.real();
        CHECK(v >= prev);
        prev = v;
    }

    // triangle inequality against the trivial character
    for (long k : {1L, 2L, 5L}) {
        double lk = std::abs(l_truncated(us, rep, {{k}}, 2.0, 30.0).value);
        double l0 = l_truncated(us, rep, {{0}}, 2.0, 30.0).value.real();
        CHECK(lk <= l0 + 1e-12);
    }
}

TEST_CASE("identity check guard and small-cutoff flag") {
    FieldPtr f = make_real_quadratic(2);
    UnitSystem us = UnitSystem::real_quadratic(f);
    auto rep = enumerate_visible(us, 40.0);
    IdentityCheck ic = identity_check(us, rep, {{0}}, 2.0, 1.0);
    CHECK(ic.insufficient_cutoff);
    CHECK(ic.ratio == Catch::Approx(1.0 / riemann_zeta(4.0).value).margin(1e-9));
    CHECK_THROWS_AS(identity_check(us, rep, {{0}}, 1.0, 4.0), ConfigError);
}

TEST_CASE("residue predictions") {
    FieldPtr f2 = make_real_quadratic(2);
    UnitSystem us2 = UnitSystem::real_quadratic(f2);
    ResiduePrediction p2 = residue_prediction(us2);
    CHECK(p2.kappa == Catch::Approx(0.623225).margin(5e-5));
    CHECK(p2.c == Catch::Approx(0.378876).margin(5e-5));

    // Q(sqrt5): C = 4*ln((1+sqrt5)/2) / (2*sqrt5*zeta(2))
    FieldPtr f5 = make_real_quadratic(5);
    UnitSystem us5 = UnitSystem::real_quadratic(f5);
    double c5 = residue_prediction(us5).c;
    double ref5 = 4.0 * std::log((1.0 + std::sqrt(5.0)) / 2.0) /
                  (2.0 * std::sqrt(5.0) * riemann_zeta(2.0).value);
    CHECK(c5 == Catch::Approx(ref5).margin(1e-9));

    // counting validates the prediction
    auto rep5 = enumerate_visible(us5, 10000.0);
    CHECK(static_cast<double>(rep5.count()) / 10000.0 == Catch::Approx(c5).epsilon(0.03));

    // imaginary quadratic: torus trivial, Reg = 1 convention
    FieldConfig gg = parse_field_config(builtin_gaussian_json());
    FieldPtr fg = load_field(gg, 192);
    UnitSystem usg = make_unit_system(fg, gg);
    double cg = residue_prediction(usg).c;
    CHECK(cg == Catch::Approx(M_PI / (4.0 * riemann_zeta(2.0).value)).margin(1e-12));
    auto repg = enumerate_visible(usg, 10000.0);
    CHECK(static_cast<double>(repg.count()) / 10000.0 == Catch::Approx(cg).epsilon(0.03));

    FieldConfig ee = parse_field_config(builtin_eisenstein_json());
    FieldPtr fe = load_field(ee, 192);
    UnitSystem use = make_unit_system(fe, ee);
    double ce = residue_prediction(use).c;
    CHECK(ce == Catch::Approx(2.0 * M_PI / (6.0 * std::sqrt(3.0) * riemann_zeta(2.0).value)).margin(1e-12));
    auto repe = enumerate_visible(use, 10000.0);
    CHECK(static_cast<double>(repe.count()) / 10000.0 == Catch::Approx(ce).epsilon(0.03));
}

TEST_CASE("identity check converges for Q(sqrt2)") {
    FieldPtr f = make_real_quadratic(2);
    UnitSystem us = UnitSystem::real_quadratic(f);
    auto rep = enumerate_visible(us, 2001.0);
    double prev_err = 1.0;
    for (double X : {200.0, 800.0, 2000.0}) {
        IdentityCheck ic = identity_check(us, rep, {{0}}, 2.0, X);
        CHECK(ic.residual_one < prev_err + 1e-12);
        prev_err = ic.residual_one;
        CHECK(ic.matches == 1);
    }
    CHECK(prev_err < 5e-4);
}
