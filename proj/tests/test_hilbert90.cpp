#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "normone/config.hpp"
#include "normone/hilbert90.hpp"
#include "normone/report_io.hpp"
#include "test_util.hpp"

using namespace normone;
using normone::testutil::random_integral;

TEST_CASE("pi_map examples") {
    FieldPtr f = make_real_quadratic(2);
    CHECK(pi_map(field_one(f)) == field_one(f));
    CHECK(pi_map(make_element_int(f, {2, 1})) == make_element_int(f, {3, 2}));
    CHECK(pi_map(make_element_int(f, {1, 1})) == make_element_int(f, {-3, -2}));
    CHECK_THROWS_AS(pi_map(field_zero(f)), ConfigError);

    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
        Element a = random_integral(f, rng);
        CHECK(pi_map(a).norm() == 1);
    }
}

TEST_CASE("primitivity and visible decomposition") {
    FieldPtr f = make_real_quadratic(2);
    CHECK(is_primitive(make_element_int(f, {2, 1})));
    CHECK(!is_primitive(make_element_int(f, {2, 2})));
    CHECK(!is_primitive(make_element_int(f, {3, 0})));
    CHECK_THROWS_AS(is_primitive(field_zero(f)), ConfigError);

    auto d1 = visible_decompose(make_element_int(f, {6, 3}));
    CHECK(d1.n == 3);
    CHECK(d1.alpha == make_element_int(f, {2, 1}));
    auto d2 = visible_decompose(make_element_int(f, {3, 1}));
    CHECK(d2.n == 1);
    auto d3 = visible_decompose(make_element_int(f, {4, 0}));
    CHECK(d3.n == 4);
    CHECK(d3.alpha == field_one(f));
    // sign stays with alpha
    auto d4 = visible_decompose(make_element_int(f, {-6, 3}));
    CHECK(d4.n == 3);
    CHECK(d4.alpha == make_element_int(f, {-2, 1}));
}

TEST_CASE("pi factors through visible decomposition, exactly") {
    FieldPtr f = make_real_quadratic(2);
    for (long a = -10; a <= 10; ++a)
        for (long b = -10; b <= 10; ++b) {
            if (a == 0 && b == 0) continue;
            Element g = make_element_int(f, {a, b});
            auto dec = visible_decompose(g);
            CHECK(dec.alpha.scaled(mpq_class(dec.n)) == g);
            CHECK(is_primitive(dec.alpha));
            CHECK(pi_map(g) == pi_map(dec.alpha));
            mpz_class npow;
            mpz_pow_ui(npow.get_mpz_t(), dec.n.get_mpz_t(), 2);
            CHECK(abs(g.norm()) == npow * abs(dec.alpha.norm()));
        }
}

TEST_CASE("enumerate_visible frozen examples for Q(sqrt2)") {
    FieldPtr f = make_real_quadratic(2);
    UnitSystem us = UnitSystem::real_quadratic(f);

    auto r15 = enumerate_visible(us, 1.5);
    REQUIRE(r15.count() == 1);
    CHECK(r15.classes[0].h == 1);
    CHECK(r15.classes[0].alpha == ZVec{1, 0});
    CHECK(r15.classes[0].t[0] == 0.0);

    auto r3 = enumerate_visible(us, 3.0);
    REQUIRE(r3.count() == 2);
    CHECK(r3.classes[0].h == 1);
    CHECK(r3.classes[1].h == 2);
    CHECK(r3.classes[1].alpha == ZVec{0, 1});
    CHECK(r3.classes[1].t[0] == 0.0);

    auto r8 = enumerate_visible(us, 8.0);
    REQUIRE(r8.count() == 4);
    CHECK(r8.classes[0].h == 1);
    CHECK(r8.classes[1].h == 2);
    CHECK(r8.classes[2].h == 7);
    CHECK(r8.classes[3].h == 7);
    CHECK(r8.classes[2].alpha == ZVec{-1, 2});
    CHECK(r8.classes[3].alpha == ZVec{1, 2});
    CHECK(r8.classes[2].t[0] == Catch::Approx(0.161538359).margin(2e-4));
    CHECK(r8.classes[3].t[0] == Catch::Approx(0.838461641).margin(2e-4));
    // norms 3..6 are unrepresented by primitive elements
    for (const auto& vc : r8.classes) CHECK((vc.h <= 2 || vc.h == 7));

    // strict bound: every class has h < r
    for (const auto& vc : r8.classes) CHECK(static_cast<double>(vc.h) < r8.r);

    auto empty = enumerate_visible(us, 0.5);
    CHECK(empty.count() == 0);
}

TEST_CASE("oracle equivalence on small boxes") {
    FieldPtr f = make_real_quadratic(2);
    UnitSystem us = UnitSystem::real_quadratic(f);

    auto fast = enumerate_visible(us, 8.0);
    auto slow = brute_force_oracle(us, 20, 8.0);
    REQUIRE(fast.count() == slow.count());
    for (std::size_t i = 0; i < fast.count(); ++i) {
        CHECK(fast.classes[i].alpha == slow.classes[i].alpha);
        CHECK(fast.classes[i].h == slow.classes[i].h);
    }

    auto single = brute_force_oracle(us, 20, 1.5);
    REQUIRE(single.count() == 1);
    CHECK(single.classes[0].alpha == ZVec{1, 0});

    auto none = brute_force_oracle(us, 0, 8.0);
    CHECK(none.count() == 0);
}

TEST_CASE("enumeration independent of worker count") {
    FieldPtr f = make_real_quadratic(2);
    UnitSystem us = UnitSystem::real_quadratic(f);
    EnumerateOptions one, four;
    one.workers = 1;
    four.workers = 4;
    auto a = enumerate_visible(us, 200.0, one);
    auto b = enumerate_visible(us, 200.0, four);
    std::ostringstream csv_a, csv_b;
    write_enumeration_csv(a, csv_a);
    write_enumeration_csv(b, csv_b);
    CHECK(csv_a.str() == csv_b.str());
    CHECK(a.count() > 10);
}

TEST_CASE("enumeration independent of working precision") {
    // sqrt3 has orbits exactly on the reduction cell boundary; a 64-bit run
    // must still produce the identical class set.
    FieldPtr lo = make_real_quadratic(3, 64);
    FieldPtr hi = make_real_quadratic(3, 192);
    auto rep_lo = enumerate_visible(UnitSystem::real_quadratic(lo), 100.0);
    auto rep_hi = enumerate_visible(UnitSystem::real_quadratic(hi), 100.0);
    REQUIRE(rep_lo.count() == rep_hi.count());
    for (std::size_t i = 0; i < rep_lo.count(); ++i) {
        CHECK(rep_lo.classes[i].alpha == rep_hi.classes[i].alpha);
        CHECK(rep_lo.classes[i].h == rep_hi.classes[i].h);
        CHECK(std::fabs(rep_lo.classes[i].t[0] - rep_hi.classes[i].t[0]) < 1e-9);
    }
}

TEST_CASE("resource budget surfaces box volume") {
    FieldPtr f = make_real_quadratic(2);
    UnitSystem us = UnitSystem::real_quadratic(f);
    EnumerateOptions opts;
    opts.max_box_volume = 10;
    try {
        enumerate_visible(us, 1000.0, opts);
        FAIL("expected ResourceError");
    } catch (const ResourceError& e) {
        CHECK(e.box_volume > 10);
        CHECK(std::string(e.what()).find("volume") != std::string::npos);
    }
}

TEST_CASE("collision scan") {
    FieldPtr f = make_real_quadratic(2);
    UnitSystem us = UnitSystem::real_quadratic(f);
    auto r3 = enumerate_visible(us, 3.0);
    auto groups = collision_scan(r3, 1e-8);
    REQUIRE(groups.size() == 1);
    REQUIRE(groups[0].classes.size() == 2);
    CHECK(r3.classes[groups[0].classes[0]].h == 1);
    CHECK(r3.classes[groups[0].classes[1]].h == 2);
    CHECK(r3.classes[groups[0].classes[0]].t[0] == 0.0);
    CHECK(r3.classes[groups[0].classes[1]].t[0] == 0.0);

    // exact-equal points group even at tol = 0
    auto tight = collision_scan(r3, 0.0);
    REQUIRE(tight.size() == 1);

    EnumerationReport empty;
    empty.torus_rank = 1;
    CHECK(collision_scan(empty, 1e-8).empty());
}

TEST_CASE("cubic enumeration against oracle") {
    FieldConfig cfg = parse_field_config(builtin_cubic13_json());
    FieldPtr f = load_field(cfg, 192);
    UnitSystem us = make_unit_system(f, cfg);
    auto fast = enumerate_visible(us, 30.0);
    auto slow = brute_force_oracle(us, 12, 30.0);
    REQUIRE(fast.count() == slow.count());
    for (std::size_t i = 0; i < fast.count(); ++i)
        CHECK(fast.classes[i].alpha == slow.classes[i].alpha);
    // norm-5 split primes appear as three classes
    std::size_t h5 = 0;
    for (const auto& vc : fast.classes)
        if (vc.h == 5) ++h5;
    CHECK(h5 == 3);
}

TEST_CASE("gaussian enumeration with trivial torus") {
    FieldConfig cfg = parse_field_config(builtin_gaussian_json());
    FieldPtr f = load_field(cfg, 192);
    UnitSystem us = make_unit_system(f, cfg);
    auto rep = enumerate_visible(us, 26.0);
    auto orc = brute_force_oracle(us, 8, 26.0);
    REQUIRE(rep.count() == orc.count());
    for (std::size_t i = 0; i < rep.count(); ++i) CHECK(rep.classes[i].alpha == orc.classes[i].alpha);
    CHECK(rep.count() == 12);
    for (const auto& vc : rep.classes) CHECK(vc.t.empty());
}

TEST_CASE("quartic cyclotomic enumeration against oracle") {
    FieldConfig cfg = parse_field_config(builtin_cyclotomic5_json());
    FieldPtr f = load_field(cfg, 192);
    UnitSystem us = make_unit_system(f, cfg);
    auto fast = enumerate_visible(us, 100.0);
    auto slow = brute_force_oracle(us, 5, 100.0);
    REQUIRE(fast.count() == slow.count());
    for (std::size_t i = 0; i < fast.count(); ++i)
        CHECK(fast.classes[i].alpha == slow.classes[i].alpha);
    // 11 and 31 split completely (norm-11 and norm-31 primes); 5 is ramified
    // with a degree-1 prime of norm 5.
    CHECK(fast.classes[0].h == 1);
    std::size_t h11 = 0;
    for (const auto& vc : fast.classes)
        if (vc.h == 11) ++h11;
    CHECK(h11 == 4);
}

TEST_CASE("CSV format") {
    FieldPtr f = make_real_quadratic(2);
    UnitSystem us = UnitSystem::real_quadratic(f);
    auto rep = enumerate_visible(us, 3.0);
    std::ostringstream os;
    write_enumeration_csv(rep, os);
    std::string text = os.str();
    CHECK(text.rfind("h,coord_1,coord_2,t_1,err\n", 0) == 0);
    CHECK(text.find("1,1,0,0,") != std::string::npos);
    CHECK(text.find("2,0,1,0,") != std::string::npos);
}
