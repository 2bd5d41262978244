#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "structid/polynomial.hpp"
#include "structid/rational_function.hpp"
#include "support/random_polys.hpp"

using namespace structid;
using structid::testing::random_qpoly;
using structid::testing::random_rat;

namespace {

const VarTablePtr kTable = VarTable::make({"x", "y", "z", "w", "v", "u"});
const Rationals kQ;

QPoly var(const char* name) { return QPoly::variable(kTable, kQ, kTable->id_of(name)); }
QPoly con(long n, long d = 1) { return QPoly::constant(kTable, kQ, rat(n, d)); }

}  // namespace

TEST_CASE("polynomial arithmetic basics") {
    QPoly x = var("x"), y = var("y");
    CHECK((x + y) + (x - y) == x.scaled(Rat(2)));
    CHECK((x + con(1)) * (x - con(1)) == x * x - con(1));

    std::mt19937_64 rng(7);
    for (int i = 0; i < 20; ++i) {
        QPoly p = random_qpoly(rng, kTable, 6, 8, 4);
        CHECK((p * QPoly::zero(kTable, kQ)).is_zero());
    }
}

TEST_CASE("ring axioms on random polynomials") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        QPoly a = random_qpoly(rng, kTable, 8, 6, 6);
        QPoly b = random_qpoly(rng, kTable, 8, 6, 6);
        QPoly c = random_qpoly(rng, kTable, 8, 6, 6);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        if (trial % 5 == 0) {
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
        }
    }
}

TEST_CASE("canonical form: addition is bit-for-bit symmetric") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        QPoly a = random_qpoly(rng, kTable, 6, 10, 5);
        QPoly b = random_qpoly(rng, kTable, 6, 10, 5);
        QPoly ab = a + b, ba = b + a;
        REQUIRE(ab.terms().size() == ba.terms().size());
        for (std::size_t i = 0; i < ab.terms().size(); ++i) {
            CHECK(ab.terms()[i].mono == ba.terms()[i].mono);
            CHECK(ab.terms()[i].coeff == ba.terms()[i].coeff);
        }
    }
}

TEST_CASE("context and domain mismatches are rejected") {
    VarTablePtr other = VarTable::make({"x", "y"});
    QPoly a = var("x");
    QPoly b = QPoly::variable(other, kQ, 0);
    CHECK_THROWS_AS((void)(a + b), ContextError);

    PrimeField f7(7);
    FpPoly c = FpPoly::variable(kTable, f7, 0);
    FpPoly d = FpPoly::variable(kTable, PrimeField(11), 0);
    CHECK_THROWS_AS((void)(c + d), ContextError);
}

TEST_CASE("formal derivative") {
    QPoly x = var("x"), y = var("y");
    QPoly p = x * x * y;
    CHECK(p.derivative(kTable->id_of("x")) == x.scaled(Rat(2)) * y);
    CHECK(p.derivative(kTable->id_of("z")).is_zero());

    std::mt19937_64 rng(17);
    VarId dx = kTable->id_of("x");
    for (int trial = 0; trial < 200; ++trial) {
        QPoly f = random_qpoly(rng, kTable, 5, 6, 4);
        QPoly g = random_qpoly(rng, kTable, 5, 6, 4);
        // Leibniz rule
        CHECK((f * g).derivative(dx) == f.derivative(dx) * g + g.derivative(dx) * f);
        // linearity
        CHECK((f + g).derivative(dx) == f.derivative(dx) + g.derivative(dx));
    }
}

TEST_CASE("evaluation") {
    QPoly x = var("x"), y = var("y");
    QPoly p = x * x + y;
    std::map<VarId, Rat> point{{kTable->id_of("x"), Rat(2)}, {kTable->id_of("y"), Rat(3)}};
    CHECK(p.evaluate(point) == Rat(7));

    std::map<VarId, Rat> incomplete{{kTable->id_of("x"), Rat(2)}};
    CHECK_THROWS_AS(p.evaluate(incomplete), IncompletePointError);

    std::mt19937_64 rng(19);
    std::map<VarId, Rat> zero;
    for (VarId v = 0; v < kTable->size(); ++v) zero[v] = Rat(0);
    for (int trial = 0; trial < 20; ++trial) {
        QPoly f = random_qpoly(rng, kTable, 6, 8, 6);
        Rat constant = 0;
        for (const auto& t : f.terms())
            if (t.mono.is_one()) constant = t.coeff;
        CHECK(f.evaluate(zero) == constant);
    }
    // evaluation is a ring homomorphism
    for (int trial = 0; trial < 100; ++trial) {
        QPoly f = random_qpoly(rng, kTable, 5, 6, 5);
        QPoly g = random_qpoly(rng, kTable, 5, 6, 5);
        std::map<VarId, Rat> pt;
        for (VarId v = 0; v < kTable->size(); ++v) pt[v] = random_rat(rng);
        CHECK((f * g).evaluate(pt) == f.evaluate(pt) * g.evaluate(pt));
        CHECK((f + g).evaluate(pt) == f.evaluate(pt) + g.evaluate(pt));
    }
}

TEST_CASE("rational function normalization") {
    QPoly x = var("x");

    SUBCASE("common univariate factor") {
        RationalFunction r = RationalFunction::normalized(x * x - con(1), x - con(1));
        CHECK(r.numerator() == x + con(1));
        CHECK(r.denominator() == con(1));
    }

    SUBCASE("content reduction") {
        RationalFunction r = RationalFunction::normalized(x.scaled(Rat(2)), con(4));
        CHECK(r.numerator() == x.scaled(rat(1, 2)));
        CHECK(r.denominator() == con(1));
    }

    SUBCASE("cancellation of a shared variable factor") {
        // (k1*x1*x5)/(k1*(k2+x1)) with k1->x, x1->y, x5->z, k2->w
        QPoly y = var("y"), z = var("z"), w = var("w");
        RationalFunction r = RationalFunction::normalized(x * y * z, x * (w + y));
        CHECK(r.numerator() == y * z);
        CHECK(r.denominator() == w + y);
    }

    SUBCASE("zero denominator") {
        CHECK_THROWS_AS(RationalFunction::normalized(x, QPoly::zero(kTable, kQ)), DivisionError);
    }

    SUBCASE("idempotence and scale invariance") {
        std::mt19937_64 rng(23);
        auto equivalent = [](const RationalFunction& f, const RationalFunction& g) {
            return f.numerator() * g.denominator() == g.numerator() * f.denominator();
        };
        for (int trial = 0; trial < 100; ++trial) {
            QPoly a = random_qpoly(rng, kTable, 4, 5, 4);
            QPoly b = random_qpoly(rng, kTable, 4, 5, 4);
            if (b.is_zero()) continue;
            RationalFunction r = RationalFunction::normalized(a, b);
            RationalFunction again = RationalFunction::normalized(r.numerator(), r.denominator());
            CHECK(r == again);

            // Canonical invariance for the factor classes normalization
            // reduces: constants, monomials, and whole-quotient factors.
            QPoly constant = con(static_cast<long>(rng() % 7) + 2, static_cast<long>(rng() % 3) + 1);
            CHECK(RationalFunction::normalized(a * constant, b * constant) == r);
            QPoly mono = QPoly::variable(kTable, kQ, static_cast<VarId>(rng() % 4),
                                         static_cast<std::uint32_t>(rng() % 3) + 1);
            CHECK(RationalFunction::normalized(a * mono, b * mono) == r);
            // Whole-quotient cancellation.
            if (!a.is_zero())
                CHECK(RationalFunction::normalized(a * b, b) ==
                      RationalFunction::normalized(a, con(1)));

            // For arbitrary common factors the reduced pair may differ, but
            // the value never does.
            QPoly c = random_qpoly(rng, kTable, 3, 3, 4);
            if (c.is_zero()) continue;
            CHECK(equivalent(RationalFunction::normalized(a * c, b * c), r));
        }
    }
}

TEST_CASE("reduction modulo a prime") {
    QPoly x = var("x");

    SUBCASE("inverse of two") {
        PrimeField f(2305843009213693951ull);  // 2^61 - 1
        FpPoly image = reduce_mod_prime(x.scaled(rat(1, 2)), f);
        REQUIRE(image.terms().size() == 1);
        CHECK(image.terms()[0].coeff == (f.p + 1) / 2);
    }

    SUBCASE("bad prime") {
        PrimeField f7(7);
        CHECK_THROWS_AS(reduce_mod_prime(x.scaled(rat(1, 7)), f7), BadPrimeError);
    }

    SUBCASE("homomorphism and commutation with evaluation") {
        std::mt19937_64 rng(29);
        PrimeField f(2305843009213693951ull);  // 2^61 - 1
        REQUIRE(is_prime_u64(f.p));
        for (int trial = 0; trial < 100; ++trial) {
            QPoly a = random_qpoly(rng, kTable, 5, 6, 5);
            QPoly b = random_qpoly(rng, kTable, 5, 6, 5);
            CHECK(reduce_mod_prime(a * b, f) == reduce_mod_prime(a, f) * reduce_mod_prime(b, f));
            CHECK(reduce_mod_prime(a + b, f) == reduce_mod_prime(a, f) + reduce_mod_prime(b, f));

            std::map<VarId, Rat> pt;
            std::map<VarId, std::uint64_t> pt_mod;
            for (VarId v = 0; v < kTable->size(); ++v) {
                long n = static_cast<long>(rng() % 1000) + 1;
                pt[v] = Rat(n);
                pt_mod[v] = f.from_integer(Int(n));
            }
            CHECK(reduce_mod_prime(a, f).evaluate(pt_mod) == f.from_rational(a.evaluate(pt)));
        }
    }
}

TEST_CASE("prime generation respects the field spec") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 10; ++i) {
        PrimeField f = random_prime_field(rng);
        CHECK(f.p > (1ull << 59));
        CHECK(f.p < (1ull << 60));
        CHECK(is_prime_u64(f.p));
    }
    CHECK_THROWS_AS(PrimeField(91), ArgumentError);  // 7 * 13
}
