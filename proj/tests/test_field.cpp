#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "klab/field.hpp"
#include "klab/rng.hpp"

using namespace klab;

namespace {

// Exhaustive root scan, independent of the library's extraction path.
std::vector<Fel> scan_roots(const Field& F, const Poly& f) {
    std::vector<Fel> out;
    for (std::uint64_t i = 0; i < F.q(); ++i) {
        Fel x = F.enumerate(i);
        if (F.is_zero(poly_eval(F, f, x))) out.push_back(x);
    }
    return out;
}

FieldPtr f49() {
    // F_49 with modulus x^2 + 1 (-1 is a non-residue mod 7).
    return std::make_shared<Field>(FieldSpec{7, 2, {1, 0, 1}});
}

} // namespace

TEST_CASE("prime field basics", "[field]") {
    FieldPtr F = Field::prime_field(7);
    CHECK(F->q() == 7);
    CHECK(F->inv(F->from_int(3)) == F->from_int(5));
    CHECK(F->mul(F->from_int(3), F->from_int(5)) == F->one());
    CHECK(F->add(F->from_int(4), F->from_int(5)) == F->from_int(2));
    CHECK(F->sub(F->from_int(1), F->from_int(3)) == F->from_int(5));
    CHECK(F->from_signed(-1) == F->from_int(6));
    CHECK_THROWS_AS(F->inv(F->zero()), DivisionByZero);
    CHECK_THROWS_AS(F->check(Fel{1, 2}), SpecMismatch);
}

TEST_CASE("field spec validation", "[field]") {
    CHECK_THROWS_AS(Field(FieldSpec{4, 1, {}}), SpecMismatch);
    CHECK_THROWS_AS(Field(FieldSpec{2, 1, {}}), SpecMismatch);
    // x^2 - 1 = (x-1)(x+1) is reducible.
    CHECK_THROWS_AS(Field(FieldSpec{7, 2, {6, 0, 1}}), SpecMismatch);
    CHECK_NOTHROW(Field(FieldSpec{7, 2, {1, 0, 1}}));
}

TEST_CASE("extension arithmetic in F_49", "[field]") {
    FieldPtr F = f49();
    const Fel x = {0, 1};
    SECTION("defining relation: x*x = -1") {
        CHECK(F->mul(x, x) == F->from_signed(-1));
    }
    SECTION("Frobenius fixes every element: a^q = a") {
        CHECK(F->pow(x, 49) == x);
        Rng rng(11);
        for (int i = 0; i < 50; ++i) {
            Fel a = F->element_from_rng(rng);
            CHECK(F->pow(a, F->q()) == a);
        }
    }
    SECTION("multiplicative order divides q-1") {
        Rng rng(12);
        for (int i = 0; i < 50; ++i) {
            Fel a = F->nonzero_from_rng(rng);
            CHECK(F->pow(a, F->q() - 1) == F->one());
        }
    }
}

TEST_CASE("field axioms on random triples", "[field][property]") {
    for (FieldPtr F : {Field::prime_field(101), f49()}) {
        Rng rng(2024);
        for (int i = 0; i < 10000; ++i) {
            Fel a = F->element_from_rng(rng);
            Fel b = F->element_from_rng(rng);
            Fel c = F->element_from_rng(rng);
            REQUIRE(F->add(F->add(a, b), c) == F->add(a, F->add(b, c)));
            REQUIRE(F->mul(a, F->add(b, c)) == F->add(F->mul(a, b), F->mul(a, c)));
            if (!F->is_zero(a)) REQUIRE(F->mul(a, F->inv(a)) == F->one());
        }
    }
}

TEST_CASE("find_irreducible produces rootless low-degree moduli", "[field]") {
    FieldPtr F7 = Field::prime_field(7);
    SECTION("degree 1 is monic linear") {
        auto f = find_irreducible(7, 1, 3);
        REQUIRE(f.size() == 2);
        CHECK(f[1] == 1);
    }
    SECTION("degree 2 over F_7 has no roots") {
        auto c = find_irreducible(7, 2, 5);
        REQUIRE(c.size() == 3);
        CHECK(c[2] == 1);
        Poly f = {{c[0]}, {c[1]}, {c[2]}};
        CHECK(scan_roots(*F7, f).empty());
        // x^2 + 1 itself is a valid choice: -1 is a non-residue mod 7.
        Poly x2p1 = {F7->one(), F7->zero(), F7->one()};
        CHECK(scan_roots(*F7, x2p1).empty());
    }
    SECTION("degree 3 over F_5 has no roots (cubics split iff they have one)") {
        FieldPtr F5 = Field::prime_field(5);
        for (std::uint64_t seed = 1; seed <= 4; ++seed) {
            auto c = find_irreducible(5, 3, seed);
            REQUIRE(c.size() == 4);
            CHECK(c[3] == 1);
            Poly f = {{c[0]}, {c[1]}, {c[2]}, {c[3]}};
            CHECK(scan_roots(*F5, f).empty());
        }
    }
    SECTION("deterministic given (p, m, seed)") {
        CHECK(find_irreducible(7, 2, 9) == find_irreducible(7, 2, 9));
        CHECK(find_irreducible(11, 3, 1) == find_irreducible(11, 3, 1));
    }
}

TEST_CASE("univariate roots over prime and extension fields", "[field]") {
    FieldPtr F = Field::prime_field(7);
    SECTION("x^2 - 1 over F_7") {
        Poly f = {F->from_signed(-1), F->zero(), F->one()};
        auto roots = univariate_roots(*F, f);
        REQUIRE(roots.size() == 2);
        CHECK(roots[0] == std::pair<Fel, int>{F->from_int(1), 1});
        CHECK(roots[1] == std::pair<Fel, int>{F->from_int(6), 1});
    }
    SECTION("(x - 2)^2 over F_7 has a double root") {
        Poly f = {F->from_int(4), F->from_signed(-4), F->one()};
        auto roots = univariate_roots(*F, f);
        REQUIRE(roots.size() == 1);
        CHECK(roots[0] == std::pair<Fel, int>{F->from_int(2), 2});
    }
    SECTION("x^2 + 1: no roots over F_7, two simple roots over F_49") {
        Poly f7 = {F->one(), F->zero(), F->one()};
        CHECK(univariate_roots(*F, f7).empty());
        FieldPtr E = f49();
        Poly fe = {E->one(), E->zero(), E->one()};
        auto roots = univariate_roots(*E, fe);
        REQUIRE(roots.size() == 2);
        CHECK(roots[0].second == 1);
        CHECK(roots[1].second == 1);
        for (auto& [r, mult] : roots) CHECK(E->mul(r, r) == E->from_signed(-1));
    }
    SECTION("zero polynomial is rejected") {
        CHECK_THROWS_AS(univariate_roots(*F, Poly{}), ZeroPolynomial);
        CHECK_THROWS_AS(univariate_roots(*F, Poly{F->zero()}), ZeroPolynomial);
    }
}

TEST_CASE("roots of products are multiset unions", "[field][property]") {
    for (FieldPtr F : {Field::prime_field(7), f49()}) {
        Rng rng(77);
        for (int trial = 0; trial < 100; ++trial) {
            auto random_poly = [&](int deg) {
                Poly f(deg + 1, F->zero());
                for (int i = 0; i < deg; ++i) f[i] = F->element_from_rng(rng);
                f[deg] = F->nonzero_from_rng(rng);
                return f;
            };
            Poly f = random_poly(1 + static_cast<int>(rng.below(3)));
            Poly g = random_poly(1 + static_cast<int>(rng.below(3)));
            auto rf = univariate_roots(*F, f);
            auto rg = univariate_roots(*F, g);
            auto rfg = univariate_roots(*F, poly_mul(*F, f, g));
            std::map<Fel, int> expected;
            for (auto& [r, mlt] : rf) expected[r] += mlt;
            for (auto& [r, mlt] : rg) expected[r] += mlt;
            std::map<Fel, int> got;
            for (auto& [r, mlt] : rfg) got[r] += mlt;
            REQUIRE(got == expected);
        }
    }
}

TEST_CASE("root extraction beyond the exhaustive-scan threshold", "[field]") {
    // q = 65537 forces the Frobenius-gcd + equal-degree-splitting path.
    FieldPtr F = Field::prime_field(65537);
    Poly f = {F->one()};
    for (std::uint64_t r : {3ull, 5ull, 7ull, 7ull})
        f = poly_mul(*F, f, Poly{F->neg(F->from_int(r)), F->one()});
    // 65537 = 1 mod 4, so x^2 + 1 splits into the two square roots of -1.
    f = poly_mul(*F, f, Poly{F->one(), F->zero(), F->one()});
    auto roots = univariate_roots(*F, f);
    std::map<Fel, int> got;
    for (auto& [r, mlt] : roots) got[r] += mlt;
    REQUIRE(roots.size() == 5);
    CHECK(got.at(F->from_int(3)) == 1);
    CHECK(got.at(F->from_int(5)) == 1);
    CHECK(got.at(F->from_int(7)) == 2);
    for (auto& [r, mlt] : got)
        if (r != F->from_int(3) && r != F->from_int(5) && r != F->from_int(7)) {
            CHECK(mlt == 1);
            CHECK(F->mul(r, r) == F->from_signed(-1));
        }
}

TEST_CASE("polynomial division and gcd", "[field]") {
    FieldPtr F = Field::prime_field(101);
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        Poly a(1 + rng.below(6), F->zero());
        for (Fel& c : a) c = F->element_from_rng(rng);
        Poly b(1 + rng.below(4), F->zero());
        for (Fel& c : b) c = F->element_from_rng(rng);
        if (poly_deg(*F, b) < 0) continue;
        auto [q, r] = poly_divrem(*F, a, b);
        CHECK(poly_sub(*F, a, poly_add(*F, poly_mul(*F, q, b), r)).empty());
        CHECK(poly_deg(*F, r) < poly_deg(*F, b));
    }
}
