#include <catch2/catch_amalgamated.hpp>

#include "klab/gradedring.hpp"
#include "klab/models.hpp"

using namespace klab;

namespace {

// The smooth conic xz = y^2 in P^2: its coordinate ring has dim M_q = 2q + 1,
// and it is rationally parametrized by (1 : s : s^2). Both facts serve as
// independent oracles below.
PresentationModel conic_presentation(FieldPtr F) {
    MonomialBasis b2(3, 2);
    Mat q(F, 1, b2.size());
    q.set(0, b2.index_of({1, 0, 1}), F->one());
    q.set(0, b2.index_of({0, 2, 0}), F->from_signed(-1));
    PresentationModel pm;
    pm.F = F;
    pm.n = 3;
    pm.generators.push_back({2, std::move(q)});
    return pm;
}

EvaluationModel conic_points(FieldPtr F, std::size_t count) {
    const Field& FF = *F;
    std::vector<Mat> pts;
    for (std::size_t s = 0; s < count; ++s) {
        Mat p(F, 1, 3);
        Fel fs = FF.from_int(s);
        p.set(0, 0, FF.one());
        p.set(0, 1, fs);
        p.set(0, 2, FF.mul(fs, fs));
        pts.push_back(std::move(p));
    }
    return EvaluationModel::make(F, pts, 3);
}

} // namespace

TEST_CASE("monomial bases in graded-lex order", "[gradedring]") {
    SECTION("(2, 3) lists x^3, x^2 y, x y^2, y^3") {
        MonomialBasis b(2, 3);
        REQUIRE(b.size() == 4);
        CHECK(b.exponent(0) == std::vector<int>{3, 0});
        CHECK(b.exponent(1) == std::vector<int>{2, 1});
        CHECK(b.exponent(2) == std::vector<int>{1, 2});
        CHECK(b.exponent(3) == std::vector<int>{0, 3});
    }
    SECTION("sizes") {
        CHECK(MonomialBasis(6, 2).size() == 21);
        CHECK(MonomialBasis(8, 2).size() == 36);
        CHECK(sym_dim(6, 3) == 56);
        CHECK(MonomialBasis(3, 0).size() == 1);
    }
    SECTION("index lookup inverts enumeration") {
        MonomialBasis b(4, 3);
        for (std::size_t i = 0; i < b.size(); ++i) CHECK(b.index_of(b.exponent(i)) == i);
    }
}

TEST_CASE("evaluation matrices", "[gradedring]") {
    FieldPtr F = Field::prime_field(101);
    SECTION("one point at q = 1 is the point itself") {
        std::vector<Mat> pts;
        Mat p(F, 1, 3);
        p.set(0, 0, F->one());
        p.set(0, 1, F->from_int(7));
        p.set(0, 2, F->from_int(9));
        pts.push_back(p);
        EvaluationModel em = EvaluationModel::make(F, pts, 3);
        Mat e = eval_matrix(em, 1);
        REQUIRE(e.nrows() == 1);
        CHECK(e.get(0, 0) == F->one());
        CHECK(e.get(0, 1) == F->from_int(7));
        CHECK(e.get(0, 2) == F->from_int(9));
    }
    SECTION("conic points: rank 5 at q = 2, one vanishing quadric") {
        EvaluationModel em = conic_points(F, 9);
        Mat e = eval_matrix(em, 2);
        CHECK(rank(e) == 5);
        Subspace vanishing = kernel_basis(e);
        REQUIRE(vanishing.dim() == 1);
        // the vanishing quadric is xz - y^2 up to scale
        MonomialBasis b2(3, 2);
        Fel cxz = vanishing.basis().get(0, b2.index_of({1, 0, 1}));
        Fel cy2 = vanishing.basis().get(0, b2.index_of({0, 2, 0}));
        CHECK(cxz == F->neg(cy2));
        CHECK(!F->is_zero(cxz));
    }
    SECTION("duplicate and unnormalized points collapse") {
        std::vector<Mat> pts;
        for (int rep = 0; rep < 3; ++rep) {
            Mat p(F, 1, 3);
            p.set(0, 0, F->from_int(2 + static_cast<std::uint64_t>(rep))); // scalar multiples of (1,0,0)
            pts.push_back(p);
        }
        EvaluationModel em = EvaluationModel::make(F, pts, 3);
        CHECK(em.points.nrows() == 1);
        CHECK(em.points.get(0, 0) == F->one());
    }
}

TEST_CASE("graded pieces of the conic model in both representations", "[gradedring]") {
    FieldPtr F = Field::prime_field(101);
    GradedRing pres(conic_presentation(F));
    GradedRing eval(conic_points(F, 12));
    SECTION("dimensions follow 2q + 1, and q = 0 is one-dimensional") {
        for (const GradedRing* r : {&pres, &eval}) {
            CHECK(r->dim(0) == 1);
            CHECK(r->dim(1) == 3);
            CHECK(r->dim(2) == 5);
            CHECK(r->dim(3) == 7);
        }
        CHECK(pres.dim(-1) == 0);
    }
    SECTION("ideal piece is zero below the generator degree") {
        CHECK(ideal_piece(pres.presentation(), 1).dim() == 0);
        CHECK(ideal_piece(pres.presentation(), 2).dim() == 1);
    }
    SECTION("multiplication by x_i at q = 0 is the coordinate injection") {
        for (int v = 0; v < 3; ++v) {
            const Mat& mv = pres.mult(0, v);
            REQUIRE(mv.nrows() == 3);
            REQUIRE(mv.ncols() == 1);
            for (std::size_t i = 0; i < 3; ++i)
                CHECK(mv.get(i, 0) == (static_cast<int>(i) == v ? F->one() : F->zero()));
        }
    }
    SECTION("multiplication maps commute") {
        for (const GradedRing* r : {&pres, &eval})
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    Mat ij = r->mult(1, i).mul(r->mult(0, j));
                    Mat ji = r->mult(1, j).mul(r->mult(0, i));
                    CHECK(ij == ji);
                }
    }
    SECTION("multiplication ranks agree across representations") {
        for (int q = 0; q <= 2; ++q)
            for (int v = 0; v < 3; ++v) CHECK(rank(pres.mult(q, v)) == rank(eval.mult(q, v)));
    }
}

TEST_CASE("hilbert guard fires on wrong expectations", "[gradedring]") {
    FieldPtr F = Field::prime_field(101);
    PresentationModel pm = conic_presentation(F);
    pm.expected_hilbert[2] = 6; // truth is 5
    GradedRing ring(std::move(pm));
    CHECK(ring.dim(1) == 3);
    CHECK_THROWS_AS(ring.dim(2), HilbertMismatch);
}

TEST_CASE("saturated point sets are rejected", "[gradedring]") {
    FieldPtr F = Field::prime_field(101);
    // 3 points cannot carry the 5-dimensional degree-2 piece.
    GradedRing ring(conic_points(F, 3));
    CHECK_THROWS_AS(ring.dim(2), InsufficientPoints);
}

TEST_CASE("genus-4 model: quadric kernel of Sym^2 V -> M_2", "[gradedring]") {
    FieldPtr F = Field::prime_field(101);
    CanonicalModel cm = gen_canonical_g4(F, 11);
    GradedRing ring(cm.pres);
    REQUIRE(ring.dim(1) == 4);
    REQUIRE(ring.dim(2) == 9);
    // Columns: reduction of x_i x_j for i <= j; kernel is I_2 (dim 1).
    MonomialBasis b2(4, 2);
    Mat sym_to_m2(F, 9, b2.size());
    const GradedPiece& piece2 = ring.piece(2);
    for (std::size_t c = 0; c < b2.size(); ++c) {
        Mat unit(F, 1, b2.size());
        unit.set(0, c, F->one());
        std::vector<Fel> coords = piece2.reduce_sym(*F, unit);
        for (std::size_t i = 0; i < 9; ++i) sym_to_m2.set(i, c, coords[i]);
    }
    Subspace ker = kernel_basis(sym_to_m2);
    REQUIRE(ker.dim() == 1);
    // The kernel is spanned by the model's quadric generator.
    Subspace gen_span = Subspace::row_space(cm.pres.generators[0].coeffs);
    CHECK(ker == gen_span);
}

TEST_CASE("evaluation rank is stable under extra points", "[gradedring][property]") {
    FieldPtr F = Field::prime_field(101);
    for (std::size_t base : {12u, 20u, 40u}) {
        EvaluationModel a = conic_points(F, base);
        EvaluationModel b = conic_points(F, base + 10);
        for (int q = 1; q <= 3; ++q) CHECK(rank(eval_matrix(a, q)) == rank(eval_matrix(b, q)));
    }
}
