#include <catch2/catch_amalgamated.hpp>

#include "klab/koszul.hpp"
#include "klab/models.hpp"
#include "klab/rng.hpp"

using namespace klab;

namespace {

Mat random_invertible(FieldPtr F, std::size_t n, Rng& rng) {
    for (;;) {
        Mat m(F, n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m.set(i, j, F->element_from_rng(rng));
        if (rank(m) == n) return m;
    }
}

std::vector<std::int64_t> betti_row(const GradedRing& ring, int q, int pmax) {
    BettiTable t = betti_table(ring, pmax, q, q);
    std::vector<std::int64_t> row;
    for (int p = 0; p <= pmax; ++p) row.push_back(t.at(p, q));
    return row;
}

} // namespace

TEST_CASE("wedge bases", "[koszul]") {
    CHECK(WedgeBasis(0, 5).size() == 1);
    CHECK(WedgeBasis(2, 5).size() == 10);
    CHECK(WedgeBasis(5, 5).size() == 1);
    CHECK(WedgeBasis(6, 5).size() == 0);
    WedgeBasis w(2, 4);
    CHECK(w.tuple(0) == std::vector<int>{0, 1});
    CHECK(w.tuple(5) == std::vector<int>{2, 3});
    for (std::size_t i = 0; i < w.size(); ++i) CHECK(w.index_of(w.tuple(i)) == i);
}

TEST_CASE("differential shapes and the q = 0 inclusion", "[koszul]") {
    FieldPtr F = Field::prime_field(101);
    CanonicalModel cm = gen_canonical_g4(F, 5);
    GradedRing ring(cm.pres);
    Mat vfull = Mat::identity(F, 4);
    SECTION("p = 1, q = 0: delta(w (x) 1) = 1 (x) w is the inclusion") {
        Mat d = koszul_differential(ring, vfull, 1, 0);
        CHECK(d == Mat::identity(F, 4));
    }
    SECTION("p = dim W: the domain is one wedge slot wide") {
        Mat d = koszul_differential(ring, vfull, 4, 1);
        CHECK(d.ncols() == ring.dim(1));
        CHECK(d.nrows() == binom(4, 3) * ring.dim(2));
    }
    SECTION("p = 0 differentials vanish; negative pieces are empty") {
        CHECK(koszul_differential(ring, vfull, 0, 1).nrows() == 0);
        CHECK(koszul_differential(ring, vfull, 2, -1).ncols() == 0);
    }
}

TEST_CASE("composite of consecutive differentials is zero", "[koszul]") {
    FieldPtr F = Field::prime_field(101);
    CanonicalModel cm = gen_canonical_grass(6, F, 3);
    GradedRing ring(cm.pres);
    Mat vfull = Mat::identity(F, 6);
    Mat out = koszul_differential(ring, vfull, 3, 1);
    Mat in = koszul_differential(ring, vfull, 4, 0);
    CHECK(out.mul(in).is_zero());
    // and on a proper subspace complex
    Rng rng(9);
    Mat wrows(F, 3, 6);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 6; ++j) wrows.set(i, j, F->element_from_rng(rng));
    Mat wout = koszul_differential(ring, wrows, 2, 1);
    Mat win = koszul_differential(ring, wrows, 3, 0);
    CHECK(wout.mul(win).is_zero());
}

TEST_CASE("genus 4 Koszul cohomology from the explicit model", "[koszul]") {
    FieldPtr F = Field::prime_field(101);
    CanonicalModel cm = gen_canonical_g4(F, 7);
    GradedRing ring(cm.pres);
    Mat vfull = Mat::identity(F, 4);
    CHECK(koszul_dim(ring, vfull, 1, 1) == 1);
    CHECK(koszul_dim(ring, vfull, 2, 1) == 0);
    SECTION("whole q = 1 row") {
        CHECK(betti_row(ring, 1, 4) == std::vector<std::int64_t>{0, 1, 0, 0, 0});
    }
    SECTION("b_{0,0} = 1") {
        CHECK(koszul_dim(ring, vfull, 0, 0) == 1);
    }
}

TEST_CASE("genus 6 Koszul cohomology", "[koszul]") {
    FieldPtr F = Field::prime_field(101);
    CanonicalModel cm = gen_canonical_grass(6, F, 3);
    GradedRing ring(cm.pres);
    Mat vfull = Mat::identity(F, 6);
    SECTION("q = 1 row is (0, 6, 5, 0, 0, 0, 0)") {
        CHECK(betti_row(ring, 1, 6) == std::vector<std::int64_t>{0, 6, 5, 0, 0, 0, 0});
    }
    SECTION("cell structure at (2, 1)") {
        KoszulCell cell = koszul_cohomology(ring, vfull, 2, 1);
        CHECK(cell.dim == 5);
        CHECK(cell.representatives.nrows() == 5);
        CHECK(cell.cocycles.dim() == cell.coboundaries.dim() + 5);
        // representatives stay independent modulo coboundaries
        std::vector<Mat> reps = {cell.representatives};
        CHECK(class_span_dim(cell, reps) == 5);
    }
}

TEST_CASE("classical self-duality of canonical Betti rows", "[koszul]") {
    FieldPtr F = Field::prime_field(101);
    SECTION("genus 4: b_{p,1} = b_{2-p,2}") {
        CanonicalModel cm = gen_canonical_g4(F, 13);
        GradedRing ring(cm.pres);
        auto row1 = betti_row(ring, 1, 4);
        auto row2 = betti_row(ring, 2, 4);
        for (int p = 0; p <= 2; ++p) CHECK(row1[static_cast<std::size_t>(p)] == row2[static_cast<std::size_t>(2 - p)]);
    }
    SECTION("genus 6: b_{p,1} = b_{4-p,2}") {
        CanonicalModel cm = gen_canonical_grass(6, F, 13);
        GradedRing ring(cm.pres);
        auto row1 = betti_row(ring, 1, 6);
        auto row2 = betti_row(ring, 2, 6);
        for (int p = 0; p <= 4; ++p) CHECK(row1[static_cast<std::size_t>(p)] == row2[static_cast<std::size_t>(4 - p)]);
    }
}

TEST_CASE("cohomology dimensions are basis independent", "[koszul][property]") {
    FieldPtr F = Field::prime_field(101);
    CanonicalModel cm = gen_canonical_grass(6, F, 21);
    GradedRing ring(cm.pres);
    Mat vfull = Mat::identity(F, 6);
    std::size_t base11 = koszul_dim(ring, vfull, 1, 1);
    std::size_t base21 = koszul_dim(ring, vfull, 2, 1);
    std::size_t base31 = koszul_dim(ring, vfull, 3, 1);
    Rng rng(77);
    for (int trial = 0; trial < 5; ++trial) {
        Mat g = random_invertible(F, 6, rng);
        CHECK(koszul_dim(ring, g, 1, 1) == base11);
        CHECK(koszul_dim(ring, g, 2, 1) == base21);
        CHECK(koszul_dim(ring, g, 3, 1) == base31);
    }
}

TEST_CASE("subspace image machinery", "[koszul]") {
    FieldPtr F = Field::prime_field(101);
    CanonicalModel cm = gen_canonical_grass(6, F, 31);
    GradedRing ring(cm.pres);
    Mat vfull = Mat::identity(F, 6);
    KoszulCell cell = koszul_cohomology(ring, vfull, 2, 1);
    SECTION("W = V maps onto the whole cohomology") {
        Subspace all = Subspace::row_space(vfull);
        SyzygyClassSpace img = subspace_cohomology_image(ring, all, cell);
        CHECK(img.dim == cell.dim);
    }
    SECTION("W smaller than p gives the zero image") {
        Mat two(F, 2, 6);
        two.set(0, 0, F->one());
        two.set(1, 1, F->one());
        Subspace w = Subspace::row_space(two);
        KoszulCell c3 = koszul_cohomology(ring, vfull, 3, 1);
        CHECK(subspace_cohomology_image(ring, w, c3).dim == 0);
    }
    SECTION("random 3-dimensional subspaces have zero image, bounded by their own cohomology") {
        Rng rng(123);
        int nonzero = 0;
        for (int trial = 0; trial < 50; ++trial) {
            Mat rows(F, 3, 6);
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 6; ++j) rows.set(i, j, F->element_from_rng(rng));
            Subspace w = Subspace::row_space(rows);
            if (w.dim() != 3) continue;
            SyzygyClassSpace img = subspace_cohomology_image(ring, w, cell);
            // monotonicity: the image cannot exceed the W-complex cohomology
            KoszulCell wcell = koszul_cohomology(ring, w.basis(), 2, 1);
            CHECK(img.dim <= wcell.dim);
            if (img.dim != 0) ++nonzero;
        }
        CHECK(nonzero == 0);
    }
}

TEST_CASE("betti table rendering", "[koszul]") {
    FieldPtr F = Field::prime_field(101);
    CanonicalModel cm = gen_canonical_g4(F, 7);
    GradedRing ring(cm.pres);
    BettiTable t = betti_table(ring, 4, 0, 2, "canonical-g4");
    CHECK(t.at(0, 0) == 1);
    CHECK(t.at(1, 1) == 1);
    std::string text = t.to_text();
    CHECK(text.find("q\\p") != std::string::npos);
    CHECK(text.find('1') != std::string::npos);
    CHECK(text.find('.') != std::string::npos);
}
