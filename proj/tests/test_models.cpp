#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "klab/jsonio.hpp"
#include "klab/koszul.hpp"
#include "klab/models.hpp"

using namespace klab;

namespace {

std::vector<std::int64_t> betti_row1(const GradedRing& ring, int pmax) {
    BettiTable t = betti_table(ring, pmax, 1, 1);
    std::vector<std::int64_t> row;
    for (int p = 0; p <= pmax; ++p) row.push_back(t.at(p, 1));
    return row;
}

struct TempFile {
    std::string path;
    explicit TempFile(std::string p) : path(std::move(p)) {}
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("plucker models", "[models]") {
    FieldPtr F = Field::prime_field(101);
    SECTION("relation counts") {
        CHECK(plucker_model(F, 5).relations.nrows() == 5);
        CHECK(plucker_model(F, 5).vars.size() == 10);
        CHECK(plucker_model(F, 6).relations.nrows() == 15);
        CHECK(plucker_model(F, 6).vars.size() == 15);
    }
    SECTION("each relation has exactly three terms with signs +1, -1, +1") {
        GrassmannianModel gm = plucker_model(F, 5);
        for (std::size_t r = 0; r < gm.relations.nrows(); ++r) {
            int plus = 0, minus = 0, other = 0;
            for (std::size_t c = 0; c < gm.relations.ncols(); ++c) {
                Fel v = gm.relations.get(r, c);
                if (F->is_zero(v)) continue;
                if (v == F->one()) ++plus;
                else if (v == F->from_signed(-1)) ++minus;
                else ++other;
            }
            CHECK(plus == 2);
            CHECK(minus == 1);
            CHECK(other == 0);
        }
    }
    SECTION("sampled points satisfy every relation") {
        for (int n : {5, 6}) {
            GrassmannianModel gm = plucker_model(F, n);
            MonomialBasis b2(static_cast<int>(gm.vars.size()), 2);
            Rng rng(42);
            for (int trial = 0; trial < 100; ++trial) {
                Mat pt = sample_plucker_point(F, n, rng);
                for (std::size_t r = 0; r < gm.relations.nrows(); ++r)
                    REQUIRE(F->is_zero(eval_form(*F, b2, gm.relations.rows_slice(r, 1), pt)));
            }
        }
    }
}

TEST_CASE("linear section restriction", "[models]") {
    FieldPtr F = Field::prime_field(101);
    GrassmannianModel g25 = plucker_model(F, 5);
    SECTION("identity parametrization returns the same quadrics") {
        RestrictedQuadrics rq = restrict_to_linear_section(g25.relations, Mat::identity(F, 10));
        CHECK(rq.quadrics.nrows() == 5);
        CHECK(rq.span_dim == 5);
        CHECK(rq.quadrics == g25.relations);
    }
    SECTION("Gr(2,6) to a random P^7 has 15-dimensional span") {
        GrassmannianModel g26 = plucker_model(F, 6);
        Rng rng(7);
        Mat param = random_full_rank(F, 8, 15, rng);
        RestrictedQuadrics rq = restrict_to_linear_section(g26.relations, param);
        CHECK(rq.span_dim == 15);
    }
    SECTION("Gr(2,5) to a random P^5 plus one random quadric spans dim 6") {
        Rng rng(8);
        Mat param = random_full_rank(F, 6, 10, rng);
        RestrictedQuadrics rq = restrict_to_linear_section(g25.relations, param);
        CHECK(rq.span_dim == 5);
        Mat gens = Mat::vstack(rq.quadrics, random_form(F, 6, 2, rng));
        CHECK(rank(gens) == 6);
    }
    SECTION("rank-deficient parametrizations are rejected") {
        Mat bad(F, 6, 10); // zero matrix
        CHECK_THROWS_AS(restrict_to_linear_section(g25.relations, bad), RankDeficientParametrization);
    }
}

TEST_CASE("canonical model generators", "[models]") {
    FieldPtr F = Field::prime_field(101);
    SECTION("genus 4: I_2 of dim 1, M_2 of dim 9") {
        CanonicalModel cm = gen_canonical(4, "ci", F, 1);
        GradedRing ring(cm.pres);
        CHECK(ideal_piece(cm.pres, 2).dim() == 1);
        CHECK(ring.dim(2) == 9);
        CHECK(ring.dim(3) == 15);
    }
    SECTION("genus 6 grass: I_2 of dim 6, M_2 of dim 15") {
        CanonicalModel cm = gen_canonical(6, "grass", F, 1);
        GradedRing ring(cm.pres);
        CHECK(ideal_piece(cm.pres, 2).dim() == 6);
        CHECK(ring.dim(2) == 15);
        CHECK(ring.dim(3) == 25);
    }
    SECTION("genus 8 grass: I_2 of dim 15, M_2 of dim 21") {
        CanonicalModel cm = gen_canonical(8, "grass", F, 1);
        GradedRing ring(cm.pres);
        CHECK(ideal_piece(cm.pres, 2).dim() == 15);
        CHECK(ring.dim(2) == 21);
        CHECK(ring.dim(3) == 35);
    }
}

TEST_CASE("K3 model and its hyperplane section", "[models]") {
    FieldPtr F = Field::prime_field(101);
    CanonicalModel k3 = gen_k3_g6(F, 2);
    CHECK(k3.surface);
    REQUIRE(k3.k3.has_value());
    GradedRing ring(k3.pres);
    CHECK(ideal_piece(k3.pres, 2).dim() == 6);
    CHECK(ring.dim(1) == 7);
    CHECK(ring.dim(2) == 22);
    CanonicalModel section = hyperplane_section(k3, 3);
    GradedRing sring(section.pres);
    CHECK(ideal_piece(section.pres, 2).dim() == 6);
    CHECK(sring.dim(2) == 15);
}

TEST_CASE("grass-section sampling on the K3", "[models]") {
    FieldPtr F = Field::prime_field(101);
    CanonicalModel k3 = gen_k3_g6(F, 2);
    Rng rng(5);
    std::vector<Mat> pts = sample_grass_section_points(k3, 60, rng);
    REQUIRE(pts.size() == 60);
    // rank of the degree-2 evaluation equals dim M_2 = 22 already at 32 points
    std::vector<Mat> some(pts.begin(), pts.begin() + 32);
    EvaluationModel em = EvaluationModel::make(F, some, 7);
    CHECK(rank(eval_matrix(em, 2)) == 22);
    EvaluationModel all = EvaluationModel::make(F, pts, 7, k3_hilbert_g6());
    GradedRing er(all);
    CHECK(er.dim(1) == 7);
    CHECK(er.dim(2) == 22);
}

TEST_CASE("nodal sextics", "[models]") {
    FieldPtr F = Field::prime_field(101);
    SECTION("node conditions have rank 12, solutions dim 16, adjoints dim 6") {
        Mat nodes(F, 4, 3);
        nodes.set(0, 0, F->one());
        nodes.set(1, 1, F->one());
        nodes.set(2, 2, F->one());
        nodes.set(3, 0, F->one());
        nodes.set(3, 1, F->one());
        nodes.set(3, 2, F->one());
        Mat cond = sextic_node_conditions(F, nodes);
        CHECK(cond.nrows() == 12);
        CHECK(rank(cond) == 12);
        CHECK(kernel_basis(cond).dim() == 16);
    }
    SECTION("generated sextics pass their invariants") {
        NodalSexticModel sm = gen_nodal_sextic(F, 17);
        CHECK(sm.adjoints.nrows() == 6);
        MonomialBasis b6(3, 6);
        for (std::size_t nd = 0; nd < 4; ++nd)
            CHECK(F->is_zero(eval_form(*F, b6, sm.f, sm.nodes.rows_slice(nd, 1))));
        // adjoints vanish at all nodes
        MonomialBasis b3(3, 3);
        for (std::size_t a = 0; a < 6; ++a)
            for (std::size_t nd = 0; nd < 4; ++nd)
                CHECK(F->is_zero(eval_form(*F, b3, sm.adjoints.rows_slice(a, 1), sm.nodes.rows_slice(nd, 1))));
    }
}

TEST_CASE("canonical model from a sextic", "[models]") {
    FieldPtr F = Field::prime_field(101);
    CanonicalModel cm = gen_canonical_sextic(F, 1);
    REQUIRE(cm.eval.has_value());
    REQUIRE(cm.sextic.has_value());
    SECTION("interpolated quadrics: dim 6; evaluation M_2 rank 15") {
        CHECK(cm.pres.generators.size() == 6);
        CHECK(rank(eval_matrix(*cm.eval, 2)) == 15);
    }
    SECTION("all generators vanish at all attached points") {
        MonomialBasis b2(6, 2);
        for (const Generator& g : cm.pres.generators)
            for (std::size_t i = 0; i < cm.eval->points.nrows(); ++i)
                REQUIRE(F->is_zero(eval_form(*F, b2, g.coeffs, cm.eval->points.rows_slice(i, 1))));
    }
    SECTION("betti row agrees with the grass construction across 2 seeds") {
        for (std::uint64_t seed : {2ull, 3ull}) {
            CanonicalModel sx = gen_canonical_sextic(F, seed);
            CanonicalModel gr = gen_canonical(6, "grass", F, seed);
            GradedRing rs(sx.pres), rg(gr.pres);
            CHECK(betti_row1(rs, 6) == betti_row1(rg, 6));
            CHECK(betti_row1(rs, 6) == std::vector<std::int64_t>{0, 6, 5, 0, 0, 0, 0});
        }
    }
}

TEST_CASE("model files round-trip", "[models]") {
    FieldPtr F = Field::prime_field(101);
    SECTION("genus-4 model") {
        CanonicalModel cm = gen_canonical_g4(F, 4);
        TempFile tmp("test_model_g4.json");
        save_model(tmp.path, cm);
        CanonicalModel back = load_model(tmp.path);
        CHECK(back.construction == cm.construction);
        CHECK(back.genus == 4);
        CHECK(back.pres.generators.size() == cm.pres.generators.size());
        for (std::size_t i = 0; i < cm.pres.generators.size(); ++i)
            CHECK(back.pres.generators[i].coeffs == cm.pres.generators[i].coeffs);
    }
    SECTION("sextic model keeps its payload and Betti row") {
        CanonicalModel cm = gen_canonical_sextic(F, 6);
        TempFile tmp("test_model_sextic.json");
        save_model(tmp.path, cm);
        CanonicalModel back = load_model(tmp.path);
        REQUIRE(back.sextic.has_value());
        REQUIRE(back.eval.has_value());
        CHECK(back.sextic->f == cm.sextic->f);
        CHECK(back.eval->points == cm.eval->points);
        GradedRing r1(cm.pres), r2(back.pres);
        CHECK(betti_row1(r1, 6) == betti_row1(r2, 6));
    }
    SECTION("K3 model keeps the section data") {
        CanonicalModel k3 = gen_k3_g6(F, 2);
        TempFile tmp("test_model_k3.json");
        save_model(tmp.path, k3);
        CanonicalModel back = load_model(tmp.path);
        REQUIRE(back.k3.has_value());
        CHECK(back.surface);
        CHECK(back.k3->param == k3.k3->param);
        CHECK(back.k3->extra_quadric == k3.k3->extra_quadric);
    }
    SECTION("a composite characteristic is rejected") {
        CanonicalModel cm = gen_canonical_g4(F, 4);
        Json j = model_to_json(cm);
        j["field"]["p"] = 91; // 7 * 13
        CHECK_THROWS_AS(model_from_json(j), SpecMismatch);
    }
    SECTION("version and shape validation") {
        CanonicalModel cm = gen_canonical_g4(F, 4);
        Json j = model_to_json(cm);
        j["version"] = 99;
        CHECK_THROWS_AS(model_from_json(j), FormatVersionMismatch);
        Json j2 = model_to_json(cm);
        j2.erase("version");
        CHECK_THROWS_AS(model_from_json(j2), MalformedFile);
        TempFile tmp("test_model_broken.json");
        {
            std::ofstream out(tmp.path);
            out << "{ not json";
        }
        CHECK_THROWS_AS(load_model(tmp.path), MalformedFile);
        CHECK_THROWS_AS(load_model("does_not_exist_model.json"), MalformedFile);
    }
}
