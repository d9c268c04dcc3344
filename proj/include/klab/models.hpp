// Explicit general canonical curves (g = 4, 6, 8) and polarized K3 surfaces
// (g = 6) over the working field: complete intersections, Grassmannian linear
// sections, and 4-nodal plane sextics with their adjoint embedding. Random
// draws are paired with testable genericity predicates (Hilbert dimensions,
// ordinary nodes, rank counts); degenerate draws are rejected and retried.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "klab/errors.hpp"
#include "klab/field.hpp"
#include "klab/gradedring.hpp"
#include "klab/linalg.hpp"
#include "klab/rng.hpp"

namespace klab {

// ---------------------------------------------------------------------------
// Multivariate form helpers (coefficient vectors over a MonomialBasis).
// ---------------------------------------------------------------------------

inline Fel eval_form(const Field& F, const MonomialBasis& basis, const Mat& coeffs, const Mat& point) {
    Fel acc = F.zero();
    const int n = basis.nvars();
    for (std::size_t j = 0; j < basis.size(); ++j) {
        Fel c = coeffs.get(0, j);
        if (F.is_zero(c)) continue;
        Fel term = c;
        const auto& e = basis.exponent(j);
        for (int v = 0; v < n; ++v)
            for (int k = 0; k < e[static_cast<std::size_t>(v)]; ++k)
                term = F.mul(term, point.get(0, static_cast<std::size_t>(v)));
        acc = F.add(acc, term);
    }
    return acc;
}

// Formal partial derivative: coefficients over MonomialBasis(n, q-1).
inline Mat differentiate_form(const Field& F, FieldPtr Fp, const MonomialBasis& basis, const Mat& coeffs, int var) {
    MonomialBasis target(basis.nvars(), basis.degree() - 1);
    Mat out(Fp, 1, target.size());
    for (std::size_t j = 0; j < basis.size(); ++j) {
        Fel c = coeffs.get(0, j);
        if (F.is_zero(c)) continue;
        std::vector<int> e = basis.exponent(j);
        int ev = e[static_cast<std::size_t>(var)];
        if (ev == 0) continue;
        e[static_cast<std::size_t>(var)] -= 1;
        std::size_t idx = target.index_of(e);
        out.set(0, idx, F.add(out.get(0, idx), F.scalar(c, static_cast<Limb>(ev))));
    }
    return out;
}

// f restricted to the parametrized line {a + s b}: univariate in s.
inline Poly restrict_form_to_line(const Field& F, const MonomialBasis& basis, const Mat& coeffs,
                                  const Mat& a, const Mat& b) {
    const int n = basis.nvars();
    Poly total(static_cast<std::size_t>(basis.degree() + 1), F.zero());
    for (std::size_t j = 0; j < basis.size(); ++j) {
        Fel c = coeffs.get(0, j);
        if (F.is_zero(c)) continue;
        Poly term = {c};
        const auto& e = basis.exponent(j);
        for (int v = 0; v < n; ++v) {
            Poly lin = {a.get(0, static_cast<std::size_t>(v)), b.get(0, static_cast<std::size_t>(v))};
            for (int k = 0; k < e[static_cast<std::size_t>(v)]; ++k) term = poly_mul(F, term, lin);
        }
        for (std::size_t i = 0; i < term.size(); ++i) total[i] = F.add(total[i], term[i]);
    }
    return total;
}

// Homogeneous binary forms in (a, b): index i holds the coefficient of
// a^i b^(deg - i).
using BinForm = std::vector<Fel>;

inline BinForm binform_mul(const Field& F, const BinForm& f, const BinForm& g) {
    BinForm r(f.size() + g.size() - 1, F.zero());
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (F.is_zero(f[i])) continue;
        for (std::size_t j = 0; j < g.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(f[i], g[j]));
    }
    return r;
}

// Exact division by the linear form alpha*a + beta*b; nullopt when not
// divisible (degenerate configuration, caller rejects the parameter).
inline std::optional<BinForm> binform_div_linear(const Field& F, const BinForm& f, const Fel& alpha, const Fel& beta) {
    const std::size_t d = f.size() - 1;
    BinForm g(d, F.zero());
    if (!F.is_zero(alpha)) {
        Fel ainv = F.inv(alpha);
        // f[i] = alpha*g[i-1] + beta*g[i], solved downward from i = d.
        for (std::size_t i = d; i >= 1; --i) {
            Fel gi = i < d ? g[i] : F.zero();
            g[i - 1] = F.mul(ainv, F.sub(f[i], F.mul(beta, gi)));
        }
        if (!(F.sub(f[0], F.mul(beta, g[0])) == F.zero())) return std::nullopt;
        return g;
    }
    if (F.is_zero(beta)) throw ZeroPolynomial("division by the zero linear form");
    Fel binv = F.inv(beta);
    for (std::size_t i = 0; i < d; ++i) g[i] = F.mul(binv, f[i]);
    if (!F.is_zero(f[d])) return std::nullopt;
    return g;
}

// ---------------------------------------------------------------------------
// Grassmannians Gr(2, n) in Plücker coordinates.
// ---------------------------------------------------------------------------

inline std::vector<std::pair<int, int>> plucker_pairs(int n) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    return pairs;
}

inline std::size_t plucker_pair_index(int n, int i, int j) {
    // lex position of (i, j), i < j
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n) - static_cast<std::size_t>(i * (i + 1) / 2) +
           static_cast<std::size_t>(j - i - 1);
}

struct GrassmannianModel {
    int n = 0;                               // Gr(2, n)
    std::vector<std::pair<int, int>> vars;   // the binom(n,2) coordinates p_{ij}
    Mat relations;                           // binom(n,4) three-term quadrics
};

// The binom(n,4) relations p_ij p_kl - p_ik p_jl + p_il p_jk (i<j<k<l).
inline GrassmannianModel plucker_model(FieldPtr F, int n) {
    if (n < 4) throw SpecMismatch("plucker_model requires n >= 4");
    GrassmannianModel gm;
    gm.n = n;
    gm.vars = plucker_pairs(n);
    const int nv = static_cast<int>(gm.vars.size());
    MonomialBasis qb(nv, 2);
    auto mono_index = [&](std::size_t v1, std::size_t v2) {
        std::vector<int> e(static_cast<std::size_t>(nv), 0);
        e[v1] += 1;
        e[v2] += 1;
        return qb.index_of(e);
    };
    std::vector<std::array<int, 4>> quads;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                for (int l = k + 1; l < n; ++l) quads.push_back({i, j, k, l});
    gm.relations = Mat(F, quads.size(), qb.size());
    const Field& FF = *F;
    for (std::size_t r = 0; r < quads.size(); ++r) {
        auto [i, j, k, l] = quads[r];
        gm.relations.set(r, mono_index(plucker_pair_index(n, i, j), plucker_pair_index(n, k, l)), FF.one());
        gm.relations.set(r, mono_index(plucker_pair_index(n, i, k), plucker_pair_index(n, j, l)), FF.from_signed(-1));
        gm.relations.set(r, mono_index(plucker_pair_index(n, i, l), plucker_pair_index(n, j, k)), FF.one());
    }
    return gm;
}

// Plücker coordinates of the row space of a 2 x n matrix.
inline Mat plucker_wedge(const Field& F, FieldPtr Fp, const Mat& frame) {
    const int n = static_cast<int>(frame.ncols());
    Mat out(Fp, 1, static_cast<std::size_t>(n * (n - 1) / 2));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Fel v = F.sub(F.mul(frame.get(0, static_cast<std::size_t>(i)), frame.get(1, static_cast<std::size_t>(j))),
                          F.mul(frame.get(0, static_cast<std::size_t>(j)), frame.get(1, static_cast<std::size_t>(i))));
            out.set(0, plucker_pair_index(n, i, j), v);
        }
    return out;
}

// Random full-rank 2 x n frame mapped to its Plücker point.
inline Mat sample_plucker_point(FieldPtr F, int n, Rng& rng) {
    const Field& FF = *F;
    for (;;) {
        Mat frame(F, 2, static_cast<std::size_t>(n));
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j) frame.set(i, j, FF.element_from_rng(rng));
        Mat w = plucker_wedge(FF, F, frame);
        if (!w.is_zero()) return w;
    }
}

// ---------------------------------------------------------------------------
// Linear sections: substitute a parametrized P^m into quadrics on P^N.
// ---------------------------------------------------------------------------

struct RestrictedQuadrics {
    Mat quadrics;          // nonzero restrictions, one per row
    std::size_t span_dim;  // rank of their span
};

inline RestrictedQuadrics restrict_to_linear_section(const Mat& quadrics, const Mat& param) {
    const FieldPtr& Fp = quadrics.field();
    const Field& F = *Fp;
    const std::size_t msmall = param.nrows();  // m + 1 section variables
    const std::size_t nbig = param.ncols();    // N + 1 ambient variables
    if (rank(param) != msmall) throw RankDeficientParametrization("section parametrization is rank deficient");
    MonomialBasis big(static_cast<int>(nbig), 2);
    if (quadrics.ncols() != big.size()) throw SpecMismatch("quadric length does not match ambient variable count");
    MonomialBasis small(static_cast<int>(msmall), 2);

    std::vector<Mat> rows;
    for (std::size_t r = 0; r < quadrics.nrows(); ++r) {
        Mat out(Fp, 1, small.size());
        for (std::size_t t = 0; t < big.size(); ++t) {
            Fel c = quadrics.get(r, t);
            if (F.is_zero(c)) continue;
            // decode the degree-2 monomial X_a X_b (a <= b)
            const auto& e = big.exponent(t);
            int a = -1, b = -1;
            for (std::size_t v = 0; v < nbig; ++v) {
                if (e[v] == 2) a = b = static_cast<int>(v);
                else if (e[v] == 1) (a < 0 ? a : b) = static_cast<int>(v);
            }
            for (std::size_t i = 0; i < msmall; ++i) {
                Fel cia = F.mul(c, param.get(i, static_cast<std::size_t>(a)));
                if (F.is_zero(cia)) continue;
                for (std::size_t j = 0; j < msmall; ++j) {
                    Fel w = F.mul(cia, param.get(j, static_cast<std::size_t>(b)));
                    if (F.is_zero(w)) continue;
                    std::vector<int> me(msmall, 0);
                    me[i] += 1;
                    me[j] += 1;
                    std::size_t idx = small.index_of(me);
                    out.set(0, idx, F.add(out.get(0, idx), w));
                }
            }
        }
        if (!out.is_zero()) rows.push_back(std::move(out));
    }
    Mat stacked(Fp, rows.size(), small.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < small.size(); ++j) stacked.set(i, j, rows[i].get(0, j));
    return {stacked, rank(stacked)};
}

inline Mat random_form(FieldPtr F, int n, int degree, Rng& rng) {
    MonomialBasis b(n, degree);
    Mat out(F, 1, b.size());
    for (std::size_t j = 0; j < b.size(); ++j) out.set(0, j, F->element_from_rng(rng));
    if (out.is_zero()) out.set(0, 0, F->one());
    return out;
}

inline Mat random_full_rank(FieldPtr F, std::size_t nrows, std::size_t ncols, Rng& rng) {
    for (;;) {
        Mat m(F, nrows, ncols);
        for (std::size_t i = 0; i < nrows; ++i)
            for (std::size_t j = 0; j < ncols; ++j) m.set(i, j, F->element_from_rng(rng));
        if (rank(m) == std::min(nrows, ncols)) return m;
    }
}

// ---------------------------------------------------------------------------
// Model containers.
// ---------------------------------------------------------------------------

struct NodalSexticModel {
    FieldPtr F;
    Mat f;        // 1 x 28 over MonomialBasis(3, 6)
    Mat nodes;    // 4 x 3: the standard points
    Mat adjoints; // 6 x 10 cubics through the nodes, echelonized
};

struct K3SectionData {
    Mat param;         // 7 x 10: basis of the chosen P^6 in Plücker coordinates
    Mat lker;          // 3 x 10: right-kernel rows cutting out that P^6
    Mat extra_quadric; // 1 x 28 in the 7 section variables
};

struct CanonicalModel {
    PresentationModel pres;
    std::optional<EvaluationModel> eval;
    int genus = 0;
    bool surface = false; // true for the K3 model itself
    std::string construction;
    std::uint64_t seed = 0;
    std::optional<NodalSexticModel> sextic;
    std::optional<K3SectionData> k3;
};

// Riemann-Roch dimensions used as hard generation guards.
inline std::map<int, std::size_t> canonical_hilbert(int genus) {
    std::map<int, std::size_t> h;
    h[0] = 1;
    h[1] = static_cast<std::size_t>(genus);
    for (int q = 2; q <= 3; ++q) h[q] = static_cast<std::size_t>((2 * q - 1) * (genus - 1));
    return h;
}

inline std::map<int, std::size_t> k3_hilbert_g6() {
    // h^0(qL) = 2 + 5 q^2 on a degree-10 K3.
    return {{0, 1}, {1, 7}, {2, 22}, {3, 47}};
}

namespace detail {

// Build a throwaway ring and force the pieces the Hilbert guard covers.
inline void check_hilbert(const PresentationModel& pm, int qmax) {
    GradedRing ring(pm);
    for (int q = 0; q <= qmax; ++q) ring.piece(q);
}

template <typename Attempt>
auto with_retries(int budget, const char* what, Attempt&& attempt) {
    for (int i = 0; i < budget; ++i) {
        try {
            return attempt(i);
        } catch (const InsufficientPoints&) {
            // A too-small field will not improve with a fresh seed.
            throw RetriesExhausted(std::string(what) + ": the working field has too few rational points");
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::retryable) throw;
        }
    }
    throw RetriesExhausted(std::string(what) + ": retry budget exhausted");
}

} // namespace detail

inline constexpr int kDefaultRetryBudget = 32;

// ---------------------------------------------------------------------------
// Canonical models by complete intersection and Grassmannian section.
// ---------------------------------------------------------------------------

inline CanonicalModel gen_canonical_g4(FieldPtr F, std::uint64_t seed, int budget = kDefaultRetryBudget) {
    return detail::with_retries(budget, "gen canonical g4", [&](int attempt) {
        Rng rng(seed + 0x1000ull * static_cast<std::uint64_t>(attempt));
        PresentationModel pm;
        pm.F = F;
        pm.n = 4;
        pm.generators.push_back({2, random_form(F, 4, 2, rng)});
        pm.generators.push_back({3, random_form(F, 4, 3, rng)});
        pm.expected_hilbert = canonical_hilbert(4);
        detail::check_hilbert(pm, 3);
        CanonicalModel cm;
        cm.pres = std::move(pm);
        cm.genus = 4;
        cm.construction = "canonical-g4";
        cm.seed = seed;
        return cm;
    });
}

inline CanonicalModel gen_canonical_grass(int genus, FieldPtr F, std::uint64_t seed, int budget = kDefaultRetryBudget) {
    if (genus != 6 && genus != 8) throw SpecMismatch("grassmannian construction supports genus 6 and 8");
    return detail::with_retries(budget, "gen canonical grass", [&](int attempt) {
        Rng rng(seed + 0x2000ull * static_cast<std::uint64_t>(attempt));
        CanonicalModel cm;
        cm.genus = genus;
        cm.seed = seed;
        PresentationModel pm;
        pm.F = F;
        if (genus == 6) {
            // Gr(2,5) cut by a general P^5 and one general quadric.
            GrassmannianModel gm = plucker_model(F, 5);
            Mat param = random_full_rank(F, 6, 10, rng);
            RestrictedQuadrics rq = restrict_to_linear_section(gm.relations, param);
            if (rq.span_dim != 5) throw HilbertMismatch("restricted Plücker quadrics are degenerate");
            pm.n = 6;
            Mat extra = random_form(F, 6, 2, rng);
            Mat gens = Mat::vstack(rq.quadrics, extra);
            if (rank(gens) != 6) throw HilbertMismatch("quadric span degenerate");
            for (std::size_t r = 0; r < gens.nrows(); ++r) pm.generators.push_back({2, gens.rows_slice(r, 1)});
            cm.construction = "canonical-g6-grass";
        } else {
            // Gr(2,6) cut by a general P^7.
            GrassmannianModel gm = plucker_model(F, 6);
            Mat param = random_full_rank(F, 8, 15, rng);
            RestrictedQuadrics rq = restrict_to_linear_section(gm.relations, param);
            if (rq.span_dim != 15) throw HilbertMismatch("restricted Plücker quadrics are degenerate");
            pm.n = 8;
            // Work with a spanning independent subset.
            Subspace span = Subspace::row_space(rq.quadrics);
            for (std::size_t r = 0; r < span.dim(); ++r) pm.generators.push_back({2, span.basis().rows_slice(r, 1)});
            cm.construction = "canonical-g8-grass";
        }
        pm.expected_hilbert = canonical_hilbert(genus);
        detail::check_hilbert(pm, 3);
        cm.pres = std::move(pm);
        return cm;
    });
}

// ---------------------------------------------------------------------------
// 4-nodal plane sextics and the adjoint (canonical) embedding.
// ---------------------------------------------------------------------------

namespace detail {

inline Mat standard_nodes(FieldPtr F) {
    const Field& FF = *F;
    Mat nodes(F, 4, 3);
    nodes.set(0, 0, FF.one());
    nodes.set(1, 1, FF.one());
    nodes.set(2, 2, FF.one());
    nodes.set(3, 0, FF.one());
    nodes.set(3, 1, FF.one());
    nodes.set(3, 2, FF.one());
    return nodes;
}

// Second partials at a point: the 2x2 Hessian block in the two chart
// variables. Nondegeneracy certifies an ordinary node (char != 2, 3 excluded
// by p >= 5).
inline bool node_is_ordinary(const Field& F, FieldPtr Fp, const MonomialBasis& b6, const Mat& f, const Mat& node) {
    std::size_t chart = 0;
    while (chart < 3 && F.is_zero(node.get(0, chart))) ++chart;
    std::vector<int> others;
    for (int v = 0; v < 3; ++v)
        if (static_cast<std::size_t>(v) != chart) others.push_back(v);
    MonomialBasis b5(3, 5), b4(3, 4);
    auto second = [&](int v1, int v2) {
        Mat d1 = differentiate_form(F, Fp, b6, f, v1);
        Mat d2 = differentiate_form(F, Fp, b5, d1, v2);
        return eval_form(F, b4, d2, node);
    };
    Fel ss = second(others[0], others[0]);
    Fel st = second(others[0], others[1]);
    Fel tt = second(others[1], others[1]);
    Fel det = F.sub(F.mul(ss, tt), F.mul(st, st));
    return !F.is_zero(det);
}

} // namespace detail

// The rows of the 12 x 28 node-condition matrix: all three partials vanish at
// every node (the value itself then vanishes by the Euler relation, p > 6
// never divides the degree here).
inline Mat sextic_node_conditions(FieldPtr F, const Mat& nodes) {
    const Field& FF = *F;
    MonomialBasis b6(3, 6), b5(3, 5);
    Mat cond(F, 12, b6.size());
    std::size_t r = 0;
    for (std::size_t nd = 0; nd < 4; ++nd) {
        Mat node = nodes.rows_slice(nd, 1);
        for (int v = 0; v < 3; ++v, ++r) {
            for (std::size_t j = 0; j < b6.size(); ++j) {
                Mat unit(F, 1, b6.size());
                unit.set(0, j, FF.one());
                Mat dj = differentiate_form(FF, F, b6, unit, v);
                cond.set(r, j, eval_form(FF, b5, dj, node));
            }
        }
    }
    return cond;
}

inline NodalSexticModel gen_nodal_sextic(FieldPtr F, std::uint64_t seed, int budget = kDefaultRetryBudget) {
    const Field& FF = *F;
    Mat nodes = detail::standard_nodes(F);
    Mat cond = sextic_node_conditions(F, nodes);
    if (rank(cond) != 12) throw Error(ErrorKind::internal, "node condition matrix must have rank 12");
    Subspace sols = kernel_basis(cond);
    if (sols.dim() != 16) throw Error(ErrorKind::internal, "nodal sextics must form a 16-dimensional space");
    MonomialBasis b6(3, 6);

    return detail::with_retries(budget, "gen nodal sextic", [&](int attempt) {
        Rng rng(seed + 0x3000ull * static_cast<std::uint64_t>(attempt));
        Mat f(F, 1, b6.size());
        for (std::size_t i = 0; i < sols.dim(); ++i) {
            Fel c = FF.element_from_rng(rng);
            if (FF.is_zero(c)) continue;
            for (std::size_t j = 0; j < b6.size(); ++j)
                f.set(0, j, FF.add(f.get(0, j), FF.mul(c, sols.basis().get(i, j))));
        }
        if (f.is_zero()) throw HilbertMismatch("zero sextic draw");
        for (std::size_t nd = 0; nd < 4; ++nd) {
            Mat node = nodes.rows_slice(nd, 1);
            if (!FF.is_zero(eval_form(FF, b6, f, node)))
                throw Error(ErrorKind::internal, "sextic does not vanish at a node");
            if (!detail::node_is_ordinary(FF, F, b6, f, node)) throw HilbertMismatch("non-ordinary node");
        }
        // Adjoint cubics: kernel of the 4-point evaluation on Sym^3.
        MonomialBasis b3(3, 3);
        Mat pteval(F, 4, b3.size());
        for (std::size_t nd = 0; nd < 4; ++nd) {
            Mat node = nodes.rows_slice(nd, 1);
            for (std::size_t j = 0; j < b3.size(); ++j) {
                Mat unit(F, 1, b3.size());
                unit.set(0, j, FF.one());
                pteval.set(nd, j, eval_form(FF, b3, unit, node));
            }
        }
        Subspace adj = kernel_basis(pteval);
        if (adj.dim() != 6) throw Error(ErrorKind::internal, "adjoint system must have dimension 6");
        NodalSexticModel sm;
        sm.F = F;
        sm.f = std::move(f);
        sm.nodes = nodes;
        sm.adjoints = adj.basis();
        return sm;
    });
}

// ---------------------------------------------------------------------------
// Point sampling on the sextic and the adjoint model.
// ---------------------------------------------------------------------------

namespace detail {

inline bool is_node(const Field&, const Mat& nodes, const Mat& pt) {
    for (std::size_t nd = 0; nd < 4; ++nd) {
        bool same = true;
        for (std::size_t j = 0; j < 3; ++j)
            if (!(nodes.get(nd, j) == pt.get(0, j))) same = false;
        if (same) return true;
    }
    return false;
}

// Jacobian must not vanish at smooth samples; a singular non-node sample
// rejects the whole model.
inline void require_smooth_at(const Field& F, FieldPtr Fp, const NodalSexticModel& sm, const Mat& pt) {
    MonomialBasis b6(3, 6), b5(3, 5);
    for (int v = 0; v < 3; ++v) {
        Mat dv = differentiate_form(F, Fp, b6, sm.f, v);
        if (!F.is_zero(eval_form(F, b5, dv, pt))) return;
    }
    throw HilbertMismatch("sampled a singular non-node point; rejecting the sextic");
}

} // namespace detail

// Sample distinct smooth affine points of the sextic (chart z = 1), skipping
// nodes. Deterministic given (model, rng state).
inline std::vector<Mat> sample_sextic_points(const NodalSexticModel& sm, std::size_t count, Rng& rng) {
    const Field& F = *sm.F;
    MonomialBasis b6(3, 6);
    std::vector<Mat> points;
    std::set<std::vector<Limb>> seen;
    // Walk x over a seeded permutation of the field when it is small enough
    // to exhaust, otherwise draw randomly.
    const bool exhaustive = F.q() <= 4096;
    std::vector<std::uint64_t> order;
    if (exhaustive) order = rng.permutation(F.q());
    std::size_t draws = 0;
    const std::size_t max_draws = exhaustive ? order.size() : 4 * count + 256;
    while (points.size() < count && draws < max_draws) {
        Fel x0 = exhaustive ? F.enumerate(order[draws]) : F.element_from_rng(rng);
        ++draws;
        // f(x0, y, 1) as a univariate polynomial in y.
        Poly g(7, F.zero());
        for (std::size_t j = 0; j < b6.size(); ++j) {
            Fel c = sm.f.get(0, j);
            if (F.is_zero(c)) continue;
            const auto& e = b6.exponent(j);
            Fel term = c;
            for (int k = 0; k < e[0]; ++k) term = F.mul(term, x0);
            std::size_t yd = static_cast<std::size_t>(e[1]);
            g[yd] = F.add(g[yd], term);
        }
        if (poly_deg(F, g) < 0) continue;
        for (auto& [y0, mult] : univariate_roots(F, g)) {
            Mat pt(sm.F, 1, 3);
            pt.set(0, 0, x0);
            pt.set(0, 1, y0);
            pt.set(0, 2, F.one());
            pt = EvaluationModel::normalize_point(F, pt);
            if (detail::is_node(F, sm.nodes, pt)) continue;
            detail::require_smooth_at(F, sm.F, sm, pt);
            std::vector<Limb> key;
            for (std::size_t j = 0; j < 3; ++j)
                for (Limb l : pt.get(0, j)) key.push_back(l);
            if (!seen.insert(key).second) continue;
            points.push_back(std::move(pt));
            if (points.size() == count) break;
        }
    }
    if (points.size() < count)
        throw InsufficientPoints("could not sample enough distinct smooth sextic points");
    return points;
}

// Adjoint image of a plane point in P^5.
inline Mat adjoint_image(const NodalSexticModel& sm, const Mat& plane_pt) {
    const Field& F = *sm.F;
    MonomialBasis b3(3, 3);
    Mat img(sm.F, 1, 6);
    for (std::size_t j = 0; j < 6; ++j) img.set(0, j, eval_form(F, b3, sm.adjoints.rows_slice(j, 1), plane_pt));
    if (img.is_zero()) throw HilbertMismatch("plane point in the base locus of the adjoint system");
    return EvaluationModel::normalize_point(F, img);
}

// Canonical model of the sextic: interpolate the quadrics through sampled
// adjoint images and attach the evaluation representation.
inline CanonicalModel canonical_from_sextic(const NodalSexticModel& sm, Rng& rng, std::size_t target_points = 0) {
    // Point budget: dim Sym^{q_max+1} + 10 at q_max = 2, then rank stability
    // at degree 3 under two consecutive additions.
    const std::size_t base_target = target_points ? target_points : sym_dim(6, 3) + 10;
    std::vector<Mat> plane_pts = sample_sextic_points(sm, base_target, rng);
    auto images = [&](const std::vector<Mat>& pl) {
        std::vector<Mat> im;
        im.reserve(pl.size());
        for (const Mat& p : pl) im.push_back(adjoint_image(sm, p));
        return im;
    };
    EvaluationModel em = EvaluationModel::make(sm.F, images(plane_pts), 6, canonical_hilbert(6));
    std::size_t rank3 = rank(eval_matrix(em, 3));
    int stable = 0;
    while (stable < 2) {
        std::vector<Mat> extra = sample_sextic_points(sm, plane_pts.size() + 1, rng);
        plane_pts = std::move(extra);
        em = EvaluationModel::make(sm.F, images(plane_pts), 6, canonical_hilbert(6));
        std::size_t r = rank(eval_matrix(em, 3));
        stable = r == rank3 ? stable + 1 : 0;
        rank3 = r;
    }

    // I_2 by interpolation: the quadrics vanishing on all sampled images.
    Subspace iq = kernel_basis(eval_matrix(em, 2));
    if (iq.dim() != 6) throw HilbertMismatch("interpolated quadric space has dim " + std::to_string(iq.dim()));
    PresentationModel pm;
    pm.F = sm.F;
    pm.n = 6;
    for (std::size_t r = 0; r < 6; ++r) pm.generators.push_back({2, iq.basis().rows_slice(r, 1)});
    pm.expected_hilbert = canonical_hilbert(6);
    detail::check_hilbert(pm, 3);
    { // the evaluation representation must agree as well
        GradedRing er(em);
        for (int q = 0; q <= 3; ++q) er.piece(q);
    }
    CanonicalModel cm;
    cm.pres = std::move(pm);
    cm.eval = std::move(em);
    cm.genus = 6;
    cm.construction = "canonical-g6-sextic";
    cm.sextic = sm;
    return cm;
}

inline CanonicalModel gen_canonical_sextic(FieldPtr F, std::uint64_t seed, int budget = kDefaultRetryBudget) {
    return detail::with_retries(budget, "gen canonical g6 sextic", [&](int attempt) {
        std::uint64_t s = seed + 0x5000ull * static_cast<std::uint64_t>(attempt);
        NodalSexticModel sm = gen_nodal_sextic(F, s, kDefaultRetryBudget);
        Rng rng(s ^ 0xadd011ull);
        CanonicalModel cm = canonical_from_sextic(sm, rng);
        cm.seed = seed;
        return cm;
    });
}

// Dispatch on (genus, variant).
inline CanonicalModel gen_canonical(int genus, const std::string& variant, FieldPtr F, std::uint64_t seed,
                                    int budget = kDefaultRetryBudget) {
    if (genus == 4 && (variant == "ci" || variant.empty())) return gen_canonical_g4(F, seed, budget);
    if (genus == 6 && (variant == "grass" || variant.empty())) return gen_canonical_grass(6, F, seed, budget);
    if (genus == 6 && variant == "sextic") return gen_canonical_sextic(F, seed, budget);
    if (genus == 8 && (variant == "grass" || variant.empty())) return gen_canonical_grass(8, F, seed, budget);
    throw SpecMismatch("unsupported (genus, variant) combination: " + std::to_string(genus) + ", " + variant);
}

// ---------------------------------------------------------------------------
// The genus-6 polarized K3: Gr(2,5) cut by a general P^6 and a quadric.
// ---------------------------------------------------------------------------

inline CanonicalModel gen_k3_g6(FieldPtr F, std::uint64_t seed, int budget = kDefaultRetryBudget) {
    return detail::with_retries(budget, "gen k3 g6", [&](int attempt) {
        Rng rng(seed + 0x4000ull * static_cast<std::uint64_t>(attempt));
        GrassmannianModel gm = plucker_model(F, 5);
        Mat param = random_full_rank(F, 7, 10, rng);
        RestrictedQuadrics rq = restrict_to_linear_section(gm.relations, param);
        if (rq.span_dim != 5) throw HilbertMismatch("restricted Plücker quadrics are degenerate");
        Mat extra = random_form(F, 7, 2, rng);
        Mat gens = Mat::vstack(rq.quadrics, extra);
        if (rank(gens) != 6) throw HilbertMismatch("K3 quadric span degenerate");
        PresentationModel pm;
        pm.F = F;
        pm.n = 7;
        for (std::size_t r = 0; r < gens.nrows(); ++r) pm.generators.push_back({2, gens.rows_slice(r, 1)});
        pm.expected_hilbert = k3_hilbert_g6();
        detail::check_hilbert(pm, 3);
        CanonicalModel cm;
        cm.pres = std::move(pm);
        cm.genus = 6;
        cm.surface = true;
        cm.construction = "k3-g6";
        cm.seed = seed;
        K3SectionData sd;
        sd.param = param;
        sd.lker = kernel_basis(param).basis();
        sd.extra_quadric = extra;
        cm.k3 = std::move(sd);
        return cm;
    });
}

// A general hyperplane section of the K3 is a genus-6 canonical curve.
inline CanonicalModel hyperplane_section(const CanonicalModel& k3, std::uint64_t sub_seed,
                                         int budget = kDefaultRetryBudget) {
    if (!k3.surface) throw UnsupportedModel("hyperplane_section expects the K3 model");
    const FieldPtr& F = k3.pres.F;
    return detail::with_retries(budget, "k3 hyperplane section", [&](int attempt) {
        Rng rng(sub_seed + 0x6000ull * static_cast<std::uint64_t>(attempt));
        Mat param = random_full_rank(F, 6, 7, rng);
        Mat quadrics(F, k3.pres.generators.size(), sym_dim(7, 2));
        for (std::size_t r = 0; r < k3.pres.generators.size(); ++r)
            for (std::size_t j = 0; j < sym_dim(7, 2); ++j)
                quadrics.set(r, j, k3.pres.generators[r].coeffs.get(0, j));
        RestrictedQuadrics rq = restrict_to_linear_section(quadrics, param);
        if (rq.span_dim != 6) throw HilbertMismatch("restricted section quadrics are degenerate");
        Subspace span = Subspace::row_space(rq.quadrics);
        PresentationModel pm;
        pm.F = F;
        pm.n = 6;
        for (std::size_t r = 0; r < span.dim(); ++r) pm.generators.push_back({2, span.basis().rows_slice(r, 1)});
        pm.expected_hilbert = canonical_hilbert(6);
        detail::check_hilbert(pm, 3);
        CanonicalModel cm;
        cm.pres = std::move(pm);
        cm.genus = 6;
        cm.construction = "k3-g6-section";
        cm.seed = sub_seed;
        return cm;
    });
}

// ---------------------------------------------------------------------------
// Exact point sampling on the K3 Grassmannian section.
//
// A random vector u of F^5 lies on a unique plane W0 of the threefold
// Gr(2,5) ∩ P^6; the pencils of planes through a vector of W0 inside the
// threefold are cut out by a cubic determinant, and the residual quadric
// turns each such pencil into a univariate quadratic whose rational roots
// are points of the surface.
// ---------------------------------------------------------------------------

inline std::vector<Mat> sample_grass_section_points(const CanonicalModel& k3, std::size_t count, Rng& rng,
                                                    std::size_t budget = 4096) {
    if (!k3.surface || !k3.k3) throw UnsupportedModel("grass-section sampling supports the k3-g6 model");
    const FieldPtr& Fp = k3.pres.F;
    const Field& F = *Fp;
    const K3SectionData& sd = *k3.k3;
    MonomialBasis q7(7, 2);

    auto lin_conditions = [&](const Mat& u) {
        // B[k][j] = l_k(p(u ^ e_j)): coefficient of v_j in l_k(p(u ^ v)).
        Mat B(Fp, 3, 5);
        for (std::size_t k = 0; k < 3; ++k)
            for (int i = 0; i < 5; ++i)
                for (int j = i + 1; j < 5; ++j) {
                    Fel c = sd.lker.get(k, plucker_pair_index(5, i, j));
                    if (F.is_zero(c)) continue;
                    std::size_t ji = static_cast<std::size_t>(j), ii = static_cast<std::size_t>(i);
                    B.set(k, ji, F.add(B.get(k, ji), F.mul(c, u.get(0, ii))));
                    B.set(k, ii, F.sub(B.get(k, ii), F.mul(c, u.get(0, ji))));
                }
        return B;
    };

    auto section_coords = [&](const Mat& pluck) -> std::optional<Mat> {
        // Solve y * param = pluck; consistent iff pluck lies in the P^6.
        Mat At = sd.param.transpose(); // 10 x 7
        Mat rhs = pluck.transpose();   // 10 x 1
        Mat aug(Fp, 10, 8);
        for (std::size_t i = 0; i < 10; ++i) {
            for (std::size_t j = 0; j < 7; ++j) aug.set(i, j, At.get(i, j));
            aug.set(i, 7, rhs.get(i, 0));
        }
        EchelonForm e = echelon(aug);
        Mat y(Fp, 1, 7);
        for (std::size_t r = 0; r < e.rank; ++r) {
            if (e.pivot_cols[r] == 7) return std::nullopt; // inconsistent
            y.set(0, e.pivot_cols[r], e.rref.get(r, 7));
        }
        return y;
    };

    std::vector<Mat> out;
    std::set<std::vector<Limb>> seen;
    auto push_point = [&](const Mat& y_raw) {
        Mat y = EvaluationModel::normalize_point(F, y_raw);
        for (const Generator& g : k3.pres.generators)
            if (!F.is_zero(eval_form(F, q7, g.coeffs, y)))
                throw Error(ErrorKind::internal, "sampled point violates a model quadric");
        std::vector<Limb> key;
        for (std::size_t j = 0; j < 7; ++j)
            for (Limb l : y.get(0, j)) key.push_back(l);
        if (seen.insert(key).second) out.push_back(std::move(y));
    };

    for (std::size_t draw = 0; draw < budget && out.size() < count; ++draw) {
        Mat u(Fp, 1, 5);
        for (std::size_t j = 0; j < 5; ++j) u.set(0, j, F.element_from_rng(rng));
        if (u.is_zero()) continue;
        Subspace ker = kernel_basis(lin_conditions(u));
        if (ker.dim() != 2) continue;
        // v0: a kernel vector independent of u.
        Mat v0(Fp, 1, 5);
        bool found = false;
        for (std::size_t r = 0; r < 2 && !found; ++r) {
            Mat cand = ker.basis().rows_slice(r, 1);
            if (rank(Mat::vstack(u, cand)) == 2) {
                v0 = cand;
                found = true;
            }
        }
        if (!found) continue;
        // Complement basis of <u, v0> from the standard vectors.
        EchelonForm w0e = echelon(Mat::vstack(u, v0));
        std::vector<std::size_t> compl_idx;
        {
            std::vector<bool> piv(5, false);
            for (std::size_t c : w0e.pivot_cols) piv[c] = true;
            for (std::size_t c = 0; c < 5; ++c)
                if (!piv[c]) compl_idx.push_back(c);
        }
        if (compl_idx.size() != 3) continue;
        auto basis_vec = [&](std::size_t idx) {
            Mat e(Fp, 1, 5);
            e.set(0, idx, F.one());
            return e;
        };
        // C(s) = C0 + s C1 with columns over the complement basis.
        Mat C0(Fp, 3, 3), C1(Fp, 3, 3);
        for (std::size_t j = 0; j < 3; ++j) {
            Mat cj = basis_vec(compl_idx[j]);
            Mat pu(Fp, 2, 5), pv(Fp, 2, 5);
            for (std::size_t t = 0; t < 5; ++t) {
                pu.set(0, t, u.get(0, t));
                pu.set(1, t, cj.get(0, t));
                pv.set(0, t, v0.get(0, t));
                pv.set(1, t, cj.get(0, t));
            }
            Mat plu = plucker_wedge(F, Fp, pu);
            Mat plv = plucker_wedge(F, Fp, pv);
            for (std::size_t k = 0; k < 3; ++k) {
                Fel a = F.zero(), b = F.zero();
                for (std::size_t t = 0; t < 10; ++t) {
                    a = F.add(a, F.mul(sd.lker.get(k, t), plu.get(0, t)));
                    b = F.add(b, F.mul(sd.lker.get(k, t), plv.get(0, t)));
                }
                C0.set(k, j, a);
                C1.set(k, j, b);
            }
        }
        // det(C0 + s C1): cubic in s via the permutation expansion.
        Poly det(4, F.zero());
        const int perm[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}, {1, 0, 2}, {0, 2, 1}};
        for (int pi = 0; pi < 6; ++pi) {
            Poly term = {pi < 3 ? F.one() : F.from_signed(-1)};
            for (int r = 0; r < 3; ++r) {
                std::size_t c = static_cast<std::size_t>(perm[pi][r]);
                term = poly_mul(F, term, Poly{C0.get(static_cast<std::size_t>(r), c), C1.get(static_cast<std::size_t>(r), c)});
            }
            det = poly_add(F, det, term);
        }
        if (poly_deg(F, det) < 0) continue;
        for (auto& [s, mult] : univariate_roots(F, det)) {
            // axis of the pencil and its transverse direction
            Mat axis(Fp, 1, 5);
            for (std::size_t t = 0; t < 5; ++t) axis.set(0, t, F.add(u.get(0, t), F.mul(s, v0.get(0, t))));
            Mat Cs(Fp, 3, 3);
            for (std::size_t r = 0; r < 3; ++r)
                for (std::size_t c = 0; c < 3; ++c)
                    Cs.set(r, c, F.add(C0.get(r, c), F.mul(s, C1.get(r, c))));
            Subspace wk = kernel_basis(Cs);
            if (wk.dim() == 0) continue;
            Mat w(Fp, 1, 5);
            for (std::size_t j = 0; j < 3; ++j) {
                Fel c = wk.basis().get(0, j);
                if (F.is_zero(c)) continue;
                for (std::size_t t = 0; t < 5; ++t)
                    w.set(0, t, F.add(w.get(0, t), F.mul(c, basis_vec(compl_idx[j]).get(0, t))));
            }
            // Plücker line P(t) = p(axis ^ v0) + t p(axis ^ w) inside the P^6.
            Mat f0(Fp, 2, 5), f1(Fp, 2, 5);
            for (std::size_t t = 0; t < 5; ++t) {
                f0.set(0, t, axis.get(0, t));
                f0.set(1, t, v0.get(0, t));
                f1.set(0, t, axis.get(0, t));
                f1.set(1, t, w.get(0, t));
            }
            Mat P0 = plucker_wedge(F, Fp, f0);
            Mat P1 = plucker_wedge(F, Fp, f1);
            auto y0 = section_coords(P0);
            auto y1 = section_coords(P1);
            if (!y0 || !y1) continue;
            // residual quadric on the pencil: quadratic in t
            Fel c0 = eval_form(F, q7, sd.extra_quadric, *y0);
            Fel c2 = eval_form(F, q7, sd.extra_quadric, *y1);
            Mat ysum(Fp, 1, 7);
            for (std::size_t t = 0; t < 7; ++t) ysum.set(0, t, F.add(y0->get(0, t), y1->get(0, t)));
            Fel c1 = F.sub(F.sub(eval_form(F, q7, sd.extra_quadric, ysum), c0), c2);
            Poly quad = {c0, c1, c2};
            if (poly_deg(F, quad) < 0) continue;
            for (auto& [t, tm] : univariate_roots(F, quad)) {
                Mat y(Fp, 1, 7);
                for (std::size_t j = 0; j < 7; ++j) y.set(0, j, F.add(y0->get(0, j), F.mul(t, y1->get(0, j))));
                if (y.is_zero()) continue;
                push_point(y);
                if (out.size() == count) break;
            }
            // the t = infinity member
            if (out.size() < count && F.is_zero(c2) && !y1->is_zero()) push_point(*y1);
            if (out.size() == count) break;
        }
    }
    if (out.size() < count) throw RetriesExhausted("grass-section point sampling budget exhausted");
    return out;
}

} // namespace klab
