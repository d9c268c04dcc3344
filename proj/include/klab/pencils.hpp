// Brill-Noether numerology and the explicit degree-4 pencils on the 4-nodal
// sextic model of a genus-6 curve: lines through each node and the pencil of
// conics through all four, their residual degree-4 divisors, and the special
// 3-dimensional subspaces H^0 of canonical forms vanishing on a divisor.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "klab/errors.hpp"
#include "klab/field.hpp"
#include "klab/linalg.hpp"
#include "klab/models.hpp"
#include "klab/rng.hpp"

namespace klab {

inline std::int64_t brill_noether_rho(std::int64_t r, std::int64_t d, std::int64_t g) {
    return g - (r + 1) * (r - d + g);
}

// The count of degree-(k+1) pencils on a general even-genus curve: the
// Catalan number binom(2k, k) / (k + 1), an exact integer.
inline std::uint64_t expected_pencil_count(int k) {
    return binom(static_cast<std::uint64_t>(2 * k), static_cast<std::uint64_t>(k)) /
           static_cast<std::uint64_t>(k + 1);
}

struct Pencil {
    enum class Kind { node_projection, conic_family };
    Kind kind = Kind::node_projection;
    int id = 0;
    int node_index = -1; // node_projection only
    // node_projection: 2 x 3 directions spanning a complement of the node;
    // conic_family: 2 x 6 coefficient rows of the conic pencil through the nodes.
    Mat member_basis;
};

struct Divisor {
    Mat points; // 4 x 3 plane points on the sextic, normalized, pairwise distinct
    int pencil_id = 0;
    Fel t; // member parameter within the pencil
};

// The five pencils: residuals of lines through each node, plus the residual
// of the pencil of conics through all four nodes.
inline std::vector<Pencil> enumerate_pencils(const NodalSexticModel& sm) {
    const Field& F = *sm.F;
    const FieldPtr& Fp = sm.F;
    std::vector<Pencil> out;
    for (int nd = 0; nd < 4; ++nd) {
        Mat node = sm.nodes.rows_slice(static_cast<std::size_t>(nd), 1);
        EchelonForm e = echelon(node);
        std::vector<bool> piv(3, false);
        for (std::size_t c : e.pivot_cols) piv[c] = true;
        Mat dirs(Fp, 2, 3);
        std::size_t r = 0;
        for (std::size_t c = 0; c < 3; ++c)
            if (!piv[c]) dirs.set(r++, c, F.one());
        Pencil p;
        p.kind = Pencil::Kind::node_projection;
        p.id = nd;
        p.node_index = nd;
        p.member_basis = std::move(dirs);
        out.push_back(std::move(p));
    }
    // Conics through the four nodes.
    MonomialBasis b2(3, 2);
    Mat pteval(Fp, 4, b2.size());
    for (std::size_t nd = 0; nd < 4; ++nd) {
        Mat node = sm.nodes.rows_slice(nd, 1);
        for (std::size_t j = 0; j < b2.size(); ++j) {
            Mat unit(Fp, 1, b2.size());
            unit.set(0, j, F.one());
            pteval.set(nd, j, eval_form(F, b2, unit, node));
        }
    }
    Subspace conics = kernel_basis(pteval);
    if (conics.dim() != 2)
        throw ConicSpaceDegenerate("conics through the nodes span dim " + std::to_string(conics.dim()));
    Pencil p;
    p.kind = Pencil::Kind::conic_family;
    p.id = 4;
    p.member_basis = conics.basis();
    out.push_back(std::move(p));
    return out;
}

namespace detail {

// Accept a residual quartic only when it splits into four distinct roots.
inline std::optional<std::vector<Fel>> four_distinct_roots(const Field& F, const Poly& quartic) {
    if (poly_deg(F, quartic) != 4) return std::nullopt;
    auto roots = univariate_roots(F, quartic);
    if (roots.size() != 4) return std::nullopt;
    std::vector<Fel> out;
    for (auto& [r, mult] : roots) {
        if (mult != 1) return std::nullopt;
        out.push_back(r);
    }
    return out;
}

inline std::optional<Divisor> divisor_candidate(const NodalSexticModel& sm, const Pencil& p, const Fel& t) {
    const Field& F = *sm.F;
    const FieldPtr& Fp = sm.F;
    MonomialBasis b6(3, 6);
    std::vector<Mat> pts;

    if (p.kind == Pencil::Kind::node_projection) {
        Mat node = sm.nodes.rows_slice(static_cast<std::size_t>(p.node_index), 1);
        Mat dir(Fp, 1, 3);
        for (std::size_t j = 0; j < 3; ++j)
            dir.set(0, j, F.add(p.member_basis.get(0, j), F.mul(t, p.member_basis.get(1, j))));
        Poly g = restrict_form_to_line(F, b6, sm.f, node, dir);
        // The node is a double root at s = 0; a full-degree restriction keeps
        // the residual affine.
        if (poly_deg(F, g) != 6) return std::nullopt;
        if (!F.is_zero(g[0]) || !F.is_zero(g[1]))
            throw Error(ErrorKind::internal, "line through a node must meet it doubly");
        Poly h(g.begin() + 2, g.end());
        if (F.is_zero(h[0])) return std::nullopt; // extra intersection at the node
        auto roots = four_distinct_roots(F, h);
        if (!roots) return std::nullopt;
        for (const Fel& s : *roots) {
            Mat pt(Fp, 1, 3);
            for (std::size_t j = 0; j < 3; ++j) pt.set(0, j, F.add(node.get(0, j), F.mul(s, dir.get(0, j))));
            pts.push_back(EvaluationModel::normalize_point(F, pt));
        }
    } else {
        // Conic member c0 + t c1 through all four nodes, written as
        // beta xy + gamma xz + eps yz; parametrize by lines through (1:0:0).
        MonomialBasis b2(3, 2);
        auto coeff = [&](const char* mono) {
            std::vector<int> e(3, 0);
            if (std::string(mono) == "xy") e = {1, 1, 0};
            if (std::string(mono) == "xz") e = {1, 0, 1};
            if (std::string(mono) == "yz") e = {0, 1, 1};
            std::size_t idx = b2.index_of(e);
            return F.add(p.member_basis.get(0, idx), F.mul(t, p.member_basis.get(1, idx)));
        };
        Fel beta = coeff("xy"), gamma = coeff("xz"), eps = coeff("yz");
        // The conic matrix determinant is 2*beta*gamma*eps, so a vanishing
        // coefficient means a line pair: reject the member.
        if (F.is_zero(eps) || F.is_zero(beta) || F.is_zero(gamma)) return std::nullopt;
        // Parametrize the conic by the lines {(mu : lambda a : lambda b)}
        // through its point (1:0:0); the residual intersection is
        //   P(a, b) = (-Q(a,b) : L(a,b) a : L(a,b) b),
        // with L = beta a + gamma b and Q = eps ab. Then f(P(a,b)) is a
        // binary form of degree 12 carrying the node contributions
        // a^2 b^2 (a-b)^2 L^2. (Index i = coefficient of a^i b^(d-i).)
        BinForm comp_x = {F.zero(), F.neg(eps), F.zero()}; // -eps ab
        BinForm comp_y = {F.zero(), gamma, beta};          // a L
        BinForm comp_z = {gamma, beta, F.zero()};          // b L
        BinForm total(13, F.zero());
        for (std::size_t j = 0; j < b6.size(); ++j) {
            Fel c = sm.f.get(0, j);
            if (F.is_zero(c)) continue;
            const auto& e = b6.exponent(j);
            BinForm term = {c};
            for (int k = 0; k < e[0]; ++k) term = binform_mul(F, term, comp_x);
            for (int k = 0; k < e[1]; ++k) term = binform_mul(F, term, comp_y);
            for (int k = 0; k < e[2]; ++k) term = binform_mul(F, term, comp_z);
            // pad to degree 12
            BinForm padded(13, F.zero());
            for (std::size_t i = 0; i < term.size(); ++i) padded[i] = term[i];
            for (std::size_t i = 0; i < 13; ++i) total[i] = F.add(total[i], padded[i]);
        }
        // Strip the node contributions: a^2, b^2, (a - b)^2, L^2.
        std::optional<BinForm> h = total;
        auto divide_twice = [&](const Fel& alpha, const Fel& beta2) {
            for (int rep = 0; rep < 2 && h; ++rep) h = binform_div_linear(F, *h, alpha, beta2);
        };
        divide_twice(F.one(), F.zero());          // a
        divide_twice(F.zero(), F.one());          // b
        divide_twice(F.one(), F.from_signed(-1)); // a - b
        divide_twice(beta, gamma);                // L
        if (!h || h->size() != 5) return std::nullopt;
        // Roots at infinity of the residual quartic would be node points.
        Poly quartic(h->begin(), h->end());
        auto roots = four_distinct_roots(F, quartic);
        if (!roots) return std::nullopt;
        for (const Fel& a : *roots) {
            Fel L = F.add(F.mul(beta, a), gamma);
            Fel Q = F.mul(eps, a);
            Mat pt(Fp, 1, 3);
            pt.set(0, 0, F.neg(Q));
            pt.set(0, 1, F.mul(L, a));
            pt.set(0, 2, L);
            if (pt.is_zero()) return std::nullopt;
            pts.push_back(EvaluationModel::normalize_point(F, pt));
        }
    }

    // Shared residual-divisor checks: on the curve, smooth, off the nodes,
    // pairwise distinct.
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!F.is_zero(eval_form(F, b6, sm.f, pts[i])))
            throw Error(ErrorKind::internal, "residual point is off the sextic");
        if (detail::is_node(F, sm.nodes, pts[i])) return std::nullopt;
        require_smooth_at(F, sm.F, sm, pts[i]);
        for (std::size_t j = 0; j < i; ++j)
            if (pts[i] == pts[j]) return std::nullopt;
    }
    Divisor dv;
    dv.points = Mat(Fp, 4, 3);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 3; ++j) dv.points.set(i, j, pts[i].get(0, j));
    dv.pencil_id = p.id;
    dv.t = t;
    return dv;
}

} // namespace detail

// Walk pencil parameters in a seeded order until `count` split divisors are
// found. Small fields are exhausted deterministically before giving up, so a
// failure here reliably signals that the field must grow.
inline std::vector<Divisor> extract_divisors(const NodalSexticModel& sm, const Pencil& p, std::size_t count,
                                             Rng& rng, std::size_t budget = 0) {
    const Field& F = *sm.F;
    std::vector<Divisor> out;
    const bool exhaustive = F.q() <= 4096;
    if (budget == 0) budget = exhaustive ? F.q() : 64 * count + 512;
    std::vector<std::uint64_t> order;
    if (exhaustive) order = rng.permutation(F.q());
    for (std::size_t draw = 0; draw < budget && out.size() < count; ++draw) {
        Fel t = exhaustive ? F.enumerate(order[draw % order.size()]) : F.element_from_rng(rng);
        bool dup = false;
        for (const Divisor& d : out)
            if (d.t == t) dup = true;
        if (dup) continue;
        auto cand = detail::divisor_candidate(sm, p, t);
        if (cand) out.push_back(std::move(*cand));
    }
    if (out.size() < count)
        throw RetriesExhausted("pencil " + std::to_string(p.id) + ": only " + std::to_string(out.size()) +
                               " split divisors found; the field is too small");
    return out;
}

// W = H^0 of canonical forms vanishing on the divisor, as a subspace of the
// model's V-coordinates. The hard dim-3 check is the speciality certificate
// (four canonical points spanning only a plane).
inline Subspace special_subspace(const CanonicalModel& cm, const Divisor& dv) {
    if (!cm.sextic) throw UnsupportedModel("special_subspace needs the sextic provenance of the model");
    const NodalSexticModel& sm = *cm.sextic;
    const Field& F = *sm.F;
    Mat rows(sm.F, 4, 6);
    for (std::size_t i = 0; i < 4; ++i) {
        Mat img = adjoint_image(sm, dv.points.rows_slice(i, 1));
        for (std::size_t j = 0; j < 6; ++j) rows.set(i, j, img.get(0, j));
    }
    Subspace w = kernel_basis(rows);
    if (w.dim() != 3)
        throw SpecialtyViolation("divisor imposes " + std::to_string(6 - w.dim()) +
                                 " conditions on canonical forms, expected 3");
    // Definitional cross-check: every W form annihilates every divisor point.
    for (std::size_t r = 0; r < w.dim(); ++r)
        for (std::size_t i = 0; i < 4; ++i) {
            Fel acc = F.zero();
            Mat img = adjoint_image(sm, dv.points.rows_slice(i, 1));
            for (std::size_t j = 0; j < 6; ++j) acc = F.add(acc, F.mul(w.basis().get(r, j), img.get(0, j)));
            if (!F.is_zero(acc)) throw Error(ErrorKind::internal, "special subspace fails to annihilate its divisor");
        }
    return w;
}

} // namespace klab
