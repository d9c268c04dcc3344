// Graded pieces M_q of the homogeneous coordinate ring of a projective model,
// in two interchangeable representations, with the multiplication maps
// V (x) M_q -> M_{q+1} that drive the Koszul differentials.
//
// Presentation rep: M_q = Sym^q / (ideal piece), basis = standard monomials.
// Evaluation rep:   M_q = span of degree-q monomial functions on a sampled
//                   point set, basis = echelonized value vectors.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "klab/errors.hpp"
#include "klab/field.hpp"
#include "klab/linalg.hpp"

namespace klab {

inline std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

inline std::uint64_t sym_dim(int n, int q) {
    if (q < 0) return 0;
    return binom(static_cast<std::uint64_t>(n + q - 1), static_cast<std::uint64_t>(q));
}

// Monomials of degree q in n variables, graded-lex with the declared variable
// order (x0^q first). The order is part of the file format, so it is fixed.
class MonomialBasis {
public:
    MonomialBasis(int n, int q) : n_(n), q_(q) {
        std::vector<int> cur(static_cast<std::size_t>(n), 0);
        emit(cur, 0, q);
        for (std::size_t i = 0; i < exps_.size(); ++i) index_[exps_[i]] = i;
    }

    int nvars() const { return n_; }
    int degree() const { return q_; }
    std::size_t size() const { return exps_.size(); }
    const std::vector<int>& exponent(std::size_t i) const { return exps_[i]; }
    const std::vector<std::vector<int>>& exponents() const { return exps_; }

    std::size_t index_of(const std::vector<int>& e) const {
        auto it = index_.find(e);
        if (it == index_.end()) throw SpecMismatch("exponent vector not in basis");
        return it->second;
    }

private:
    void emit(std::vector<int>& cur, int var, int rest) {
        if (var == n_ - 1) {
            cur[static_cast<std::size_t>(var)] = rest;
            exps_.push_back(cur);
            cur[static_cast<std::size_t>(var)] = 0;
            return;
        }
        for (int e = rest; e >= 0; --e) {
            cur[static_cast<std::size_t>(var)] = e;
            emit(cur, var + 1, rest - e);
        }
        cur[static_cast<std::size_t>(var)] = 0;
    }

    int n_, q_;
    std::vector<std::vector<int>> exps_;
    std::map<std::vector<int>, std::size_t> index_;
};

struct Generator {
    int degree = 0;
    Mat coeffs; // 1 x sym_dim(n, degree)
};

struct PresentationModel {
    FieldPtr F;
    int n = 0;
    std::vector<Generator> generators;
    std::map<int, std::size_t> expected_hilbert;

    void validate() const {
        for (const Generator& g : generators) {
            if (g.degree < 1) throw SpecMismatch("generator degree must be >= 1");
            if (g.coeffs.nrows() != 1 || g.coeffs.ncols() != sym_dim(n, g.degree))
                throw SpecMismatch("generator coefficient vector has wrong length");
            if (g.coeffs.is_zero()) throw SpecMismatch("zero generator");
        }
    }
};

struct EvaluationModel {
    FieldPtr F;
    int n = 0;
    Mat points; // npts x n, normalized so the first nonzero coordinate is 1
    std::map<int, std::size_t> expected_hilbert;

    static Mat normalize_point(const Field& F, Mat row) {
        std::size_t lead = row.ncols();
        for (std::size_t j = 0; j < row.ncols(); ++j)
            if (!F.is_zero(row.get(0, j))) {
                lead = j;
                break;
            }
        if (lead == row.ncols()) throw SpecMismatch("zero projective point");
        Fel inv = F.inv(row.get(0, lead));
        for (std::size_t j = 0; j < row.ncols(); ++j) row.set(0, j, F.mul(inv, row.get(0, j)));
        return row;
    }

    static EvaluationModel make(FieldPtr F, const std::vector<Mat>& raw_points, int n,
                                std::map<int, std::size_t> expected = {}) {
        std::vector<Mat> normalized;
        for (const Mat& p : raw_points) {
            Mat q = normalize_point(*F, p);
            bool dup = false;
            for (const Mat& seen : normalized)
                if (seen == q) {
                    dup = true;
                    break;
                }
            if (!dup) normalized.push_back(std::move(q));
        }
        EvaluationModel em;
        em.F = F;
        em.n = n;
        em.points = Mat(F, normalized.size(), static_cast<std::size_t>(n));
        for (std::size_t i = 0; i < normalized.size(); ++i)
            for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j)
                em.points.set(i, j, normalized[i].get(0, j));
        em.expected_hilbert = std::move(expected);
        return em;
    }
};

// Entry (i, j) = monomial_j evaluated at point_i.
inline Mat eval_matrix(const EvaluationModel& em, int q) {
    const Field& F = *em.F;
    MonomialBasis basis(em.n, q);
    Mat out(em.F, em.points.nrows(), basis.size());
    for (std::size_t i = 0; i < em.points.nrows(); ++i) {
        // Powers of each coordinate up to q, then products per monomial.
        std::vector<std::vector<Fel>> pw(static_cast<std::size_t>(em.n));
        for (int v = 0; v < em.n; ++v) {
            pw[static_cast<std::size_t>(v)].resize(static_cast<std::size_t>(q + 1), F.one());
            for (int e = 1; e <= q; ++e)
                pw[static_cast<std::size_t>(v)][static_cast<std::size_t>(e)] =
                    F.mul(pw[static_cast<std::size_t>(v)][static_cast<std::size_t>(e - 1)],
                          em.points.get(i, static_cast<std::size_t>(v)));
        }
        for (std::size_t j = 0; j < basis.size(); ++j) {
            Fel val = F.one();
            const auto& e = basis.exponent(j);
            for (int v = 0; v < em.n; ++v)
                if (e[static_cast<std::size_t>(v)])
                    val = F.mul(val, pw[static_cast<std::size_t>(v)][static_cast<std::size_t>(e[static_cast<std::size_t>(v)])]);
            out.set(i, j, val);
        }
    }
    return out;
}

// (I)_q = sum over generators g of Sym^{q - deg g} * g, as a subspace of Sym^q.
inline Subspace ideal_piece(const PresentationModel& pm, int q) {
    const Field& F = *pm.F;
    MonomialBasis target(pm.n, q);
    std::vector<Mat> rows;
    for (const Generator& g : pm.generators) {
        int shift = q - g.degree;
        if (shift < 0) continue;
        MonomialBasis gb(pm.n, g.degree);
        MonomialBasis sb(pm.n, shift);
        for (std::size_t s = 0; s < sb.size(); ++s) {
            Mat row(pm.F, 1, target.size());
            const auto& se = sb.exponent(s);
            for (std::size_t t = 0; t < gb.size(); ++t) {
                Fel c = g.coeffs.get(0, t);
                if (F.is_zero(c)) continue;
                std::vector<int> e = gb.exponent(t);
                for (int v = 0; v < pm.n; ++v) e[static_cast<std::size_t>(v)] += se[static_cast<std::size_t>(v)];
                std::size_t idx = target.index_of(e);
                row.set(0, idx, F.add(row.get(0, idx), c));
            }
            rows.push_back(std::move(row));
        }
    }
    Mat stacked(pm.F, rows.size(), target.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < target.size(); ++j) stacked.set(i, j, rows[i].get(0, j));
    return Subspace::row_space(stacked);
}

enum class Rep { presentation, evaluation };

// One graded piece M_q with a concrete basis and reduction data.
struct GradedPiece {
    int q = 0;
    std::size_t dim = 0;
    Rep rep = Rep::presentation;

    // Presentation: echelon of the ideal piece inside Sym^q; basis of M_q is
    // the non-pivot (standard) monomials.
    EchelonForm ideal_ech;
    std::vector<std::size_t> std_monomials;

    // Evaluation: echelonized basis of value vectors in F^npts.
    Subspace value_basis;

    // Express a Sym^q coefficient vector in the standard-monomial basis
    // (presentation rep only).
    std::vector<Fel> reduce_sym(const Field& F, Mat symvec) const {
        reduce_against(F, ideal_ech, symvec.row(0));
        std::vector<Fel> out;
        out.reserve(std_monomials.size());
        for (std::size_t c : std_monomials) out.push_back(symvec.get(0, c));
        return out;
    }
};

// Piece and multiplication-map cache for one model. Pieces are immutable once
// built; lazy construction happens under a lock so concurrent readers observe
// either absent or fully built data.
class GradedRing {
public:
    explicit GradedRing(PresentationModel pm) : rep_(Rep::presentation), pres_(std::move(pm)) {
        pres_->validate();
        F_ = pres_->F;
        n_ = pres_->n;
    }

    explicit GradedRing(EvaluationModel em) : rep_(Rep::evaluation), eval_(std::move(em)) {
        F_ = eval_->F;
        n_ = eval_->n;
    }

    Rep rep() const { return rep_; }
    const FieldPtr& field_ptr() const { return F_; }
    const Field& field() const { return *F_; }
    int nvars() const { return n_; }
    const PresentationModel& presentation() const {
        if (!pres_) throw UnsupportedModel("ring has no presentation representation");
        return *pres_;
    }
    const EvaluationModel& evaluation() const {
        if (!eval_) throw UnsupportedModel("ring has no evaluation representation");
        return *eval_;
    }

    std::size_t dim(int q) const {
        if (q < 0) return 0;
        return piece(q).dim;
    }

    const GradedPiece& piece(int q) const {
        if (q < 0) throw DegreeUnavailable("negative degree piece");
        std::lock_guard<std::mutex> lock(mu_);
        auto it = pieces_.find(q);
        if (it != pieces_.end()) return *it->second;
        auto built = std::make_unique<GradedPiece>(build_piece(q));
        const GradedPiece& ref = *built;
        pieces_.emplace(q, std::move(built));
        return ref;
    }

    // Matrix of multiplication by x_var from M_q to M_{q+1}: column j holds
    // the coordinates of x_var * basis_j.
    const Mat& mult(int q, int var) const {
        piece(q);
        piece(q + 1);
        std::lock_guard<std::mutex> lock(mu_);
        auto key = std::make_pair(q, var);
        auto it = mults_.find(key);
        if (it != mults_.end()) return *it->second;
        auto built = std::make_unique<Mat>(build_mult(q, var));
        const Mat& ref = *built;
        mults_.emplace(key, std::move(built));
        return ref;
    }

private:
    GradedPiece build_piece(int q) const {
        GradedPiece out;
        out.q = q;
        out.rep = rep_;
        if (rep_ == Rep::presentation) {
            Subspace ideal = ideal_piece(*pres_, q);
            out.ideal_ech = ideal.echelon_form();
            std::vector<bool> pivot(sym_dim(n_, q), false);
            for (std::size_t c : out.ideal_ech.pivot_cols) pivot[c] = true;
            for (std::size_t c = 0; c < pivot.size(); ++c)
                if (!pivot[c]) out.std_monomials.push_back(c);
            out.dim = out.std_monomials.size();
            check_expected(pres_->expected_hilbert, q, out.dim);
        } else {
            Mat funcs = eval_matrix(*eval_, q).transpose();
            out.value_basis = Subspace::row_space(funcs);
            out.dim = out.value_basis.dim();
            if (out.dim == eval_->points.nrows() && q > 0)
                throw InsufficientPoints("degree-" + std::to_string(q) +
                                         " functions saturate the sampled points; need more points");
            check_expected(eval_->expected_hilbert, q, out.dim);
        }
        return out;
    }

    static void check_expected(const std::map<int, std::size_t>& expected, int q, std::size_t dim) {
        auto it = expected.find(q);
        if (it != expected.end() && it->second != dim)
            throw HilbertMismatch("dim M_" + std::to_string(q) + " = " + std::to_string(dim) +
                                  ", expected " + std::to_string(it->second));
    }

    Mat build_mult(int q, int var) const {
        const Field& F = *F_;
        const GradedPiece& src = *pieces_.at(q);
        const GradedPiece& dst = *pieces_.at(q + 1);
        Mat out(F_, dst.dim, src.dim);
        if (rep_ == Rep::presentation) {
            MonomialBasis sb(n_, q);
            MonomialBasis tb(n_, q + 1);
            for (std::size_t j = 0; j < src.dim; ++j) {
                std::vector<int> e = sb.exponent(src.std_monomials[j]);
                e[static_cast<std::size_t>(var)] += 1;
                Mat unit(F_, 1, tb.size());
                unit.set(0, tb.index_of(e), F.one());
                std::vector<Fel> coords = dst.reduce_sym(F, std::move(unit));
                for (std::size_t i = 0; i < dst.dim; ++i) out.set(i, j, coords[i]);
            }
        } else {
            const Mat& pts = eval_->points;
            for (std::size_t j = 0; j < src.dim; ++j) {
                Mat prod(F_, 1, pts.nrows());
                for (std::size_t i = 0; i < pts.nrows(); ++i)
                    prod.set(0, i, F.mul(src.value_basis.basis().get(j, i), pts.get(i, static_cast<std::size_t>(var))));
                std::vector<Fel> coords = dst.value_basis.solve_in_span(prod);
                for (std::size_t i = 0; i < dst.dim; ++i) out.set(i, j, coords[i]);
            }
        }
        return out;
    }

    Rep rep_;
    FieldPtr F_;
    int n_ = 0;
    std::optional<PresentationModel> pres_;
    std::optional<EvaluationModel> eval_;
    mutable std::mutex mu_;
    mutable std::map<int, std::unique_ptr<GradedPiece>> pieces_;
    mutable std::map<std::pair<int, int>, std::unique_ptr<Mat>> mults_;
};

} // namespace klab
