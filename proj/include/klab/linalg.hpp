// Dense exact linear algebra over the working field: reduced row echelon
// form, rank, kernels, row spaces, and subspace lattice operations.
//
// Matrices are immutable values from the caller's point of view; every
// operation returns fresh objects. Pivoting is deterministic (first nonzero
// entry, lowest row index) so echelon forms are reproducible bit for bit.
#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "klab/errors.hpp"
#include "klab/field.hpp"

namespace klab {

class Mat {
public:
    Mat() = default;
    Mat(FieldPtr F, std::size_t nrows, std::size_t ncols)
        : F_(std::move(F)), nrows_(nrows), ncols_(ncols), a_(nrows * ncols * F_->m(), 0) {}

    static Mat identity(FieldPtr F, std::size_t n) {
        Mat r(F, n, n);
        for (std::size_t i = 0; i < n; ++i) r.set(i, i, F->one());
        return r;
    }

    static Mat from_rows(FieldPtr F, const std::vector<std::vector<Fel>>& rows) {
        std::size_t nc = rows.empty() ? 0 : rows[0].size();
        Mat r(F, rows.size(), nc);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != nc) throw SpecMismatch("ragged row list");
            for (std::size_t j = 0; j < nc; ++j) r.set(i, j, rows[i][j]);
        }
        return r;
    }

    const FieldPtr& field() const { return F_; }
    std::size_t nrows() const { return nrows_; }
    std::size_t ncols() const { return ncols_; }
    std::size_t stride() const { return ncols_ * F_->m(); }

    Limb* row(std::size_t i) { return a_.data() + i * stride(); }
    const Limb* row(std::size_t i) const { return a_.data() + i * stride(); }
    Limb* entry(std::size_t i, std::size_t j) { return a_.data() + (i * ncols_ + j) * F_->m(); }
    const Limb* entry(std::size_t i, std::size_t j) const { return a_.data() + (i * ncols_ + j) * F_->m(); }

    Fel get(std::size_t i, std::size_t j) const {
        const Limb* e = entry(i, j);
        return Fel(e, e + F_->m());
    }

    void set(std::size_t i, std::size_t j, const Fel& v) {
        F_->check(v);
        Limb* e = entry(i, j);
        for (std::uint32_t k = 0; k < F_->m(); ++k) e[k] = v[k];
    }

    bool is_zero() const {
        for (Limb x : a_)
            if (x) return false;
        return true;
    }

    bool operator==(const Mat& o) const {
        return nrows_ == o.nrows_ && ncols_ == o.ncols_ && a_ == o.a_;
    }

    Mat transpose() const {
        Mat r(F_, ncols_, nrows_);
        for (std::size_t i = 0; i < nrows_; ++i)
            for (std::size_t j = 0; j < ncols_; ++j) {
                const Limb* e = entry(i, j);
                Limb* d = r.entry(j, i);
                for (std::uint32_t k = 0; k < F_->m(); ++k) d[k] = e[k];
            }
        return r;
    }

    Mat mul(const Mat& o) const {
        if (ncols_ != o.nrows_) throw SpecMismatch("matrix product shape mismatch");
        Mat r(F_, nrows_, o.ncols_);
        const std::uint32_t m = F_->m();
        if (m == 1) {
            const Limb p = F_->p();
            for (std::size_t i = 0; i < nrows_; ++i)
                for (std::size_t k = 0; k < ncols_; ++k) {
                    Limb c = *entry(i, k);
                    if (!c) continue;
                    const Limb* src = o.row(k);
                    Limb* dst = r.row(i);
                    for (std::size_t j = 0; j < o.ncols_; ++j) dst[j] = (dst[j] + c * src[j]) % p;
                }
        } else {
            Fel tmp(m);
            for (std::size_t i = 0; i < nrows_; ++i)
                for (std::size_t k = 0; k < ncols_; ++k) {
                    const Limb* c = entry(i, k);
                    if (F_->r_is_zero(c)) continue;
                    for (std::size_t j = 0; j < o.ncols_; ++j) {
                        F_->r_mul(c, o.entry(k, j), tmp.data());
                        F_->r_add(r.entry(i, j), tmp.data(), r.entry(i, j));
                    }
                }
        }
        return r;
    }

    // Rows of `a` followed by rows of `b`.
    static Mat vstack(const Mat& a, const Mat& b) {
        if (a.ncols_ != b.ncols_) throw AmbientMismatch("vstack column mismatch");
        Mat r(a.F_, a.nrows_ + b.nrows_, a.ncols_);
        std::copy(a.a_.begin(), a.a_.end(), r.a_.begin());
        std::copy(b.a_.begin(), b.a_.end(), r.a_.begin() + static_cast<std::ptrdiff_t>(a.a_.size()));
        return r;
    }

    Mat rows_slice(std::size_t begin, std::size_t count) const {
        Mat r(F_, count, ncols_);
        std::copy(a_.begin() + static_cast<std::ptrdiff_t>(begin * stride()),
                  a_.begin() + static_cast<std::ptrdiff_t>((begin + count) * stride()), r.a_.begin());
        return r;
    }

    void swap_rows(std::size_t i, std::size_t j) {
        if (i == j) return;
        Limb* a = row(i);
        Limb* b = row(j);
        for (std::size_t k = 0; k < stride(); ++k) std::swap(a[k], b[k]);
    }

    // row(i) *= c
    void scale_row(std::size_t i, const Fel& c, std::size_t from_col = 0) {
        const std::uint32_t m = F_->m();
        Limb* r = row(i);
        if (m == 1) {
            const Limb p = F_->p();
            const Limb cc = c[0] % p;
            for (std::size_t j = from_col; j < ncols_; ++j) r[j] = (r[j] * cc) % p;
        } else {
            Fel tmp(m);
            for (std::size_t j = from_col; j < ncols_; ++j) {
                F_->r_mul(r + j * m, c.data(), tmp.data());
                for (std::uint32_t k = 0; k < m; ++k) r[j * m + k] = tmp[k];
            }
        }
    }

    // row(dst) += c * row(src), starting at from_col.
    void axpy_row(std::size_t dst, const Fel& c, std::size_t src, std::size_t from_col = 0) {
        const std::uint32_t m = F_->m();
        Limb* d = row(dst);
        const Limb* s = row(src);
        if (m == 1) {
            const Limb p = F_->p();
            const Limb cc = c[0] % p;
            if (!cc) return;
            for (std::size_t j = from_col; j < ncols_; ++j) d[j] = (d[j] + cc * s[j]) % p;
        } else {
            Fel tmp(m);
            for (std::size_t j = from_col; j < ncols_; ++j) {
                F_->r_mul(s + j * m, c.data(), tmp.data());
                F_->r_add(d + j * m, tmp.data(), d + j * m);
            }
        }
    }

private:
    FieldPtr F_;
    std::size_t nrows_ = 0, ncols_ = 0;
    std::vector<Limb> a_;
};

struct EchelonForm {
    Mat rref;
    std::vector<std::size_t> pivot_cols;
    std::size_t rank = 0;
};

// Unique reduced row echelon form with deterministic pivot choice.
inline EchelonForm echelon(Mat m) {
    const Field& F = *m.field();
    const std::uint32_t fm = F.m();
    EchelonForm out;
    std::size_t r = 0;
    for (std::size_t col = 0; col < m.ncols() && r < m.nrows(); ++col) {
        std::size_t piv = r;
        while (piv < m.nrows() && F.r_is_zero(m.entry(piv, col))) ++piv;
        if (piv == m.nrows()) continue;
        m.swap_rows(r, piv);
        Fel lead(m.entry(r, col), m.entry(r, col) + fm);
        m.scale_row(r, F.inv(lead), col);
        for (std::size_t i = 0; i < m.nrows(); ++i) {
            if (i == r) continue;
            const Limb* e = m.entry(i, col);
            if (F.r_is_zero(e)) continue;
            Fel c(e, e + fm);
            F.r_neg(c.data(), c.data());
            m.axpy_row(i, c, r, col);
        }
        out.pivot_cols.push_back(col);
        ++r;
    }
    out.rank = r;
    out.rref = std::move(m);
    return out;
}

inline std::size_t rank(const Mat& m) { return echelon(m).rank; }

// Reduce a raw row vector modulo the row space of an echelon form, in place.
inline void reduce_against(const Field& F, const EchelonForm& ech, Limb* v) {
    const std::uint32_t m = F.m();
    for (std::size_t i = 0; i < ech.rank; ++i) {
        const std::size_t col = ech.pivot_cols[i];
        Limb* e = v + col * m;
        if (F.r_is_zero(e)) continue;
        Fel c(e, e + m);
        F.r_neg(c.data(), c.data());
        const Limb* srow = ech.rref.row(i);
        if (m == 1) {
            const Limb p = F.p();
            const Limb cc = c[0];
            for (std::size_t j = col; j < ech.rref.ncols(); ++j) v[j] = (v[j] + cc * srow[j]) % p;
        } else {
            Fel tmp(m);
            for (std::size_t j = col; j < ech.rref.ncols(); ++j) {
                F.r_mul(srow + j * m, c.data(), tmp.data());
                F.r_add(v + j * m, tmp.data(), v + j * m);
            }
        }
    }
}

class Subspace;
Subspace kernel_basis(const Mat& m);

// A linear subspace of F^n held as an echelonized row basis.
class Subspace {
public:
    Subspace() = default;
    Subspace(FieldPtr F, std::size_t ambient) : ech_{Mat(F, 0, ambient), {}, 0} {}

    static Subspace row_space(const Mat& rows) {
        EchelonForm e = echelon(rows);
        Subspace s(rows.field(), rows.ncols());
        s.ech_.rref = e.rref.rows_slice(0, e.rank);
        s.ech_.pivot_cols = std::move(e.pivot_cols);
        s.ech_.rank = e.rank;
        return s;
    }

    const Mat& basis() const { return ech_.rref; }
    const std::vector<std::size_t>& pivots() const { return ech_.pivot_cols; }
    std::size_t dim() const { return ech_.rank; }
    std::size_t ambient() const { return ech_.rref.ncols(); }
    const FieldPtr& field() const { return ech_.rref.field(); }

    bool operator==(const Subspace& o) const { return ech_.rref == o.ech_.rref; }

    Subspace sum(const Subspace& o) const {
        require_same_ambient(o);
        return row_space(Mat::vstack(ech_.rref, o.ech_.rref));
    }

    // Intersection via the kernel of the stacked transposes: a vector of the
    // intersection is u^T A = v^T B with [u | -v] in the kernel of [A^T B^T].
    Subspace intersect(const Subspace& o) const {
        require_same_ambient(o);
        const FieldPtr& F = field();
        const std::size_t da = dim(), db = o.dim();
        if (da == 0 || db == 0) return Subspace(F, ambient());
        Mat stacked(F, da + db, ambient());
        for (std::size_t i = 0; i < da; ++i)
            for (std::size_t j = 0; j < ambient(); ++j) stacked.set(i, j, ech_.rref.get(i, j));
        for (std::size_t i = 0; i < db; ++i)
            for (std::size_t j = 0; j < ambient(); ++j) stacked.set(da + i, j, o.ech_.rref.get(i, j));
        Subspace combo_kernel = kernel_basis(stacked.transpose());
        // Each kernel row (u, -v) yields u^T A in the intersection.
        Mat res(F, combo_kernel.dim(), ambient());
        for (std::size_t r = 0; r < combo_kernel.dim(); ++r)
            for (std::size_t i = 0; i < da; ++i) {
                Fel c = combo_kernel.basis().get(r, i);
                if (F->is_zero(c)) continue;
                for (std::size_t j = 0; j < ambient(); ++j)
                    res.set(r, j, F->add(res.get(r, j), F->mul(c, ech_.rref.get(i, j))));
            }
        return row_space(res);
    }

    bool contains_vector(const Mat& v) const {
        if (v.nrows() != 1 || v.ncols() != ambient()) throw AmbientMismatch("vector shape mismatch");
        Mat w = v;
        reduce_against(*field(), ech_, w.row(0));
        return w.is_zero();
    }

    bool contains(const Subspace& o) const {
        require_same_ambient(o);
        return sum(o).dim() == dim();
    }

    // Coordinates of v in the echelonized row basis; throws NotInSpan.
    std::vector<Fel> solve_in_span(const Mat& v) const {
        if (v.nrows() != 1 || v.ncols() != ambient()) throw AmbientMismatch("vector shape mismatch");
        const Field& F = *field();
        std::vector<Fel> coords(dim(), F.zero());
        Mat w = v;
        for (std::size_t i = 0; i < dim(); ++i) coords[i] = w.get(0, ech_.pivot_cols[i]);
        reduce_against(F, ech_, w.row(0));
        if (!w.is_zero()) throw NotInSpan("vector lies outside the span");
        return coords;
    }

    const EchelonForm& echelon_form() const { return ech_; }

private:
    void require_same_ambient(const Subspace& o) const {
        if (ambient() != o.ambient()) throw AmbientMismatch("subspaces live in different ambient spaces");
    }

    EchelonForm ech_;
};

// Rank bookkeeping for one row at a time; used wherever a complement has to
// be picked greedily in a deterministic order.
class IncrementalEchelon {
public:
    IncrementalEchelon(FieldPtr F, std::size_t ambient) : F_(std::move(F)), ambient_(ambient) {}

    std::size_t rank() const { return rows_.size(); }

    // Reduce the row against the current basis; if a nonzero remainder is
    // left, absorb it and report growth.
    bool add_row(Mat row) {
        const Field& F = *F_;
        if (row.nrows() != 1 || row.ncols() != ambient_) throw AmbientMismatch("row shape mismatch");
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const Limb* e = row.entry(0, pivots_[i]);
            if (F.r_is_zero(e)) continue;
            Fel c(e, e + F.m());
            F.r_neg(c.data(), c.data());
            const std::uint32_t m = F.m();
            Fel tmp(m);
            for (std::size_t j = pivots_[i]; j < ambient_; ++j) {
                F.r_mul(rows_[i].entry(0, j), c.data(), tmp.data());
                F.r_add(row.entry(0, j), tmp.data(), row.entry(0, j));
            }
        }
        std::size_t lead = ambient_;
        for (std::size_t j = 0; j < ambient_; ++j)
            if (!F.r_is_zero(row.entry(0, j))) {
                lead = j;
                break;
            }
        if (lead == ambient_) return false;
        Fel inv = F.inv(row.get(0, lead));
        row.scale_row(0, inv, lead);
        rows_.push_back(std::move(row));
        pivots_.push_back(lead);
        return true;
    }

    void add_rows(const Mat& rows) {
        for (std::size_t i = 0; i < rows.nrows(); ++i) add_row(rows.rows_slice(i, 1));
    }

private:
    FieldPtr F_;
    std::size_t ambient_;
    std::vector<Mat> rows_;
    std::vector<std::size_t> pivots_;
};

// Right kernel {v : m v^T = 0}, returned as an echelonized row basis.
inline Subspace kernel_basis(const Mat& m) {
    const FieldPtr& F = m.field();
    EchelonForm e = echelon(m);
    std::vector<bool> is_pivot(m.ncols(), false);
    for (std::size_t c : e.pivot_cols) is_pivot[c] = true;
    const std::size_t dim = m.ncols() - e.rank;
    Mat basis(F, dim, m.ncols());
    std::size_t r = 0;
    for (std::size_t free_col = 0; free_col < m.ncols(); ++free_col) {
        if (is_pivot[free_col]) continue;
        basis.set(r, free_col, F->one());
        for (std::size_t i = 0; i < e.rank; ++i) {
            Fel c = e.rref.get(i, free_col);
            if (!F->is_zero(c)) basis.set(r, e.pivot_cols[i], F->neg(c));
        }
        ++r;
    }
    return Subspace::row_space(basis);
}

} // namespace klab
