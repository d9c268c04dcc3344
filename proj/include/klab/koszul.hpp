// Koszul differentials and cohomology K_{p,q}(M; W) for any subspace
// W of V = M_1, the comparison map into K_{p,q}(M; V), and graded Betti
// tables.
//
// Convention: delta(w_{i1} ^ ... ^ w_{ip} (x) m) =
//   sum_a (-1)^a (drop position a) (x) (w_{ia} * m),
// with tensor coordinates laid out as wedge_index * dim(M) + module_index.
#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "klab/errors.hpp"
#include "klab/gradedring.hpp"
#include "klab/linalg.hpp"

namespace klab {

// Strictly increasing p-tuples from {0, ..., dim_w - 1} in lex order.
class WedgeBasis {
public:
    WedgeBasis(int p, int dim_w) : p_(p), dim_w_(dim_w) {
        if (p < 0 || p > dim_w) return;
        std::vector<int> cur;
        emit(cur, 0);
        for (std::size_t i = 0; i < tuples_.size(); ++i) index_[tuples_[i]] = i;
    }

    std::size_t size() const { return tuples_.size(); }
    const std::vector<int>& tuple(std::size_t i) const { return tuples_[i]; }
    std::size_t index_of(const std::vector<int>& t) const { return index_.at(t); }

private:
    void emit(std::vector<int>& cur, int next) {
        if (static_cast<int>(cur.size()) == p_) {
            tuples_.push_back(cur);
            return;
        }
        for (int v = next; v <= dim_w_ - (p_ - static_cast<int>(cur.size())); ++v) {
            cur.push_back(v);
            emit(cur, v + 1);
            cur.pop_back();
        }
    }

    int p_, dim_w_;
    std::vector<std::vector<int>> tuples_;
    std::map<std::vector<int>, std::size_t> index_;
};

// The Koszul differential wedge^p W (x) M_q -> wedge^{p-1} W (x) M_{q+1}.
// `w_rows` holds the chosen (ordered, not necessarily echelonized) basis of W
// in V-coordinates; multiplication by w = sum c_i x_i is the c-weighted sum
// of the variable multiplication maps.
inline Mat koszul_differential(const GradedRing& R, const Mat& w_rows, int p, int q) {
    const Field& F = R.field();
    const FieldPtr& Fp = R.field_ptr();
    const int d = static_cast<int>(w_rows.nrows());
    const int n = R.nvars();
    if (static_cast<int>(w_rows.ncols()) != n) throw AmbientMismatch("W basis must be in V-coordinates");

    const std::size_t dim_q = q >= 0 ? R.dim(q) : 0;
    const std::size_t dim_q1 = q + 1 >= 0 ? R.dim(q + 1) : 0;
    WedgeBasis dom(p, d);
    WedgeBasis cod(p - 1, d);
    const std::size_t dom_wedge = p >= 0 && p <= d ? dom.size() : 0;
    const std::size_t cod_wedge = p - 1 >= 0 && p - 1 <= d ? cod.size() : 0;
    Mat out(Fp, cod_wedge * dim_q1, dom_wedge * dim_q);
    if (out.nrows() == 0 || out.ncols() == 0) return out;

    // Multiplication maps by each basis vector of W.
    std::vector<Mat> mult_w;
    mult_w.reserve(static_cast<std::size_t>(d));
    for (int r = 0; r < d; ++r) {
        Mat mw(Fp, dim_q1, dim_q);
        for (int v = 0; v < n; ++v) {
            Fel c = w_rows.get(static_cast<std::size_t>(r), static_cast<std::size_t>(v));
            if (F.is_zero(c)) continue;
            const Mat& mv = R.mult(q, v);
            for (std::size_t i = 0; i < dim_q1; ++i)
                for (std::size_t j = 0; j < dim_q; ++j)
                    mw.set(i, j, F.add(mw.get(i, j), F.mul(c, mv.get(i, j))));
        }
        mult_w.push_back(std::move(mw));
    }

    for (std::size_t t = 0; t < dom_wedge; ++t) {
        const std::vector<int>& T = dom.tuple(t);
        for (int a = 0; a < p; ++a) {
            std::vector<int> S = T;
            S.erase(S.begin() + a);
            std::size_t s = cod.index_of(S);
            const Mat& mw = mult_w[static_cast<std::size_t>(T[static_cast<std::size_t>(a)])];
            const bool negate = (a % 2) == 1;
            for (std::size_t i = 0; i < dim_q1; ++i)
                for (std::size_t j = 0; j < dim_q; ++j) {
                    Fel val = mw.get(i, j);
                    if (F.is_zero(val)) continue;
                    if (negate) val = F.neg(val);
                    std::size_t row = s * dim_q1 + i;
                    std::size_t col = t * dim_q + j;
                    out.set(row, col, F.add(out.get(row, col), val));
                }
        }
    }
    return out;
}

// One cohomology cell with its differentials, cocycles, coboundaries, and a
// deterministic set of class representatives.
struct KoszulCell {
    int p = 0, q = 0;
    Mat delta_in;
    Mat delta_out;
    Subspace cocycles;
    Subspace coboundaries;
    std::size_t dim = 0;
    Mat representatives; // dim x ambient, cocycles spanning a complement
};

inline KoszulCell koszul_cohomology(const GradedRing& R, const Mat& w_rows, int p, int q) {
    KoszulCell cell;
    cell.p = p;
    cell.q = q;
    cell.delta_out = koszul_differential(R, w_rows, p, q);
    cell.delta_in = koszul_differential(R, w_rows, p + 1, q - 1);
    if (cell.delta_in.ncols() > 0 && cell.delta_out.nrows() > 0) {
        if (!cell.delta_out.mul(cell.delta_in).is_zero())
            throw Error(ErrorKind::internal, "Koszul differentials do not compose to zero");
    }
    cell.cocycles = kernel_basis(cell.delta_out);
    cell.coboundaries = Subspace::row_space(cell.delta_in.transpose());
    cell.dim = cell.cocycles.dim() - cell.coboundaries.dim();

    // Greedy complement of the coboundaries inside the cocycles, in rref
    // order: deterministic representatives.
    IncrementalEchelon inc(R.field_ptr(), cell.cocycles.ambient());
    inc.add_rows(cell.coboundaries.basis());
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < cell.cocycles.dim(); ++i)
        if (inc.add_row(cell.cocycles.basis().rows_slice(i, 1))) keep.push_back(i);
    if (keep.size() != cell.dim)
        throw Error(ErrorKind::internal, "representative count disagrees with cohomology dimension");
    cell.representatives = Mat(R.field_ptr(), keep.size(), cell.cocycles.ambient());
    for (std::size_t i = 0; i < keep.size(); ++i)
        for (std::size_t j = 0; j < cell.cocycles.ambient(); ++j)
            cell.representatives.set(i, j, cell.cocycles.basis().get(keep[i], j));
    return cell;
}

inline std::size_t koszul_dim(const GradedRing& R, const Mat& w_rows, int p, int q) {
    return koszul_cohomology(R, w_rows, p, q).dim;
}

// Dimension of the span, inside the cohomology of `cell`, of all the classes
// represented by the stacked rows.
inline std::size_t class_span_dim(const KoszulCell& cell, const std::vector<Mat>& rep_blocks) {
    IncrementalEchelon inc(cell.coboundaries.field(), cell.coboundaries.ambient());
    inc.add_rows(cell.coboundaries.basis());
    const std::size_t base = inc.rank();
    for (const Mat& block : rep_blocks)
        for (std::size_t i = 0; i < block.nrows(); ++i) inc.add_row(block.rows_slice(i, 1));
    return inc.rank() - base;
}

// A represented subspace of the cohomology of an ambient (p, q) cell.
struct SyzygyClassSpace {
    int p = 0, q = 0;
    std::size_t dim = 0;
    Mat representatives; // rows are cocycles in wedge^p V (x) M_q coordinates
};

// Image of K_{p,q}(M; W) -> K_{p,q}(M; V) for a subspace W of V, computed by
// pushing W-cocycles through wedge^p of the inclusion and reducing modulo
// V-coboundaries. `ambient` must be the (p, q) cell of the full complex.
inline SyzygyClassSpace subspace_cohomology_image(const GradedRing& R, const Subspace& w,
                                                  const KoszulCell& ambient) {
    const Field& F = R.field();
    const FieldPtr& Fp = R.field_ptr();
    const int p = ambient.p, q = ambient.q;
    const int n = R.nvars();
    const int d = static_cast<int>(w.dim());
    if (static_cast<int>(w.ambient()) != n) throw AmbientMismatch("W must be a subspace of V");

    SyzygyClassSpace out;
    out.p = p;
    out.q = q;
    out.representatives = Mat(Fp, 0, ambient.cocycles.ambient());
    if (d < p) return out; // wedge^p W = 0

    Mat w_cocycles = kernel_basis(koszul_differential(R, w.basis(), p, q)).basis();

    // wedge^p of the inclusion W -> V: column tau (p-tuple of W basis rows)
    // has entries the p x p minors of the basis matrix.
    WedgeBasis wb(p, d);
    WedgeBasis vb(p, n);
    Mat incl(Fp, vb.size(), wb.size());
    for (std::size_t c = 0; c < wb.size(); ++c) {
        const std::vector<int>& tau = wb.tuple(c);
        for (std::size_t r = 0; r < vb.size(); ++r) {
            const std::vector<int>& sigma = vb.tuple(r);
            // minor of w.basis() on rows tau, columns sigma
            Mat minor(Fp, static_cast<std::size_t>(p), static_cast<std::size_t>(p));
            for (int i = 0; i < p; ++i)
                for (int j = 0; j < p; ++j)
                    minor.set(static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                              w.basis().get(static_cast<std::size_t>(tau[static_cast<std::size_t>(i)]),
                                            static_cast<std::size_t>(sigma[static_cast<std::size_t>(j)])));
            // determinant by elimination on the tiny matrix
            Fel det = F.one();
            bool zero = false;
            for (int col = 0; col < p && !zero; ++col) {
                int piv = -1;
                for (int row = col; row < p; ++row)
                    if (!F.is_zero(minor.get(static_cast<std::size_t>(row), static_cast<std::size_t>(col)))) {
                        piv = row;
                        break;
                    }
                if (piv < 0) {
                    zero = true;
                    break;
                }
                if (piv != col) {
                    minor.swap_rows(static_cast<std::size_t>(piv), static_cast<std::size_t>(col));
                    det = F.neg(det);
                }
                Fel lead = minor.get(static_cast<std::size_t>(col), static_cast<std::size_t>(col));
                det = F.mul(det, lead);
                Fel linv = F.inv(lead);
                for (int row = col + 1; row < p; ++row) {
                    Fel c2 = minor.get(static_cast<std::size_t>(row), static_cast<std::size_t>(col));
                    if (F.is_zero(c2)) continue;
                    Fel factor = F.neg(F.mul(c2, linv));
                    minor.axpy_row(static_cast<std::size_t>(row), factor, static_cast<std::size_t>(col));
                }
            }
            if (!zero) incl.set(r, c, det);
        }
    }

    // Push cocycles into the ambient complex: block structure over M_q.
    const std::size_t dim_q = R.dim(q);
    Mat mapped(Fp, w_cocycles.nrows(), vb.size() * dim_q);
    for (std::size_t r = 0; r < w_cocycles.nrows(); ++r)
        for (std::size_t tw = 0; tw < wb.size(); ++tw)
            for (std::size_t tv = 0; tv < vb.size(); ++tv) {
                Fel c = incl.get(tv, tw);
                if (F.is_zero(c)) continue;
                for (std::size_t j = 0; j < dim_q; ++j) {
                    Fel add = F.mul(c, w_cocycles.get(r, tw * dim_q + j));
                    if (F.is_zero(add)) continue;
                    std::size_t col = tv * dim_q + j;
                    mapped.set(r, col, F.add(mapped.get(r, col), add));
                }
            }

    // Inclusion commutes with the differential, so images must be cocycles.
    if (mapped.nrows() > 0 && ambient.delta_out.nrows() > 0) {
        if (!ambient.delta_out.mul(mapped.transpose()).is_zero())
            throw Error(ErrorKind::internal, "mapped W-cocycles are not V-cocycles");
    }

    IncrementalEchelon inc(Fp, ambient.cocycles.ambient());
    inc.add_rows(ambient.coboundaries.basis());
    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < mapped.nrows(); ++r)
        if (inc.add_row(mapped.rows_slice(r, 1))) keep.push_back(r);
    out.dim = keep.size();
    out.representatives = Mat(Fp, keep.size(), mapped.ncols());
    for (std::size_t i = 0; i < keep.size(); ++i)
        for (std::size_t j = 0; j < mapped.ncols(); ++j)
            out.representatives.set(i, j, mapped.get(keep[i], j));
    return out;
}

// Grid of Koszul cohomology dimensions b_{p,q}.
struct BettiTable {
    int pmax = 0;
    int qmin = 0, qmax = 0;
    std::vector<std::vector<std::int64_t>> rows; // rows[q - qmin][p]
    std::string provenance;

    std::int64_t at(int p, int q) const { return rows[static_cast<std::size_t>(q - qmin)][static_cast<std::size_t>(p)]; }

    std::string to_text() const {
        std::ostringstream os;
        std::size_t width = 3;
        for (const auto& row : rows)
            for (std::int64_t v : row) width = std::max(width, std::to_string(v).size() + 1);
        os << "q\\p";
        for (int p = 0; p <= pmax; ++p) {
            std::string s = std::to_string(p);
            os << std::string(width + 1 - s.size(), ' ') << s;
        }
        os << '\n';
        for (int q = qmin; q <= qmax; ++q) {
            std::string label = std::to_string(q) + ":";
            os << label << std::string(label.size() < 3 ? 3 - label.size() : 0, ' ');
            for (int p = 0; p <= pmax; ++p) {
                std::string s = at(p, q) == 0 ? "." : std::to_string(at(p, q));
                os << std::string(width + 1 - s.size(), ' ') << s;
            }
            os << '\n';
        }
        return os.str();
    }
};

// Betti numbers over the full space V, sharing differential ranks between
// neighboring cells.
inline BettiTable betti_table(const GradedRing& R, int pmax, int qmin, int qmax,
                              std::string provenance = {}) {
    const int n = R.nvars();
    Mat vfull = Mat::identity(R.field_ptr(), static_cast<std::size_t>(n));
    std::map<std::pair<int, int>, std::size_t> rank_cache;
    auto out_rank = [&](int p, int q) -> std::size_t {
        auto key = std::make_pair(p, q);
        auto it = rank_cache.find(key);
        if (it != rank_cache.end()) return it->second;
        std::size_t r = rank(koszul_differential(R, vfull, p, q));
        rank_cache.emplace(key, r);
        return r;
    };
    BettiTable t;
    t.pmax = pmax;
    t.qmin = qmin;
    t.qmax = qmax;
    t.provenance = std::move(provenance);
    for (int q = qmin; q <= qmax; ++q) {
        std::vector<std::int64_t> row;
        for (int p = 0; p <= pmax; ++p) {
            const std::size_t wedge_p = binom(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(p));
            const std::size_t domain = wedge_p * (q >= 0 ? R.dim(q) : 0);
            const std::size_t kernel = domain - out_rank(p, q);
            const std::size_t image = out_rank(p + 1, q - 1);
            row.push_back(static_cast<std::int64_t>(kernel) - static_cast<std::int64_t>(image));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

} // namespace klab
