#ifndef GFALIGN_FPLINALG_HPP
#define GFALIGN_FPLINALG_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "gfalign/error.hpp"
#include "gfalign/gf.hpp"
#include "gfalign/modp.hpp"

namespace gfalign {

// Dense row-major matrix over F_p.
class MatFp {
public:
    MatFp() = default;
    MatFp(u32 p, std::size_t rows, std::size_t cols) : p_(p), rows_(rows), cols_(cols), e_(rows * cols, 0) {}

    static MatFp identity(u32 p, std::size_t n) {
        MatFp m(p, n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1 % p;
        return m;
    }

    static MatFp from_rows(u32 p, const std::vector<std::vector<u32>>& rows) {
        std::size_t c = rows.empty() ? 0 : rows[0].size();
        MatFp m(p, rows.size(), c);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != c) throw Error(Errc::DimensionMismatch, "ragged rows");
            for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j] % p;
        }
        return m;
    }

    u32 p() const { return p_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    u32& operator()(std::size_t r, std::size_t c) { return e_[r * cols_ + c]; }
    u32 operator()(std::size_t r, std::size_t c) const { return e_[r * cols_ + c]; }
    const std::vector<u32>& data() const { return e_; }

    std::vector<u32> column(std::size_t c) const {
        std::vector<u32> v(rows_);
        for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
        return v;
    }

    void append_column(const std::vector<u32>& v) {
        if (cols_ == 0 && rows_ == 0) rows_ = v.size();
        if (v.size() != rows_) throw Error(Errc::DimensionMismatch, "column length");
        std::vector<u32> e(rows_ * (cols_ + 1));
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) e[r * (cols_ + 1) + c] = e_[r * cols_ + c];
            e[r * (cols_ + 1) + cols_] = v[r];
        }
        e_ = std::move(e);
        ++cols_;
    }

    MatFp hcat(const MatFp& o) const {
        if (rows_ != o.rows_ && cols_ != 0 && o.cols_ != 0) throw Error(Errc::DimensionMismatch, "hcat rows");
        if (cols_ == 0) return o;
        if (o.cols_ == 0) return *this;
        MatFp m(p_, rows_, cols_ + o.cols_);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) m(r, c) = (*this)(r, c);
            for (std::size_t c = 0; c < o.cols_; ++c) m(r, cols_ + c) = o(r, c);
        }
        return m;
    }

    MatFp operator*(const MatFp& o) const {
        if (cols_ != o.rows_) throw Error(Errc::DimensionMismatch, "product dimensions");
        MatFp m(p_, rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                u32 a = (*this)(i, k);
                if (a == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    m(i, j) = modp::add(m(i, j), modp::mul(a, o(k, j), p_), p_);
            }
        return m;
    }

    std::vector<u32> operator*(const std::vector<u32>& x) const {
        if (x.size() != cols_) throw Error(Errc::DimensionMismatch, "vector length");
        std::vector<u32> y(rows_, 0);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) y[i] = modp::add(y[i], modp::mul((*this)(i, k), x[k], p_), p_);
        return y;
    }

    MatFp operator+(const MatFp& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(Errc::DimensionMismatch, "sum dimensions");
        MatFp m(p_, rows_, cols_);
        for (std::size_t i = 0; i < e_.size(); ++i) m.e_[i] = modp::add(e_[i], o.e_[i], p_);
        return m;
    }

    MatFp scaled(u32 c) const {
        MatFp m = *this;
        for (u32& v : m.e_) v = modp::mul(v, c % p_, p_);
        return m;
    }

    bool operator==(const MatFp& o) const { return p_ == o.p_ && rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_; }

    std::string to_string() const {
        std::string out = "[";
        for (std::size_t r = 0; r < rows_; ++r) {
            out += '[';
            for (std::size_t c = 0; c < cols_; ++c) {
                out += std::to_string((*this)(r, c));
                if (c + 1 < cols_) out += ',';
            }
            out += ']';
            if (r + 1 < rows_) out += ',';
        }
        return out + "]";
    }

private:
    u32 p_ = 2;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<u32> e_;
};

namespace detail {

// In-place reduced row echelon form; pivots on the first nonzero entry in column order.
// Returns pivot columns. det_scale accumulates the determinant factor when requested.
inline std::vector<std::size_t> rref(MatFp& m, u32* det_scale = nullptr) {
    const u32 p = m.p();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    u32 det = 1 % p;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t piv = m.rows();
        for (std::size_t i = r; i < m.rows(); ++i)
            if (m(i, c) != 0) {
                piv = i;
                break;
            }
        if (piv == m.rows()) continue;
        if (piv != r) {
            for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m(piv, k), m(r, k));
            det = modp::neg(det, p);
        }
        u32 lead = m(r, c);
        det = modp::mul(det, lead, p);
        u32 iv = modp::inv(lead, p);
        for (std::size_t k = c; k < m.cols(); ++k) m(r, k) = modp::mul(m(r, k), iv, p);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r) continue;
            u32 f = m(i, c);
            if (f == 0) continue;
            for (std::size_t k = c; k < m.cols(); ++k) m(i, k) = modp::sub(m(i, k), modp::mul(f, m(r, k), p), p);
        }
        pivots.push_back(c);
        ++r;
    }
    if (det_scale) *det_scale = det;
    return pivots;
}

} // namespace detail

inline std::size_t rank(const MatFp& m) {
    MatFp a = m;
    return detail::rref(a).size();
}

inline u32 det(const MatFp& m) {
    if (m.rows() != m.cols()) throw Error(Errc::NonSquare, "determinant of non-square matrix");
    if (m.rows() == 0) return 1 % m.p();
    MatFp a = m;
    u32 d = 0;
    auto piv = detail::rref(a, &d);
    return piv.size() == m.rows() ? d : 0;
}

// Unique solution of M x = y; requires full column rank and a consistent system.
inline std::vector<u32> solve(const MatFp& m, const std::vector<u32>& y) {
    if (y.size() != m.rows()) throw Error(Errc::DimensionMismatch, "right-hand side length");
    MatFp aug = m;
    aug.append_column(y);
    auto piv = detail::rref(aug);
    if (!piv.empty() && piv.back() == m.cols()) throw Error(Errc::Inconsistent, "system has no solution");
    if (piv.size() < m.cols()) throw Error(Errc::Underdetermined, "system has free variables");
    std::vector<u32> x(m.cols(), 0);
    for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = aug(i, m.cols());
    return x;
}

// Basis of the right null space.
inline std::vector<std::vector<u32>> kernel(const MatFp& m) {
    MatFp a = m;
    auto piv = detail::rref(a);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : piv) is_pivot[c] = true;
    std::vector<std::vector<u32>> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        std::vector<u32> v(m.cols(), 0);
        v[free] = 1;
        for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = modp::neg(a(i, free), m.p());
        basis.push_back(std::move(v));
    }
    return basis;
}

// Digit stack of an element, high-to-low: [x_{n-1}; ...; x_0].
inline std::vector<u32> vec(const Gfe& a) {
    std::vector<u32> d = a.digits();
    return std::vector<u32>(d.rbegin(), d.rend());
}

inline Gfe unvec(const Field& f, const u32* hi_to_lo) {
    std::vector<u32> d(std::size_t(f.n()));
    for (int i = 0; i < f.n(); ++i) d[std::size_t(i)] = hi_to_lo[f.n() - 1 - i];
    return f.elem(f.from_digits(d.data()));
}

// Matrix of multiplication by h on digit stacks; column j is vec(h * s^(n-1-j)).
inline MatFp rep_matrix(const Gfe& h) {
    const Field& f = h.field();
    std::size_t n = std::size_t(f.n());
    MatFp m(f.p(), n, n);
    Gfe basis = f.one();
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<u32> col = vec(h * basis);
        std::size_t j = n - 1 - k;
        for (std::size_t r = 0; r < n; ++r) m(r, j) = col[r];
        basis = basis * f.elem(f.s_label());
    }
    return m;
}

// Block-diagonal replication over m channel uses.
inline MatFp extend(const MatFp& h, int m) {
    if (m < 1) throw Error(Errc::InvalidArgument, "extension count must be positive");
    std::size_t n = h.rows();
    MatFp out(h.p(), n * std::size_t(m), h.cols() * std::size_t(m));
    for (int b = 0; b < m; ++b)
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < h.cols(); ++c) out(std::size_t(b) * n + r, std::size_t(b) * h.cols() + c) = h(r, c);
    return out;
}

inline MatFp extend(const Gfe& h, int m) { return extend(rep_matrix(h), m); }

inline MatFp cols_from_elements(const std::vector<Gfe>& elems) {
    if (elems.empty()) return MatFp();
    const Field& f = elems[0].field();
    MatFp m(f.p(), std::size_t(f.n()), elems.size());
    for (std::size_t c = 0; c < elems.size(); ++c) {
        if (!elems[c].same_field(elems[0])) throw Error(Errc::CtxMismatch, "mixed fields");
        std::vector<u32> v = vec(elems[c]);
        for (std::size_t r = 0; r < v.size(); ++r) m(r, c) = v[r];
    }
    return m;
}

// Matrix over GF(p^n); columns are beamforming vectors over m channel uses.
class GfMatrix {
public:
    GfMatrix() = default;
    GfMatrix(const Field& f, std::size_t rows, std::size_t cols) : f_(&f), rows_(rows), cols_(cols), e_(rows * cols, 0) {}

    static GfMatrix from_columns(const Field& f, std::size_t rows, const std::vector<std::vector<Gfe>>& cols) {
        GfMatrix m(f, rows, cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (cols[c].size() != rows) throw Error(Errc::DimensionMismatch, "column length");
            for (std::size_t r = 0; r < rows; ++r) m.set(r, c, cols[c][r]);
        }
        return m;
    }

    const Field& field() const { return *f_; }
    const Field* field_ptr() const { return f_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Gfe at(std::size_t r, std::size_t c) const { return Gfe(*f_, e_[r * cols_ + c]); }
    u32 label(std::size_t r, std::size_t c) const { return e_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, const Gfe& v) {
        if (!v.field().same_as(*f_)) throw Error(Errc::CtxMismatch, "element from another field");
        e_[r * cols_ + c] = v.label();
    }
    void set_label(std::size_t r, std::size_t c, u32 v) { e_[r * cols_ + c] = v; }

    std::vector<Gfe> column(std::size_t c) const {
        std::vector<Gfe> v;
        for (std::size_t r = 0; r < rows_; ++r) v.push_back(at(r, c));
        return v;
    }

    void append_column(const std::vector<Gfe>& v) {
        if (cols_ == 0 && rows_ == 0) rows_ = v.size();
        if (v.size() != rows_) throw Error(Errc::DimensionMismatch, "column length");
        std::vector<u32> e(rows_ * (cols_ + 1));
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) e[r * (cols_ + 1) + c] = e_[r * cols_ + c];
            e[r * (cols_ + 1) + cols_] = v[r].label();
        }
        e_ = std::move(e);
        ++cols_;
    }

    GfMatrix scaled(const Gfe& g) const {
        GfMatrix m = *this;
        for (u32& v : m.e_) v = f_->mul(v, g.label());
        return m;
    }

    bool operator==(const GfMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_ && (f_ == o.f_ || (f_ && o.f_ && f_->same_as(*o.f_)));
    }

private:
    const Field* f_ = nullptr;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<u32> e_;
};

// Stacked digit vector of an m-vector over GF(p^n): use 0 first, each entry high-to-low.
inline std::vector<u32> stack(const std::vector<Gfe>& v) {
    std::vector<u32> out;
    for (const Gfe& x : v) {
        std::vector<u32> d = vec(x);
        out.insert(out.end(), d.begin(), d.end());
    }
    return out;
}

// F_p columns of gain * P, one per column of P.
inline MatFp signal_columns(const GfMatrix& pm, const Gfe& gain) {
    const Field& f = pm.field();
    std::size_t n = std::size_t(f.n());
    MatFp m(f.p(), pm.rows() * n, pm.cols());
    std::vector<u32> d(n);
    for (std::size_t c = 0; c < pm.cols(); ++c)
        for (std::size_t r = 0; r < pm.rows(); ++r) {
            f.to_digits(f.mul(pm.label(r, c), gain.label()), d.data());
            for (std::size_t k = 0; k < n; ++k) m(r * n + k, c) = d[n - 1 - k];
        }
    return m;
}

inline MatFp cols_from_vectors(const GfMatrix& pm) { return signal_columns(pm, pm.field().one()); }

// Incrementally maintained row-echelon basis of a subspace of F_p^dim.
class SpanBasis {
public:
    SpanBasis() = default;
    SpanBasis(u32 p, std::size_t dim) : p_(p), dim_(dim) {}

    std::size_t size() const { return rows_.size(); }
    std::size_t dim() const { return dim_; }

    std::vector<u32> reduce(std::vector<u32> v) const {
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            u32 f = v[piv_[i]];
            if (f == 0) continue;
            const auto& row = rows_[i];
            for (std::size_t k = piv_[i]; k < dim_; ++k) v[k] = modp::sub(v[k], modp::mul(f, row[k], p_), p_);
        }
        return v;
    }

    bool contains(const std::vector<u32>& v) const {
        auto r = reduce(v);
        for (u32 x : r)
            if (x != 0) return false;
        return true;
    }

    // Adds v; returns false if v was already in the span.
    bool add(const std::vector<u32>& v) {
        auto r = reduce(v);
        std::size_t piv = dim_;
        for (std::size_t k = 0; k < dim_; ++k)
            if (r[k] != 0) {
                piv = k;
                break;
            }
        if (piv == dim_) return false;
        u32 iv = modp::inv(r[piv], p_);
        for (std::size_t k = piv; k < dim_; ++k) r[k] = modp::mul(r[k], iv, p_);
        for (auto& row : rows_) {
            u32 f = row[piv];
            if (f == 0) continue;
            for (std::size_t k = piv; k < dim_; ++k) row[k] = modp::sub(row[k], modp::mul(f, r[k], p_), p_);
        }
        std::size_t pos = 0;
        while (pos < piv_.size() && piv_[pos] < piv) ++pos;
        rows_.insert(rows_.begin() + std::ptrdiff_t(pos), std::move(r));
        piv_.insert(piv_.begin() + std::ptrdiff_t(pos), piv);
        return true;
    }

    // Adds all columns of m; returns false as soon as one is dependent.
    bool add_columns(const MatFp& m) {
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (!add(m.column(c))) return false;
        return true;
    }

private:
    u32 p_ = 2;
    std::size_t dim_ = 0;
    std::vector<std::vector<u32>> rows_;
    std::vector<std::size_t> piv_;
};

// Position t of the fixed scan over mixed-radix labels [0, space): t -> (A t) mod space with A coprime to space.
inline u64 scan_label(u64 t, u64 space, u32 p) {
    unsigned __int128 a = 0x9E3779B97F4A7C15ULL % space;
    while (a == 0 || a % p == 0) ++a;
    return u64((a * t) % space);
}

inline std::size_t column_rank(const std::vector<MatFp>& blocks) {
    MatFp all;
    for (const auto& b : blocks) all = all.hcat(b);
    return all.cols() == 0 ? 0 : rank(all);
}

} // namespace gfalign

#endif // GFALIGN_FPLINALG_HPP
