#pragma once

#include "tilecoh/errors.hpp"
#include "tilecoh/integers.hpp"

#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace tilecoh {

/// Dense integer matrix, row-major, arbitrary-precision entries.
class IntMatrix {
public:
    IntMatrix() : rows_(0), cols_(0) {}
    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), e_(rows * cols, Int(0)) {}
    IntMatrix(std::size_t rows, std::size_t cols, std::vector<Int> entries)
        : rows_(rows), cols_(cols), e_(std::move(entries)) {
        if (e_.size() != rows_ * cols_)
            throw std::invalid_argument("IntMatrix: entry count does not match shape");
    }

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }
    static IntMatrix zero(std::size_t rows, std::size_t cols) { return IntMatrix(rows, cols); }

    /// Build from nested initializer-style data (rows of entries).
    static IntMatrix from_rows(const std::vector<std::vector<Int>>& rows) {
        std::size_t r = rows.size();
        std::size_t c = r == 0 ? 0 : rows[0].size();
        IntMatrix m(r, c);
        for (std::size_t i = 0; i < r; ++i) {
            if (rows[i].size() != c)
                throw std::invalid_argument("IntMatrix: ragged rows");
            for (std::size_t j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Int& at(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
    const Int& at(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

    const std::vector<Int>& entries() const { return e_; }

    bool operator==(const IntMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
    }
    bool operator!=(const IntMatrix& o) const { return !(*this == o); }

    bool is_zero() const {
        for (const auto& x : e_)
            if (x != 0) return false;
        return true;
    }

    IntMatrix transpose() const {
        IntMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    IntMatrix operator*(const IntMatrix& o) const {
        if (cols_ != o.rows_)
            throw std::invalid_argument("IntMatrix: product shape mismatch");
        IntMatrix p(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Int& a = at(i, k);
                if (a == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) p.at(i, j) += a * o.at(k, j);
            }
        return p;
    }

    std::vector<Int> operator*(const std::vector<Int>& v) const {
        if (cols_ != v.size())
            throw std::invalid_argument("IntMatrix: vector shape mismatch");
        std::vector<Int> r(rows_, Int(0));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (at(i, j) != 0) r[i] += at(i, j) * v[j];
        return r;
    }

    IntMatrix operator+(const IntMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("IntMatrix: sum shape mismatch");
        IntMatrix s(rows_, cols_);
        for (std::size_t i = 0; i < e_.size(); ++i) s.e_[i] = e_[i] + o.e_[i];
        return s;
    }

    IntMatrix operator-(const IntMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("IntMatrix: difference shape mismatch");
        IntMatrix s(rows_, cols_);
        for (std::size_t i = 0; i < e_.size(); ++i) s.e_[i] = e_[i] - o.e_[i];
        return s;
    }

    IntMatrix operator-() const {
        IntMatrix s(rows_, cols_);
        for (std::size_t i = 0; i < e_.size(); ++i) s.e_[i] = -e_[i];
        return s;
    }

    IntMatrix scaled(const Int& c) const {
        IntMatrix s(rows_, cols_);
        for (std::size_t i = 0; i < e_.size(); ++i) s.e_[i] = c * e_[i];
        return s;
    }

    std::vector<Int> col(std::size_t j) const {
        std::vector<Int> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = at(i, j);
        return c;
    }
    std::vector<Int> row(std::size_t i) const {
        std::vector<Int> r(cols_);
        for (std::size_t j = 0; j < cols_; ++j) r[j] = at(i, j);
        return r;
    }

    /// Columns side by side: [A | B].
    static IntMatrix hstack(const IntMatrix& a, const IntMatrix& b) {
        if (a.rows() != b.rows() && a.cols() != 0 && b.cols() != 0)
            throw std::invalid_argument("IntMatrix: hstack shape mismatch");
        std::size_t rows = a.cols() == 0 ? b.rows() : a.rows();
        IntMatrix m(rows, a.cols() + b.cols());
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < a.cols(); ++j) m.at(i, j) = a.at(i, j);
            for (std::size_t j = 0; j < b.cols(); ++j) m.at(i, a.cols() + j) = b.at(i, j);
        }
        return m;
    }

    /// Rows stacked: [A; B].
    static IntMatrix vstack(const IntMatrix& a, const IntMatrix& b) {
        if (a.cols() != b.cols() && a.rows() != 0 && b.rows() != 0)
            throw std::invalid_argument("IntMatrix: vstack shape mismatch");
        std::size_t cols = a.rows() == 0 ? b.cols() : a.cols();
        IntMatrix m(a.rows() + b.rows(), cols);
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = a.at(i, j);
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < cols; ++j) m.at(a.rows() + i, j) = b.at(i, j);
        return m;
    }

    static IntMatrix from_col(const std::vector<Int>& v) {
        IntMatrix m(v.size(), 1);
        for (std::size_t i = 0; i < v.size(); ++i) m.at(i, 0) = v[i];
        return m;
    }

    static IntMatrix from_cols(const std::vector<std::vector<Int>>& cols, std::size_t rows) {
        IntMatrix m(rows, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j].size() != rows)
                throw std::invalid_argument("IntMatrix: column length mismatch");
            for (std::size_t i = 0; i < rows; ++i) m.at(i, j) = cols[j][i];
        }
        return m;
    }

    IntMatrix cols_slice(std::size_t j0, std::size_t j1) const {
        IntMatrix m(rows_, j1 - j0);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = j0; j < j1; ++j) m.at(i, j - j0) = at(i, j);
        return m;
    }

    std::string str() const {
        std::ostringstream os;
        os << "[";
        for (std::size_t i = 0; i < rows_; ++i) {
            os << (i ? " [" : "[");
            for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << at(i, j).str();
            os << "]" << (i + 1 < rows_ ? "\n" : "");
        }
        os << "]";
        return os.str();
    }

private:
    std::size_t rows_, cols_;
    std::vector<Int> e_;
};

/// U * M * V = D with U, V unimodular and D diagonal, d_1 | d_2 | ..., all
/// diagonal entries nonnegative, zeros last.  The inverses of U and V are
/// tracked alongside so lattice computations never invert a matrix.
struct SnfDecomposition {
    IntMatrix u, d, v;
    IntMatrix uinv, vinv;
    std::size_t rank = 0;

    Int diag(std::size_t i) const {
        if (i >= d.rows() || i >= d.cols()) return 0;
        return d.at(i, i);
    }
};

namespace detail {

struct SnfOps {
    IntMatrix* a;
    IntMatrix* u;
    IntMatrix* uinv;
    IntMatrix* v;
    IntMatrix* vinv;

    void swap_rows(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t c = 0; c < a->cols(); ++c) std::swap(a->at(i, c), a->at(j, c));
        for (std::size_t c = 0; c < u->cols(); ++c) std::swap(u->at(i, c), u->at(j, c));
        for (std::size_t r = 0; r < uinv->rows(); ++r) std::swap(uinv->at(r, i), uinv->at(r, j));
    }
    void swap_cols(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t r = 0; r < a->rows(); ++r) std::swap(a->at(r, i), a->at(r, j));
        for (std::size_t r = 0; r < v->rows(); ++r) std::swap(v->at(r, i), v->at(r, j));
        for (std::size_t c = 0; c < vinv->cols(); ++c) std::swap(vinv->at(i, c), vinv->at(j, c));
    }
    // row i += k * row j
    void add_row(std::size_t i, std::size_t j, const Int& k) {
        if (k == 0) return;
        for (std::size_t c = 0; c < a->cols(); ++c) a->at(i, c) += k * a->at(j, c);
        for (std::size_t c = 0; c < u->cols(); ++c) u->at(i, c) += k * u->at(j, c);
        for (std::size_t r = 0; r < uinv->rows(); ++r) uinv->at(r, j) -= k * uinv->at(r, i);
    }
    // col i += k * col j
    void add_col(std::size_t i, std::size_t j, const Int& k) {
        if (k == 0) return;
        for (std::size_t r = 0; r < a->rows(); ++r) a->at(r, i) += k * a->at(r, j);
        for (std::size_t r = 0; r < v->rows(); ++r) v->at(r, i) += k * v->at(r, j);
        for (std::size_t c = 0; c < vinv->cols(); ++c) vinv->at(j, c) -= k * vinv->at(i, c);
    }
    void negate_row(std::size_t i) {
        for (std::size_t c = 0; c < a->cols(); ++c) a->at(i, c) = -a->at(i, c);
        for (std::size_t c = 0; c < u->cols(); ++c) u->at(i, c) = -u->at(i, c);
        for (std::size_t r = 0; r < uinv->rows(); ++r) uinv->at(r, i) = -uinv->at(r, i);
    }
};

} // namespace detail

/// Smith normal form with smallest-pivot selection (keeps entries small on the
/// desk-scale matrices this library sees).  Deterministic.
inline SnfDecomposition smith_normal_form(const IntMatrix& m) {
    SnfDecomposition s;
    s.d = m;
    s.u = IntMatrix::identity(m.rows());
    s.uinv = IntMatrix::identity(m.rows());
    s.v = IntMatrix::identity(m.cols());
    s.vinv = IntMatrix::identity(m.cols());
    detail::SnfOps ops{&s.d, &s.u, &s.uinv, &s.v, &s.vinv};

    IntMatrix& a = s.d;
    const std::size_t R = a.rows(), C = a.cols();
    std::size_t t = 0;

    // Re-selecting the globally smallest pivot after every reduction round
    // keeps the quotients (and hence the entry sizes) under control.
    auto select_pivot = [&](std::size_t from) -> bool {
        std::size_t pi = 0, pj = 0;
        bool found = false;
        Int best = 0;
        for (std::size_t i = from; i < R; ++i)
            for (std::size_t j = from; j < C; ++j) {
                const Int& x = a.at(i, j);
                if (x == 0) continue;
                Int ax = int_abs(x);
                if (!found || ax < best) {
                    found = true;
                    best = ax;
                    pi = i;
                    pj = j;
                }
            }
        if (found) {
            ops.swap_rows(from, pi);
            ops.swap_cols(from, pj);
        }
        return found;
    };

    while (t < R && t < C) {
        if (!select_pivot(t)) break;
        for (;;) {
            bool disturbed = false;
            for (std::size_t i = t + 1; i < R; ++i) {
                if (a.at(i, t) == 0) continue;
                Int q = a.at(i, t) / a.at(t, t);
                ops.add_row(i, t, -q);
                if (a.at(i, t) != 0) disturbed = true;
            }
            for (std::size_t j = t + 1; j < C; ++j) {
                if (a.at(t, j) == 0) continue;
                Int q = a.at(t, j) / a.at(t, t);
                ops.add_col(j, t, -q);
                if (a.at(t, j) != 0) disturbed = true;
            }
            if (disturbed) {
                // some remainder is smaller than the pivot; restart from it
                select_pivot(t);
                continue;
            }
            // pivot must divide the trailing submatrix
            bool fixed = false;
            for (std::size_t i = t + 1; i < R && !fixed; ++i)
                for (std::size_t j = t + 1; j < C && !fixed; ++j)
                    if (!divides(a.at(t, t), a.at(i, j))) {
                        ops.add_row(t, i, 1);
                        fixed = true;
                    }
            if (!fixed) break;
        }
        if (a.at(t, t) < 0) ops.negate_row(t);
        ++t;
    }
    s.rank = 0;
    for (std::size_t i = 0; i < R && i < C; ++i)
        if (a.at(i, i) != 0) ++s.rank;
    return s;
}

/// Integer rank via SNF.
inline std::size_t rank(const IntMatrix& m) { return smith_normal_form(m).rank; }

inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b;
    if (a % b != 0 && ((a < 0) != (b < 0))) --q;
    return q;
}

/// Column Hermite form of the lattice generated by the columns of g, with
/// zero columns stripped: a canonical basis with size-reduced entries.  This
/// keeps coefficient growth under control everywhere a lattice basis feeds a
/// later normal-form computation.
inline IntMatrix hnf_basis(IntMatrix b) {
    std::size_t n = b.rows(), s = b.cols();
    auto swap_cols = [&](std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t r = 0; r < n; ++r) std::swap(b.at(r, i), b.at(r, j));
    };
    auto add_col = [&](std::size_t i, std::size_t j, const Int& k) {
        if (k == 0) return;
        for (std::size_t r = 0; r < n; ++r) b.at(r, i) += k * b.at(r, j);
    };
    std::size_t c = 0;
    for (std::size_t r = 0; r < n && c < s; ++r) {
        // Euclid across columns c..s-1 on row r
        for (;;) {
            std::size_t best = s;
            for (std::size_t j = c; j < s; ++j)
                if (b.at(r, j) != 0 &&
                    (best == s || int_abs(b.at(r, j)) < int_abs(b.at(r, best))))
                    best = j;
            if (best == s) break;
            swap_cols(c, best);
            bool clear = true;
            for (std::size_t j = c + 1; j < s; ++j) {
                if (b.at(r, j) == 0) continue;
                add_col(j, c, -Int(b.at(r, j) / b.at(r, c)));
                if (b.at(r, j) != 0) clear = false;
            }
            if (clear) break;
        }
        if (b.at(r, c) == 0) continue;
        if (b.at(r, c) < 0)
            for (std::size_t rr = 0; rr < n; ++rr) b.at(rr, c) = -b.at(rr, c);
        // size-reduce the columns of earlier pivots against this one
        for (std::size_t j = 0; j < c; ++j)
            add_col(j, c, -floor_div(b.at(r, j), b.at(r, c)));
        ++c;
    }
    return b.cols_slice(0, c);
}

/// Basis of the integer kernel of m (Hermite-reduced).
inline IntMatrix kernel_basis(const IntMatrix& m) {
    SnfDecomposition s = smith_normal_form(m);
    return hnf_basis(s.v.cols_slice(s.rank, m.cols()));
}

/// A basis for the lattice *generated by* the columns of g (columns of the
/// result; full column rank).
inline IntMatrix lattice_basis(const IntMatrix& g) { return hnf_basis(g); }

/// Solve m * x = b over the integers.  Returns nullopt when no integral
/// solution exists.  If the columns of m are independent the solution is
/// unique.
inline std::optional<std::vector<Int>> solve(const SnfDecomposition& s, const std::vector<Int>& b) {
    std::vector<Int> c = s.u * b;
    std::size_t n = s.v.rows();
    std::vector<Int> y(n, Int(0));
    for (std::size_t i = 0; i < c.size(); ++i) {
        Int di = s.diag(i);
        if (di == 0) {
            if (c[i] != 0) return std::nullopt;
        } else {
            if (!divides(di, c[i])) return std::nullopt;
            if (i < n) y[i] = c[i] / di;
        }
    }
    return s.v * y;
}

inline std::optional<std::vector<Int>> solve(const IntMatrix& m, const std::vector<Int>& b) {
    return solve(smith_normal_form(m), b);
}

/// Is v in the lattice generated by the columns whose SNF is s?
inline bool in_lattice(const SnfDecomposition& s, const std::vector<Int>& v) {
    return solve(s, v).has_value();
}

/// Determinant by fraction-free Gaussian elimination (Bareiss).
inline Int determinant(IntMatrix a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("determinant: square matrix required");
    std::size_t n = a.rows();
    if (n == 0) return 1;
    Int sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a.at(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && a.at(p, k) == 0) ++p;
            if (p == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(p, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a.at(i, j) = (a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j)) / prev;
        prev = a.at(k, k);
    }
    return sign * a.at(n - 1, n - 1);
}

/// Characteristic polynomial coefficients [1, c1, ..., cn] of a square matrix
/// (Faddeev-LeVerrier; all divisions exact).
inline std::vector<Int> char_poly(const IntMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("char_poly: square matrix required");
    std::size_t n = a.rows();
    std::vector<Int> c(n + 1);
    c[0] = 1;
    IntMatrix m = IntMatrix::zero(n, n);
    for (std::size_t k = 1; k <= n; ++k) {
        // M_k = A * (M_{k-1} + c_{k-1} I)
        IntMatrix t = m;
        for (std::size_t i = 0; i < n; ++i) t.at(i, i) += c[k - 1];
        m = a * t;
        Int tr = 0;
        for (std::size_t i = 0; i < n; ++i) tr += m.at(i, i);
        c[k] = -tr / Int(k);
    }
    return c;
}

/// Evaluate a char_poly-style coefficient vector at x.
inline Int poly_eval(const std::vector<Int>& coeffs, const Int& x) {
    Int r = 0;
    for (const Int& c : coeffs) r = r * x + c;
    return r;
}

/// Minimal rational-matrix support for eigenbasis coordinates.
class RatMatrix {
public:
    RatMatrix() : rows_(0), cols_(0) {}
    RatMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), e_(rows * cols, Rat(0)) {}

    static RatMatrix from_int(const IntMatrix& m) {
        RatMatrix r(m.rows(), m.cols());
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) r.at(i, j) = Rat(m.at(i, j));
        return r;
    }
    static RatMatrix identity(std::size_t n) {
        RatMatrix r(n, n);
        for (std::size_t i = 0; i < n; ++i) r.at(i, i) = 1;
        return r;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Rat& at(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
    const Rat& at(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

    bool operator==(const RatMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
    }

    RatMatrix operator*(const RatMatrix& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("RatMatrix: product shape mismatch");
        RatMatrix p(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Rat& a = at(i, k);
                if (a == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) p.at(i, j) += a * o.at(k, j);
            }
        return p;
    }

    bool is_zero() const {
        for (const auto& x : e_)
            if (x != 0) return false;
        return true;
    }

private:
    std::size_t rows_, cols_;
    std::vector<Rat> e_;
};

/// Solve a * x = b over Q, where a is integral with independent columns.
/// Throws when inconsistent.
inline RatMatrix rat_solve(const SnfDecomposition& s, const RatMatrix& b) {
    // x = V * D^{-1} * (U * b)
    RatMatrix ub = RatMatrix::from_int(s.u) * b;
    std::size_t n = s.v.rows();
    RatMatrix y(n, b.cols());
    for (std::size_t i = 0; i < ub.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            Int di = s.diag(i);
            if (di == 0) {
                if (ub.at(i, j) != 0)
                    throw std::invalid_argument("rat_solve: inconsistent system");
            } else if (i < n) {
                y.at(i, j) = ub.at(i, j) / Rat(di);
            }
        }
    return RatMatrix::from_int(s.v) * y;
}

} // namespace tilecoh
