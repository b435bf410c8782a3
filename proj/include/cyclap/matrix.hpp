#pragma once

#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "fields.hpp"

namespace cyclap {

/// Dense exact matrix over a field, row-major. Zero-row and zero-column
/// matrices are first-class values (they show up constantly as maps in and
/// out of zero spaces).
template <Field F>
class Matrix {
  public:
    using Elem = typename F::Elem;

    Matrix(F field, std::size_t rows, std::size_t cols)
        : field_(field), rows_(rows), cols_(cols), entries_(rows * cols, field.zero()) {}

    Matrix(F field, std::size_t rows, std::size_t cols, std::vector<Elem> entries)
        : field_(field), rows_(rows), cols_(cols), entries_(std::move(entries)) {
        if (entries_.size() != rows_ * cols_) throw Error("entry count does not match shape");
    }

    static Matrix identity(F field, std::size_t n) {
        Matrix m(field, n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = field.one();
        return m;
    }

    const F& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Elem& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const Elem& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    bool operator==(const Matrix& other) const {
        if (!(field_ == other.field_) || rows_ != other.rows_ || cols_ != other.cols_) return false;
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (!field_.eq(entries_[i], other.entries_[i])) return false;
        }
        return true;
    }

    bool is_zero() const {
        for (const Elem& e : entries_) {
            if (!field_.is_zero(e)) return false;
        }
        return true;
    }

    Matrix operator*(const Matrix& rhs) const {
        if (cols_ != rhs.rows_) throw Error("matrix product shape mismatch");
        Matrix out(field_, rows_, rhs.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t k = 0; k < cols_; ++k) {
                const Elem& a = at(i, k);
                if (field_.is_zero(a)) continue;
                for (std::size_t j = 0; j < rhs.cols_; ++j) {
                    out.at(i, j) = field_.add(out.at(i, j), field_.mul(a, rhs.at(k, j)));
                }
            }
        }
        return out;
    }

    Matrix operator+(const Matrix& rhs) const {
        if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw Error("matrix sum shape mismatch");
        Matrix out = *this;
        for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = field_.add(out.entries_[i], rhs.entries_[i]);
        return out;
    }

    Matrix operator-(const Matrix& rhs) const {
        if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw Error("matrix difference shape mismatch");
        Matrix out = *this;
        for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = field_.sub(out.entries_[i], rhs.entries_[i]);
        return out;
    }

    Matrix transpose() const {
        Matrix out(field_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
        }
        return out;
    }

    std::vector<Elem> apply(const std::vector<Elem>& x) const {
        if (x.size() != cols_) throw Error("vector length does not match column count");
        std::vector<Elem> y(rows_, field_.zero());
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                if (!field_.is_zero(at(i, j))) y[i] = field_.add(y[i], field_.mul(at(i, j), x[j]));
            }
        }
        return y;
    }

    std::vector<Elem> row(std::size_t i) const {
        return std::vector<Elem>(entries_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                                 entries_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
    }

    std::vector<Elem> col(std::size_t j) const {
        std::vector<Elem> out;
        out.reserve(rows_);
        for (std::size_t i = 0; i < rows_; ++i) out.push_back(at(i, j));
        return out;
    }

    void set_row(std::size_t i, const std::vector<Elem>& r) {
        for (std::size_t j = 0; j < cols_; ++j) at(i, j) = r[j];
    }

    void set_col(std::size_t j, const std::vector<Elem>& c) {
        for (std::size_t i = 0; i < rows_; ++i) at(i, j) = c[i];
    }

    /// Stacks rows of `b` below `a` (same column count).
    static Matrix vstack(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.cols_) throw Error("vstack column mismatch");
        Matrix out(a.field_, a.rows_ + b.rows_, a.cols_);
        out.entries_ = a.entries_;
        out.entries_.insert(out.entries_.end(), b.entries_.begin(), b.entries_.end());
        return out;
    }

    /// Juxtaposes columns of `b` right of `a` (same row count).
    static Matrix hstack(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_) throw Error("hstack row mismatch");
        Matrix out(a.field_, a.rows_, a.cols_ + b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t j = 0; j < a.cols_; ++j) out.at(i, j) = a.at(i, j);
            for (std::size_t j = 0; j < b.cols_; ++j) out.at(i, a.cols_ + j) = b.at(i, j);
        }
        return out;
    }

    static Matrix block_diag(const Matrix& a, const Matrix& b) {
        Matrix out(a.field_, a.rows_ + b.rows_, a.cols_ + b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t j = 0; j < a.cols_; ++j) out.at(i, j) = a.at(i, j);
        }
        for (std::size_t i = 0; i < b.rows_; ++i) {
            for (std::size_t j = 0; j < b.cols_; ++j) out.at(a.rows_ + i, a.cols_ + j) = b.at(i, j);
        }
        return out;
    }

    /// Text form: one line per row, entries space-separated. A zero-column
    /// matrix prints empty lines.
    std::string str() const {
        std::ostringstream out;
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                if (j) out << ' ';
                out << field_.str(at(i, j));
            }
            out << '\n';
        }
        return out.str();
    }

  private:
    F field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Elem> entries_;
};

template <Field F>
struct RrefResult {
    Matrix<F> reduced;
    std::vector<std::size_t> pivots;
    std::size_t rank;
};

/// Reduced row echelon form by Gauss-Jordan elimination. Pivot tie-break:
/// leftmost column, then first row with a nonzero entry, so the result is
/// deterministic and canonical for the row space.
template <Field F>
RrefResult<F> rref(const Matrix<F>& m) {
    const F& f = m.field();
    Matrix<F> r = m;
    std::vector<std::size_t> pivots;
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < r.cols() && pivot_row < r.rows(); ++col) {
        std::size_t found = r.rows();
        for (std::size_t i = pivot_row; i < r.rows(); ++i) {
            if (!f.is_zero(r.at(i, col))) {
                found = i;
                break;
            }
        }
        if (found == r.rows()) continue;
        if (found != pivot_row) {
            for (std::size_t j = 0; j < r.cols(); ++j) std::swap(r.at(found, j), r.at(pivot_row, j));
        }
        const auto inv = f.inv(r.at(pivot_row, col));
        for (std::size_t j = col; j < r.cols(); ++j) r.at(pivot_row, j) = f.mul(inv, r.at(pivot_row, j));
        for (std::size_t i = 0; i < r.rows(); ++i) {
            if (i == pivot_row || f.is_zero(r.at(i, col))) continue;
            const auto factor = r.at(i, col);
            for (std::size_t j = col; j < r.cols(); ++j) {
                r.at(i, j) = f.sub(r.at(i, j), f.mul(factor, r.at(pivot_row, j)));
            }
        }
        pivots.push_back(col);
        ++pivot_row;
    }
    return RrefResult<F>{std::move(r), std::move(pivots), pivot_row};
}

template <Field F>
std::size_t rank(const Matrix<F>& m) {
    return rref(m).rank;
}

/// Canonical particular solution of M x = b: RREF of the augmented matrix,
/// free variables pinned to zero. nullopt when inconsistent.
template <Field F>
std::optional<std::vector<typename F::Elem>> solve(const Matrix<F>& m, const std::vector<typename F::Elem>& b) {
    const F& f = m.field();
    if (b.size() != m.rows()) throw Error("solve: right-hand side length mismatch");
    Matrix<F> aug(f, m.rows(), m.cols() + 1);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, m.cols()) = b[i];
    }
    auto res = rref(aug);
    for (std::size_t p = 0; p < res.pivots.size(); ++p) {
        if (res.pivots[p] == m.cols()) return std::nullopt;  // pivot in the b column
    }
    std::vector<typename F::Elem> x(m.cols(), f.zero());
    for (std::size_t p = 0; p < res.pivots.size(); ++p) x[res.pivots[p]] = res.reduced.at(p, m.cols());
    return x;
}

template <Field F>
std::optional<Matrix<F>> inverse(const Matrix<F>& m) {
    if (m.rows() != m.cols()) throw Error("inverse: matrix not square");
    const F& f = m.field();
    auto res = rref(Matrix<F>::hstack(m, Matrix<F>::identity(f, m.rows())));
    if (res.rank < m.rows()) return std::nullopt;
    Matrix<F> inv(f, m.rows(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.rows(); ++j) inv.at(i, j) = res.reduced.at(i, m.cols() + j);
    }
    return inv;
}

template <Field F>
bool is_invertible(const Matrix<F>& m) {
    return m.rows() == m.cols() && rank(m) == m.rows();
}

template <Field F>
Matrix<F> matrix_power(const Matrix<F>& m, std::size_t e) {
    if (m.rows() != m.cols()) throw Error("power: matrix not square");
    Matrix<F> acc = Matrix<F>::identity(m.field(), m.rows());
    for (std::size_t i = 0; i < e; ++i) acc = acc * m;
    return acc;
}

template <Field F>
std::vector<typename F::Elem> unit_vector(const F& f, std::size_t dim, std::size_t index) {
    std::vector<typename F::Elem> v(dim, f.zero());
    v[index] = f.one();
    return v;
}

template <Field F>
bool vec_is_zero(const F& f, const std::vector<typename F::Elem>& v) {
    for (const auto& e : v) {
        if (!f.is_zero(e)) return false;
    }
    return true;
}

template <Field F>
bool vec_eq(const F& f, const std::vector<typename F::Elem>& a, const std::vector<typename F::Elem>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!f.eq(a[i], b[i])) return false;
    }
    return true;
}

template <Field F>
std::vector<typename F::Elem> vec_add(const F& f, std::vector<typename F::Elem> a,
                                       const std::vector<typename F::Elem>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = f.add(a[i], b[i]);
    return a;
}

template <Field F>
std::vector<typename F::Elem> vec_sub(const F& f, std::vector<typename F::Elem> a,
                                       const std::vector<typename F::Elem>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = f.sub(a[i], b[i]);
    return a;
}

template <Field F>
std::vector<typename F::Elem> vec_scale(const F& f, const typename F::Elem& c, std::vector<typename F::Elem> a) {
    for (auto& e : a) e = f.mul(c, e);
    return a;
}

/// Seeded random matrix with small entries.
template <Field F>
Matrix<F> random_matrix(const F& f, Rng& rng, std::size_t rows, std::size_t cols) {
    Matrix<F> m(f, rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = f.random(rng);
    }
    return m;
}

/// Seeded random invertible matrix (rejection sampling; dim 0 gives the
/// empty matrix, which is vacuously invertible).
template <Field F>
Matrix<F> random_invertible(const F& f, Rng& rng, std::size_t n) {
    while (true) {
        Matrix<F> m = random_matrix(f, rng, n, n);
        if (is_invertible(m)) return m;
    }
}

}  // namespace cyclap
