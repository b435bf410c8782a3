#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"

namespace cyclap {

/// Linear subspace of F^ambient in canonical form: the basis matrix is the
/// RREF of any spanning set, one row per basis vector, pivot columns strictly
/// increasing. Canonicality makes set equality a plain representation
/// comparison, which the chain-stabilization logic relies on.
template <Field F>
class Subspace {
  public:
    using Elem = typename F::Elem;

    static Subspace zero(const F& f, std::size_t ambient) { return Subspace(Matrix<F>(f, 0, ambient)); }

    static Subspace full(const F& f, std::size_t ambient) {
        return Subspace(Matrix<F>::identity(f, ambient));
    }

    /// Canonicalizes the row space of `spanning`.
    static Subspace span(const Matrix<F>& spanning) {
        auto res = rref(spanning);
        Matrix<F> basis(spanning.field(), res.rank, spanning.cols());
        for (std::size_t i = 0; i < res.rank; ++i) basis.set_row(i, res.reduced.row(i));
        return Subspace(std::move(basis));
    }

    static Subspace span_of_vectors(const F& f, std::size_t ambient, const std::vector<std::vector<Elem>>& vs) {
        Matrix<F> m(f, vs.size(), ambient);
        for (std::size_t i = 0; i < vs.size(); ++i) m.set_row(i, vs[i]);
        return span(m);
    }

    const Matrix<F>& basis() const { return basis_; }
    const F& field() const { return basis_.field(); }
    std::size_t ambient() const { return basis_.cols(); }
    std::size_t dim() const { return basis_.rows(); }
    bool is_zero() const { return dim() == 0; }

    bool operator==(const Subspace& other) const { return basis_ == other.basis_; }

    /// Membership by elimination against the RREF rows.
    bool contains(const std::vector<Elem>& x) const {
        return vec_is_zero(field(), reduce(x));
    }

    bool contains(const Subspace& other) const {
        if (other.ambient() != ambient()) throw Error("subspace ambient mismatch");
        for (std::size_t i = 0; i < other.dim(); ++i) {
            if (!contains(other.basis_.row(i))) return false;
        }
        return true;
    }

    /// Residue of x modulo the subspace (zero iff member). The pivot
    /// structure of the RREF basis makes this a single elimination sweep.
    std::vector<Elem> reduce(const std::vector<Elem>& x) const {
        if (x.size() != ambient()) throw Error("subspace ambient mismatch");
        const F& f = field();
        std::vector<Elem> r = x;
        for (std::size_t i = 0; i < dim(); ++i) {
            std::size_t p = pivot_of_row(i);
            if (f.is_zero(r[p])) continue;
            const Elem c = r[p];
            for (std::size_t j = 0; j < ambient(); ++j) r[j] = f.sub(r[j], f.mul(c, basis_.at(i, j)));
        }
        return r;
    }

    /// Coordinates of x in the stored basis; nullopt when x is outside.
    /// For an RREF basis the coordinates are just the pivot-column entries.
    std::optional<std::vector<Elem>> coordinates(const std::vector<Elem>& x) const {
        if (!contains(x)) return std::nullopt;
        std::vector<Elem> c;
        c.reserve(dim());
        for (std::size_t i = 0; i < dim(); ++i) c.push_back(x[pivot_of_row(i)]);
        return c;
    }

    /// The vector with the given basis coordinates.
    std::vector<Elem> from_coordinates(const std::vector<Elem>& c) const {
        const F& f = field();
        if (c.size() != dim()) throw Error("coordinate length mismatch");
        std::vector<Elem> x(ambient(), f.zero());
        for (std::size_t i = 0; i < dim(); ++i) {
            for (std::size_t j = 0; j < ambient(); ++j) x[j] = f.add(x[j], f.mul(c[i], basis_.at(i, j)));
        }
        return x;
    }

  private:
    explicit Subspace(Matrix<F> basis) : basis_(std::move(basis)) {}

    std::size_t pivot_of_row(std::size_t i) const {
        const F& f = field();
        for (std::size_t j = 0; j < ambient(); ++j) {
            if (!f.is_zero(basis_.at(i, j))) return j;
        }
        throw Error("zero row in subspace basis");
    }

    Matrix<F> basis_;
};

/// Basis of {x : Mx = 0}, RREF-normalized. Built from the RREF of M by the
/// standard free-variable parametrization.
template <Field F>
Subspace<F> kernel_basis(const Matrix<F>& m) {
    const F& f = m.field();
    auto res = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t p : res.pivots) is_pivot[p] = true;
    std::vector<std::vector<typename F::Elem>> gens;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        if (is_pivot[j]) continue;
        std::vector<typename F::Elem> v(m.cols(), f.zero());
        v[j] = f.one();
        for (std::size_t p = 0; p < res.pivots.size(); ++p) v[res.pivots[p]] = f.neg(res.reduced.at(p, j));
        gens.push_back(std::move(v));
    }
    return Subspace<F>::span_of_vectors(f, m.cols(), gens);
}

template <Field F>
Subspace<F> sum(const Subspace<F>& a, const Subspace<F>& b) {
    if (a.ambient() != b.ambient()) throw Error("subspace ambient mismatch");
    return Subspace<F>::span(Matrix<F>::vstack(a.basis(), b.basis()));
}

/// Intersection via the left kernel of the stacked bases: a relation
/// x*A - y*B = 0 pins down a common vector x*A.
template <Field F>
Subspace<F> intersect(const Subspace<F>& a, const Subspace<F>& b) {
    if (a.ambient() != b.ambient()) throw Error("subspace ambient mismatch");
    const F& f = a.field();
    Matrix<F> stacked = Matrix<F>::vstack(a.basis(), b.basis());
    Subspace<F> relations = kernel_basis(stacked.transpose());
    std::vector<std::vector<typename F::Elem>> gens;
    for (std::size_t i = 0; i < relations.dim(); ++i) {
        std::vector<typename F::Elem> rel = relations.basis().row(i);
        std::vector<typename F::Elem> v(a.ambient(), f.zero());
        for (std::size_t r = 0; r < a.dim(); ++r) {
            if (f.is_zero(rel[r])) continue;
            for (std::size_t j = 0; j < a.ambient(); ++j) {
                v[j] = f.add(v[j], f.mul(rel[r], a.basis().at(r, j)));
            }
        }
        gens.push_back(std::move(v));
    }
    return Subspace<F>::span_of_vectors(f, a.ambient(), gens);
}

template <Field F>
bool member(const Subspace<F>& a, const std::vector<typename F::Elem>& x) {
    return a.contains(x);
}

/// dim(A/B) for B ⊆ A; rejects non-nested inputs.
template <Field F>
std::size_t quotient_dim(const Subspace<F>& a, const Subspace<F>& b) {
    if (a.ambient() != b.ambient()) throw Error("subspace ambient mismatch");
    if (!a.contains(b)) throw PreconditionError("quotient_dim: second subspace is not contained in the first");
    return a.dim() - b.dim();
}

/// Image of a subspace under the column-vector map x -> Mx.
template <Field F>
Subspace<F> image_of(const Matrix<F>& m, const Subspace<F>& s) {
    if (s.ambient() != m.cols()) throw Error("image: ambient mismatch");
    return Subspace<F>::span(s.basis() * m.transpose());
}

/// Row space of M^T, i.e. the image of the full domain.
template <Field F>
Subspace<F> column_space(const Matrix<F>& m) {
    return Subspace<F>::span(m.transpose());
}

/// Rows spanning the annihilator {c : c·w = 0 for all w in S}; its kernel is
/// S itself, giving a "cutting equations" view of the subspace.
template <Field F>
Matrix<F> annihilator(const Subspace<F>& s) {
    return kernel_basis(s.basis()).basis();
}

/// Preimage {x : Mx in S}.
template <Field F>
Subspace<F> preimage_of(const Matrix<F>& m, const Subspace<F>& s) {
    if (s.ambient() != m.rows()) throw Error("preimage: ambient mismatch");
    Matrix<F> cuts = annihilator(s);
    return kernel_basis(cuts * m);
}

/// Member of S mapped by M to target, canonical solution; nullopt if none.
template <Field F>
std::optional<std::vector<typename F::Elem>> solve_in_subspace(const Matrix<F>& m, const Subspace<F>& s,
                                                               const std::vector<typename F::Elem>& target) {
    auto coeffs = solve(m * s.basis().transpose(), target);
    if (!coeffs) return std::nullopt;
    return s.from_coordinates(*coeffs);
}

/// Splits x as a + w with a in A, w in W, assuming ambient = A ⊕ W; returns
/// the pair (a, w) from the canonical solve.
template <Field F>
std::optional<std::pair<std::vector<typename F::Elem>, std::vector<typename F::Elem>>> split_along(
    const Subspace<F>& a, const Subspace<F>& w, const std::vector<typename F::Elem>& x) {
    Matrix<F> gens = Matrix<F>::hstack(a.basis().transpose(), w.basis().transpose());
    auto c = solve(gens, x);
    if (!c) return std::nullopt;
    std::vector<typename F::Elem> ca(c->begin(), c->begin() + static_cast<std::ptrdiff_t>(a.dim()));
    std::vector<typename F::Elem> cw(c->begin() + static_cast<std::ptrdiff_t>(a.dim()), c->end());
    return std::make_pair(a.from_coordinates(ca), w.from_coordinates(cw));
}

}  // namespace cyclap
