#pragma once

#include <cstddef>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"
#include "polynomial.hpp"

namespace cyclap {

namespace detail {

/// Dense matrix over F[t], just enough structure for the Smith reduction.
template <Field F>
struct PolyMatrix {
    PolyMatrix(const F& f, std::size_t n) : size(n), entries(n * n, Poly<F>::zero(f)) {}
    Poly<F>& at(std::size_t i, std::size_t j) { return entries[i * size + j]; }
    const Poly<F>& at(std::size_t i, std::size_t j) const { return entries[i * size + j]; }
    std::size_t size;
    std::vector<Poly<F>> entries;
};

}  // namespace detail

/// Invariant factors of the square matrix M: the nonconstant diagonal entries
/// of the Smith normal form of tI - M over F[t], monic, each dividing the
/// next. Two square matrices over F are similar iff these lists coincide.
template <Field F>
std::vector<Poly<F>> invariant_factors(const Matrix<F>& m) {
    if (m.rows() != m.cols()) throw PreconditionError("invariant_factors: matrix not square");
    const F& f = m.field();
    const std::size_t n = m.rows();
    detail::PolyMatrix<F> a(f, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            auto c = Poly<F>::constant(f, f.neg(m.at(i, j)));
            a.at(i, j) = i == j ? Poly<F>::t(f) + c : c;
        }
    }

    for (std::size_t k = 0; k < n; ++k) {
        while (true) {
            // minimal-degree nonzero pivot from the trailing submatrix
            std::size_t pi = n, pj = n;
            for (std::size_t i = k; i < n; ++i) {
                for (std::size_t j = k; j < n; ++j) {
                    if (a.at(i, j).is_zero()) continue;
                    if (pi == n || a.at(i, j).degree() < a.at(pi, pj).degree()) {
                        pi = i;
                        pj = j;
                    }
                }
            }
            if (pi == n) break;  // submatrix is zero
            if (pi != k) {
                for (std::size_t j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(pi, j));
            }
            if (pj != k) {
                for (std::size_t i = 0; i < n; ++i) std::swap(a.at(i, k), a.at(i, pj));
            }

            bool reduced = true;
            for (std::size_t i = k + 1; i < n; ++i) {
                if (a.at(i, k).is_zero()) continue;
                auto q = poly_divmod(a.at(i, k), a.at(k, k)).first;
                for (std::size_t j = k; j < n; ++j) a.at(i, j) = a.at(i, j) - q * a.at(k, j);
                if (!a.at(i, k).is_zero()) reduced = false;  // remainder survives, re-pivot
            }
            for (std::size_t j = k + 1; j < n; ++j) {
                if (a.at(k, j).is_zero()) continue;
                auto q = poly_divmod(a.at(k, j), a.at(k, k)).first;
                for (std::size_t i = k; i < n; ++i) a.at(i, j) = a.at(i, j) - q * a.at(i, k);
                if (!a.at(k, j).is_zero()) reduced = false;
            }
            if (!reduced) continue;

            // enforce divisibility of the remaining block by the pivot
            bool divisible = true;
            for (std::size_t i = k + 1; i < n && divisible; ++i) {
                for (std::size_t j = k + 1; j < n && divisible; ++j) {
                    if (!poly_divides(a.at(k, k), a.at(i, j))) {
                        for (std::size_t col = k; col < n; ++col) a.at(k, col) = a.at(k, col) + a.at(i, col);
                        divisible = false;
                    }
                }
            }
            if (divisible) break;
        }
    }

    std::vector<Poly<F>> factors;
    for (std::size_t k = 0; k < n; ++k) {
        if (a.at(k, k).is_zero()) throw Error("Smith form of tI - M has a zero diagonal entry");
        auto d = a.at(k, k).monic();
        if (d.degree() > 0) factors.push_back(std::move(d));
    }
    return factors;
}

template <Field F>
bool similar(const Matrix<F>& a, const Matrix<F>& b) {
    if (a.rows() != b.rows()) return false;
    auto fa = invariant_factors(a);
    auto fb = invariant_factors(b);
    if (fa.size() != fb.size()) return false;
    for (std::size_t i = 0; i < fa.size(); ++i) {
        if (!(fa[i] == fb[i])) return false;
    }
    return true;
}

}  // namespace cyclap
