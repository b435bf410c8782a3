#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"
#include "polynomial.hpp"
#include "subspace.hpp"

namespace cyclap {

/// Minimal monic annihilator of v under A, by the first linear dependence in
/// the Krylov sequence v, Av, A^2 v, ...
template <Field F>
Poly<F> min_poly_of_vector(const Matrix<F>& a, const std::vector<typename F::Elem>& v) {
    const F& f = a.field();
    const std::size_t n = a.rows();
    std::vector<std::vector<typename F::Elem>> krylov;
    std::vector<typename F::Elem> w = v;
    for (std::size_t j = 0; j <= n; ++j) {
        Matrix<F> cols(f, n, krylov.size());
        for (std::size_t c = 0; c < krylov.size(); ++c) cols.set_col(c, krylov[c]);
        if (auto coeffs = solve(cols, w)) {
            std::vector<typename F::Elem> poly(j + 1, f.zero());
            for (std::size_t i = 0; i < j; ++i) poly[i] = f.neg((*coeffs)[i]);
            poly[j] = f.one();
            return Poly<F>(f, std::move(poly));
        }
        krylov.push_back(w);
        w = a.apply(w);
    }
    throw Error("Krylov sequence failed to close");  // impossible: dependence by dimension n+1
}

/// Splits lcm(f, g) into coprime parts f1 * g1 with f1 | f and g1 | g, by gcd
/// computations alone (no factorization). Per prime power p^a | f, p^b | g,
/// the loop converges to p^a in f1 when a > b and to p^b in g1 otherwise.
template <Field F>
std::pair<Poly<F>, Poly<F>> coprime_split(const Poly<F>& f, const Poly<F>& g) {
    Poly<F> f1 = poly_div_exact(f, poly_gcd(f, g)).monic();
    Poly<F> g1 = g.monic();
    while (true) {
        Poly<F> e = poly_gcd(f1, g1);
        if (e.degree() == 0) break;
        g1 = poly_div_exact(g1, e);
        f1 = (f1 * e).monic();
    }
    return {f1, g1};
}

/// A vector whose annihilator is the minimal polynomial of A: merge the
/// standard basis vectors with the coprime-splitting trick, which combines a
/// pair of vectors into one whose annihilator is the lcm of theirs.
template <Field F>
std::pair<std::vector<typename F::Elem>, Poly<F>> max_annihilator_vector(const Matrix<F>& a) {
    const F& f = a.field();
    const std::size_t n = a.rows();
    if (n == 0) return {std::vector<typename F::Elem>{}, Poly<F>::one(f)};
    std::vector<typename F::Elem> best = unit_vector(f, n, 0);
    Poly<F> best_ann = min_poly_of_vector(a, best);
    for (std::size_t j = 1; j < n; ++j) {
        auto w = unit_vector(f, n, j);
        Poly<F> g = min_poly_of_vector(a, w);
        if (poly_divides(g, best_ann)) continue;
        if (poly_divides(best_ann, g)) {
            best = std::move(w);
            best_ann = std::move(g);
            continue;
        }
        auto [f1, g1] = coprime_split(best_ann, g);
        auto u = vec_add(f, poly_apply(poly_div_exact(best_ann, f1), a, best),
                         poly_apply(poly_div_exact(g, g1), a, w));
        best = std::move(u);
        best_ann = (f1 * g1).monic();
    }
    return {best, best_ann};
}

/// One cyclic block of a rational-canonical decomposition.
template <Field F>
struct CyclicChain {
    std::vector<typename F::Elem> generator;
    Poly<F> annihilator;
    std::vector<std::vector<typename F::Elem>> krylov;  // generator, A*generator, ...
};

/// Cyclic decomposition with the invariant-factor chain, largest annihilator
/// first. Each round takes a maximal-annihilator vector of the quotient
/// module V/S (its annihilator is the maximal conductor into S), corrects it
/// so its conductor actually kills it, and adjoins its Krylov block. The
/// correction divisibility is the classical cyclic decomposition lemma and is
/// asserted here.
template <Field F>
std::vector<CyclicChain<F>> cyclic_chains(const Matrix<F>& a) {
    const F& f = a.field();
    const std::size_t n = a.rows();
    std::vector<CyclicChain<F>> chains;
    Subspace<F> s = Subspace<F>::zero(f, n);

    while (s.dim() < n) {
        // quotient coordinates: non-pivot columns of the RREF basis of S
        std::vector<bool> is_pivot(n, false);
        for (std::size_t i = 0; i < s.dim(); ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (!f.is_zero(s.basis().at(i, j))) {
                    is_pivot[j] = true;
                    break;
                }
            }
        }
        std::vector<std::size_t> qcols;
        for (std::size_t j = 0; j < n; ++j) {
            if (!is_pivot[j]) qcols.push_back(j);
        }
        const std::size_t q = qcols.size();
        auto project = [&](const std::vector<typename F::Elem>& x) {
            auto r = s.reduce(x);
            std::vector<typename F::Elem> out;
            out.reserve(q);
            for (std::size_t c : qcols) out.push_back(r[c]);
            return out;
        };
        Matrix<F> induced(f, q, q);
        for (std::size_t c = 0; c < q; ++c) induced.set_col(c, project(a.apply(unit_vector(f, n, qcols[c]))));

        auto [qvec, cond] = max_annihilator_vector(induced);
        std::vector<typename F::Elem> w(n, f.zero());
        for (std::size_t c = 0; c < q; ++c) w[qcols[c]] = qvec[c];

        // express cond(A)w in the Krylov coordinates of S and divide out
        std::vector<typename F::Elem> fw = poly_apply(cond, a, w);
        if (!s.contains(fw)) throw Error("conductor does not map into the accumulated submodule");
        std::size_t total = 0;
        for (const auto& ch : chains) total += ch.krylov.size();
        Matrix<F> gens(f, n, total);
        {
            std::size_t c = 0;
            for (const auto& ch : chains) {
                for (const auto& kv : ch.krylov) gens.set_col(c++, kv);
            }
        }
        auto coeffs = solve(gens, fw);
        if (!coeffs) throw Error("Krylov coordinates unsolvable");
        std::size_t offset = 0;
        for (const auto& ch : chains) {
            std::vector<typename F::Elem> gcoeffs(coeffs->begin() + static_cast<std::ptrdiff_t>(offset),
                                                  coeffs->begin() + static_cast<std::ptrdiff_t>(offset + ch.krylov.size()));
            Poly<F> gi(f, std::move(gcoeffs));
            offset += ch.krylov.size();
            if (gi.is_zero()) continue;
            if (!poly_divides(cond, gi)) throw Error("cyclic decomposition correction failed");
            auto corr = poly_apply(poly_div_exact(gi, cond), a, ch.generator);
            w = vec_sub(f, std::move(w), corr);
        }

        CyclicChain<F> chain{w, cond, {}};
        std::vector<typename F::Elem> kv = w;
        for (std::ptrdiff_t d = 0; d < cond.degree(); ++d) {
            chain.krylov.push_back(kv);
            kv = a.apply(kv);
        }
        if (!vec_is_zero(f, poly_apply(cond, a, chain.generator))) throw Error("corrected generator is not killed");
        Subspace<F> block = Subspace<F>::span_of_vectors(f, n, chain.krylov);
        if (block.dim() != static_cast<std::size_t>(cond.degree())) throw Error("Krylov block is degenerate");
        s = sum(s, block);
        chains.push_back(std::move(chain));
    }
    return chains;
}

/// Invertible h with h*A = B*h, or nullopt when A and B are not similar.
/// Both matrices are brought to the same block-companion basis; h maps one
/// basis onto the other.
template <Field F>
std::optional<Matrix<F>> similarity_witness(const Matrix<F>& a, const Matrix<F>& b) {
    if (a.rows() != b.rows()) return std::nullopt;
    const F& f = a.field();
    auto ca = cyclic_chains(a);
    auto cb = cyclic_chains(b);
    if (ca.size() != cb.size()) return std::nullopt;
    for (std::size_t i = 0; i < ca.size(); ++i) {
        if (!(ca[i].annihilator == cb[i].annihilator)) return std::nullopt;
    }
    const std::size_t n = a.rows();
    Matrix<F> pa(f, n, n), pb(f, n, n);
    std::size_t c = 0;
    for (std::size_t i = 0; i < ca.size(); ++i) {
        for (std::size_t j = 0; j < ca[i].krylov.size(); ++j, ++c) {
            pa.set_col(c, ca[i].krylov[j]);
            pb.set_col(c, cb[i].krylov[j]);
        }
    }
    auto pa_inv = inverse(pa);
    if (!pa_inv) throw Error("canonical basis is singular");
    Matrix<F> h = pb * *pa_inv;
    if (!(h * a == b * h)) throw Error("similarity witness fails to intertwine");
    return h;
}

}  // namespace cyclap
