#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cardinal.hpp"
#include "errors.hpp"
#include "invariant_factors.hpp"
#include "matrix.hpp"
#include "rational_form.hpp"
#include "rng.hpp"

namespace cyclap {

/// Representation of the cyclic quiver C_n: exact matrices M_k of shape
/// d_{k+1} x d_k for k in Z/n, plus a symbolic multiset of infinite Jordan
/// cycle-cells (base vertex -> multiplicity) standing in for the saturated
/// summand, which is classified by cell counts alone and never materialized
/// as matrices.
template <Field F>
class CycleRep {
  public:
    CycleRep(F field, std::size_t n, std::vector<std::size_t> dims, std::vector<Matrix<F>> maps,
             std::map<std::size_t, Card> saturated = {})
        : field_(field), n_(n), dims_(std::move(dims)), maps_(std::move(maps)), saturated_(std::move(saturated)) {
        if (n_ == 0) throw Error("cycle length must be positive");
        if (dims_.size() != n_ || maps_.size() != n_) throw Error("dims/maps must have n entries");
        for (std::size_t k = 0; k < n_; ++k) {
            if (maps_[k].rows() != dims_[(k + 1) % n_] || maps_[k].cols() != dims_[k]) {
                throw Error("map " + std::to_string(k) + " has the wrong shape");
            }
            if (!(maps_[k].field() == field_)) throw FieldMismatch();
        }
        for (auto it = saturated_.begin(); it != saturated_.end();) {
            if (it->first >= n_) throw Error("saturated base out of range");
            it = it->second.is_zero() ? saturated_.erase(it) : std::next(it);
        }
    }

    static CycleRep zero(F field, std::size_t n) {
        std::vector<Matrix<F>> maps(n, Matrix<F>(field, 0, 0));
        return CycleRep(field, n, std::vector<std::size_t>(n, 0), std::move(maps));
    }

    const F& field() const { return field_; }
    std::size_t n() const { return n_; }
    std::size_t vertex(std::ptrdiff_t k) const {
        std::ptrdiff_t m = k % static_cast<std::ptrdiff_t>(n_);
        return static_cast<std::size_t>(m < 0 ? m + static_cast<std::ptrdiff_t>(n_) : m);
    }
    std::size_t dim(std::size_t k) const { return dims_[vertex(static_cast<std::ptrdiff_t>(k))]; }
    const std::vector<std::size_t>& dims() const { return dims_; }
    const Matrix<F>& map(std::size_t k) const { return maps_[vertex(static_cast<std::ptrdiff_t>(k))]; }
    const std::map<std::size_t, Card>& saturated() const { return saturated_; }

    std::size_t total_dim() const {
        std::size_t t = 0;
        for (std::size_t d : dims_) t += d;
        return t;
    }

    bool matrix_only() const { return saturated_.empty(); }

    bool operator==(const CycleRep& other) const {
        return field_ == other.field_ && n_ == other.n_ && dims_ == other.dims_ && maps_ == other.maps_ &&
               saturated_ == other.saturated_;
    }

  private:
    F field_;
    std::size_t n_;
    std::vector<std::size_t> dims_;
    std::vector<Matrix<F>> maps_;
    std::map<std::size_t, Card> saturated_;
};

template <Field F>
void require_matrix_only(const CycleRep<F>& u) {
    if (!u.matrix_only()) throw SaturatedNotEmpty();
}

template <Field F>
void require_compatible(const CycleRep<F>& u, const CycleRep<F>& v) {
    if (!(u.field() == v.field())) throw FieldMismatch();
    if (u.n() != v.n()) throw CycleMismatch();
}

/// The around-the-cycle composite at vertex k: M_{k+n-1} ... M_{k+1} M_k,
/// an endomorphism matrix of F^{d_k}.
template <Field F>
Matrix<F> compose_cycle(const CycleRep<F>& u, std::size_t k) {
    require_matrix_only(u);
    Matrix<F> acc = Matrix<F>::identity(u.field(), u.dim(k));
    for (std::size_t i = 0; i < u.n(); ++i) acc = u.map(k + i) * acc;
    return acc;
}

/// At finite dimension local nilpotency is plain nilpotency of the composite
/// at vertex 0; the nilindex of a d-dimensional nilpotent operator is at
/// most d, so one power chain decides. The saturated cells are locally
/// nilpotent by construction, so only the matrix part is tested.
template <Field F>
bool is_locally_nilpotent(const CycleRep<F>& u) {
    Matrix<F> pi0 = Matrix<F>::identity(u.field(), u.dim(0));
    for (std::size_t i = 0; i < u.n(); ++i) pi0 = u.map(i) * pi0;
    return matrix_power(pi0, u.dim(0)).is_zero();
}

/// Least i >= 0 with u_{k+i-1} ... u_k (x) = 0.
template <Field F>
std::size_t local_nilindex(const CycleRep<F>& u, std::size_t k, std::vector<typename F::Elem> x) {
    require_matrix_only(u);
    if (!is_locally_nilpotent(u)) throw NotNilpotent();
    if (x.size() != u.dim(k)) throw Error("vector does not live at vertex " + std::to_string(k));
    std::size_t i = 0;
    while (!vec_is_zero(u.field(), x)) {
        x = u.map(k + i).apply(x);
        ++i;
    }
    return i;
}

template <Field F>
CycleRep<F> direct_sum(const CycleRep<F>& u, const CycleRep<F>& v) {
    require_compatible(u, v);
    std::vector<std::size_t> dims(u.n());
    std::vector<Matrix<F>> maps;
    maps.reserve(u.n());
    for (std::size_t k = 0; k < u.n(); ++k) {
        dims[k] = u.dim(k) + v.dim(k);
        maps.push_back(Matrix<F>::block_diag(u.map(k), v.map(k)));
    }
    std::map<std::size_t, Card> cells = u.saturated();
    for (const auto& [base, card] : v.saturated()) {
        auto [it, inserted] = cells.emplace(base, card);
        if (!inserted) it->second = it->second + card;
    }
    return CycleRep<F>(u.field(), u.n(), std::move(dims), std::move(maps), std::move(cells));
}

/// Re-indexing R^l: vertex k of the result carries vertex k-l of the input;
/// saturated cell bases move from b to b+l.
template <Field F>
CycleRep<F> shift(const CycleRep<F>& u, std::size_t l) {
    std::vector<std::size_t> dims(u.n());
    std::vector<Matrix<F>> maps;
    maps.reserve(u.n());
    for (std::size_t k = 0; k < u.n(); ++k) {
        dims[k] = u.dim(k + u.n() - (l % u.n()));
        maps.push_back(u.map(k + u.n() - (l % u.n())));
    }
    std::map<std::size_t, Card> cells;
    for (const auto& [base, card] : u.saturated()) cells.emplace((base + l) % u.n(), card);
    return CycleRep<F>(u.field(), u.n(), std::move(dims), std::move(maps), std::move(cells));
}

/// Per-vertex matrices certifying a morphism of cycles; the saturated parts
/// are matched by the identity on equal multisets, so no extra data is kept
/// for them.
template <Field F>
struct MorphismFamily {
    std::vector<Matrix<F>> phi;  // phi[k]: dim_v(k) x dim_u(k)
};

/// Exact check of the commuting squares phi_{k+1} M_k = M'_k phi_k.
template <Field F>
bool is_morphism(const CycleRep<F>& u, const CycleRep<F>& v, const MorphismFamily<F>& fam) {
    if (!(u.field() == v.field()) || u.n() != v.n() || fam.phi.size() != u.n()) return false;
    for (std::size_t k = 0; k < u.n(); ++k) {
        if (fam.phi[k].rows() != v.dim(k) || fam.phi[k].cols() != u.dim(k)) return false;
        if (!(fam.phi[(k + 1) % u.n()] * u.map(k) == v.map(k) * fam.phi[k])) return false;
    }
    return true;
}

/// Isomorphism = morphism with every phi_k invertible and equal saturated
/// multisets.
template <Field F>
bool is_isomorphism(const CycleRep<F>& u, const CycleRep<F>& v, const MorphismFamily<F>& fam) {
    if (!is_morphism(u, v, fam)) return false;
    for (const auto& p : fam.phi) {
        if (!is_invertible(p)) return false;
    }
    return u.saturated() == v.saturated();
}

template <Field F>
MorphismFamily<F> identity_family(const CycleRep<F>& u) {
    MorphismFamily<F> fam;
    for (std::size_t k = 0; k < u.n(); ++k) fam.phi.push_back(Matrix<F>::identity(u.field(), u.dim(k)));
    return fam;
}

template <Field F>
MorphismFamily<F> compose_families(const MorphismFamily<F>& second, const MorphismFamily<F>& first) {
    MorphismFamily<F> out;
    for (std::size_t k = 0; k < first.phi.size(); ++k) out.phi.push_back(second.phi[k] * first.phi[k]);
    return out;
}

template <Field F>
MorphismFamily<F> invert_family(const MorphismFamily<F>& fam) {
    MorphismFamily<F> out;
    for (const auto& p : fam.phi) {
        auto inv = inverse(p);
        if (!inv) throw Error("family is not invertible");
        out.phi.push_back(std::move(*inv));
    }
    return out;
}

template <Field F>
struct FittingSplit {
    CycleRep<F> nilpotent;
    CycleRep<F> regular;
    MorphismFamily<F> witness;  // isomorphism u -> nilpotent ⊕ regular
};

/// Fitting decomposition at each vertex: with P_k the stabilized power of the
/// around-the-cycle composite, U_k = Ker P_k ⊕ Im P_k; the maps restrict to a
/// locally nilpotent part and a regular part.
template <Field F>
FittingSplit<F> fitting_split(const CycleRep<F>& u) {
    require_matrix_only(u);
    const F& f = u.field();
    const std::size_t n = u.n();
    std::vector<Subspace<F>> nil_part, reg_part;
    for (std::size_t k = 0; k < n; ++k) {
        Matrix<F> power = matrix_power(compose_cycle(u, k), u.dim(k));
        nil_part.push_back(kernel_basis(power));
        reg_part.push_back(column_space(power));
    }

    auto restricted = [&](std::size_t k, const std::vector<Subspace<F>>& part) {
        const Subspace<F>& src = part[k];
        const Subspace<F>& dst = part[(k + 1) % n];
        Matrix<F> m(f, dst.dim(), src.dim());
        for (std::size_t j = 0; j < src.dim(); ++j) {
            auto image = u.map(k).apply(src.basis().row(j));
            auto coords = dst.coordinates(image);
            if (!coords) throw Error("Fitting component is not invariant");
            m.set_col(j, *coords);
        }
        return m;
    };

    std::vector<std::size_t> nil_dims(n), reg_dims(n);
    std::vector<Matrix<F>> nil_maps, reg_maps;
    for (std::size_t k = 0; k < n; ++k) {
        nil_dims[k] = nil_part[k].dim();
        reg_dims[k] = reg_part[k].dim();
        nil_maps.push_back(restricted(k, nil_part));
        reg_maps.push_back(restricted(k, reg_part));
    }
    CycleRep<F> nil(f, n, std::move(nil_dims), std::move(nil_maps));
    CycleRep<F> reg(f, n, std::move(reg_dims), std::move(reg_maps));

    // witness: coordinates of x in the stacked basis (nil rows, then reg rows)
    MorphismFamily<F> witness;
    for (std::size_t k = 0; k < n; ++k) {
        Matrix<F> columns =
            Matrix<F>::hstack(nil_part[k].basis().transpose(), reg_part[k].basis().transpose());
        auto inv = inverse(columns);
        if (!inv) throw Error("Fitting components do not span");
        witness.phi.push_back(std::move(*inv));
    }

    FittingSplit<F> out{std::move(nil), std::move(reg), std::move(witness)};
    if (!is_locally_nilpotent(out.nilpotent)) throw Error("nilpotent part failed its check");
    for (std::size_t k = 0; k < n; ++k) {
        if (!is_invertible(out.regular.map(k))) throw Error("regular part has a singular map");
    }
    if (!is_isomorphism(u, direct_sum(out.nilpotent, out.regular), out.witness)) {
        throw Error("Fitting witness failed validation");
    }
    return out;
}

template <Field F>
bool is_regular(const CycleRep<F>& u) {
    if (!u.matrix_only()) return false;
    for (std::size_t k = 0; k < u.n(); ++k) {
        if (!is_invertible(u.map(k))) return false;
    }
    return true;
}

/// Regular cycles are classified by the similarity class of the composite at
/// vertex 0. On equal invariant factors the isomorphism is assembled from a
/// similarity witness h as phi_k = M'_{k-1}...M'_0 h M_0^{-1}...M_{k-1}^{-1}.
template <Field F>
std::optional<MorphismFamily<F>> regular_iso(const CycleRep<F>& u, const CycleRep<F>& v) {
    require_compatible(u, v);
    if (!is_regular(u) || !is_regular(v)) throw PreconditionError("regular_iso: inputs must be regular");
    Matrix<F> a = compose_cycle(u, 0);
    Matrix<F> b = compose_cycle(v, 0);
    auto fa = invariant_factors(a);
    auto fb = invariant_factors(b);
    if (fa.size() != fb.size()) return std::nullopt;
    for (std::size_t i = 0; i < fa.size(); ++i) {
        if (!(fa[i] == fb[i])) return std::nullopt;
    }
    auto h = similarity_witness(a, b);
    if (!h) throw Error("invariant factors agree but no witness was built");
    MorphismFamily<F> fam;
    Matrix<F> phi = *h;
    fam.phi.push_back(phi);
    for (std::size_t k = 1; k < u.n(); ++k) {
        auto minv = inverse(u.map(k - 1));
        if (!minv) throw Error("regular map not invertible");
        phi = v.map(k - 1) * phi * *minv;
        fam.phi.push_back(phi);
    }
    if (!is_isomorphism(u, v, fam)) throw Error("regular isomorphism failed validation");
    return fam;
}

/// Seeded conjugation v_k = P_{k+1} M_k P_k^{-1}; the returned family (P_k)
/// is the witnessing isomorphism. Deterministic in the seed.
template <Field F>
std::pair<CycleRep<F>, MorphismFamily<F>> random_basis_change(const CycleRep<F>& u, std::uint64_t seed) {
    Rng rng(seed);
    const F& f = u.field();
    std::vector<Matrix<F>> ps;
    for (std::size_t k = 0; k < u.n(); ++k) ps.push_back(random_invertible(f, rng, u.dim(k)));
    std::vector<Matrix<F>> maps;
    for (std::size_t k = 0; k < u.n(); ++k) {
        auto pinv = inverse(ps[k]);
        maps.push_back(ps[(k + 1) % u.n()] * u.map(k) * *pinv);
    }
    CycleRep<F> v(f, u.n(), u.dims(), std::move(maps), u.saturated());
    MorphismFamily<F> fam{std::move(ps)};
    if (!is_isomorphism(u, v, fam)) throw Error("basis change failed validation");
    return {std::move(v), std::move(fam)};
}

}  // namespace cyclap
