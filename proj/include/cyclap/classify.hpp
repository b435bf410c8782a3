#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "admissible.hpp"
#include "extension.hpp"
#include "filtration.hpp"
#include "terminal.hpp"

namespace cyclap {

/// Multiset of canonical cells: finite cells keyed by (base vertex, size)
/// and symbolic infinite Jordan cycle-cells keyed by base vertex.
struct CellMultiset {
    std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> finite;  // (base, size >= 1) -> count
    std::map<std::size_t, Card> infinite;

    bool operator==(const CellMultiset& other) const = default;

    std::string str() const {
        std::ostringstream out;
        for (const auto& [key, count] : finite) {
            out << "cell " << key.first << ' ' << key.second << ' ' << count << "\n";
        }
        for (const auto& [base, card] : infinite) {
            out << "infcell " << base << ' ' << card.str() << "\n";
        }
        return out.str();
    }
};

/// Inverts the invariant bookkeeping: an entry at (k, alpha) is contributed
/// by cells of base k - alpha and size alpha + 1.
inline CellMultiset cells_of_table(const InvariantTable& table) {
    CellMultiset cells;
    for (const auto& [key, card] : table.finite) {
        const auto& [k, alpha] = key;
        if (!alpha.is_finite()) throw UnsupportedTransfinite();
        if (card.is_aleph0()) throw Unrepresentable();
        std::size_t a = static_cast<std::size_t>(alpha.as_finite());
        std::size_t base = (k + table.n - (a % table.n)) % table.n;
        cells.finite[{base, a + 1}] += card.finite_value();
    }
    cells.infinite = table.infinite;
    return cells;
}

template <Field F>
struct CellRealization {
    CycleRep<F> rep;
    TerminalRep terminal;                          // pointed sum of the finite cells
    std::vector<std::vector<std::string>> names;   // element names of the standard basis
};

/// Direct sum of the canonical cells of a finite-support table, built as one
/// pointed sum so the standard basis comes with names; the kappa_inf rows
/// become the symbolic saturated multiset.
template <Field F>
CellRealization<F> realize_cells(const CellMultiset& cells, const F& field, std::size_t n) {
    std::vector<TerminalRep> parts;
    for (const auto& [key, count] : cells.finite) {
        for (std::uint64_t i = 0; i < count; ++i) parts.push_back(canonical_cell(n, key.first, key.second));
    }
    TerminalRep combined = parts.empty() ? TerminalRep::trivial(n) : pointed_sum(parts);
    Realization<F> realized = linear_realization_named(combined, field);
    CycleRep<F> rep(field, n, realized.rep.dims(),
                    [&] {
                        std::vector<Matrix<F>> ms;
                        for (std::size_t k = 0; k < n; ++k) ms.push_back(realized.rep.map(k));
                        return ms;
                    }(),
                    std::map<std::size_t, Card>(cells.infinite.begin(), cells.infinite.end()));
    return CellRealization<F>{std::move(rep), std::move(combined), std::move(realized.names)};
}

/// Canonical representative of an invariant table: kappa of the result is the
/// table itself. Infinite ordinals in the finite support and aleph0 finite
/// multiplicities are rejected by name.
template <Field F>
CycleRep<F> realize_finite(const InvariantTable& table, const F& field) {
    return realize_cells<F>(cells_of_table(table), field, table.n).rep;
}

template <Field F>
struct Decomposition {
    CellMultiset cells;
    CycleRep<F> canonical;       // the realized direct sum of cells
    MorphismFamily<F> morphism;  // isomorphism from the input to `canonical`
};

/// Canonical-cell decomposition of a locally nilpotent cycle, with a
/// certified isomorphism onto the realized direct sum.
template <Field F>
Decomposition<F> decompose(const CycleRep<F>& u) {
    if (!is_locally_nilpotent(u)) throw NotNilpotent();
    InvariantTable table = kaplansky_invariants(u);
    CellMultiset cells = cells_of_table(table);
    CellRealization<F> realized = realize_cells<F>(cells, u.field(), u.n());
    auto fam = build_isomorphism(u, realized.rep);
    if (!fam) throw Error("internal: realization has different invariants than its table");
    return Decomposition<F>{std::move(cells), std::move(realized.rep), std::move(*fam)};
}

template <Field F>
struct IsoDecision {
    bool isomorphic = false;
    std::optional<MorphismFamily<F>> certificate;
    std::string reason;  // names the first differing invariant on negative verdicts
};

namespace detail {

template <Field F>
CycleRep<F> strip_cells(const CycleRep<F>& u) {
    std::vector<Matrix<F>> ms;
    for (std::size_t k = 0; k < u.n(); ++k) ms.push_back(u.map(k));
    return CycleRep<F>(u.field(), u.n(), u.dims(), std::move(ms));
}

template <Field F>
CycleRep<F> with_cells(const CycleRep<F>& u, const std::map<std::size_t, Card>& cells) {
    std::vector<Matrix<F>> ms;
    for (std::size_t k = 0; k < u.n(); ++k) ms.push_back(u.map(k));
    return CycleRep<F>(u.field(), u.n(), u.dims(), std::move(ms), cells);
}

}  // namespace detail

/// Full decision procedure. Locally nilpotent inputs are decided by table
/// equality with a constructive certificate. Otherwise both sides are split
/// into locally nilpotent and regular parts; the verdict requires the
/// nilpotent tables to agree and the regular composites to be similar, and
/// the certificate is the block-diagonal assembly of the two part
/// certificates conjugated by the split witnesses.
template <Field F>
IsoDecision<F> decide_isomorphic(const CycleRep<F>& u, const CycleRep<F>& v) {
    require_compatible(u, v);
    IsoDecision<F> out;
    const bool nu = is_locally_nilpotent(u);
    const bool nv = is_locally_nilpotent(v);
    if (nu && nv) {
        InvariantTable tu = kaplansky_invariants(u);
        InvariantTable tv = kaplansky_invariants(v);
        if (auto diff = InvariantTable::first_difference(tu, tv)) {
            out.reason = *diff;
            return out;
        }
        out.certificate = build_isomorphism(u, v);
        if (!out.certificate) throw Error("internal: equal tables without certificate");
        out.isomorphic = true;
        return out;
    }

    FittingSplit<F> su = fitting_split(detail::strip_cells(u));
    FittingSplit<F> sv = fitting_split(detail::strip_cells(v));
    CycleRep<F> nil_u = detail::with_cells(su.nilpotent, u.saturated());
    CycleRep<F> nil_v = detail::with_cells(sv.nilpotent, v.saturated());

    InvariantTable tu = kaplansky_invariants(nil_u);
    InvariantTable tv = kaplansky_invariants(nil_v);
    if (auto diff = InvariantTable::first_difference(tu, tv)) {
        out.reason = *diff + " (locally nilpotent parts)";
        return out;
    }
    std::optional<MorphismFamily<F>> reg = regular_iso(su.regular, sv.regular);
    if (!reg) {
        out.reason = "invariant factors of the regular parts differ";
        return out;
    }
    auto nil = build_isomorphism(nil_u, nil_v);
    if (!nil) throw Error("internal: equal nilpotent tables without certificate");

    MorphismFamily<F> combined;
    for (std::size_t k = 0; k < u.n(); ++k) {
        Matrix<F> block = Matrix<F>::block_diag(nil->phi[k], reg->phi[k]);
        auto wv_inv = inverse(sv.witness.phi[k]);
        if (!wv_inv) throw Error("internal: split witness not invertible");
        combined.phi.push_back(*wv_inv * block * su.witness.phi[k]);
    }
    if (!is_isomorphism(u, v, combined)) throw Error("internal: combined certificate failed validation");
    out.isomorphic = true;
    out.certificate = std::move(combined);
    return out;
}

/// Per-vertex named basis with the successor structure: each map sends a
/// basis vector to the named successor vector or to zero. Symbolic infinite
/// cells are reported as symbolic chains, never materialized.
template <Field F>
struct AdaptedBasis {
    std::vector<std::vector<std::pair<std::string, std::vector<typename F::Elem>>>> vectors;  // per vertex
    std::map<std::string, std::optional<std::string>> successor;  // nullopt = ZERO
    std::map<std::size_t, Card> symbolic_cells;                   // base -> multiplicity

    std::string str(const F& field) const {
        std::ostringstream out;
        for (std::size_t k = 0; k < vectors.size(); ++k) {
            for (const auto& [name, coords] : vectors[k]) {
                out << "basis " << k << ' ' << name << " :";
                for (const auto& c : coords) out << ' ' << field.str(c);
                out << "\n";
            }
        }
        for (std::size_t k = 0; k < vectors.size(); ++k) {
            for (const auto& [name, coords] : vectors[k]) {
                out << "succ " << name << " -> " << (successor.at(name) ? *successor.at(name) : "ZERO") << "\n";
            }
        }
        for (const auto& [base, card] : symbolic_cells) {
            out << "infcell " << base << ' ' << card.str() << " chain e0<-e1<-e2<-...\n";
        }
        return out.str();
    }
};

/// Pulls the standard adapted basis of the canonical realization back through
/// the inverse of the decomposition isomorphism. The output is machine-checked
/// against the definition: per-vertex invertibility and the successor
/// equations M_k b = succ(b) or 0.
template <Field F>
AdaptedBasis<F> adapted_basis(const CycleRep<F>& u) {
    if (!is_locally_nilpotent(u)) throw NotNilpotent();
    InvariantTable table = kaplansky_invariants(u);
    CellMultiset cells = cells_of_table(table);
    CellRealization<F> realized = realize_cells<F>(cells, u.field(), u.n());
    auto fam = build_isomorphism(u, realized.rep);
    if (!fam) throw Error("internal: realization has different invariants than its table");

    const F& f = u.field();
    AdaptedBasis<F> out;
    out.vectors.resize(u.n());
    out.symbolic_cells = cells.infinite;
    const TerminalRep& t = realized.terminal;
    auto qualified = [&](std::size_t k, const std::string& name) { return name + "@" + std::to_string(k % u.n()); };
    for (std::size_t k = 0; k < u.n(); ++k) {
        auto inv = inverse(fam->phi[k]);
        if (!inv) throw Error("internal: certificate is not invertible");
        for (std::size_t j = 0; j < realized.names[k].size(); ++j) {
            const std::string& name = realized.names[k][j];
            out.vectors[k].emplace_back(qualified(k, name), inv->col(j));
            const std::string& image = t.apply(k, name);
            out.successor[qualified(k, name)] =
                image == t.base[(k + 1) % u.n()] ? std::nullopt : std::make_optional(qualified(k + 1, image));
        }
    }

    // definition check: independence and spanning per vertex, then the
    // successor equations by plain matrix multiplication
    for (std::size_t k = 0; k < u.n(); ++k) {
        Matrix<F> b(f, u.dim(k), out.vectors[k].size());
        for (std::size_t j = 0; j < out.vectors[k].size(); ++j) b.set_col(j, out.vectors[k][j].second);
        if (!is_invertible(b)) throw Error("adapted basis is not a basis");
        for (const auto& [name, coords] : out.vectors[k]) {
            auto image = u.map(k).apply(coords);
            const auto& succ = out.successor.at(name);
            if (!succ) {
                if (!vec_is_zero(f, image)) throw Error("successor equation failed (expected zero)");
                continue;
            }
            bool found = false;
            for (const auto& [name2, coords2] : out.vectors[(k + 1) % u.n()]) {
                if (name2 == *succ) {
                    if (!vec_eq(f, image, coords2)) throw Error("successor equation failed");
                    found = true;
                    break;
                }
            }
            if (!found) throw Error("successor names a missing vector");
        }
    }
    return out;
}

}  // namespace cyclap
