#pragma once

#include <cstddef>
#include <vector>

#include "classify.hpp"
#include "rng.hpp"
#include "terminal.hpp"

namespace cyclap {

/// Random invariant table with finite ordinals and finite cardinals; any such
/// table is admissible, so it is realizable by construction.
inline InvariantTable random_finite_table(Rng& rng, std::size_t n, std::size_t max_alpha, std::uint64_t max_card,
                                          std::size_t max_entries) {
    InvariantTable table;
    table.n = n;
    std::size_t entries = rng.below(max_entries + 1);
    for (std::size_t i = 0; i < entries; ++i) {
        std::size_t k = static_cast<std::size_t>(rng.below(n));
        Ordinal alpha = Ordinal::finite(rng.below(max_alpha + 1));
        table.add_finite(k, alpha, Card(1 + rng.below(max_card)));
    }
    return table;
}

/// Random multiset of finite canonical cells.
inline CellMultiset random_cells(Rng& rng, std::size_t n, std::size_t max_size, std::size_t max_kinds,
                                 std::uint64_t max_count) {
    CellMultiset cells;
    std::size_t kinds = rng.below(max_kinds + 1);
    for (std::size_t i = 0; i < kinds; ++i) {
        std::size_t base = static_cast<std::size_t>(rng.below(n));
        std::size_t size = 1 + static_cast<std::size_t>(rng.below(max_size));
        cells.finite[{base, size}] += 1 + rng.below(max_count);
    }
    return cells;
}

/// A different multiset: bump, add, or remove one cell kind.
inline CellMultiset perturb_cells(Rng& rng, CellMultiset cells, std::size_t n, std::size_t max_size) {
    while (true) {
        CellMultiset out = cells;
        switch (rng.below(3)) {
            case 0: {  // add a kind or bump an existing one
                std::size_t base = static_cast<std::size_t>(rng.below(n));
                std::size_t size = 1 + static_cast<std::size_t>(rng.below(max_size));
                out.finite[{base, size}] += 1;
                break;
            }
            case 1: {  // remove one cell if any
                if (!out.finite.empty()) {
                    auto it = out.finite.begin();
                    std::advance(it, static_cast<std::ptrdiff_t>(rng.below(out.finite.size())));
                    if (--it->second == 0) out.finite.erase(it);
                }
                break;
            }
            default: {  // resize one cell if any
                if (!out.finite.empty()) {
                    auto it = out.finite.begin();
                    std::advance(it, static_cast<std::ptrdiff_t>(rng.below(out.finite.size())));
                    auto key = it->first;
                    auto count = it->second;
                    out.finite.erase(it);
                    out.finite[{key.first, key.second + 1}] += count;
                }
                break;
            }
        }
        if (!(out == cells)) return out;
    }
}

/// Random terminal representation: a pointed sum of random cells, sometimes
/// further augmented where property (A_l) happens to hold.
inline TerminalRep random_terminal(Rng& rng, std::size_t n, std::size_t max_size, std::size_t max_kinds) {
    CellMultiset cells = random_cells(rng, n, max_size, max_kinds, 2);
    std::vector<TerminalRep> parts;
    for (const auto& [key, count] : cells.finite) {
        for (std::uint64_t i = 0; i < count; ++i) parts.push_back(canonical_cell(n, key.first, key.second));
    }
    TerminalRep f = parts.empty() ? TerminalRep::trivial(n) : pointed_sum(parts);
    for (int tries = 0; tries < 2 && rng.coin(); ++tries) {
        std::size_t l = static_cast<std::size_t>(rng.below(n));
        try {
            f = augment(f, l);
        } catch (const PropertyAViolated&) {
            // that stage is not augmentable; keep f as is
        }
    }
    return f;
}

/// Reduced locally nilpotent representation with known cells, in a random
/// basis.
template <Field F>
CycleRep<F> random_nilpotent_rep(Rng& rng, const F& field, std::size_t n, std::size_t max_alpha,
                                 std::uint64_t max_card, std::size_t max_entries) {
    InvariantTable table = random_finite_table(rng, n, max_alpha, max_card, max_entries);
    CycleRep<F> canonical = realize_finite(table, field);
    return random_basis_change(canonical, rng.next()).first;
}

/// Random vector of F^dim with small entries.
template <Field F>
std::vector<typename F::Elem> random_vector(const F& field, Rng& rng, std::size_t dim) {
    std::vector<typename F::Elem> v;
    v.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) v.push_back(field.random(rng));
    return v;
}

/// Random ordinal below w^w * bound-ish, for the arithmetic property tests.
inline Ordinal random_ordinal(Rng& rng, std::size_t depth = 2) {
    std::size_t terms = rng.below(3);
    Ordinal acc;
    for (std::size_t i = 0; i < terms; ++i) {
        Ordinal exp = depth == 0 ? Ordinal::finite(rng.below(3)) : random_ordinal(rng, depth - 1);
        acc = ord_add(acc, Ordinal::omega_power(exp, 1 + rng.below(3)));
    }
    return ord_add(acc, Ordinal::finite(rng.below(4)));
}

}  // namespace cyclap
