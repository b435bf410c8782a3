#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cardinal.hpp"
#include "cyclerep.hpp"
#include "ordinal.hpp"
#include "subspace.hpp"
#include "text_io.hpp"

namespace cyclap {

/// The ordinal-indexed chains U_{k,0} ⊇ U_{k,1} ⊇ ... of a matrix-part cycle.
/// Finite matrices stabilize at a finite stage: each full pass either strictly
/// drops total dimension somewhere or fixes every vertex at once, so only
/// natural-number stages are ever stored and `length` is the least stage L
/// with U_{k,L} = U_{k,L+1} at every vertex simultaneously (per-vertex
/// stabilization is not enough, since stage α+1 at k reads stage α at k-1).
template <Field F>
class ChainResult {
  public:
    explicit ChainResult(const CycleRep<F>& u) {
        require_matrix_only(u);
        const std::size_t n = u.n();
        std::vector<Subspace<F>> stage;
        for (std::size_t k = 0; k < n; ++k) {
            stage.push_back(Subspace<F>::full(u.field(), u.dim(k)));
            chains_.emplace_back();
        }
        while (true) {
            for (std::size_t k = 0; k < n; ++k) chains_[k].push_back(stage[k]);
            std::vector<Subspace<F>> next;
            bool stable = true;
            for (std::size_t k = 0; k < n; ++k) {
                next.push_back(image_of(u.map(k + n - 1), stage[(k + n - 1) % n]));
                if (!(next[k] == stage[k])) stable = false;
            }
            if (stable) break;
            stage = std::move(next);
        }
        length_ = chains_[0].size() - 1;
    }

    std::size_t length() const { return length_; }

    /// U_{k,stage}; stages beyond the length return the stable core.
    const Subspace<F>& at(std::size_t k, std::size_t stage) const {
        const auto& chain = chains_[k % chains_.size()];
        return chain[stage < length_ ? stage : length_];
    }

    const Subspace<F>& stable(std::size_t k) const { return at(k, length_); }

    const std::vector<Subspace<F>>& vertex_chain(std::size_t k) const { return chains_[k % chains_.size()]; }

    /// Stage index of x, or nullopt for members of the stable core.
    std::optional<std::size_t> stage_height(std::size_t k, const std::vector<typename F::Elem>& x) const {
        if (stable(k).contains(x)) return std::nullopt;
        for (std::size_t s = 0; s < length_; ++s) {
            if (!at(k, s + 1).contains(x)) return s;
        }
        throw Error("height scan fell through");  // unreachable: x outside the core exits some stage
    }

    bool core_is_zero() const {
        for (std::size_t k = 0; k < chains_.size(); ++k) {
            if (!stable(k).is_zero()) return false;
        }
        return true;
    }

  private:
    std::vector<std::vector<Subspace<F>>> chains_;
    std::size_t length_ = 0;
};

template <Field F>
ChainResult<F> chain(const CycleRep<F>& u) {
    return ChainResult<F>(u);
}

/// Height of x at vertex k: the unique alpha with x in U_{k,alpha} but not
/// U_{k,alpha+1}, or inf inside the stable core (which always holds 0).
template <Field F>
OrdinalOrInfinity height(const ChainResult<F>& ch, std::size_t k, const std::vector<typename F::Elem>& x) {
    auto s = ch.stage_height(k, x);
    if (!s) return OrdinalOrInfinity::infinity();
    return OrdinalOrInfinity(Ordinal::finite(*s));
}

template <Field F>
OrdinalOrInfinity height(const CycleRep<F>& u, std::size_t k, const std::vector<typename F::Elem>& x) {
    return height(chain(u), k, x);
}

/// Finite-support table of the cyclic Kaplansky invariants: kappa_{k,alpha}
/// for ordinals alpha plus the kappa_{k,inf} row per vertex. Zero entries are
/// never stored.
struct InvariantTable {
    std::size_t n = 1;
    std::map<std::pair<std::size_t, Ordinal>, Card> finite;
    std::map<std::size_t, Card> infinite;

    void add_finite(std::size_t k, const Ordinal& alpha, const Card& c) {
        if (c.is_zero()) return;
        auto key = std::make_pair(k, alpha);
        auto [it, inserted] = finite.emplace(key, c);
        if (!inserted) it->second = it->second + c;
    }

    void add_infinite(std::size_t k, const Card& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = infinite.emplace(k, c);
        if (!inserted) it->second = it->second + c;
    }

    bool operator==(const InvariantTable& other) const = default;

    /// Lines `kappa <k> <ordinal> <card>`, inf rows last within a vertex.
    std::string str() const {
        std::ostringstream out;
        for (std::size_t k = 0; k < n; ++k) {
            for (const auto& [key, card] : finite) {
                if (key.first == k) out << "kappa " << k << ' ' << key.second.str() << ' ' << card.str() << "\n";
            }
            if (auto it = infinite.find(k); it != infinite.end()) {
                out << "kappa " << k << " inf " << it->second.str() << "\n";
            }
        }
        return out.str();
    }

    /// Human-oriented description of the first differing entry: the first
    /// table's entries in (k, ordinal) order, then entries only the second
    /// table has; nullopt when the tables agree.
    static std::optional<std::string> first_difference(const InvariantTable& a, const InvariantTable& b) {
        auto card_of_finite = [](const InvariantTable& t, const std::pair<std::size_t, Ordinal>& key) {
            auto it = t.finite.find(key);
            return it == t.finite.end() ? Card(0) : it->second;
        };
        std::map<std::pair<std::size_t, Ordinal>, Card> keys(b.finite);
        keys.insert(a.finite.begin(), a.finite.end());  // a's entries take precedence in the scan below
        auto describe = [&](const std::pair<std::size_t, Ordinal>& key, const Card& ca, const Card& cb) {
            return "kappa " + std::to_string(key.first) + " " + key.second.str() + " differs: " + ca.str() +
                   " vs " + cb.str();
        };
        for (const auto& [key, unused] : a.finite) {
            Card ca = card_of_finite(a, key);
            Card cb = card_of_finite(b, key);
            if (!(ca == cb)) return describe(key, ca, cb);
        }
        for (const auto& [key, unused] : keys) {
            Card ca = card_of_finite(a, key);
            Card cb = card_of_finite(b, key);
            if (!(ca == cb)) return describe(key, ca, cb);
        }
        auto card_of_inf = [](const InvariantTable& t, std::size_t k) {
            auto it = t.infinite.find(k);
            return it == t.infinite.end() ? Card(0) : it->second;
        };
        std::map<std::size_t, Card> ikeys(a.infinite);
        ikeys.insert(b.infinite.begin(), b.infinite.end());
        for (const auto& [k, unused] : ikeys) {
            Card ca = card_of_inf(a, k);
            Card cb = card_of_inf(b, k);
            if (!(ca == cb)) {
                return "kappa " + std::to_string(k) + " inf differs: " + ca.str() + " vs " + cb.str();
            }
        }
        if (a.n != b.n) return "cycle lengths differ: " + std::to_string(a.n) + " vs " + std::to_string(b.n);
        return std::nullopt;
    }
};

inline std::string write_invariant_table(const InvariantTable& t) { return t.str(); }

/// Parses the `kappa <k> <ordinal|inf> <card>` lines; n is the smallest cycle
/// length consistent with the vertices unless a larger one is supplied.
inline InvariantTable parse_invariant_table(const std::string& text, std::size_t n_hint = 1) {
    LineReader reader(text);
    InvariantTable table;
    std::size_t max_vertex = 0;
    while (auto d = reader.next_directive()) {
        const auto& [lineno, toks] = *d;
        if (toks.size() != 4 || toks[0] != "kappa") throw ParseError(lineno, "expected 'kappa <k> <ordinal> <card>'");
        auto k = parse_uint(toks[1]);
        auto card = Card::parse(toks[3]);
        if (!k || !card) throw ParseError(lineno, "bad kappa line");
        max_vertex = std::max(max_vertex, static_cast<std::size_t>(*k));
        if (toks[2] == "inf") {
            table.add_infinite(static_cast<std::size_t>(*k), *card);
        } else {
            auto ord = parse_ordinal(toks[2]);
            if (!ord) throw ParseError(lineno, "bad ordinal '" + toks[2] + "'");
            table.add_finite(static_cast<std::size_t>(*k), *ord, *card);
        }
    }
    table.n = std::max(n_hint, max_vertex + 1);
    return table;
}

/// kappa_{k,alpha} computed through the kernel-quotient reinterpretation
/// dim (Ker u_k ∩ U_{k,alpha}) / (Ker u_k ∩ U_{k,alpha+1}), which avoids
/// building quotient-space maps. The infinite rows come from the symbolic
/// saturated multiset: a finite-dimensional locally nilpotent matrix part is
/// reduced, so it contributes nothing at infinity (asserted).
template <Field F>
InvariantTable kaplansky_invariants(const CycleRep<F>& u) {
    if (!is_locally_nilpotent(u)) throw NotNilpotent();
    std::vector<Matrix<F>> ms;
    for (std::size_t k = 0; k < u.n(); ++k) ms.push_back(u.map(k));
    CycleRep<F> matrix_part(u.field(), u.n(), u.dims(), std::move(ms));
    ChainResult<F> ch(matrix_part);
    if (!ch.core_is_zero()) throw Error("nilpotent matrix part has a nonzero stable core");

    InvariantTable table;
    table.n = u.n();
    for (std::size_t k = 0; k < u.n(); ++k) {
        Subspace<F> ker = kernel_basis(u.map(k));
        for (std::size_t alpha = 0; alpha < ch.length(); ++alpha) {
            Subspace<F> lo = intersect(ker, ch.at(k, alpha));
            Subspace<F> hi = intersect(ker, ch.at(k, alpha + 1));
            std::size_t d = quotient_dim(lo, hi);
            if (d > 0) table.add_finite(k, Ordinal::finite(alpha), Card(d));
        }
    }
    for (const auto& [base, card] : u.saturated()) table.add_infinite(base, card);
    return table;
}

/// Reduced: trivial stable core and no symbolic cells.
template <Field F>
bool is_reduced(const CycleRep<F>& u) {
    if (!u.matrix_only()) return false;
    return ChainResult<F>(u).core_is_zero();
}

/// Saturated: only symbolic cells remain (the matrix part of a locally
/// nilpotent cycle is never saturated unless it is trivial).
template <Field F>
bool is_saturated(const CycleRep<F>& u) {
    for (std::size_t k = 0; k < u.n(); ++k) {
        if (u.dim(k) != 0) return false;
    }
    return true;
}

/// Splits by storage: the symbolic cells alone, and the matrix part alone.
/// Valid because the locally nilpotent finite matrix part has a zero core.
template <Field F>
std::pair<CycleRep<F>, CycleRep<F>> saturated_reduced_split(const CycleRep<F>& u) {
    if (!is_locally_nilpotent(u)) throw NotNilpotent();
    std::vector<Matrix<F>> maps;
    for (std::size_t k = 0; k < u.n(); ++k) maps.push_back(u.map(k));
    CycleRep<F> reduced(u.field(), u.n(), u.dims(), std::move(maps));
    if (!ChainResult<F>(reduced).core_is_zero()) throw Error("matrix part has a nonzero stable core");
    std::vector<Matrix<F>> empty_maps(u.n(), Matrix<F>(u.field(), 0, 0));
    CycleRep<F> saturated(u.field(), u.n(), std::vector<std::size_t>(u.n(), 0), std::move(empty_maps),
                          u.saturated());
    return {std::move(saturated), std::move(reduced)};
}

}  // namespace cyclap
