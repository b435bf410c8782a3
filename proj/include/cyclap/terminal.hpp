#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cyclerep.hpp"
#include "errors.hpp"
#include "text_io.hpp"

namespace cyclap {

/// Pointed-set representation of C_n: finite sets X_k with basepoints o_k and
/// maps f_k: X_k -> X_{k+1} preserving basepoints. Element identifiers are
/// opaque strings scoped to their vertex; the stored element order is kept so
/// files round-trip exactly.
struct TerminalRep {
    std::size_t n = 1;
    std::vector<std::vector<std::string>> elems;
    std::vector<std::string> base;
    std::vector<std::map<std::string, std::string>> maps;  // maps[k]: X_k -> X_{k+1}

    std::size_t vertex(std::size_t k) const { return k % n; }

    static TerminalRep trivial(std::size_t n) {
        TerminalRep f;
        f.n = n;
        f.elems.assign(n, {"o"});
        f.base.assign(n, "o");
        f.maps.assign(n, {{"o", "o"}});
        return f;
    }

    const std::string& apply(std::size_t k, const std::string& x) const {
        const auto& m = maps[vertex(k)];
        auto it = m.find(x);
        if (it == m.end()) throw Error("element '" + x + "' has no image at vertex " + std::to_string(vertex(k)));
        return it->second;
    }

    bool operator==(const TerminalRep& other) const = default;
};

/// Chain of subsets X_{k,alpha} for a pointed-set representation, with the
/// same stabilization rule as the linear chains.
struct PointedChain {
    std::vector<std::vector<std::set<std::string>>> stages;  // stages[k][s]
    std::size_t length = 0;

    const std::set<std::string>& at(std::size_t k, std::size_t s) const {
        const auto& chain = stages[k % stages.size()];
        return chain[s < length ? s : length];
    }

    /// Stage of x, nullopt inside the stable core.
    std::optional<std::size_t> stage_height(std::size_t k, const std::string& x) const {
        if (at(k, length).count(x)) return std::nullopt;
        for (std::size_t s = 0; s < length; ++s) {
            if (!at(k, s + 1).count(x)) return s;
        }
        throw Error("pointed height scan fell through");
    }
};

inline PointedChain pointed_chain(const TerminalRep& f) {
    PointedChain out;
    out.stages.assign(f.n, {});
    std::vector<std::set<std::string>> stage(f.n);
    for (std::size_t k = 0; k < f.n; ++k) stage[k] = {f.elems[k].begin(), f.elems[k].end()};
    while (true) {
        for (std::size_t k = 0; k < f.n; ++k) out.stages[k].push_back(stage[k]);
        std::vector<std::set<std::string>> next(f.n);
        bool stable = true;
        for (std::size_t k = 0; k < f.n; ++k) {
            std::size_t prev = (k + f.n - 1) % f.n;
            for (const auto& x : stage[prev]) next[k].insert(f.apply(prev, x));
            if (next[k] != stage[k]) stable = false;
        }
        if (stable) break;
        stage = std::move(next);
    }
    out.length = out.stages[0].size() - 1;
    return out;
}

/// Terminality check per the two defining conditions: (i) the stable core is
/// exactly the basepoints, and (iii) every orbit hits its basepoint at some
/// index that is a multiple of n. Structural defects are reported as well;
/// never throws.
inline std::vector<std::string> validate_terminal(const TerminalRep& f) {
    std::vector<std::string> violations;
    if (f.n == 0 || f.elems.size() != f.n || f.base.size() != f.n || f.maps.size() != f.n) {
        violations.push_back("malformed: need n vertices of elements, basepoints and maps");
        return violations;
    }
    std::vector<std::set<std::string>> sets(f.n);
    for (std::size_t k = 0; k < f.n; ++k) {
        for (const auto& x : f.elems[k]) {
            if (!sets[k].insert(x).second) {
                violations.push_back("vertex " + std::to_string(k) + ": duplicate element '" + x + "'");
            }
        }
        if (!sets[k].count(f.base[k])) {
            violations.push_back("vertex " + std::to_string(k) + ": basepoint '" + f.base[k] + "' is not an element");
        }
    }
    if (!violations.empty()) return violations;
    for (std::size_t k = 0; k < f.n; ++k) {
        for (const auto& x : f.elems[k]) {
            auto it = f.maps[k].find(x);
            if (it == f.maps[k].end()) {
                violations.push_back("vertex " + std::to_string(k) + ": element '" + x + "' has no image");
            } else if (!sets[(k + 1) % f.n].count(it->second)) {
                violations.push_back("vertex " + std::to_string(k) + ": image '" + it->second +
                                     "' is not an element of vertex " + std::to_string((k + 1) % f.n));
            }
        }
        for (const auto& [x, y] : f.maps[k]) {
            if (!sets[k].count(x)) {
                violations.push_back("vertex " + std::to_string(k) + ": map defined on unknown element '" + x + "'");
            }
        }
    }
    if (!violations.empty()) return violations;
    for (std::size_t k = 0; k < f.n; ++k) {
        if (f.apply(k, f.base[k]) != f.base[(k + 1) % f.n]) {
            violations.push_back("vertex " + std::to_string(k) + ": basepoint is not mapped to the next basepoint");
        }
    }
    if (!violations.empty()) return violations;

    PointedChain ch = pointed_chain(f);
    for (std::size_t k = 0; k < f.n; ++k) {
        const auto& core = ch.at(k, ch.length);
        if (core.size() != 1 || !core.count(f.base[k])) {
            violations.push_back("condition (i): stable core at vertex " + std::to_string(k) +
                                 " is not the basepoint alone");
        }
    }
    std::size_t total = 0;
    for (std::size_t k = 0; k < f.n; ++k) total += f.elems[k].size();
    for (std::size_t k = 0; k < f.n; ++k) {
        for (const auto& x : f.elems[k]) {
            // the n-fold composite cycles within X_k after |X_k| steps
            std::string cur = x;
            bool reached = false;
            for (std::size_t i = 0; i <= total; ++i) {
                if (cur == f.base[k]) {
                    reached = true;
                    break;
                }
                for (std::size_t j = 0; j < f.n; ++j) cur = f.apply(k + j, cur);
            }
            if (!reached) {
                violations.push_back("condition (iii): orbit of '" + x + "' at vertex " + std::to_string(k) +
                                     " never reaches the basepoint");
            }
        }
    }
    return violations;
}

inline void require_terminal(const TerminalRep& f) {
    auto v = validate_terminal(f);
    if (!v.empty()) throw PreconditionError("invalid terminal representation: " + v.front());
}

/// Discrete Kaplansky numbers n_{k,alpha}: finite-support map with zero
/// entries omitted.
using DiscreteTable = std::map<std::pair<std::size_t, std::size_t>, std::uint64_t>;

/// The two-term counting formula: elements of height alpha whose image jumps
/// past alpha+1, plus the surplus of the fibers over height-(alpha+1) points.
inline DiscreteTable discrete_numbers(const TerminalRep& f) {
    require_terminal(f);
    PointedChain ch = pointed_chain(f);
    DiscreteTable table;
    for (std::size_t k = 0; k < f.n; ++k) {
        for (std::size_t alpha = 0; alpha < ch.length; ++alpha) {
            std::uint64_t count = 0;
            for (const auto& x : f.elems[k]) {
                if (ch.stage_height(k, x) != alpha) continue;
                auto himg = ch.stage_height(k + 1, f.apply(k, x));
                if (!himg || *himg > alpha + 1) ++count;
            }
            for (const auto& y : f.elems[(k + 1) % f.n]) {
                if (ch.stage_height(k + 1, y) != alpha + 1) continue;
                std::uint64_t fiber = 0;
                for (const auto& x : f.elems[k]) {
                    if (f.apply(k, x) == y && ch.stage_height(k, x) == alpha) ++fiber;
                }
                count += fiber - 1;  // the lifting principle guarantees fiber >= 1
            }
            if (count > 0) table[{k, alpha}] = count;
        }
    }
    return table;
}

inline std::size_t terminal_length(const TerminalRep& f) { return pointed_chain(f).length; }

namespace detail {

inline std::string fresh_name(const std::set<std::string>& taken, const std::string& stem) {
    if (!taken.count(stem)) return stem;
    for (std::size_t i = 1;; ++i) {
        std::string candidate = stem + "_" + std::to_string(i);
        if (!taken.count(candidate)) return candidate;
    }
}

}  // namespace detail

/// Augmentation at stage l: a fresh element becomes the new basepoint of
/// vertex l, the old basepoint of vertex l-1 is rerouted onto it, and it maps
/// to the (new) basepoint of vertex l+1. Requires property (A_l): every
/// height level below the length contains a non-basepoint element of vertex
/// l-1 mapping onto o_l. Length grows by exactly one.
inline TerminalRep augment(const TerminalRep& f, std::size_t l) {
    require_terminal(f);
    l %= f.n;
    const std::size_t prev = (l + f.n - 1) % f.n;
    PointedChain ch = pointed_chain(f);
    const std::size_t length = ch.length;

    bool fast_path = false;
    if (length >= 1) {
        DiscreteTable nums = discrete_numbers(f);
        auto it = nums.find({prev, length - 1});
        fast_path = it != nums.end() && it->second > 0;
    }
    if (!fast_path) {
        for (std::size_t alpha = 0; alpha < length; ++alpha) {
            bool found = false;
            for (const auto& x : ch.at(prev, alpha)) {
                if (x != f.base[prev] && f.apply(prev, x) == f.base[l]) {
                    found = true;
                    break;
                }
            }
            if (!found) throw PropertyAViolated(l, alpha);
        }
    }

    TerminalRep out = f;
    std::set<std::string> taken(f.elems[l].begin(), f.elems[l].end());
    std::string gamma = detail::fresh_name(taken, "g" + std::to_string(length));
    out.elems[l].push_back(gamma);
    out.base[l] = gamma;
    out.maps[prev][f.base[prev]] = gamma;
    out.maps[l][gamma] = out.base[(l + 1) % f.n];  // for n = 1 this is gamma itself

    require_terminal(out);
    if (terminal_length(out) != length + 1) throw Error("augmentation did not increase the length by one");
    return out;
}

/// Disjoint union with all basepoints identified; summand i contributes its
/// non-basepoint elements renamed `<i>.<name>`.
inline TerminalRep pointed_sum(const std::vector<TerminalRep>& fs) {
    if (fs.empty()) throw PreconditionError("pointed_sum: empty list");
    const std::size_t n = fs[0].n;
    for (const auto& f : fs) {
        if (f.n != n) throw CycleMismatch();
        require_terminal(f);
    }
    TerminalRep out;
    out.n = n;
    out.elems.assign(n, {"o"});
    out.base.assign(n, "o");
    out.maps.assign(n, {{"o", "o"}});
    for (std::size_t i = 0; i < fs.size(); ++i) {
        const TerminalRep& f = fs[i];
        auto rename = [&](std::size_t k, const std::string& x) {
            return x == f.base[k % n] ? std::string("o") : std::to_string(i) + "." + x;
        };
        for (std::size_t k = 0; k < n; ++k) {
            for (const auto& x : f.elems[k]) {
                if (x == f.base[k]) continue;
                out.elems[k].push_back(rename(k, x));
                out.maps[k][rename(k, x)] = rename(k + 1, f.apply(k, x));
            }
        }
    }
    require_terminal(out);
    return out;
}

/// f^{(k,i)}: the i-fold augmentation chain starting from the trivial
/// representation, augmenting at stages k, k+1, ..., k+i-1.
inline TerminalRep canonical_cell(std::size_t n, std::size_t k, std::size_t i) {
    TerminalRep f = TerminalRep::trivial(n);
    for (std::size_t j = 0; j < i; ++j) f = augment(f, (k + j) % n);
    return f;
}

/// Linear realization together with the element names indexing the standard
/// basis, which later becomes an adapted basis.
template <Field F>
struct Realization {
    CycleRep<F> rep;
    std::vector<std::vector<std::string>> names;  // names[k][j] = element of the j-th basis vector
};

/// Free vector space on the non-basepoint elements; each map sends a basis
/// vector to the basis vector of its image, or to zero when the image is the
/// basepoint. Every column is a unit column or zero.
template <Field F>
Realization<F> linear_realization_named(const TerminalRep& f, const F& field) {
    require_terminal(f);
    std::vector<std::vector<std::string>> names(f.n);
    std::vector<std::map<std::string, std::size_t>> index(f.n);
    for (std::size_t k = 0; k < f.n; ++k) {
        for (const auto& x : f.elems[k]) {
            if (x == f.base[k]) continue;
            index[k][x] = names[k].size();
            names[k].push_back(x);
        }
    }
    std::vector<std::size_t> dims(f.n);
    for (std::size_t k = 0; k < f.n; ++k) dims[k] = names[k].size();
    std::vector<Matrix<F>> maps;
    for (std::size_t k = 0; k < f.n; ++k) {
        const std::size_t next = (k + 1) % f.n;
        Matrix<F> m(field, dims[next], dims[k]);
        for (std::size_t j = 0; j < names[k].size(); ++j) {
            const std::string& y = f.apply(k, names[k][j]);
            if (y != f.base[next]) m.at(index[next].at(y), j) = field.one();
        }
        maps.push_back(std::move(m));
    }
    return Realization<F>{CycleRep<F>(field, f.n, std::move(dims), std::move(maps)), std::move(names)};
}

template <Field F>
CycleRep<F> linear_realization(const TerminalRep& f, const F& field) {
    return linear_realization_named(f, field).rep;
}

/// `terminal v1` file format; round-trips exactly.
inline std::string write_terminal(const TerminalRep& f) {
    std::ostringstream out;
    out << "terminal v1\n";
    out << "n " << f.n << "\n";
    for (std::size_t k = 0; k < f.n; ++k) {
        out << "vertex " << k << " base " << f.base[k] << " elems";
        for (const auto& x : f.elems[k]) out << ' ' << x;
        out << "\n";
    }
    for (std::size_t k = 0; k < f.n; ++k) {
        out << "map " << k << ":";
        for (const auto& x : f.elems[k]) out << ' ' << x << "->" << f.apply(k, x);
        out << "\n";
    }
    return out.str();
}

inline TerminalRep parse_terminal(const std::string& text) {
    LineReader reader(text);
    auto header = reader.next_directive();
    if (!header || header->second.size() != 2 || header->second[0] != "terminal" || header->second[1] != "v1") {
        throw ParseError(header ? header->first : 1, "expected 'terminal v1' header");
    }
    auto nline = reader.next_directive();
    if (!nline || nline->second.size() != 2 || nline->second[0] != "n") {
        throw ParseError(nline ? nline->first : reader.last_line(), "expected 'n <int>'");
    }
    auto n = parse_uint(nline->second[1]);
    if (!n || *n == 0) throw ParseError(nline->first, "n must be a positive integer");

    TerminalRep f;
    f.n = static_cast<std::size_t>(*n);
    f.elems.assign(f.n, {});
    f.base.assign(f.n, "");
    f.maps.assign(f.n, {});
    for (std::size_t k = 0; k < f.n; ++k) {
        auto d = reader.next_directive();
        if (!d) throw ParseError(reader.last_line(), "expected vertex directive");
        const auto& toks = d->second;
        if (toks.size() < 5 || toks[0] != "vertex" || toks[1] != std::to_string(k) || toks[2] != "base" ||
            toks[4] != "elems") {
            throw ParseError(d->first, "expected 'vertex " + std::to_string(k) + " base <id> elems <id>...'");
        }
        f.base[k] = toks[3];
        f.elems[k].assign(toks.begin() + 5, toks.end());
    }
    for (std::size_t k = 0; k < f.n; ++k) {
        auto d = reader.next_directive();
        if (!d) throw ParseError(reader.last_line(), "expected map directive");
        const auto& toks = d->second;
        if (toks.size() < 1 || toks[0] != "map") throw ParseError(d->first, "expected 'map <k>: ...'");
        std::string label = toks.size() > 1 ? toks[1] : "";
        if (label != std::to_string(k) + ":") throw ParseError(d->first, "expected 'map " + std::to_string(k) + ":'");
        for (std::size_t i = 2; i < toks.size(); ++i) {
            auto arrow = toks[i].find("->");
            if (arrow == std::string::npos) throw ParseError(d->first, "expected '<id>-><id>', got '" + toks[i] + "'");
            f.maps[k][toks[i].substr(0, arrow)] = toks[i].substr(arrow + 2);
        }
    }
    if (auto extra = reader.next_directive()) throw ParseError(extra->first, "trailing content");
    auto violations = validate_terminal(f);
    if (!violations.empty()) throw ParseError(reader.last_line(), violations.front());
    return f;
}

}  // namespace cyclap
