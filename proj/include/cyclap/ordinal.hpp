#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace cyclap {

struct OrdinalTerm;

/// Ordinal below epsilon_0 in Cantor normal form: a strictly decreasing list
/// of (exponent, coefficient) terms with positive coefficients; the empty
/// list is 0. Text syntax: `0`, decimals, or `+`-joined terms
/// `w^<exponent>*<coeff>` with `w^1` written `w` and `*1` omitted; compound
/// exponents are parenthesized, e.g. `w^(w+1)`.
class Ordinal {
  public:
    using Term = OrdinalTerm;

    Ordinal() = default;

    static Ordinal finite(std::uint64_t c);
    static Ordinal omega();
    static Ordinal omega_power(const Ordinal& exponent, std::uint64_t coefficient);

    /// Direct CNF construction; terms must come in strictly decreasing
    /// exponent order with positive coefficients.
    static Ordinal from_terms(std::vector<Term> terms);

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_finite() const;
    std::uint64_t as_finite() const;

    friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);
    friend bool operator==(const Ordinal& a, const Ordinal& b) {
        return (a <=> b) == std::strong_ordering::equal;
    }

    std::string str() const;

  private:
    std::vector<Term> terms_;
};

struct OrdinalTerm {
    Ordinal exponent;
    std::uint64_t coefficient = 1;
};

inline Ordinal Ordinal::finite(std::uint64_t c) {
    Ordinal o;
    if (c > 0) o.terms_.push_back(Term{Ordinal(), c});
    return o;
}

inline Ordinal Ordinal::omega_power(const Ordinal& exponent, std::uint64_t coefficient) {
    Ordinal o;
    if (coefficient > 0) o.terms_.push_back(Term{exponent, coefficient});
    return o;
}

inline Ordinal Ordinal::omega() { return omega_power(finite(1), 1); }

inline Ordinal Ordinal::from_terms(std::vector<Term> terms) {
    Ordinal o;
    o.terms_ = std::move(terms);
    for (std::size_t i = 0; i + 1 < o.terms_.size(); ++i) {
        if (!(o.terms_[i + 1].exponent < o.terms_[i].exponent)) throw Error("CNF exponents not decreasing");
    }
    for (const Term& t : o.terms_) {
        if (t.coefficient == 0) throw Error("CNF coefficient is zero");
    }
    return o;
}

inline bool Ordinal::is_finite() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero());
}

inline std::uint64_t Ordinal::as_finite() const {
    if (!is_finite()) throw PreconditionError("ordinal is not finite");
    return terms_.empty() ? 0 : terms_[0].coefficient;
}

inline std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
    const std::size_t len = std::min(a.terms_.size(), b.terms_.size());
    for (std::size_t i = 0; i < len; ++i) {
        auto ce = a.terms_[i].exponent <=> b.terms_[i].exponent;
        if (ce != std::strong_ordering::equal) return ce;
        auto cc = a.terms_[i].coefficient <=> b.terms_[i].coefficient;
        if (cc != std::strong_ordering::equal) return cc;
    }
    return a.terms_.size() <=> b.terms_.size();
}

inline std::string Ordinal::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (i) out += '+';
        const Term& t = terms_[i];
        if (t.exponent.is_zero()) {
            out += std::to_string(t.coefficient);
            continue;
        }
        out += 'w';
        if (!(t.exponent == finite(1))) {
            out += '^';
            if (t.exponent.is_finite()) {
                out += std::to_string(t.exponent.as_finite());
            } else if (t.exponent == omega()) {
                out += 'w';
            } else {
                out += '(' + t.exponent.str() + ')';
            }
        }
        if (t.coefficient != 1) out += '*' + std::to_string(t.coefficient);
    }
    return out;
}

enum class OrdinalKind { Zero, Successor, Limit };

inline std::strong_ordering ord_compare(const Ordinal& a, const Ordinal& b) { return a <=> b; }

/// Ordinal addition in CNF: terms of `a` strictly below the leading exponent
/// of `b` are absorbed.
inline Ordinal ord_add(const Ordinal& a, const Ordinal& b) {
    if (b.is_zero()) return a;
    if (a.is_zero()) return b;
    const Ordinal& lead = b.terms()[0].exponent;
    std::vector<OrdinalTerm> out;
    for (const auto& t : a.terms()) {
        if (t.exponent < lead) break;
        out.push_back(t);
    }
    if (!out.empty() && out.back().exponent == lead) {
        out.back().coefficient += b.terms()[0].coefficient;
        out.insert(out.end(), b.terms().begin() + 1, b.terms().end());
    } else {
        out.insert(out.end(), b.terms().begin(), b.terms().end());
    }
    return Ordinal::from_terms(std::move(out));
}

inline Ordinal ord_succ(const Ordinal& a) { return ord_add(a, Ordinal::finite(1)); }

inline OrdinalKind classify(const Ordinal& a) {
    if (a.is_zero()) return OrdinalKind::Zero;
    return a.terms().back().exponent.is_zero() ? OrdinalKind::Successor : OrdinalKind::Limit;
}

/// Predecessor of a successor ordinal.
inline Ordinal ord_pred(const Ordinal& a) {
    if (classify(a) != OrdinalKind::Successor) throw PreconditionError("ordinal has no predecessor");
    std::vector<OrdinalTerm> terms = a.terms();
    if (terms.back().coefficient == 1) {
        terms.pop_back();
    } else {
        terms.back().coefficient -= 1;
    }
    return Ordinal::from_terms(std::move(terms));
}

/// Unique split a = delta + l with delta a limit ordinal and l finite.
/// Requires a >= omega.
inline std::pair<Ordinal, std::uint64_t> limit_split(const Ordinal& a) {
    if (a.is_finite()) throw PreconditionError("limit_split: ordinal is finite");
    std::vector<OrdinalTerm> terms = a.terms();
    std::uint64_t tail = 0;
    if (terms.back().exponent.is_zero()) {
        tail = terms.back().coefficient;
        terms.pop_back();
    }
    return {Ordinal::from_terms(std::move(terms)), tail};
}

/// Canonical (Wainer-style) fundamental sequence of a limit ordinal:
///   (g + w^(e+1))[m]   = g + w^e * m
///   (g + w^lambda)[m]  = g + w^(lambda[m])        for limit exponent lambda
///   (g + w^e*(c+1))[m] = g + w^e*c + (w^e)[m]     for coefficient c+1 >= 2
/// Strictly increasing in m with supremum the given ordinal.
inline Ordinal fundamental_sequence(const Ordinal& delta, std::uint64_t m) {
    if (classify(delta) != OrdinalKind::Limit) throw PreconditionError("fundamental_sequence: not a limit ordinal");
    std::vector<OrdinalTerm> prefix = delta.terms();
    OrdinalTerm last = prefix.back();
    prefix.pop_back();
    Ordinal gamma = Ordinal::from_terms(std::move(prefix));
    if (last.coefficient > 1) {
        Ordinal head = ord_add(gamma, Ordinal::omega_power(last.exponent, last.coefficient - 1));
        return ord_add(head, fundamental_sequence(Ordinal::omega_power(last.exponent, 1), m));
    }
    switch (classify(last.exponent)) {
        case OrdinalKind::Successor:
            return ord_add(gamma, Ordinal::omega_power(ord_pred(last.exponent), m));
        case OrdinalKind::Limit:
            return ord_add(gamma, Ordinal::omega_power(fundamental_sequence(last.exponent, m), 1));
        case OrdinalKind::Zero:
            break;
    }
    throw Error("limit ordinal with exponent zero");
}

namespace detail {

inline void skip_ws(std::string_view& s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
}

inline std::optional<std::uint64_t> take_uint(std::string_view& s) {
    skip_ws(s);
    if (s.empty() || s.front() < '0' || s.front() > '9') return std::nullopt;
    std::uint64_t v = 0;
    std::size_t digits = 0;
    while (!s.empty() && s.front() >= '0' && s.front() <= '9') {
        if (++digits > 19) return std::nullopt;  // would overflow 64 bits
        v = v * 10 + static_cast<std::uint64_t>(s.front() - '0');
        s.remove_prefix(1);
    }
    return v;
}

inline std::optional<Ordinal> parse_ordinal_inner(std::string_view& s);

inline std::optional<Ordinal> parse_term(std::string_view& s) {
    skip_ws(s);
    if (auto n = take_uint(s)) return Ordinal::finite(*n);
    if (s.empty() || s.front() != 'w') return std::nullopt;
    s.remove_prefix(1);
    Ordinal exponent = Ordinal::finite(1);
    skip_ws(s);
    if (!s.empty() && s.front() == '^') {
        s.remove_prefix(1);
        skip_ws(s);
        if (!s.empty() && s.front() == '(') {
            s.remove_prefix(1);
            auto inner = parse_ordinal_inner(s);
            skip_ws(s);
            if (!inner || s.empty() || s.front() != ')') return std::nullopt;
            s.remove_prefix(1);
            exponent = *inner;
        } else if (!s.empty() && s.front() == 'w') {
            s.remove_prefix(1);
            exponent = Ordinal::omega();
        } else if (auto n = take_uint(s)) {
            exponent = Ordinal::finite(*n);
        } else {
            return std::nullopt;
        }
    }
    std::uint64_t coefficient = 1;
    skip_ws(s);
    if (!s.empty() && s.front() == '*') {
        s.remove_prefix(1);
        auto n = take_uint(s);
        if (!n) return std::nullopt;
        coefficient = *n;
    }
    return Ordinal::omega_power(exponent, coefficient);
}

inline std::optional<Ordinal> parse_ordinal_inner(std::string_view& s) {
    auto first = parse_term(s);
    if (!first) return std::nullopt;
    Ordinal acc = *first;
    while (true) {
        skip_ws(s);
        if (s.empty() || s.front() != '+') return acc;
        s.remove_prefix(1);
        auto next = parse_term(s);
        if (!next) return std::nullopt;
        acc = ord_add(acc, *next);  // `+` means ordinal addition, so input normalizes
    }
}

}  // namespace detail

inline std::optional<Ordinal> parse_ordinal(std::string_view text) {
    std::string_view s = text;
    auto o = detail::parse_ordinal_inner(s);
    detail::skip_ws(s);
    if (!o || !s.empty()) return std::nullopt;
    return o;
}

/// An ordinal or the distinguished top value `inf`, which compares strictly
/// greater than every ordinal.
class OrdinalOrInfinity {
  public:
    OrdinalOrInfinity() : value_(Ordinal()) {}
    OrdinalOrInfinity(Ordinal o) : value_(std::move(o)) {}

    static OrdinalOrInfinity infinity() {
        OrdinalOrInfinity v;
        v.value_.reset();
        return v;
    }

    bool is_infinity() const { return !value_.has_value(); }
    const Ordinal& ordinal() const {
        if (!value_) throw PreconditionError("value is the infinity marker");
        return *value_;
    }

    friend std::strong_ordering operator<=>(const OrdinalOrInfinity& a, const OrdinalOrInfinity& b) {
        if (a.is_infinity() && b.is_infinity()) return std::strong_ordering::equal;
        if (a.is_infinity()) return std::strong_ordering::greater;
        if (b.is_infinity()) return std::strong_ordering::less;
        return *a.value_ <=> *b.value_;
    }

    friend bool operator==(const OrdinalOrInfinity& a, const OrdinalOrInfinity& b) {
        return (a <=> b) == std::strong_ordering::equal;
    }

    std::string str() const { return is_infinity() ? "inf" : value_->str(); }

    static std::optional<OrdinalOrInfinity> parse(std::string_view text) {
        if (text == "inf") return infinity();
        auto o = parse_ordinal(text);
        if (!o) return std::nullopt;
        return OrdinalOrInfinity(*o);
    }

  private:
    std::optional<Ordinal> value_;
};

}  // namespace cyclap
