#pragma once

#include <concepts>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"
#include "rng.hpp"

namespace cyclap {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// A field is a small value object carrying the arithmetic of its element
/// type. PrimeField holds a runtime modulus, RationalField is stateless; both
/// are freely copyable and comparable so representations can check that they
/// live over the same field.
template <typename F>
concept Field = requires(const F f, const typename F::Elem a, const typename F::Elem b) {
    typename F::Elem;
    { f.zero() } -> std::same_as<typename F::Elem>;
    { f.one() } -> std::same_as<typename F::Elem>;
    { f.add(a, b) } -> std::same_as<typename F::Elem>;
    { f.sub(a, b) } -> std::same_as<typename F::Elem>;
    { f.mul(a, b) } -> std::same_as<typename F::Elem>;
    { f.neg(a) } -> std::same_as<typename F::Elem>;
    { f.inv(a) } -> std::same_as<typename F::Elem>;
    { f.is_zero(a) } -> std::same_as<bool>;
    { f.eq(a, b) } -> std::same_as<bool>;
    { f.str(a) } -> std::same_as<std::string>;
    { f.name() } -> std::same_as<std::string>;
    { f == f } -> std::same_as<bool>;
};

class RationalField {
  public:
    using Elem = BigRational;

    Elem zero() const { return Elem(0); }
    Elem one() const { return Elem(1); }
    Elem from_int(std::int64_t v) const { return Elem(v); }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem inv(const Elem& a) const {
        if (a == 0) throw Error("division by zero");
        return Elem(1) / a;
    }
    Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }
    bool is_zero(const Elem& a) const { return a == 0; }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }

    /// Lowest-terms text form: `a` or `a/b`, denominator positive.
    std::string str(const Elem& a) const {
        std::string s = numerator(a).str();
        if (denominator(a) != 1) s += "/" + denominator(a).str();
        return s;
    }

    std::optional<Elem> parse(std::string_view text) const {
        auto slash = text.find('/');
        try {
            if (slash == std::string_view::npos) return Elem(BigInt(std::string(text)));
            BigInt num(std::string(text.substr(0, slash)));
            BigInt den(std::string(text.substr(slash + 1)));
            if (den == 0) return std::nullopt;
            return Elem(num, den);
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }

    /// Numerators in [-3, 3], unit denominator: small exact test data.
    Elem random(Rng& rng) const { return Elem(rng.small_int(3)); }

    std::string name() const { return "Q"; }
    bool operator==(const RationalField&) const = default;
};

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

/// Deterministic Miller-Rabin, valid for all 64-bit inputs.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) d >>= 1, ++s;
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

}  // namespace detail

class PrimeField {
  public:
    using Elem = std::uint64_t;

    explicit PrimeField(std::uint64_t p) : p_(p) {
        if (p >= (1ULL << 62)) throw Error("modulus too large");
        if (!detail::is_prime_u64(p)) throw Error("modulus " + std::to_string(p) + " is not prime");
    }

    std::uint64_t modulus() const { return p_; }

    Elem zero() const { return 0; }
    Elem one() const { return 1 % p_; }
    Elem from_int(std::int64_t v) const {
        std::int64_t r = v % static_cast<std::int64_t>(p_);
        return r < 0 ? static_cast<Elem>(r + static_cast<std::int64_t>(p_)) : static_cast<Elem>(r);
    }
    Elem add(Elem a, Elem b) const {
        Elem s = a + b;
        return s >= p_ || s < a ? s - p_ : s;
    }
    Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p_ - b; }
    Elem mul(Elem a, Elem b) const { return detail::mulmod_u64(a, b, p_); }
    Elem neg(Elem a) const { return a == 0 ? 0 : p_ - a; }
    Elem inv(Elem a) const {
        if (a == 0) throw Error("division by zero");
        // extended Euclid on (a, p)
        std::int64_t t = 0, newt = 1;
        std::int64_t r = static_cast<std::int64_t>(p_), newr = static_cast<std::int64_t>(a);
        while (newr != 0) {
            std::int64_t q = r / newr;
            t -= q * newt;
            std::swap(t, newt);
            r -= q * newr;
            std::swap(r, newr);
        }
        return t < 0 ? static_cast<Elem>(t + static_cast<std::int64_t>(p_)) : static_cast<Elem>(t);
    }
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
    bool is_zero(Elem a) const { return a == 0; }
    bool eq(Elem a, Elem b) const { return a == b; }

    std::string str(Elem a) const { return std::to_string(a); }

    std::optional<Elem> parse(std::string_view text) const {
        if (text.empty()) return std::nullopt;
        bool negative = text[0] == '-';
        if (negative) text.remove_prefix(1);
        if (text.empty()) return std::nullopt;
        for (char c : text) {
            if (c < '0' || c > '9') return std::nullopt;
        }
        BigInt big{std::string(text)};
        Elem v = static_cast<Elem>(big % p_);
        return negative ? neg(v) : v;
    }

    Elem random(Rng& rng) const { return rng.below(p_); }

    std::string name() const { return "Fp " + std::to_string(p_); }
    bool operator==(const PrimeField&) const = default;

  private:
    std::uint64_t p_;
};

static_assert(Field<RationalField>);
static_assert(Field<PrimeField>);

}  // namespace cyclap
