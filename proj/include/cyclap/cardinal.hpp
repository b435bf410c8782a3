#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace cyclap {

/// Countable cardinal: a finite count or aleph_0. Addition saturates at
/// aleph_0, which is all the invariant bookkeeping needs.
class Card {
  public:
    Card() : finite_(0) {}
    explicit Card(std::uint64_t n) : finite_(n) {}

    static Card aleph0() {
        Card c;
        c.finite_.reset();
        return c;
    }

    bool is_aleph0() const { return !finite_.has_value(); }
    bool is_zero() const { return finite_ && *finite_ == 0; }
    std::uint64_t finite_value() const {
        if (!finite_) throw PreconditionError("cardinal is aleph0");
        return *finite_;
    }

    friend Card operator+(const Card& a, const Card& b) {
        if (a.is_aleph0() || b.is_aleph0()) return aleph0();
        return Card(*a.finite_ + *b.finite_);
    }

    friend std::strong_ordering operator<=>(const Card& a, const Card& b) {
        if (a.is_aleph0() && b.is_aleph0()) return std::strong_ordering::equal;
        if (a.is_aleph0()) return std::strong_ordering::greater;
        if (b.is_aleph0()) return std::strong_ordering::less;
        return *a.finite_ <=> *b.finite_;
    }

    friend bool operator==(const Card& a, const Card& b) { return (a <=> b) == std::strong_ordering::equal; }

    std::string str() const { return is_aleph0() ? "aleph0" : std::to_string(*finite_); }

    /// Accepts a decimal count, `aleph0`, or the `inf` spelling used by the
    /// saturated-multiset file syntax.
    static std::optional<Card> parse(std::string_view text) {
        if (text == "aleph0" || text == "inf") return aleph0();
        if (text.empty() || text.size() > 19) return std::nullopt;
        std::uint64_t v = 0;
        for (char c : text) {
            if (c < '0' || c > '9') return std::nullopt;
            v = v * 10 + static_cast<std::uint64_t>(c - '0');
        }
        return Card(v);
    }

  private:
    std::optional<std::uint64_t> finite_;
};

}  // namespace cyclap
