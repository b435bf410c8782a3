#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "errors.hpp"
#include "fields.hpp"
#include "matrix.hpp"

namespace cyclap {

/// Univariate polynomial over a field, coefficients in increasing degree,
/// no trailing zeros. The zero polynomial has an empty coefficient list.
template <Field F>
class Poly {
  public:
    using Elem = typename F::Elem;

    explicit Poly(F field) : field_(field) {}

    Poly(F field, std::vector<Elem> coeffs) : field_(field), coeffs_(std::move(coeffs)) { trim(); }

    static Poly zero(const F& f) { return Poly(f); }
    static Poly constant(const F& f, const Elem& c) { return Poly(f, {c}); }
    static Poly one(const F& f) { return constant(f, f.one()); }
    static Poly t(const F& f) { return Poly(f, {f.zero(), f.one()}); }

    const F& field() const { return field_; }
    const std::vector<Elem>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    /// Degree of the zero polynomial is -1 by convention.
    std::ptrdiff_t degree() const { return static_cast<std::ptrdiff_t>(coeffs_.size()) - 1; }

    Elem coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : field_.zero(); }
    Elem leading() const {
        if (is_zero()) throw Error("leading coefficient of zero polynomial");
        return coeffs_.back();
    }

    bool operator==(const Poly& other) const {
        if (coeffs_.size() != other.coeffs_.size()) return false;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (!field_.eq(coeffs_[i], other.coeffs_[i])) return false;
        }
        return true;
    }

    Poly operator+(const Poly& rhs) const {
        std::vector<Elem> out(std::max(coeffs_.size(), rhs.coeffs_.size()), field_.zero());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = field_.add(coeff(i), rhs.coeff(i));
        return Poly(field_, std::move(out));
    }

    Poly operator-(const Poly& rhs) const {
        std::vector<Elem> out(std::max(coeffs_.size(), rhs.coeffs_.size()), field_.zero());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = field_.sub(coeff(i), rhs.coeff(i));
        return Poly(field_, std::move(out));
    }

    Poly operator*(const Poly& rhs) const {
        if (is_zero() || rhs.is_zero()) return zero(field_);
        std::vector<Elem> out(coeffs_.size() + rhs.coeffs_.size() - 1, field_.zero());
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (field_.is_zero(coeffs_[i])) continue;
            for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) {
                out[i + j] = field_.add(out[i + j], field_.mul(coeffs_[i], rhs.coeffs_[j]));
            }
        }
        return Poly(field_, std::move(out));
    }

    Poly scale(const Elem& c) const {
        std::vector<Elem> out = coeffs_;
        for (auto& e : out) e = field_.mul(c, e);
        return Poly(field_, std::move(out));
    }

    Poly monic() const {
        if (is_zero()) return *this;
        return scale(field_.inv(leading()));
    }

    /// Human-readable form like `t^2+3*t+1`; only used in reports.
    std::string str() const {
        if (is_zero()) return "0";
        std::string out;
        for (std::size_t idx = coeffs_.size(); idx-- > 0;) {
            if (field_.is_zero(coeffs_[idx])) continue;
            if (!out.empty()) out += "+";
            const bool unit = field_.eq(coeffs_[idx], field_.one());
            if (idx == 0) {
                out += field_.str(coeffs_[idx]);
            } else {
                if (!unit) out += field_.str(coeffs_[idx]) + "*";
                out += idx == 1 ? "t" : "t^" + std::to_string(idx);
            }
        }
        return out;
    }

  private:
    void trim() {
        while (!coeffs_.empty() && field_.is_zero(coeffs_.back())) coeffs_.pop_back();
    }

    F field_;
    std::vector<Elem> coeffs_;
};

/// Euclidean division: a = q*b + r with deg r < deg b.
template <Field F>
std::pair<Poly<F>, Poly<F>> poly_divmod(const Poly<F>& a, const Poly<F>& b) {
    const F& f = a.field();
    if (b.is_zero()) throw Error("polynomial division by zero");
    std::vector<typename F::Elem> rem(a.coeffs());
    std::ptrdiff_t db = b.degree();
    if (a.degree() < db) return {Poly<F>::zero(f), a};
    std::vector<typename F::Elem> quot(static_cast<std::size_t>(a.degree() - db) + 1, f.zero());
    const auto lead_inv = f.inv(b.leading());
    for (std::ptrdiff_t d = a.degree(); d >= db;) {
        if (f.is_zero(rem[static_cast<std::size_t>(d)])) {
            --d;
            continue;
        }
        const auto c = f.mul(rem[static_cast<std::size_t>(d)], lead_inv);
        quot[static_cast<std::size_t>(d - db)] = c;
        for (std::ptrdiff_t j = 0; j <= db; ++j) {
            auto& slot = rem[static_cast<std::size_t>(d - db + j)];
            slot = f.sub(slot, f.mul(c, b.coeff(static_cast<std::size_t>(j))));
        }
        --d;
    }
    return {Poly<F>(f, std::move(quot)), Poly<F>(f, std::move(rem))};
}

template <Field F>
Poly<F> poly_div_exact(const Poly<F>& a, const Poly<F>& b) {
    auto [q, r] = poly_divmod(a, b);
    if (!r.is_zero()) throw Error("polynomial division is not exact");
    return q;
}

template <Field F>
bool poly_divides(const Poly<F>& d, const Poly<F>& a) {
    if (d.is_zero()) return a.is_zero();
    return poly_divmod(a, d).second.is_zero();
}

/// Monic gcd.
template <Field F>
Poly<F> poly_gcd(Poly<F> a, Poly<F> b) {
    while (!b.is_zero()) {
        auto r = poly_divmod(a, b).second;
        a = b;
        b = r;
    }
    return a.is_zero() ? a : a.monic();
}

template <Field F>
Poly<F> poly_lcm(const Poly<F>& a, const Poly<F>& b) {
    if (a.is_zero() || b.is_zero()) return Poly<F>::zero(a.field());
    return poly_div_exact(a * b, poly_gcd(a, b)).monic();
}

/// Horner evaluation of p(A) applied to v.
template <Field F>
std::vector<typename F::Elem> poly_apply(const Poly<F>& p, const Matrix<F>& a,
                                         const std::vector<typename F::Elem>& v) {
    const F& f = p.field();
    std::vector<typename F::Elem> acc(v.size(), f.zero());
    for (std::size_t idx = p.coeffs().size(); idx-- > 0;) {
        acc = a.apply(acc);
        const auto& c = p.coeff(idx);
        if (!f.is_zero(c)) {
            for (std::size_t j = 0; j < v.size(); ++j) acc[j] = f.add(acc[j], f.mul(c, v[j]));
        }
    }
    return acc;
}

}  // namespace cyclap
