#pragma once

#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "extension.hpp"
#include "generators.hpp"
#include "invariant_factors.hpp"
#include "repio.hpp"

namespace cyclap {

struct SuiteResult {
    std::string name;
    std::uint64_t passes = 0;
    std::uint64_t failures = 0;
    std::vector<std::string> notes;

    void check(bool ok, const std::string& what) {
        if (ok) {
            ++passes;
        } else {
            ++failures;
            if (notes.size() < 5) notes.push_back(what);
        }
    }
};

namespace selfcheck {

template <Field F>
void exactalg_iteration(SuiteResult& suite, Rng& rng, const F& field) {
    std::size_t rows = rng.below(5), cols = rng.below(5);
    Matrix<F> m = random_matrix(field, rng, rows, cols);
    auto res = rref(m);
    suite.check(res.rank == res.pivots.size(), "rank equals pivot count");
    Subspace<F> ker = kernel_basis(m);
    suite.check(res.rank + ker.dim() == cols, "rank-nullity");
    bool killed = true;
    for (std::size_t i = 0; i < ker.dim(); ++i) {
        if (!vec_is_zero(field, m.apply(ker.basis().row(i)))) killed = false;
    }
    suite.check(killed, "kernel rows are killed");

    // canonical RREF: a scrambled spanning set gives the same stored basis
    std::size_t ambient = 1 + rng.below(4);
    Matrix<F> gen = random_matrix(field, rng, 1 + rng.below(3), ambient);
    Subspace<F> s = Subspace<F>::span(gen);
    Matrix<F> mixer = random_invertible(field, rng, gen.rows());
    Subspace<F> s2 = Subspace<F>::span(mixer * gen);
    suite.check(s == s2, "RREF basis is canonical for the row space");

    Subspace<F> a = Subspace<F>::span(random_matrix(field, rng, rng.below(3), ambient));
    Subspace<F> b = Subspace<F>::span(random_matrix(field, rng, rng.below(3), ambient));
    suite.check(sum(a, b).dim() + intersect(a, b).dim() == a.dim() + b.dim(), "modular dimension law");
}

inline void invariant_factor_iteration(SuiteResult& suite, Rng& rng) {
    PrimeField f5(5);
    std::size_t n = 1 + rng.below(5);
    Matrix<PrimeField> m = random_matrix(f5, rng, n, n);
    Matrix<PrimeField> p = random_invertible(f5, rng, n);
    auto pinv = inverse(p);
    auto fa = invariant_factors(m);
    auto fb = invariant_factors(p * m * *pinv);
    bool equal = fa.size() == fb.size();
    for (std::size_t i = 0; equal && i < fa.size(); ++i) equal = fa[i] == fb[i];
    suite.check(equal, "invariant factors are conjugation invariant");
    std::ptrdiff_t total = 0;
    for (const auto& q : fa) total += q.degree();
    suite.check(total == static_cast<std::ptrdiff_t>(n), "invariant factor degrees sum to n");
    for (std::size_t i = 0; i + 1 < fa.size(); ++i) {
        suite.check(poly_divides(fa[i], fa[i + 1]), "divisibility chain");
    }
}

inline void ordinal_iteration(SuiteResult& suite, Rng& rng) {
    Ordinal a = random_ordinal(rng), b = random_ordinal(rng), c = random_ordinal(rng);
    suite.check(ord_add(ord_add(a, b), c) == ord_add(a, ord_add(b, c)), "ordinal addition associativity");
    suite.check(a < ord_succ(a), "a < succ a");
    suite.check(classify(ord_succ(a)) == OrdinalKind::Successor, "succ classifies as successor");
    suite.check(ord_pred(ord_succ(a)) == a, "pred of succ");
    if (a < b && b < c) suite.check(a < c, "comparison transitivity");
    if (!a.is_finite()) {
        auto [delta, l] = limit_split(a);
        suite.check(classify(delta) == OrdinalKind::Limit, "limit part is a limit");
        suite.check(ord_add(delta, Ordinal::finite(l)) == a, "limit_split recomposes");
    }
    Ordinal lim = ord_add(random_ordinal(rng), Ordinal::omega_power(Ordinal::finite(1 + rng.below(2)), 1 + rng.below(2)));
    if (classify(lim) == OrdinalKind::Limit) {
        std::uint64_t m = rng.below(50);
        Ordinal fm = fundamental_sequence(lim, m);
        Ordinal fm1 = fundamental_sequence(lim, m + 1);
        suite.check(fm < fm1 && fm1 < lim, "fundamental sequence strictly increases below its limit");
    }
    auto parsed = parse_ordinal(a.str());
    suite.check(parsed && *parsed == a, "ordinal text round-trip");
}

template <Field F>
void height_iteration(SuiteResult& suite, Rng& rng, const F& field) {
    std::size_t n = 1 + rng.below(3);
    CycleRep<F> u = random_nilpotent_rep(rng, field, n, 3, 2, 3);
    ChainResult<F> ch(u);
    suite.check(ch.core_is_zero(), "nilpotent finite matrix part is reduced");
    std::size_t k = static_cast<std::size_t>(rng.below(n));
    if (u.dim(k) == 0) return;
    auto x = random_vector(field, rng, u.dim(k));
    auto y = random_vector(field, rng, u.dim(k));
    auto hx = height(ch, k, x);
    auto hy = height(ch, k, y);
    auto hsum = height(ch, k, vec_add(field, x, y));
    suite.check(hsum >= std::min(hx, hy), "height subadditivity");
    if (!(hx == hy)) suite.check(hsum == std::min(hx, hy), "height equality for distinct heights");
    auto lambda = field.random(rng);
    if (!field.is_zero(lambda)) {
        suite.check(height(ch, k, vec_scale(field, lambda, x)) == hx, "height is scale invariant");
    }

    // distinct-height vectors are linearly independent
    std::vector<std::vector<typename F::Elem>> picked;
    std::vector<std::size_t> seen;
    for (int t = 0; t < 6; ++t) {
        auto v = random_vector(field, rng, u.dim(k));
        auto s = ch.stage_height(k, v);
        if (!s) continue;
        bool dup = false;
        for (std::size_t stage : seen) dup = dup || stage == *s;
        if (dup) continue;
        seen.push_back(*s);
        picked.push_back(v);
    }
    if (picked.size() >= 2) {
        Matrix<F> stacked(field, picked.size(), u.dim(k));
        for (std::size_t i = 0; i < picked.size(); ++i) stacked.set_row(i, picked[i]);
        suite.check(rank(stacked) == picked.size(), "distinct heights are independent");
    }

    // lifting principle, constructive
    auto target = random_vector(field, rng, u.dim(k));
    auto s = ch.stage_height(k, target);
    if (s && *s >= 1) {
        auto lift = solve_in_subspace(u.map(k + n - 1), ch.at(k + n - 1, *s - 1), target);
        suite.check(lift.has_value(), "lifting principle solvable");
        if (lift) suite.check(ch.stage_height(k + n - 1, *lift) == *s - 1, "lift has height alpha-1");
    }

    // the kernel-vs-image subspace identity at every stage
    for (std::size_t alpha = 0; alpha < ch.length(); ++alpha) {
        auto lhs = intersect(ch.at(k, alpha), preimage_of(u.map(k), ch.at(k + 1, alpha + 2)));
        auto rhs = sum(ch.at(k, alpha + 1), intersect(ch.at(k, alpha), kernel_basis(u.map(k))));
        suite.check(lhs == rhs, "stage identity U ∩ preimage = next + kernel part");
    }
}

/// Exhaustive adaptedness characterization over a small prime field.
inline void adapted_iteration(SuiteResult& suite, Rng& rng) {
    PrimeField field(rng.coin() ? 2 : 3);
    std::size_t n = 1 + rng.below(2);
    CycleRep<PrimeField> u = random_nilpotent_rep(rng, field, n, 2, 2, 2);
    ChainResult<PrimeField> ch(u);
    std::size_t k = static_cast<std::size_t>(rng.below(n));
    if (u.dim(k) == 0 || u.dim(k) > 4) return;
    Subspace<PrimeField> a = Subspace<PrimeField>::span(random_matrix(field, rng, rng.below(3), u.dim(k)));
    auto x = random_vector(field, rng, u.dim(k));
    typename ExtensionContext<PrimeField>::Side side{&u, &ch};

    // enumerate the whole coset x + A
    std::vector<std::vector<std::uint64_t>> members;
    std::vector<std::uint64_t> coeff(a.dim(), 0);
    while (true) {
        auto y = x;
        for (std::size_t i = 0; i < a.dim(); ++i) {
            auto scaled = vec_scale(field, coeff[i], a.basis().row(i));
            y = vec_add(field, y, scaled);
        }
        members.push_back(y);
        std::size_t carry = 0;
        while (carry < coeff.size()) {
            if (++coeff[carry] < field.modulus()) break;
            coeff[carry] = 0;
            ++carry;
        }
        if (carry == coeff.size()) break;
    }
    auto hx = height(ch, k, x);
    OrdinalOrInfinity best = hx;
    for (const auto& y : members) best = std::max(best, height(ch, k, y));
    bool adapted_by_definition = hx == best;
    suite.check(is_adapted<PrimeField>(side, k, x, a) == adapted_by_definition,
                "is_adapted matches the max-over-coset definition");

    // characterization: adapted iff h(x+y) = min(h x, h y) for every y in A
    bool characterization = true;
    std::vector<std::uint64_t> acoeff(a.dim(), 0);
    while (true) {
        std::vector<std::uint64_t> y(u.dim(k), 0);
        for (std::size_t i = 0; i < a.dim(); ++i) {
            y = vec_add(field, y, vec_scale(field, acoeff[i], a.basis().row(i)));
        }
        if (!(height(ch, k, vec_add(field, x, y)) == std::min(height(ch, k, y), hx))) characterization = false;
        std::size_t carry = 0;
        while (carry < acoeff.size()) {
            if (++acoeff[carry] < field.modulus()) break;
            acoeff[carry] = 0;
            ++carry;
        }
        if (carry == acoeff.size()) break;
    }
    suite.check(adapted_by_definition == characterization, "adaptedness characterization");

    // height outside the height set of A implies adapted
    bool in_height_set = false;
    std::vector<std::uint64_t> zcoeff(a.dim(), 0);
    while (true) {
        std::vector<std::uint64_t> y(u.dim(k), 0);
        for (std::size_t i = 0; i < a.dim(); ++i) {
            y = vec_add(field, y, vec_scale(field, zcoeff[i], a.basis().row(i)));
        }
        if (height(ch, k, y) == hx) in_height_set = true;
        std::size_t carry = 0;
        while (carry < zcoeff.size()) {
            if (++zcoeff[carry] < field.modulus()) break;
            zcoeff[carry] = 0;
            ++carry;
        }
        if (carry == zcoeff.size()) break;
    }
    if (!in_height_set) suite.check(adapted_by_definition, "height outside h(A) implies adapted");

    // adapted_representative returns a maximal-height coset member
    auto rep = adapted_representative<PrimeField>(side, k, x, a);
    suite.check(height(ch, k, rep) == best, "adapted representative achieves the maximum");
    bool in_coset = a.contains(vec_sub(field, rep, x));
    suite.check(in_coset, "adapted representative stays in the coset");
}

template <Field F>
void invariants_iteration(SuiteResult& suite, Rng& rng, const F& field) {
    std::size_t n = 1 + rng.below(3);
    CycleRep<F> u = random_nilpotent_rep(rng, field, n, 3, 2, 3);
    CycleRep<F> v = random_nilpotent_rep(rng, field, n, 3, 2, 3);
    InvariantTable tu = kaplansky_invariants(u);
    InvariantTable tv = kaplansky_invariants(v);
    InvariantTable tsum = kaplansky_invariants(direct_sum(u, v));
    InvariantTable expected = tu;
    for (const auto& [key, card] : tv.finite) expected.add_finite(key.first, key.second, card);
    for (const auto& [k, card] : tv.infinite) expected.add_infinite(k, card);
    suite.check(tsum == expected, "invariants are additive over direct sums");

    auto [w, fam] = random_basis_change(u, rng.next());
    suite.check(is_isomorphism(u, w, fam), "basis change produces a verified isomorphism");
    suite.check(kaplansky_invariants(w) == tu, "invariants are isomorphism invariant");

    SupportSet support;
    support.n = n;
    for (const auto& [key, card] : tu.finite) support.points.insert(key);
    suite.check(is_admissible(support), "computed tables are admissible");
}

template <Field F>
void terminal_iteration(SuiteResult& suite, Rng& rng, const F& field) {
    std::size_t n = 1 + rng.below(3);
    TerminalRep f = random_terminal(rng, n, 4, 3);
    suite.check(validate_terminal(f).empty(), "generated terminal reps validate");
    DiscreteTable nums = discrete_numbers(f);

    // the finite-set formula card h^{-1}(alpha) - card h^{-1}(alpha+1)
    PointedChain ch = pointed_chain(f);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t alpha = 0; alpha < ch.length; ++alpha) {
            std::uint64_t lo = 0, hi = 0;
            for (const auto& x : f.elems[k]) {
                if (ch.stage_height(k, x) == alpha) ++lo;
            }
            for (const auto& y : f.elems[(k + 1) % n]) {
                if (ch.stage_height(k + 1, y) == alpha + 1) ++hi;
            }
            auto it = nums.find({k, alpha});
            std::uint64_t stored = it == nums.end() ? 0 : it->second;
            suite.check(stored + hi == lo, "two-term formula matches the finite count");
        }
    }

    CycleRep<F> realized = linear_realization(f, field);
    suite.check(is_locally_nilpotent(realized), "realization is locally nilpotent");
    suite.check(is_reduced(realized), "realization is reduced");
    InvariantTable kappa = kaplansky_invariants(realized);
    InvariantTable from_nums;
    from_nums.n = n;
    for (const auto& [key, count] : nums) from_nums.add_finite(key.first, Ordinal::finite(key.second), Card(count));
    suite.check(kappa == from_nums, "kappa of the realization equals the discrete numbers");

    // pointed sums: additivity and the max rule for lengths
    TerminalRep g = random_terminal(rng, n, 4, 2);
    TerminalRep s = pointed_sum({f, g});
    DiscreteTable expect = nums;
    for (const auto& [key, count] : discrete_numbers(g)) expect[key] += count;
    suite.check(discrete_numbers(s) == expect, "pointed sums add discrete numbers");
    suite.check(terminal_length(s) == std::max(terminal_length(f), terminal_length(g)),
                "pointed sums take the max length");

    // augmentation bookkeeping
    std::size_t l = static_cast<std::size_t>(rng.below(n));
    try {
        std::size_t len = terminal_length(f);
        TerminalRep fa = augment(f, l);
        suite.check(terminal_length(fa) == len + 1, "augmentation adds one to the length");
        DiscreteTable na = discrete_numbers(fa);
        DiscreteTable want = nums;
        if (len >= 1) {
            auto key = std::make_pair((l + n - 1) % n, len - 1);
            auto it = want.find(key);
            if (it != want.end() && --it->second == 0) want.erase(it);
        }
        want[{l, len}] += 1;
        suite.check(na == want, "augmentation bookkeeping for the discrete numbers");
    } catch (const PropertyAViolated&) {
        suite.check(true, "augmentation rejected");
    }
}

template <Field F>
void roundtrip_iteration(SuiteResult& suite, Rng& rng, const F& field) {
    std::size_t n = 1 + rng.below(4);
    InvariantTable table = random_finite_table(rng, n, 4, 3, 4);
    CycleRep<F> realized = realize_finite(table, field);
    suite.check(kaplansky_invariants(realized) == table, "kappa(realize(m)) = m");
    auto dec = decompose(realized);
    suite.check(dec.cells == cells_of_table(table), "decompose recovers the generating cells");
    suite.check(is_isomorphism(realized, dec.canonical, dec.morphism), "decomposition morphism verifies");

    auto text = write_cyclerep(realized);
    auto back = parse_cyclerep(text);
    bool same = std::visit(
        [&](const auto& r) {
            if constexpr (std::is_same_v<std::decay_t<decltype(r)>, CycleRep<F>>) {
                return r == realized;
            } else {
                return false;
            }
        },
        back);
    suite.check(same, "cyclerep file round-trip");

    TerminalRep t = random_terminal(rng, n, 3, 2);
    suite.check(parse_terminal(write_terminal(t)) == t, "terminal file round-trip");
}

template <Field F>
void iso_iteration(SuiteResult& suite, Rng& rng, const F& field) {
    std::size_t n = 1 + rng.below(3);
    CellMultiset cells = random_cells(rng, n, 4, 3, 2);
    CycleRep<F> u = realize_cells<F>(cells, field, n).rep;
    auto [v, fam] = random_basis_change(u, rng.next());
    auto cert = build_isomorphism(u, v);
    suite.check(cert.has_value(), "matched pair yields a certificate");
    if (cert) suite.check(is_isomorphism(u, v, *cert), "certificate verifies by multiplication");

    CellMultiset other = perturb_cells(rng, cells, n, 4);
    CycleRep<F> w = realize_cells<F>(other, field, n).rep;
    auto none = build_isomorphism(u, random_basis_change(w, rng.next()).first);
    suite.check(!none.has_value(), "perturbed cells are not isomorphic");
}

}  // namespace selfcheck

/// Runs every randomized property suite `iters` times with independent
/// sub-seeds. Mirrors the invariants the modules promise; the CLI `selfcheck`
/// command reports the counts.
inline std::vector<SuiteResult> run_selfcheck(std::uint64_t seed, std::uint64_t iters) {
    Rng root(seed);
    RationalField q;
    PrimeField f2(2), f5(5);
    std::vector<SuiteResult> results;

    auto run = [&](const std::string& name, auto&& body) {
        SuiteResult suite;
        suite.name = name;
        Rng rng = root.split();
        for (std::uint64_t i = 0; i < iters; ++i) body(suite, rng);
        results.push_back(std::move(suite));
    };

    run("exactalg", [&](SuiteResult& s, Rng& rng) {
        selfcheck::exactalg_iteration(s, rng, q);
        selfcheck::exactalg_iteration(s, rng, f5);
        selfcheck::invariant_factor_iteration(s, rng);
    });
    run("ordinal", [&](SuiteResult& s, Rng& rng) { selfcheck::ordinal_iteration(s, rng); });
    run("heights", [&](SuiteResult& s, Rng& rng) {
        selfcheck::height_iteration(s, rng, q);
        selfcheck::height_iteration(s, rng, f2);
    });
    run("adapted", [&](SuiteResult& s, Rng& rng) { selfcheck::adapted_iteration(s, rng); });
    run("invariants", [&](SuiteResult& s, Rng& rng) {
        selfcheck::invariants_iteration(s, rng, q);
        selfcheck::invariants_iteration(s, rng, f2);
    });
    run("terminal", [&](SuiteResult& s, Rng& rng) {
        selfcheck::terminal_iteration(s, rng, q);
        selfcheck::terminal_iteration(s, rng, f2);
    });
    run("roundtrip", [&](SuiteResult& s, Rng& rng) {
        selfcheck::roundtrip_iteration(s, rng, q);
        selfcheck::roundtrip_iteration(s, rng, f5);
    });
    run("iso", [&](SuiteResult& s, Rng& rng) {
        selfcheck::iso_iteration(s, rng, q);
        selfcheck::iso_iteration(s, rng, f2);
    });
    return results;
}

}  // namespace cyclap
