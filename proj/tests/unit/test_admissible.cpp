#include <catch2/catch_amalgamated.hpp>

#include "cyclap/admissible.hpp"
#include "cyclap/generators.hpp"

using namespace cyclap;

namespace {

Ordinal ord(const char* text) {
    auto o = parse_ordinal(text);
    REQUIRE(o.has_value());
    return *o;
}

SupportSet make_support(std::size_t n, std::vector<std::pair<std::size_t, const char*>> points,
                        std::vector<std::pair<std::size_t, const char*>> ladders = {}) {
    SupportSet d;
    d.n = n;
    for (const auto& [k, text] : points) d.points.insert({k, ord(text)});
    for (const auto& [k, text] : ladders) d.ladders.insert({k, ord(text)});
    return d;
}

/// Independent admissibility oracle: enumerate every denoted element (points
/// and ladder rungs up to a deliberately larger horizon) and re-derive the
/// check directly from the definitions.
std::optional<std::string> oracle_counterexample(const SupportSet& d, std::uint64_t horizon) {
    auto check = [&](std::size_t k, const Ordinal& alpha) -> std::optional<std::string> {
        if (alpha.is_finite()) return std::nullopt;
        auto [delta, l] = limit_split(alpha);
        std::size_t vertex = (k + 2 * d.n - 1 - static_cast<std::size_t>(l % d.n)) % d.n;
        if (!d.ladders.count({vertex, delta})) {
            return "(" + std::to_string(vertex) + "," + delta.str() + ") deficient under (" + std::to_string(k) +
                   "," + alpha.str() + ")";
        }
        return std::nullopt;
    };
    for (const auto& [k, alpha] : d.points) {
        if (auto c = check(k, alpha)) return c;
    }
    for (const auto& [k, delta] : d.ladders) {
        for (std::uint64_t m = 0; m <= horizon; ++m) {
            if (auto c = check(k, fundamental_sequence(delta, m))) return c;
        }
    }
    return std::nullopt;
}

}  // namespace

TEST_CASE("deficiency membership") {
    auto d1 = make_support(3, {{0, "w"}});
    CHECK(deficiency_member(d1, 2, ord("w")));  // finite slices are never cofinal

    auto d2 = make_support(3, {}, {{0, "w"}});
    CHECK_FALSE(deficiency_member(d2, 0, ord("w")));
    CHECK(deficiency_member(d2, 0, ord("w*2")));  // rungs of the w-ladder are bounded in w*2
    CHECK(deficiency_member(d2, 1, ord("w")));

    CHECK_THROWS_AS(deficiency_member(d2, 0, ord("w+1")), PreconditionError);
}

TEST_CASE("single infinite point is rejected with the right triple") {
    auto d = make_support(2, {{0, "w"}});
    auto c = admissibility_counterexample(d);
    REQUIRE(c.has_value());
    CHECK(c->deficient_vertex == 1);
    CHECK(c->deficient_limit == ord("w"));
    CHECK(c->offset == 0);
    CHECK(c->element_vertex == 0);
    CHECK(c->element_ordinal == ord("w"));
}

TEST_CASE("ladder completion restores admissibility") {
    auto d = make_support(2, {{0, "w"}}, {{1, "w"}});
    CHECK(is_admissible(d));

    // the same point one vertex over is NOT covered by that ladder
    auto d2 = make_support(2, {{1, "w"}}, {{1, "w"}});
    CHECK_FALSE(is_admissible(d2));

    // offsets walk backwards around the cycle: (0, w+1) needs (0-2, w) = (0, w)
    auto d3 = make_support(2, {{0, "w+1"}}, {{0, "w"}});
    CHECK(is_admissible(d3));
    auto d4 = make_support(2, {{0, "w+1"}}, {{1, "w"}});
    CHECK_FALSE(is_admissible(d4));
}

TEST_CASE("finite supports are always admissible") {
    Rng rng(17);
    for (int caseno = 0; caseno < 100; ++caseno) {
        std::size_t n = 1 + rng.below(4);
        SupportSet d;
        d.n = n;
        std::size_t count = rng.below(6);
        bool has_infinite = false;
        for (std::size_t i = 0; i < count; ++i) {
            // ordinals at most w*3 in size: w*c + m
            std::uint64_t c = rng.below(3), m = rng.below(5);
            Ordinal alpha = ord_add(Ordinal::omega_power(Ordinal::finite(1), c), Ordinal::finite(m));
            has_infinite = has_infinite || !alpha.is_finite();
            d.points.insert({static_cast<std::size_t>(rng.below(n)), alpha});
        }
        // with points only: admissible iff every ordinal is finite
        CHECK(is_admissible(d) == !has_infinite);
    }
}

TEST_CASE("adding a ladder never creates deficiency") {
    Rng rng(23);
    for (int caseno = 0; caseno < 50; ++caseno) {
        std::size_t n = 1 + rng.below(3);
        SupportSet d;
        d.n = n;
        for (int i = 0; i < 3; ++i) {
            d.points.insert({static_cast<std::size_t>(rng.below(n)),
                             ord_add(Ordinal::omega_power(Ordinal::finite(1 + rng.below(2)), 1 + rng.below(2)),
                                     Ordinal::finite(rng.below(3)))});
        }
        std::size_t lk = static_cast<std::size_t>(rng.below(n));
        Ordinal ldelta = Ordinal::omega_power(Ordinal::finite(1 + rng.below(2)), 1 + rng.below(2));
        SupportSet bigger = d;
        bigger.ladders.insert({lk, ldelta});
        CHECK(deficiency_member(d, lk, ldelta));
        CHECK_FALSE(deficiency_member(bigger, lk, ldelta));
        // monotone: every non-deficient query of d stays non-deficient
        std::vector<Ordinal> queries{ord("w"), ord("w*2"), ord("w^2"), ldelta};
        for (std::size_t k = 0; k < n; ++k) {
            for (const auto& q : queries) {
                if (!deficiency_member(d, k, q)) CHECK_FALSE(deficiency_member(bigger, k, q));
            }
        }
    }
}

TEST_CASE("ladder-rung analysis agrees with a larger-horizon oracle") {
    std::vector<SupportSet> cases;
    cases.push_back(make_support(1, {}, {{0, "w"}}));
    cases.push_back(make_support(2, {}, {{0, "w*2"}}));                           // needs w at all vertices
    cases.push_back(make_support(2, {}, {{0, "w*2"}, {0, "w"}, {1, "w"}}));       // completed
    cases.push_back(make_support(1, {}, {{0, "w^2"}}));                           // limit parts escape any finite set
    cases.push_back(make_support(1, {}, {{0, "w^2"}, {0, "w"}}));                 // still inadmissible
    cases.push_back(make_support(2, {}, {{0, "w^2+w"}}));
    cases.push_back(make_support(1, {}, {{0, "w^w"}}));
    cases.push_back(make_support(3, {{0, "w+2"}}, {{1, "w"}, {2, "w"}, {0, "w"}}));
    cases.push_back(make_support(3, {{0, "w+2"}}, {{1, "w"}}));
    for (const auto& d : cases) {
        bool ours = is_admissible(d);
        bool oracle = !oracle_counterexample(d, 3 * (d.n + d.ladders.size() + d.points.size() + 10)).has_value();
        CHECK(ours == oracle);
    }
}

TEST_CASE("supremum of the combined support") {
    SupportSet empty;
    empty.n = 2;
    CHECK(csup_ubd(empty).ubd == Ordinal());

    auto d = make_support(2, {{0, "3"}, {1, "7"}});
    CHECK(csup_ubd(d).ubd == Ordinal::finite(7));

    auto d2 = make_support(2, {{1, "w"}}, {{0, "w^2"}});
    CHECK(csup_ubd(d2).ubd == ord("w^2"));
    CHECK(csup_ubd(d2).str().find("w^2") != std::string::npos);
}

TEST_CASE("support files round-trip") {
    AdmissibleFamily fam;
    fam.support.n = 2;
    fam.support.points.insert({0, ord("w+1")});
    fam.point_mult[{0, ord("w+1")}] = Card(2);
    fam.support.ladders.insert({1, ord("w")});
    fam.ladder_mult[{1, ord("w")}] = Card(1);
    fam.inf_entries[0] = Card::aleph0();

    std::string text = write_support(fam);
    AdmissibleFamily back = parse_support(text);
    CHECK(back.support == fam.support);
    CHECK(back.point_mult == fam.point_mult);
    CHECK(back.ladder_mult == fam.ladder_mult);
    CHECK(back.inf_entries == fam.inf_entries);
    CHECK(write_support(back) == text);

    CHECK_THROWS_AS(parse_support("support v1\nn 2\nladder 0 w+1\n"), ParseError);
    CHECK_THROWS_AS(parse_support("support v1\nn 2\npoint 5 w\n"), ParseError);
}
