#include <catch2/catch_amalgamated.hpp>

#include "cyclap/extension.hpp"
#include "cyclap/generators.hpp"

using namespace cyclap;

namespace {

RationalField Q;

Matrix<RationalField> qmat(std::size_t rows, std::size_t cols, std::vector<long> entries) {
    Matrix<RationalField> m(Q, rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = Q.from_int(entries[i * cols + j]);
    }
    return m;
}

CycleRep<RationalField> rep_a() {
    return CycleRep<RationalField>(Q, 2, {1, 1}, {qmat(1, 1, {1}), qmat(1, 1, {0})});
}

CycleRep<RationalField> rep_b() {
    return CycleRep<RationalField>(Q, 2, {1, 1}, {qmat(1, 1, {0}), qmat(1, 1, {1})});
}

std::vector<BigRational> qvec(std::vector<long> entries) {
    std::vector<BigRational> v;
    for (long e : entries) v.push_back(BigRational(e));
    return v;
}

}  // namespace

TEST_CASE("kernel-vector extension pairs the two kernel lines") {
    ExtensionContext<RationalField> ctx(rep_a(), rep_a());
    auto g = empty_graph(ctx);
    auto g1 = extend_kernel_vector(ctx, g, 1, qvec({1}));
    CHECK(g1.fibers[1].dim() == 1);
    CHECK(g1.fibers[1].contains(qvec({1, 1})));
    CHECK(validate_graph(ctx, g1));

    // zero vector: unchanged
    CHECK(extend_kernel_vector(ctx, g, 1, qvec({0})).fibers[1].dim() == 0);
}

TEST_CASE("kernel-vector extension fails across different invariants") {
    ExtensionContext<RationalField> ctx(rep_a(), rep_b());
    auto g = empty_graph(ctx);
    CHECK_THROWS_AS(extend_kernel_vector(ctx, g, 1, qvec({1})), NoWitness);
}

TEST_CASE("simple extension catches a vector whose image is caught") {
    ExtensionContext<RationalField> ctx(rep_a(), rep_a());
    auto g = extend_kernel_vector(ctx, empty_graph(ctx), 1, qvec({1}));
    auto g2 = simple_extend(ctx, g, 0, qvec({1}));
    CHECK(g2.fibers[0].contains(qvec({1, 1})));
    CHECK(validate_graph(ctx, g2));

    // precondition: the image must be caught first
    CHECK_THROWS_AS(simple_extend(ctx, empty_graph(ctx), 0, qvec({1})), PreconditionError);

    // already caught: unchanged
    CHECK(simple_extend(ctx, g2, 0, qvec({2})).fibers[0].dim() == 1);
}

TEST_CASE("super-elementary preconditions are reported by name") {
    ExtensionContext<RationalField> ctx(rep_a(), rep_a());
    auto g = empty_graph(ctx);

    // image pair not caught at the next vertex
    CHECK_THROWS_AS(super_elementary_extend(ctx, g, 0, qvec({1}), qvec({1})), ImageNotCaught);

    auto g1 = super_elementary_extend(ctx, g, 1, qvec({1}), qvec({1}));
    CHECK_THROWS_AS(super_elementary_extend(ctx, g1, 1, qvec({2}), qvec({2})), AlreadyPresent);

    // height mismatch: pair a height-0 vector with a height-1 vector
    auto sum_ab = direct_sum(rep_a(), rep_b());
    ExtensionContext<RationalField> ctx2(sum_ab, sum_ab);
    auto h = empty_graph(ctx2);
    CHECK_THROWS_AS(super_elementary_extend(ctx2, h, 0, qvec({1, 0}), qvec({0, 1})), HeightMismatch);
}

TEST_CASE("finite extension recurses on the nilindex") {
    ExtensionContext<RationalField> ctx(rep_a(), rep_a());
    auto g = finite_extend(ctx, empty_graph(ctx), 0, qvec({1}));
    CHECK(g.fibers[0].contains(qvec({1, 1})));
    CHECK(g.fibers[1].contains(qvec({1, 1})));
    CHECK(validate_graph(ctx, g));

    CHECK(finite_extend(ctx, empty_graph(ctx), 0, qvec({0})).fibers[0].dim() == 0);

    ExtensionContext<RationalField> bad(rep_a(), rep_b());
    CHECK_THROWS_AS(finite_extend(bad, empty_graph(bad), 0, qvec({1})), NoWitness);
}

TEST_CASE("adapted representatives") {
    auto u = rep_a();
    ChainResult<RationalField> ch(u);
    ExtensionContext<RationalField>::Side side{&u, &ch};

    // singleton coset
    auto zero_space = Subspace<RationalField>::zero(Q, 1);
    CHECK(vec_eq(Q, adapted_representative<RationalField>(side, 0, qvec({1}), zero_space), qvec({1})));
    CHECK(vec_eq(Q, adapted_representative(u, 0, qvec({1}), zero_space), qvec({1})));

    // x inside A: only the zero vector is adapted
    auto full = Subspace<RationalField>::full(Q, 1);
    CHECK(vec_eq(Q, adapted_representative<RationalField>(side, 0, qvec({1}), full), qvec({0})));

    // doubled representation at vertex 1: every nonzero vector has height 1,
    // the canonical solve keeps the free coordinate at zero
    auto doubled = direct_sum(rep_a(), rep_a());
    ChainResult<RationalField> ch2(doubled);
    ExtensionContext<RationalField>::Side side2{&doubled, &ch2};
    auto diag = Subspace<RationalField>::span(qmat(1, 2, {1, 1}));
    auto rep = adapted_representative<RationalField>(side2, 1, qvec({1, 0}), diag);
    CHECK(height(ch2, 1, rep) == OrdinalOrInfinity(Ordinal::finite(1)));
    CHECK(diag.contains(vec_sub(Q, rep, qvec({1, 0}))));
    CHECK(vec_eq(Q, rep, qvec({1, 0})));
}

TEST_CASE("graphs stay coherent through a scripted zigzag") {
    Rng rng(31);
    for (int caseno = 0; caseno < 10; ++caseno) {
        std::size_t n = 1 + rng.below(3);
        InvariantTable table = random_finite_table(rng, n, 3, 2, 3);
        auto u = realize_finite(table, Q);
        auto v = random_basis_change(u, rng.next()).first;
        ExtensionContext<RationalField> ctx(u, v);
        auto g = empty_graph(ctx);
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t j = 0; j < u.dim(k); ++j) {
                g = finite_extend(ctx, g, k, unit_vector(Q, u.dim(k), j));
                REQUIRE(validate_graph(ctx, g));
            }
        }
        for (std::size_t k = 0; k < n; ++k) {
            CHECK(first_projection(ctx, g, k).dim() == u.dim(k));
        }
    }
}

TEST_CASE("build_isomorphism end to end") {
    auto self = build_isomorphism(rep_a(), rep_a());
    REQUIRE(self.has_value());
    CHECK(is_isomorphism(rep_a(), rep_a(), *self));

    CHECK_FALSE(build_isomorphism(rep_a(), rep_b()).has_value());

    Rng rng(77);
    InvariantTable table;
    table.n = 2;
    table.add_finite(0, Ordinal::finite(1), Card(1));
    table.add_finite(1, Ordinal::finite(2), Card(2));
    auto u = realize_finite(table, Q);
    auto v = random_basis_change(u, 12345).first;
    auto fam = build_isomorphism(v, u);
    REQUIRE(fam.has_value());
    CHECK(is_isomorphism(v, u, *fam));
}

TEST_CASE("saturated multisets bypass the graph machinery") {
    std::map<std::size_t, Card> cells{{0, Card(2)}, {1, Card::aleph0()}};
    std::vector<Matrix<RationalField>> maps_a{qmat(1, 1, {1}), qmat(1, 1, {0})};
    CycleRep<RationalField> u(Q, 2, {1, 1}, maps_a, cells);
    CycleRep<RationalField> v = random_basis_change(u, 5).first;
    auto fam = build_isomorphism(u, v);
    REQUIRE(fam.has_value());
    CHECK(is_isomorphism(u, v, *fam));

    std::map<std::size_t, Card> other{{0, Card(2)}};
    CycleRep<RationalField> w(Q, 2, {1, 1}, maps_a, other);
    CHECK_FALSE(build_isomorphism(u, w).has_value());
}

TEST_CASE("the limit-ordinal branch never fires") {
    CHECK(limit_branch_count().load() == 0);
}
