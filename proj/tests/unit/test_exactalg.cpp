#include <catch2/catch_amalgamated.hpp>

#include "cyclap/invariant_factors.hpp"
#include "cyclap/matrix.hpp"
#include "cyclap/rational_form.hpp"
#include "cyclap/rng.hpp"
#include "cyclap/subspace.hpp"

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

}  // namespace

TEST_CASE("rref handles the zero and identity matrices") {
    auto z = rref(qmat(1, 1, {0}));
    CHECK(z.rank == 0);
    CHECK(z.pivots.empty());
    CHECK(z.reduced == qmat(1, 1, {0}));

    auto id = Matrix<RationalField>::identity(Q, 2);
    auto r = rref(id);
    CHECK(r.reduced == id);
    CHECK(r.pivots == std::vector<std::size_t>{0, 1});
    CHECK(r.rank == 2);
}

TEST_CASE("rref of a rank-one rational matrix") {
    // hand Gaussian elimination: [[2,4],[1,2]] -> [[1,2],[0,0]]
    auto r = rref(qmat(2, 2, {2, 4, 1, 2}));
    CHECK(r.reduced == qmat(2, 2, {1, 2, 0, 0}));
    CHECK(r.rank == 1);
}

TEST_CASE("kernel bases") {
    CHECK(kernel_basis(qmat(1, 1, {1})).dim() == 0);

    auto full_line = kernel_basis(qmat(1, 1, {0}));
    CHECK(full_line.dim() == 1);
    CHECK(full_line == Subspace<RationalField>::full(Q, 1));

    // solve x + 2y = 0: span{(-2, 1)}, normalized to the RREF row (1, -1/2)
    auto k = kernel_basis(qmat(1, 2, {1, 2}));
    REQUIRE(k.dim() == 1);
    CHECK(Q.eq(k.basis().at(0, 0), Q.from_int(1)));
    CHECK(Q.eq(k.basis().at(0, 1), *Q.parse("-1/2")));
    CHECK(k.contains({Q.from_int(-2), Q.from_int(1)}));
}

TEST_CASE("subspace lattice operations") {
    auto x_axis = Subspace<RationalField>::span(qmat(1, 2, {1, 0}));
    auto y_axis = Subspace<RationalField>::span(qmat(1, 2, {0, 1}));
    auto plane = Subspace<RationalField>::full(Q, 2);

    CHECK(intersect(x_axis, x_axis) == x_axis);
    CHECK(intersect(x_axis, y_axis).is_zero());
    CHECK(sum(x_axis, y_axis) == plane);
    CHECK(quotient_dim(plane, x_axis) == 1);
    CHECK_THROWS_AS(quotient_dim(x_axis, y_axis), PreconditionError);
    CHECK_THROWS_AS(intersect(x_axis, Subspace<RationalField>::full(Q, 3)), Error);

    CHECK(member(x_axis, {Q.from_int(3), Q.from_int(0)}));
    CHECK_FALSE(member(x_axis, {Q.from_int(3), Q.from_int(1)}));
}

TEST_CASE("solve returns the canonical particular solution") {
    // x + 2y = 5 has the free variable y pinned to zero
    auto sol = solve(qmat(1, 2, {1, 2}), {Q.from_int(5)});
    REQUIRE(sol.has_value());
    CHECK(Q.eq((*sol)[0], Q.from_int(5)));
    CHECK(Q.eq((*sol)[1], Q.from_int(0)));

    CHECK_FALSE(solve(qmat(2, 1, {0, 0}), {Q.from_int(1), Q.from_int(0)}).has_value());
}

TEST_CASE("invariant factors of small matrices") {
    auto id2 = Matrix<RationalField>::identity(Q, 2);
    auto f = invariant_factors(id2);
    REQUIRE(f.size() == 2);
    Poly<RationalField> t_minus_1(Q, {Q.from_int(-1), Q.from_int(1)});
    CHECK(f[0] == t_minus_1);
    CHECK(f[1] == t_minus_1);

    // companion matrix of t^2 + 1
    auto companion = qmat(2, 2, {0, -1, 1, 0});
    auto g = invariant_factors(companion);
    REQUIRE(g.size() == 1);
    CHECK(g[0] == Poly<RationalField>(Q, {Q.from_int(1), Q.from_int(0), Q.from_int(1)}));

    // Smith form of tI - [[1,1],[0,1]] has the single factor (t-1)^2
    auto jordan = qmat(2, 2, {1, 1, 0, 1});
    auto h = invariant_factors(jordan);
    REQUIRE(h.size() == 1);
    CHECK(h[0] == Poly<RationalField>(Q, {Q.from_int(1), Q.from_int(-2), Q.from_int(1)}));

    CHECK_THROWS_AS(invariant_factors(qmat(1, 2, {1, 2})), PreconditionError);
}

TEST_CASE("similarity witnesses intertwine") {
    Rng rng(7);
    PrimeField f5(5);
    for (int caseno = 0; caseno < 20; ++caseno) {
        std::size_t n = 1 + rng.below(5);
        auto a = random_matrix(f5, rng, n, n);
        auto p = random_invertible(f5, rng, n);
        auto b = p * a * *inverse(p);
        auto h = similarity_witness(a, b);
        REQUIRE(h.has_value());
        CHECK(*h * a == b * *h);
        CHECK(is_invertible(*h));
    }

    // dissimilar pair: distinct eigenvalues
    auto two = qmat(1, 1, {2});
    auto three = qmat(1, 1, {3});
    CHECK_FALSE(similarity_witness(two, three).has_value());
}

TEST_CASE("Smith factors agree with the cyclic-chain annihilators") {
    // two independent routes to the invariant factors: the Smith form of
    // tI - M, and the annihilator chain of the cyclic decomposition (largest
    // first); they must be mirror images of each other
    Rng rng(2217);
    PrimeField f3(3);
    for (int caseno = 0; caseno < 40; ++caseno) {
        std::size_t n = rng.below(7);
        auto check = [&](const auto& field, const auto& m) {
            auto smith = invariant_factors(m);
            auto chains = cyclic_chains(m);
            REQUIRE(smith.size() == chains.size());
            for (std::size_t i = 0; i < smith.size(); ++i) {
                CHECK(smith[i] == chains[chains.size() - 1 - i].annihilator);
            }
        };
        check(f3, random_matrix(f3, rng, n, n));
        check(Q, random_matrix(Q, rng, n, n));
    }

    // a stack of equal Jordan blocks exercises repeated invariant factors
    auto j2 = qmat(2, 2, {0, 0, 1, 0});
    auto m = Matrix<RationalField>::block_diag(j2, j2);
    auto smith = invariant_factors(m);
    REQUIRE(smith.size() == 2);
    CHECK(smith[0] == smith[1]);
    auto h = similarity_witness(m, m);
    REQUIRE(h.has_value());
    CHECK(*h * m == m * *h);
}

TEST_CASE("prime field arithmetic") {
    PrimeField f7(7);
    CHECK(f7.eq(f7.add(5, 4), 2));
    CHECK(f7.eq(f7.mul(f7.inv(3), 3), 1));
    CHECK(f7.eq(f7.neg(0), 0));
    CHECK_THROWS_AS(PrimeField(6), Error);
    CHECK_THROWS_AS(f7.inv(0), Error);
    auto e = f7.parse("-3");
    REQUIRE(e.has_value());
    CHECK(f7.eq(*e, 4));
}

TEST_CASE("rational parsing and printing") {
    auto x = Q.parse("-6/4");
    REQUIRE(x.has_value());
    CHECK(Q.str(*x) == "-3/2");
    CHECK(Q.str(Q.from_int(5)) == "5");
    CHECK_FALSE(Q.parse("1/0").has_value());
    CHECK_FALSE(Q.parse("abc").has_value());
}
