#include "tilecoh/examples_suite.hpp"
#include "tilecoh/int_matrix.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace tilecoh;

TEST_CASE("normal form of the identity") {
    IntMatrix id = IntMatrix::identity(2);
    SnfDecomposition s = smith_normal_form(id);
    REQUIRE(s.d == id);
    REQUIRE(s.u * id * s.v == s.d);
}

TEST_CASE("normal form of diag(2,3) is diag(1,6)") {
    IntMatrix m = IntMatrix::from_rows({{2, 0}, {0, 3}});
    SnfDecomposition s = smith_normal_form(m);
    REQUIRE(s.diag(0) == 1);
    REQUIRE(s.diag(1) == 6);
    REQUIRE(s.u * m * s.v == s.d);
    REQUIRE(int_abs(determinant(s.u)) == 1);
    REQUIRE(int_abs(determinant(s.v)) == 1);
}

TEST_CASE("normal form of a zero matrix") {
    IntMatrix m = IntMatrix::zero(3, 2);
    SnfDecomposition s = smith_normal_form(m);
    REQUIRE(s.rank == 0);
    REQUIRE(s.d.is_zero());
    REQUIRE(int_abs(determinant(s.u)) == 1);
    REQUIRE(int_abs(determinant(s.v)) == 1);
}

TEST_CASE("normal form is deterministic") {
    rndgen::Rng rng(7);
    IntMatrix m = rndgen::random_matrix(rng, 5, 4, 9);
    SnfDecomposition a = smith_normal_form(m);
    SnfDecomposition b = smith_normal_form(m);
    REQUIRE(a.d == b.d);
    REQUIRE(a.u == b.u);
    REQUIRE(a.v == b.v);
}

TEST_CASE("normal form laws on random matrices") {
    rndgen::Rng rng(42);
    std::uniform_int_distribution<std::size_t> dim(1, 6);
    for (int trial = 0; trial < 60; ++trial) {
        IntMatrix m = rndgen::random_matrix(rng, dim(rng), dim(rng), 9);
        SnfDecomposition s = smith_normal_form(m);
        REQUIRE(s.u * m * s.v == s.d);
        REQUIRE(int_abs(determinant(s.u)) == 1);
        REQUIRE(int_abs(determinant(s.v)) == 1);
        REQUIRE(s.u * s.uinv == IntMatrix::identity(m.rows()));
        REQUIRE(s.v * s.vinv == IntMatrix::identity(m.cols()));
        Int prev = 0;
        bool zeros = false;
        for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) {
            Int d = s.diag(i);
            REQUIRE(d >= 0);
            if (d == 0) zeros = true;
            else {
                REQUIRE_FALSE(zeros);
                if (prev != 0) REQUIRE(d % prev == 0);
                prev = d;
            }
        }
    }
}

TEST_CASE("kernel basis spans the kernel") {
    IntMatrix m = IntMatrix::from_rows({{1, 2, 3}, {2, 4, 6}});
    IntMatrix k = kernel_basis(m);
    REQUIRE(k.cols() == 2);
    REQUIRE((m * k).is_zero());
}

TEST_CASE("solve finds integral solutions and rejects the rest") {
    IntMatrix m = IntMatrix::from_rows({{2, 0}, {0, 3}});
    auto good = solve(m, {4, 6});
    REQUIRE(good.has_value());
    REQUIRE((*good)[0] == 2);
    REQUIRE((*good)[1] == 2);
    REQUIRE_FALSE(solve(m, {1, 0}).has_value());
}

TEST_CASE("hermite basis generates the same lattice") {
    rndgen::Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        IntMatrix g = rndgen::random_matrix(rng, 4, 5, 4);
        IntMatrix b = lattice_basis(g);
        SnfDecomposition bs = smith_normal_form(b);
        SnfDecomposition gs = smith_normal_form(g);
        for (std::size_t j = 0; j < g.cols(); ++j) REQUIRE(in_lattice(bs, g.col(j)));
        for (std::size_t j = 0; j < b.cols(); ++j) REQUIRE(in_lattice(gs, b.col(j)));
        REQUIRE(rank(b) == b.cols());
    }
}

TEST_CASE("characteristic polynomial") {
    IntMatrix m = IntMatrix::from_rows({{1, 2}, {1, 0}});
    std::vector<Int> p = char_poly(m);
    REQUIRE(p == std::vector<Int>{1, -1, -2}); // (x-2)(x+1)
    REQUIRE(poly_eval(p, 2) == 0);
    REQUIRE(poly_eval(p, -1) == 0);
}
