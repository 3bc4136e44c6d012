#include "tilecoh/abelian.hpp"
#include "tilecoh/examples_suite.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace tilecoh;

TEST_CASE("cokernels of relation matrices") {
    REQUIRE(cokernel(IntMatrix::from_rows({{2}})) == FgAbGroup{0, {Int(2)}});
    REQUIRE(cokernel(IntMatrix::from_rows({{-2}})) == FgAbGroup{0, {Int(2)}});
    REQUIRE(cokernel(IntMatrix::zero(0, 3)) == FgAbGroup{3, {}});
}

TEST_CASE("group rendering grammar") {
    REQUIRE(FgAbGroup{0, {}}.render() == "0");
    REQUIRE(FgAbGroup{1, {}}.render() == "Z");
    REQUIRE(FgAbGroup{3, {}}.render() == "Z^3");
    REQUIRE((FgAbGroup{1, {Int(2)}}.render()) == "Z + Z_2");
    REQUIRE((FgAbGroup{0, {Int(2), Int(4)}}.render()) == "Z_2 + Z_4");
}

TEST_CASE("kernel, image, cokernel of doubling") {
    Presentation z = Presentation::free_group(1);
    AbHom x2(z, z, IntMatrix::from_rows({{2}}));
    REQUIRE(hom_kernel(x2).group.is_trivial());
    REQUIRE(hom_image(x2) == FgAbGroup{1, {}});
    REQUIRE(hom_cokernel(x2) == FgAbGroup{0, {Int(2)}});
    AbHom zero(z, z, IntMatrix::from_rows({{0}}));
    REQUIRE(hom_image(zero).is_trivial());
    REQUIRE(hom_kernel(zero).group == FgAbGroup{1, {}});
}

TEST_CASE("well-definedness is enforced") {
    // Z_2 -> Z by 1 is not a homomorphism
    Presentation z2(1, IntMatrix::from_rows({{2}}));
    Presentation z = Presentation::free_group(1);
    REQUIRE_THROWS_AS(AbHom(z2, z, IntMatrix::from_rows({{1}})), IllDefinedHom);
    // Z_2 -> Z_4 by 2 is fine, by 1 is not
    Presentation z4(1, IntMatrix::from_rows({{4}}));
    REQUIRE_NOTHROW(AbHom(z2, z4, IntMatrix::from_rows({{2}})));
    REQUIRE_THROWS_AS(AbHom(z2, z4, IntMatrix::from_rows({{1}})), IllDefinedHom);
}

TEST_CASE("exactness with failure index") {
    Presentation z = Presentation::free_group(1);
    Presentation zero = zero_presentation();
    AbHom x2(z, z, IntMatrix::from_rows({{2}}));
    std::vector<AbHom> seq{zero_hom(zero, z), AbHom::identity(z), zero_hom(z, zero)};
    REQUIRE(is_exact(seq).exact);
    std::vector<AbHom> bad{zero_hom(zero, z), x2, zero_hom(z, zero)};
    auto r = is_exact(bad);
    REQUIRE_FALSE(r.exact);
    REQUIRE(r.failure_index == 2);
}

TEST_CASE("non-composable sequences are rejected") {
    Presentation z = Presentation::free_group(1);
    Presentation z2 = Presentation::free_group(2);
    std::vector<AbHom> seq{AbHom::identity(z), AbHom::identity(z2)};
    REQUIRE_THROWS_AS(is_exact(seq), NotComposable);
}

TEST_CASE("cokernel is invariant under unimodular transforms") {
    rndgen::Rng rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        IntMatrix m = rndgen::random_matrix(rng, 4, 3, 5);
        FgAbGroup g = cokernel(m);
        IntMatrix u = rndgen::random_unimodular(rng, 4);
        IntMatrix v = rndgen::random_unimodular(rng, 3);
        REQUIRE(cokernel(u * m * v) == g);
    }
}

TEST_CASE("canonical form is presentation independent") {
    rndgen::Rng rng(123);
    for (int trial = 0; trial < 20; ++trial) {
        IntMatrix rels = rndgen::random_matrix(rng, 3, 4, 4);
        FgAbGroup g = cokernel(rels);
        // add redundant relations: integer combinations of existing rows
        IntMatrix combos = rndgen::random_matrix(rng, 2, 3, 2) * rels;
        FgAbGroup g2 = cokernel(IntMatrix::vstack(rels, combos));
        REQUIRE(g == g2);
    }
}

TEST_CASE("cokernel of the covering pullback on first cohomology") {
    // Z^2 -> Z^3 sending each generator to the sum of its two lifts, in the
    // cohomology bases of the figure-eight cover: cokernel Z + Z_2
    Example2Pair p = example2_pair();
    CochainMap f = p.covering.induced_cochain_map();
    AbHom h = induced_map(f, 1);
    REQUIRE(h.source.gens == 2);
    REQUIRE(h.target.gens == 3);
    REQUIRE(hom_cokernel(h) == FgAbGroup{1, {Int(2)}});
    REQUIRE(hom_kernel(h).group.is_trivial());
}

TEST_CASE("subquotient coordinates round trip") {
    // Z^2 / <(2,0)> = Z_2 + Z
    Subquotient q(2, IntMatrix::identity(2), IntMatrix::from_col({2, 0}));
    REQUIRE(q.group() == FgAbGroup{1, {Int(2)}});
    for (std::size_t i = 0; i < q.group().gens(); ++i) {
        auto rep = q.lift(i);
        auto back = q.express(rep);
        for (std::size_t j = 0; j < back.coords.size(); ++j)
            REQUIRE(back.coords[j] == (i == j ? 1 : 0));
    }
}
