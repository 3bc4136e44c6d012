#include "tilecoh/cw.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace tilecoh;

TEST_CASE("circle with one vertex has zero differential") {
    CochainComplex c = circle().cochain_complex();
    REQUIRE(c.d(0).is_zero());
    REQUIRE(cohomology(c, 0).group() == FgAbGroup{1, {}});
    REQUIRE(cohomology(c, 1).group() == FgAbGroup{1, {}});
}

TEST_CASE("torus cohomology and its doubling map") {
    TorusModel t = torus();
    CochainComplex c = t.complex.cochain_complex();
    REQUIRE(cohomology(c, 0).group() == FgAbGroup{1, {}});
    REQUIRE(cohomology(c, 1).group() == FgAbGroup{2, {}});
    REQUIRE(cohomology(c, 2).group() == FgAbGroup{1, {}});
    CochainMap d = t.doubling.induced_cochain_map();
    REQUIRE(induced_map(d, 1).matrix == IntMatrix::identity(2).scaled(2));
    REQUIRE(induced_map(d, 2).matrix == IntMatrix::from_rows({{4}}));
}

TEST_CASE("the double cover of the figure eight") {
    Example2Pair p = example2_pair();
    CochainComplex cx = p.cover.cochain_complex();
    CochainComplex cy = p.base.cochain_complex();
    REQUIRE(cohomology(cx, 1).group() == FgAbGroup{3, {}});
    REQUIRE(cohomology(cy, 1).group() == FgAbGroup{2, {}});
    CochainMap f = p.covering.induced_cochain_map();
    // the pullback sums over fibers
    IntMatrix f0 = f.matrix(0);
    REQUIRE(f0 == IntMatrix::from_rows({{1}, {1}}));
    IntMatrix f1 = f.matrix(1);
    std::size_t a = p.base.cochain_complex().rank(1);
    REQUIRE(a == 2);
    // each base edge pulls back to the sum of its two preimages
    for (std::size_t j = 0; j < 2; ++j) {
        Int col_sum = 0;
        for (std::size_t i = 0; i < 4; ++i) col_sum += f1.at(i, j);
        REQUIRE(col_sum == 2);
    }
    REQUIRE(f.injective_on_cochains());
}

TEST_CASE("cellular maps validate endpoints") {
    CWComplex k;
    k.add_vertex("a");
    k.add_vertex("b");
    k.add_edge("e", "a", "b");
    CellularMap m(k, k);
    m.set_vertex("a", "a");
    m.set_vertex("b", "a");
    m.set_edge("e", {{"e", 1}});
    REQUIRE_THROWS_AS(m.validate(), IncompatibleMap);
}

TEST_CASE("boundary walks must close") {
    CWComplex k;
    k.add_vertex("a");
    k.add_vertex("b");
    k.add_edge("e", "a", "b");
    REQUIRE_THROWS_AS(k.add_face("F", {{"e", 1}}), InvalidBoundary);
}

TEST_CASE("the wrapped two-circle complex") {
    GammaTmPrime g = gamma_tm_prime();
    REQUIRE(g.complex.euler_characteristic() == -2);
    REQUIRE(g.complex.connected());
    CochainComplex c = g.complex.cochain_complex();
    REQUIRE(cohomology(c, 1).group() == FgAbGroup{3, {}});
    CochainMap p = g.factor.induced_cochain_map();
    REQUIRE(p.injective_on_cochains());
    QuotientCohomology q0(p, 0), q1(p, 1);
    REQUIRE(q0.group().is_trivial());
    REQUIRE(q1.group() == FgAbGroup{2, {}});
    // substitution acts on the quotient as diag(2,1)
    CochainMap s = g.self_map.induced_cochain_map();
    IntMatrix act(2, 2);
    for (std::size_t j = 0; j < 2; ++j) {
        auto cc = q1.class_of(s.matrix(1) * q1.representative(j));
        for (std::size_t i = 0; i < 2; ++i) act.at(i, j) = cc.coords[i];
    }
    REQUIRE(act == IntMatrix::from_rows({{2, 0}, {0, 1}}));
}

TEST_CASE("disjoint unions and fold maps") {
    SolenoidCircle c = solenoid_circle();
    CWComplex two = disjoint_union(c.complex, c.complex);
    REQUIRE(two.vertices().size() == 4);
    REQUIRE(two.edges().size() == 4);
    CellularMap fold = fold_map(two, c.complex);
    CochainMap f = fold.induced_cochain_map();
    REQUIRE(f.injective_on_cochains());
    REQUIRE_FALSE(two.connected());
    REQUIRE(c.complex.connected());
}

TEST_CASE("dot export lists all cells") {
    std::string dot = export_dot(circle());
    REQUIRE(dot.find("digraph") != std::string::npos);
    REQUIRE(dot.find("\"v\" -> \"v\"") != std::string::npos);
}
