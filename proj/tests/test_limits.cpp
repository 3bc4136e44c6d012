#include "tilecoh/examples_suite.hpp"
#include "tilecoh/limits.hpp"
#include "tilecoh/tiling1d.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace tilecoh;

namespace {
StationarySystem sys(std::size_t rank, std::vector<Int> torsion, IntMatrix endo) {
    return StationarySystem(FgAbGroup{rank, std::move(torsion)}, std::move(endo));
}
} // namespace

TEST_CASE("eventual kernels") {
    auto whole = eventual_kernel(sys(1, {}, IntMatrix::from_rows({{0}})));
    REQUIRE(whole.group == FgAbGroup{1, {}});
    auto second = eventual_kernel(sys(2, {}, IntMatrix::from_rows({{1, 0}, {0, 0}})));
    REQUIRE(second.group == FgAbGroup{1, {}});
    REQUIRE(second.generators.at(0, 0) == 0);
    REQUIRE(int_abs(second.generators.at(1, 0)) == 1);
    auto injective = eventual_kernel(sys(2, {}, IntMatrix::from_rows({{2, 0}, {0, 1}})));
    REQUIRE(injective.group.is_trivial());
}

TEST_CASE("classification of basic systems") {
    REQUIRE(classify_limit(sys(1, {}, IntMatrix::from_rows({{2}}))).render() == "Z[1/2]");
    REQUIRE(classify_limit(sys(1, {}, IntMatrix::from_rows({{-1}}))).render() == "Z");
    REQUIRE(classify_limit(sys(2, {}, IntMatrix::from_rows({{2, 0}, {0, 1}}))).render() ==
            "Z[1/2] + Z");
    REQUIRE(classify_limit(sys(1, {}, IntMatrix::from_rows({{4}}))).render() == "Z[1/4]");
}

TEST_CASE("torsion systems classify by eventual image") {
    // free part dies, torsion generator fixed
    StationarySystem s(FgAbGroup{1, {Int(2)}}, IntMatrix::from_rows({{0, 0}, {1, 1}}));
    REQUIRE(classify_limit(s).render() == "Z_2");
    StationarySystem nil(FgAbGroup{0, {Int(4)}}, IntMatrix::from_rows({{2}}));
    REQUIRE(classify_limit(nil).render() == "0");
    StationarySystem unit(FgAbGroup{0, {Int(4)}}, IntMatrix::from_rows({{3}}));
    REQUIRE(classify_limit(unit).render() == "Z_4");
}

TEST_CASE("irrational and non-diagonalizable spectra are refused") {
    // x^2 - x - 1: golden-mean spectrum
    REQUIRE_THROWS_AS(classify_limit(sys(2, {}, IntMatrix::from_rows({{1, 1}, {1, 0}}))),
                      Unclassifiable);
    // nontrivial Jordan block
    REQUIRE_THROWS_AS(classify_limit(sys(2, {}, IntMatrix::from_rows({{2, 1}, {0, 2}}))),
                      Unclassifiable);
}

TEST_CASE("classification is invariant under powers of the map") {
    rndgen::Rng rng(314);
    for (int trial = 0; trial < 25; ++trial) {
        StationarySystem s = rndgen::random_diagonalizable_system(rng, 3);
        LimitGroup base = classify_limit(s);
        IntMatrix squared = s.endo * s.endo;
        LimitGroup pow = classify_limit(StationarySystem(s.group, squared));
        // prime supports per summand are power invariant; display bases differ
        REQUIRE(base.isomorphic(pow));
        REQUIRE(base.free_rank == pow.free_rank);
    }
}

TEST_CASE("limit group rendering and isomorphism") {
    LimitGroup g;
    g.torsion = {Int(3)};
    g.localized = {{Int(2), std::nullopt},
                   {Int(2), std::nullopt},
                   {Int(2), std::nullopt},
                   {Int(2), std::nullopt}};
    g.free_rank = 1;
    g.normalize();
    REQUIRE(g.render() == "Z_3 + Z[1/2]^4 + Z");
    LimitGroup h;
    h.localized = {{Int(4), std::optional<Int>(3)}, {Int(2), std::nullopt}};
    h.normalize();
    REQUIRE(h.render() == "Z[1/4] + Z[1/2]");
    REQUIRE(h.render(true) == "(1/3)Z[1/4] + Z[1/2]");
    // Z[1/4] and Z[1/2] are abstractly the same subgroup of the rationals
    LimitGroup a = LimitGroup::localized_one(4), b = LimitGroup::localized_one(2);
    REQUIRE(a.isomorphic(b));
    REQUIRE_FALSE(a.same_shape(b));
    REQUIRE_FALSE(a.isomorphic(LimitGroup::localized_one(3)));
}

TEST_CASE("suspension shift reindexes degrees") {
    std::map<int, LimitGroup> src{{0, LimitGroup::free_part(1)}, {1, LimitGroup::free_part(2)}};
    auto same = suspension_shift(src, 1, 1);
    REQUIRE(same.at(0).free_rank == 1);
    REQUIRE(same.at(1).free_rank == 2);
    auto up = suspension_shift(src, 2, 0);
    REQUIRE(up.at(2).free_rank == 1);
    REQUIRE(up.at(3).free_rank == 2);
    REQUIRE_THROWS_AS(suspension_shift(src, 0, 1), std::invalid_argument);
}

TEST_CASE("limit homs respect the summand structure") {
    ClassifiedSystem two = classify_limit_full(sys(1, {}, IntMatrix::from_rows({{2}})));
    LocHom tripled = limit_hom(two, two, IntMatrix::from_rows({{3}}));
    REQUIRE(tripled.body.at(0, 0) == 3);
    // maps must intertwine the two self-maps
    ClassifiedSystem three = classify_limit_full(sys(1, {}, IntMatrix::from_rows({{3}})));
    REQUIRE_THROWS_AS(limit_hom(two, three, IntMatrix::from_rows({{1}})), InadmissibleHom);
}

TEST_CASE("pair limits of the identity are trivial in the quotient") {
    TorusModel t = torus();
    CochainComplex c = t.complex.cochain_complex();
    CochainMap id = CochainMap::identity(c);
    CochainMap d = t.doubling.induced_cochain_map();
    PairLimits pl = limit_of_pair(id, d, d);
    for (int k = 0; k <= 2; ++k) REQUIRE(pl.h_q(k).is_zero());
    REQUIRE(pl.h_up(2).render() == "Z[1/4]");
}

TEST_CASE("intertwining failures are reported") {
    SolenoidCircle c = solenoid_circle();
    CochainComplex cx = c.complex.cochain_complex();
    CochainMap id = CochainMap::identity(cx);
    CochainMap d = c.doubling.induced_cochain_map();
    // doubling upstairs against identity downstairs does not commute with the
    // identity factor map
    REQUIRE_THROWS_AS(limit_of_pair(id, d, id), IntertwiningFailure);
}

TEST_CASE("stabilized finite quotients agree with the classification") {
    // the colimit of G/nG stabilizes to |lim / n lim|; spot-check one system
    StationarySystem s = sys(2, {Int(2)}, IntMatrix::from_rows({{2, 0, 0}, {0, -1, 0}, {1, 0, 1}}));
    LimitGroup lim = classify_limit(s);
    REQUIRE(lim.render() == "Z_2 + Z[1/2] + Z");
    // |lim / 2 lim| = 2 (torsion) * 1 (localized at 2) * 2 (free) = 4
    Int expected = 4;
    Presentation p = canonical_presentation(s.group);
    Presentation pn(p.gens, IntMatrix::vstack(p.rels, IntMatrix::identity(p.gens).scaled(2)));
    Subquotient q = Subquotient::of_presentation(pn);
    std::size_t gn = q.group().gens();
    IntMatrix e(gn, gn);
    for (std::size_t j = 0; j < gn; ++j) {
        auto cc = q.express(s.endo * q.lift(j));
        for (std::size_t i = 0; i < gn; ++i) e.at(i, j) = cc.coords[i];
    }
    IntMatrix power = IntMatrix::identity(gn);
    Int stabilized = 0;
    for (int depth = 0; depth <= 12; ++depth) {
        IntMatrix gens = IntMatrix::hstack(power, canonical_presentation(q.group()).rels.transpose());
        Subquotient img(gn, IntMatrix::identity(gn), gens);
        Int o = Int(*q.group().order() / *img.group().order());
        if (o == stabilized && depth >= 2) break;
        stabilized = o;
        power = power * e;
    }
    REQUIRE(stabilized == expected);
}
