#include "tilecoh/complexes.hpp"
#include "tilecoh/cw.hpp"
#include "tilecoh/examples_suite.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace tilecoh;

TEST_CASE("circle and figure-eight cohomology") {
    CochainComplex circle_cx(0, {1, 1}, {IntMatrix::zero(1, 1)});
    REQUIRE(cohomology(circle_cx, 0).group() == FgAbGroup{1, {}});
    REQUIRE(cohomology(circle_cx, 1).group() == FgAbGroup{1, {}});
    CochainComplex fig8(0, {1, 2}, {IntMatrix::zero(2, 1)});
    REQUIRE(cohomology(fig8, 1).group() == FgAbGroup{2, {}});
    REQUIRE_THROWS_AS(cohomology(fig8, 5), DegreeOutOfRange);
}

TEST_CASE("construction rejects non-complexes") {
    IntMatrix d0 = IntMatrix::from_rows({{1}});
    IntMatrix d1 = IntMatrix::from_rows({{1}});
    REQUIRE_THROWS_AS(CochainComplex(0, {1, 1, 1}, {d0, d1}), std::invalid_argument);
}

TEST_CASE("identity induces the identity") {
    Example2Pair p = example2_pair();
    CochainComplex c = p.cover.cochain_complex();
    CochainMap id = CochainMap::identity(c);
    AbHom h = induced_map(id, 1);
    REQUIRE(h.matrix == IntMatrix::identity(3));
}

TEST_CASE("cone of the identity is acyclic") {
    Example2Pair p = example2_pair();
    CochainComplex c = p.base.cochain_complex();
    CochainComplex cone = mapping_cone(CochainMap::identity(c));
    for (int k = cone.k_min(); k <= cone.k_max(); ++k)
        REQUIRE(cohomology(cone, k).group().is_trivial());
}

TEST_CASE("cone degree conventions") {
    // a map out of the zero complex leaves cohomology in place
    CochainComplex c(0, {1, 2}, {IntMatrix::zero(2, 1)});
    CochainComplex zero = CochainComplex::zero();
    CochainMap from_zero(zero, c, {});
    CochainComplex cone = mapping_cone(from_zero);
    REQUIRE(cohomology(cone, 0).group() == cohomology(c, 0).group());
    REQUIRE(cohomology(cone, 1).group() == cohomology(c, 1).group());
    // a map onto the zero complex shifts degrees down by one
    CochainMap to_zero(c, zero, {});
    CochainComplex cone2 = mapping_cone(to_zero);
    REQUIRE(cohomology(cone2, -1).group() == cohomology(c, 0).group());
    REQUIRE(cohomology(cone2, 0).group() == cohomology(c, 1).group());
}

TEST_CASE("quotient complex of the figure-eight cover") {
    Example2Pair p = example2_pair();
    CochainMap f = p.covering.induced_cochain_map();
    QuotientComplexResult q = quotient_complex(f);
    REQUIRE(q.complex.rank(0) == 1);
    REQUIRE(q.complex.rank(1) == 2);
    REQUIRE(cohomology(q.complex, 0).group().is_trivial());
    REQUIRE(cohomology(q.complex, 1).group() == FgAbGroup{1, {Int(2)}});
}

TEST_CASE("quotient complex of the identity is zero") {
    Example2Pair p = example2_pair();
    CochainMap id = CochainMap::identity(p.base.cochain_complex());
    QuotientComplexResult q = quotient_complex(id);
    for (int k = q.complex.k_min(); k <= q.complex.k_max(); ++k) REQUIRE(q.complex.rank(k) == 0);
}

TEST_CASE("explicit quotient needs a free cochain quotient") {
    CochainComplex c(0, {1}, {});
    CochainMap stretch(c, c, {{0, IntMatrix::from_rows({{2}})}});
    REQUIRE_THROWS_AS(quotient_complex(stretch), NotFreeQuotient);
    // the lattice-level computation still works: Z --2--> Z has quotient Z_2
    QuotientCohomology q(stretch, 0);
    REQUIRE(q.group() == FgAbGroup{0, {Int(2)}});
}

TEST_CASE("non-injective pullbacks are rejected where required") {
    CochainComplex c(0, {1}, {});
    CochainMap collapse(c, c, {{0, IntMatrix::from_rows({{0}})}});
    REQUIRE_THROWS_AS(quotient_complex(collapse), NotInjectiveOnCochains);
    REQUIRE_THROWS_AS(long_exact_sequence(collapse), NotInjectiveOnCochains);
    REQUIRE_NOTHROW(mapping_cone(collapse));
}

TEST_CASE("long exact sequence of the identity has trivial quotient terms") {
    Example2Pair p = example2_pair();
    CochainMap id = CochainMap::identity(p.base.cochain_complex());
    LongExactSequence les = long_exact_sequence(id);
    for (const auto& [k, idx] : les.index_h_q) REQUIRE(les.groups[idx].is_trivial());
    REQUIRE(is_exact(les.maps).exact);
}

TEST_CASE("random complexes satisfy d after d = 0 by construction") {
    rndgen::Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        CochainComplex c = rndgen::random_complex(rng, {2, 3, 2, 2});
        for (int k = c.k_min(); k + 1 < c.k_max(); ++k) REQUIRE((c.d(k + 1) * c.d(k)).is_zero());
    }
}

TEST_CASE("long exact sequences of random pairs are exact") {
    rndgen::Rng rng(31);
    for (int trial = 0; trial < 25; ++trial) {
        auto pair = rndgen::random_injective_pair(rng, true);
        LongExactSequence les = long_exact_sequence(pair.map);
        REQUIRE(is_exact(les.maps).exact);
    }
}

TEST_CASE("connecting map is natural under self-maps of the pair") {
    // A pair self-map (s upstairs, s downstairs) with s f = f s makes the
    // connecting square commute; homotopy-shaped maps c*id + dh + hd on the
    // upstairs side paired with c*id downstairs satisfy this whenever the
    // homotopy kills the embedded subcomplex, so test with scalar maps plus
    // an upstairs homotopy built from the projection away from the image.
    rndgen::Rng rng(77);
    for (int trial = 0; trial < 12; ++trial) {
        auto pair = rndgen::random_injective_pair(rng, true);
        const CochainMap& f = pair.map;
        const CochainComplex& a = f.target();
        const CochainComplex& b = f.source();
        Int c = rndgen::rint(rng, -2, 2);
        auto scalar_map = [&](const CochainComplex& cx) {
            std::map<int, IntMatrix> mats;
            for (int k = cx.k_min(); k <= cx.k_max(); ++k)
                mats[k] = IntMatrix::identity(cx.rank(k)).scaled(c);
            return CochainMap(cx, cx, mats);
        };
        CochainMap sa = scalar_map(a);
        CochainMap sb = scalar_map(b);
        for (int k = b.k_min(); k <= b.k_max(); ++k)
            REQUIRE(sa.matrix(k) * f.matrix(k) == f.matrix(k) * sb.matrix(k));

        // connecting square: delta(s .) == s(delta .) on every quotient class
        for (int k = a.k_min(); k < a.k_max(); ++k) {
            QuotientCohomology hq(f, k);
            CohomologyResult hb1(b.rank(k + 1), kernel_basis(b.d(k + 1)), b.d(k));
            SnfDecomposition fs = smith_normal_form(f.matrix(k + 1));
            auto delta_of = [&](const std::vector<Int>& rep) {
                auto pre = solve(fs, a.d(k) * rep);
                REQUIRE(pre.has_value());
                return hb1.class_of(*pre);
            };
            for (std::size_t j = 0; j < hq.group().gens(); ++j) {
                auto rep = hq.representative(j);
                auto lhs = delta_of(sa.matrix(k) * rep);
                auto d1 = delta_of(rep);
                std::vector<Int> rep1(b.rank(k + 1), Int(0));
                for (std::size_t i = 0; i < d1.coords.size(); ++i) {
                    auto g = hb1.representative(i);
                    for (std::size_t r = 0; r < g.size(); ++r) rep1[r] += d1.coords[i] * g[r];
                }
                auto rhs = hb1.class_of(sb.matrix(k + 1) * rep1);
                REQUIRE(lhs.coords == rhs.coords);
            }
        }
    }
}
