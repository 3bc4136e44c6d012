#include "tilecoh/tiling1d.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace tilecoh;

namespace {
std::string word_str(const Substitution1D& s, const Word& w) {
    std::string out;
    for (std::size_t l : w) out += s.letter(l);
    return out;
}
} // namespace

TEST_CASE("two-letter language of period doubling") {
    auto words = allowed_words(period_doubling(), 2);
    std::set<std::string> got;
    for (const auto& w : words) got.insert(word_str(period_doubling(), w));
    REQUIRE(got == std::set<std::string>{"11", "12", "21"});
}

TEST_CASE("constant substitution has a one-word language") {
    Substitution1D s = Substitution1D::from_strings({"a"}, {{"a", "aa"}});
    auto words = allowed_words(s, 2);
    REQUIRE(words.size() == 1);
}

TEST_CASE("primitivity is required") {
    Substitution1D s = Substitution1D::from_strings({"a", "b"}, {{"a", "a"}, {"b", "b"}});
    REQUIRE_FALSE(s.primitive());
    REQUIRE_THROWS_AS(allowed_words(s, 2), NotPrimitive);
    REQUIRE_THROWS_AS(collar(s), NotPrimitive);
    REQUIRE_THROWS_AS(bd_complex(s), NotPrimitive);
    // a single letter mapping to itself is a period-one rotation, not a tiling
    Substitution1D fixed = Substitution1D::from_strings({"a"}, {{"a", "a"}});
    REQUIRE_FALSE(fixed.primitive());
    REQUIRE_THROWS_AS(collar(fixed), NotPrimitive);
    // letter swaps are not primitive either, even though the matrix power is
    Substitution1D swap = Substitution1D::from_strings({"a", "b"}, {{"a", "b"}, {"b", "a"}});
    REQUIRE_FALSE(swap.primitive());
}

TEST_CASE("collaring the Thue-Morse substitution") {
    CollarResult c = collar(thue_morse());
    REQUIRE(c.collared.size() == 4);
    auto rule_of = [&](const std::string& l) {
        std::string out;
        for (std::size_t x : c.collared.rule(c.collared.index(l)))
            out += c.collared.letter(x) + " ";
        return out;
    };
    // A followed by B maps to (A followed by B)(B followed by B), and so on
    REQUIRE(rule_of("A|B") == "A|B B|B ");
    REQUIRE(rule_of("A|A") == "A|B B|A ");
    REQUIRE(rule_of("B|A") == "B|A A|A ");
    REQUIRE(rule_of("B|B") == "B|A A|B ");
    // forgetting the collar recovers the letters
    REQUIRE(c.forget("A|B") == "A");
    REQUIRE(c.forget("B|B") == "B");
}

TEST_CASE("collaring then forgetting preserves the language") {
    for (const Substitution1D& s : {period_doubling(), thue_morse()}) {
        CollarResult c = collar(s);
        for (std::size_t len = 2; len <= 4; ++len) {
            std::set<std::string> base;
            for (const auto& w : allowed_words(s, len)) base.insert(word_str(s, w));
            std::set<std::string> via_collar;
            for (const auto& w : allowed_words(c.collared, len)) {
                std::string img;
                for (std::size_t l : w) img += c.forget(c.collared.letter(l));
                via_collar.insert(img);
            }
            REQUIRE(base == via_collar);
        }
    }
}

TEST_CASE("the period-doubling approximant") {
    BDComplex g = gamma_pd();
    REQUIRE(g.complex.vertices().size() == 4);
    REQUIRE(g.complex.edges().size() == 5); // two tiles, three transitions
    REQUIRE(g.complex.euler_characteristic() == -1);
    CochainComplex c = g.complex.cochain_complex();
    CohomologyResult h1 = cohomology(c, 1);
    REQUIRE(h1.group() == FgAbGroup{2, {}});
    // substitution action on first cohomology has trace 1 and determinant -2
    CochainMap s = g.self_map.induced_cochain_map();
    IntMatrix act(2, 2);
    for (std::size_t j = 0; j < 2; ++j) {
        auto cc = h1.class_of(s.matrix(1) * h1.representative(j));
        for (std::size_t i = 0; i < 2; ++i) act.at(i, j) = cc.coords[i];
    }
    REQUIRE(char_poly(act) == std::vector<Int>{1, -1, -2}); // roots 2 and -1
}

TEST_CASE("the collared Thue-Morse approximant") {
    BDComplex g = gamma_tm();
    REQUIRE(g.complex.edges().size() == 10); // four tiles, six transitions
    REQUIRE(g.complex.euler_characteristic() == -2);
}

TEST_CASE("one-letter doubling gives the two-cell circle") {
    BDComplex g = bd_complex(solenoid_substitution());
    REQUIRE(g.complex.vertices().size() == 2);
    REQUIRE(g.complex.edges().size() == 2);
    CochainComplex c = g.complex.cochain_complex();
    CohomologyResult h1 = cohomology(c, 1);
    CochainMap s = g.self_map.induced_cochain_map();
    auto cc = h1.class_of(s.matrix(1) * h1.representative(0));
    REQUIRE(cc.coords[0] == 2); // doubling
}

TEST_CASE("growth rate of the approximant self-map") {
    // constant length two: cochain powers grow like 2^k, bracketed here
    for (const Substitution1D& s :
         {period_doubling(), collar(thue_morse()).collared, solenoid_substitution()}) {
        BDComplex g = bd_complex(s);
        CochainMap sm = g.self_map.induced_cochain_map();
        IntMatrix m = sm.matrix(1);
        IntMatrix p = m;
        for (int i = 1; i < 16; ++i) p = p * m;
        Int big = 0;
        for (std::size_t i = 0; i < p.rows(); ++i)
            for (std::size_t j = 0; j < p.cols(); ++j) big = std::max(big, int_abs(p.at(i, j)));
        Int pow16 = int_pow(2, 16);
        REQUIRE(big <= pow16 * 16);
        REQUIRE(big * 64 >= pow16);
    }
}

TEST_CASE("factor pairs reject non-intertwining letter maps") {
    LetterMap bad;
    bad.assign["1"] = "1";
    bad.assign["2"] = "2"; // identity on letters does not intertwine pd with tm
    REQUIRE_THROWS_AS(factor_pair(period_doubling(), thue_morse(), bad), NotIntertwining);
}

TEST_CASE("identity letter map gives a trivial quotient") {
    Substitution1D pd = period_doubling();
    LetterMap id;
    id.assign["1"] = "1";
    id.assign["2"] = "2";
    FactorPair fp = factor_pair(pd, pd, id);
    for (int k = 0; k <= 1; ++k) {
        QuotientCohomology q(fp.pullback, k);
        REQUIRE(q.group().is_trivial());
    }
}

TEST_CASE("tiling space cohomology of the basic substitutions") {
    auto pd = tiling_cohomology(period_doubling());
    REQUIRE(pd[0].render() == "Z");
    REQUIRE(pd[1].render() == "Z[1/2] + Z");
    auto tm = tiling_cohomology(collar(thue_morse()).collared);
    REQUIRE(tm[1].render() == "Z[1/2] + Z");
    auto so = tiling_cohomology(solenoid_substitution());
    REQUIRE(so[1].render() == "Z[1/2]");
    REQUIRE(so[0].render() == "Z");
}

TEST_CASE("degree zero of a primitive tiling space is Z") {
    for (const Substitution1D& s : {period_doubling(), thue_morse(), solenoid_substitution()})
        REQUIRE(tiling_cohomology(s)[0].render() == "Z");
}

TEST_CASE("the two-point fiber pair behind the one-dimensional suspension") {
    // two points over one point: quotient Z in degree zero, shifted into
    // degree one it reproduces the period-doubling quotient over the solenoid
    FactorPair fp = solenoid_factor(period_doubling());
    PairLimits pl = limit_of_pair(fp.pullback, fp.upstairs_self, fp.downstairs_self);
    CWComplex x;
    x.add_vertex("q0");
    x.add_vertex("q1");
    CWComplex y;
    y.add_vertex("q");
    CellularMap f(x, y);
    f.set_vertex("q0", "q");
    f.set_vertex("q1", "q");
    f.validate();
    PairLimits points = limit_of_pair(f.induced_cochain_map(),
                                      CochainMap::identity(x.cochain_complex()),
                                      CochainMap::identity(y.cochain_complex()));
    auto shifted = suspension_shift({{0, points.h_q(0)}, {1, points.h_q(1)}}, 1, 0);
    REQUIRE(shifted[1].isomorphic(pl.h_q(1)));
}
