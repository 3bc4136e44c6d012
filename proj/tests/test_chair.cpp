#include "tilecoh/chair.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace tilecoh;

TEST_CASE("the ledger graph") {
    auto edges = ledger_edges();
    REQUIRE(edges.size() == 12);
    std::map<char, int> counts;
    for (const auto& e : edges) counts[degen_char(e.label)]++;
    REQUIRE(counts['A'] == 7);
    REQUIRE(counts['B'] == 3);
    REQUIRE(counts['C'] == 2);
    REQUIRE(all_models().size() == 9);
    REQUIRE(solenoid_model().name() == "0,0");
    REQUIRE(chair_model().name() == "X,0");
    REQUIRE(model_identifications().at("0,0") == "A=B=C=D=E=F=G=H");
}

TEST_CASE("one-step quotients by label") {
    auto a = one_step_quotient(DegenLabel::A);
    REQUIRE(a.at(1).render() == "Z");
    REQUIRE(a.at(2).render() == "Z[1/2]");
    auto b = one_step_quotient(DegenLabel::B);
    REQUIRE(b.at(1).render() == "Z");
    REQUIRE(b.at(2).render() == "Z[1/2] + Z");
    auto c = one_step_quotient(DegenLabel::C);
    REQUIRE(c.at(1).is_zero());
    REQUIRE(c.at(2).render() == "Z[1/2] + Z");
}

TEST_CASE("solenoid base values") {
    SolenoidBase sb = solenoid_base();
    REQUIRE(sb.h0.render() == "Z");
    REQUIRE(sb.h1.render() == "Z[1/2]^2");
    REQUIRE(sb.h2.render() == "Z[1/4]");
}

TEST_CASE("the connecting-map data") {
    // exactly the arrow-coarsening maps out of the X column carry a nonzero map
    int nonzero = 0;
    for (const auto& e : ledger_edges())
        if (is_cancellation_edge(e)) ++nonzero;
    REQUIRE(nonzero == 3);
    // the stated map is injective into a state with a Z summand and a Z[1/4]
    LimitGroup h2;
    h2.localized = {{Int(4), std::nullopt}, {Int(2), std::nullopt}};
    h2.free_rank = 1;
    h2.normalize();
    LimitGroup z = LimitGroup::free_part(1);
    LedgerEdge cancel{{ModelId::Arrow::X, ModelId::Edge::O}, {ModelId::Arrow::Slash, ModelId::Edge::O},
                      DegenLabel::A};
    auto [d, prov] = pair_delta(cancel, z, h2);
    REQUIRE(prov == DeltaProvenance::Stated);
    REQUIRE(d.body.at(0, 0) == -1);
    REQUIRE(d.body.at(2, 0) == 3);
    REQUIRE(loc_kernel(d).is_zero());
    // a non-cancellation edge with free targets is pinned to zero
    LedgerEdge plain{{ModelId::Arrow::Slash, ModelId::Edge::Minus},
                     {ModelId::Arrow::Slash, ModelId::Edge::O}, DegenLabel::A};
    auto [d2, prov2] = pair_delta(plain, z, h2);
    REQUIRE(prov2 == DeltaProvenance::StatedZero);
    REQUIRE(d2.body.is_zero());
    // and with no free target the zero map is forced
    LimitGroup no_free;
    no_free.localized = {{Int(4), std::nullopt}};
    auto [d3, prov3] = pair_delta(plain, z, no_free);
    REQUIRE(prov3 == DeltaProvenance::ForcedZero);
}

TEST_CASE("propagation along a single chain") {
    using A = ModelId::Arrow;
    using E = ModelId::Edge;
    std::vector<LedgerEdge> chain{
        {{A::Slash, E::O}, {A::O, E::O}, DegenLabel::C},
        {{A::X, E::O}, {A::Slash, E::O}, DegenLabel::A},
    };
    LedgerState st = propagate(chain, true);
    REQUIRE(st.h2.at("/,0").render() == "Z[1/4] + Z[1/2] + Z");
    REQUIRE(st.h1.at("X,0").render() == "Z[1/2]^2");
    REQUIRE(st.h2.at("X,0").render(true) == "(1/3)Z[1/4] + Z[1/2]^2");
    REQUIRE(st.h2q.at("X,0").render() == "Z_3 + Z[1/2]^2");
    REQUIRE(st.cancellation.at("X,0 -> /,0"));
    REQUIRE_FALSE(st.cancellation.at("/,0 -> 0,0"));
    REQUIRE(st.sequences_checked == 4);
}

TEST_CASE("propagation refuses edges whose base is unknown") {
    using A = ModelId::Arrow;
    using E = ModelId::Edge;
    std::vector<LedgerEdge> bad{{{A::X, E::Plus}, {A::Slash, E::Plus}, DegenLabel::A}};
    REQUIRE_THROWS_AS(propagate(bad, false), InconsistentState);
}

TEST_CASE("full tables and path independence") {
    ChairTables t = full_tables(true, false); // exhaustive checks live in the acceptance run
    REQUIRE(t.h2_table[2][0] == "(1/3)Z[1/4] + Z[1/2]^2");
    REQUIRE(t.h2_table[0][0] == "(1/3)Z[1/4] + Z[1/2]^4 + Z");
    REQUIRE(t.h1q_table[0][0] == "Z^2");
    REQUIRE(t.h2q_table[2][2] == "0");
    REQUIRE(maximal_paths().size() == 6);
    for (const auto& p : maximal_paths()) REQUIRE(p.size() == 4);
}
