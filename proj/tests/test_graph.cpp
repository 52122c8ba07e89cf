#include <catch2/catch_amalgamated.hpp>

#include "slopelab/graph.hpp"

using namespace slopelab;

namespace {

PolarizedWeightedGraph banana(long g, Rational len = Rational(1)) {
    std::vector<EdgeSpec> es;
    for (long k = 0; k <= g; ++k)
        es.push_back({"e" + std::to_string(k), "u", "v", len});
    return make_graph({{"u", 0}, {"v", 0}}, std::move(es));
}

PolarizedWeightedGraph dumbbell() {
    return make_graph({{"u", 0}, {"v", 0}}, {{"a", "u", "u", Rational(1)},
                                             {"b", "u", "v", Rational(2)},
                                             {"c", "v", "v", Rational(3)}});
}

PolarizedWeightedGraph theta_graph() {
    return make_graph({{"u", 0}, {"v", 0}}, {{"e1", "u", "v", Rational(1)},
                                             {"e2", "u", "v", Rational(1)},
                                             {"e3", "u", "v", Rational(1)}});
}

} // namespace

TEST_CASE("validation accepts and rejects the right graphs") {
    auto g = make_graph({{"a", 1}, {"b", 1}}, {{"e", "a", "b", Rational(1)}});
    CHECK(g.genus() == 2);

    CHECK_THROWS_AS(make_graph({}, {}), validation_error);
    CHECK_THROWS_AS(make_graph({{"a", 0}, {"b", 0}}, {}), validation_error);  // disconnected
    CHECK_THROWS_AS(make_graph({{"a", 0}, {"b", 0}}, {{"e", "a", "b", Rational(0)}}),
                    validation_error);
    CHECK_THROWS_AS(make_graph({{"a", 0}}, {{"e", "a", "zz", Rational(1)}}), validation_error);
    CHECK_THROWS_AS(make_graph({{"a", -1}}, {}), validation_error);
}

TEST_CASE("genus of standard examples") {
    CHECK(banana(2).genus() == 2);  // b1 = 3 - 2 + 1
    auto loop = make_graph({{"p", 1}}, {{"l", "p", "p", Rational(1)}});
    CHECK(loop.genus() == 2);
    for (long h = 0; h <= 4; ++h) {
        auto seg = make_graph({{"a", h}, {"b", 4 - h}}, {{"e", "a", "b", Rational(1)}});
        CHECK(seg.genus() == 4);
    }
}

TEST_CASE("canonical divisor and degree identity") {
    for (long g = 2; g <= 5; ++g) {
        auto b = banana(g);
        auto K = b.canonical_divisor();
        CHECK(K.at("u") == g - 1);
        CHECK(K.at("v") == g - 1);
        CHECK(K.degree() == 2 * b.genus() - 2);
    }
    auto twogon = make_graph({{"p1", 2}, {"p2", 1}},
                             {{"e1", "p1", "p2", Rational(1)}, {"e2", "p1", "p2", Rational(1)}});
    // genera (h, g-h-1) with g = 4, h = 2
    auto K = twogon.canonical_divisor();
    CHECK(K.at("p1") == 4);
    CHECK(K.at("p2") == 2);
    auto point = make_graph({{"p", 3}}, {});
    CHECK(point.canonical_divisor().at("p") == 4);
    CHECK(point.canonical_divisor().degree() == 2 * point.genus() - 2);
}

TEST_CASE("stability") {
    auto twogon_h0 = make_graph({{"p1", 0}, {"p2", 1}},
                                {{"e1", "p1", "p2", Rational(1)}, {"e2", "p1", "p2", Rational(1)}});
    CHECK_FALSE(twogon_h0.is_stable());  // K(p1) = 0
    CHECK(banana(2).is_stable());
    auto path = make_graph({{"a", 1}, {"m", 0}, {"b", 1}},
                           {{"e1", "a", "m", Rational(1)}, {"e2", "m", "b", Rational(1)}});
    CHECK_FALSE(path.is_stable());  // interior valency-2 genus-0 vertex
}

TEST_CASE("minimal model suppresses subdivision points") {
    auto sub = make_graph({{"u", 0}, {"v", 0}, {"m", 0}},
                          {{"e1a", "u", "m", Rational(1, 2)},
                           {"e1b", "m", "v", Rational(1, 2)},
                           {"e2", "u", "v", Rational(1)},
                           {"e3", "u", "v", Rational(1)}});
    auto m = minimal_model(sub);
    CHECK(m.vertex_count() == 2);
    CHECK(m.edge_count() == 3);
    CHECK(m.genus() == sub.genus());
    Rational total(0);
    for (const auto& e : m.edges()) total += e.length;
    CHECK(total == Rational(3));

    auto t = theta_graph();
    auto mt = minimal_model(t);
    CHECK(mt.vertex_count() == 2);
    CHECK(mt.edge_count() == 3);

    auto circle = make_graph({{"w", 0}}, {{"l", "w", "w", Rational(1)}});
    CHECK_THROWS_AS(minimal_model(circle), validation_error);
}

TEST_CASE("blocks of the dumbbell carry induced polarizations") {
    auto dec = blocks(dumbbell());
    REQUIRE(dec.blocks.size() == 3);
    int loops = 0, bridges = 0;
    for (const auto& b : dec.blocks) {
        CHECK(b.graph.genus() == 2);
        if (b.kind == BlockKind::loop) {
            ++loops;
            CHECK(b.graph.vertex(0).genus == 1);  // induced from the far loop
        }
        if (b.kind == BlockKind::bridge) {
            ++bridges;
            CHECK(b.graph.vertex(0).genus == 1);
            CHECK(b.graph.vertex(1).genus == 1);
        }
    }
    CHECK(loops == 2);
    CHECK(bridges == 1);
    CHECK(dec.cut_vertices.size() == 2);
    // block-cut incidences form a tree: |E| = |B| + |C| - 1
    CHECK(dec.tree_edges.size() == dec.blocks.size() + dec.cut_vertices.size() - 1);
}

TEST_CASE("blocks of simple graphs") {
    auto dec = blocks(theta_graph());
    REQUIRE(dec.blocks.size() == 1);
    CHECK(dec.blocks[0].kind == BlockKind::two_connected);

    auto seg = make_graph({{"a", 1}, {"b", 1}}, {{"e", "a", "b", Rational(1)}});
    auto dseg = blocks(seg);
    REQUIRE(dseg.blocks.size() == 1);
    CHECK(dseg.blocks[0].kind == BlockKind::bridge);
}

TEST_CASE("two-connectivity follows the metric convention") {
    auto loop = make_graph({{"p", 1}}, {{"l", "p", "p", Rational(1)}});
    CHECK(is_two_connected(loop));
    auto seg = make_graph({{"a", 1}, {"b", 1}}, {{"e", "a", "b", Rational(1)}});
    CHECK_FALSE(is_two_connected(seg));
    CHECK(is_two_connected(theta_graph()));
    CHECK_FALSE(is_two_connected(dumbbell()));
    auto rose = make_graph({{"p", 0}}, {{"l1", "p", "p", Rational(1)}, {"l2", "p", "p", Rational(1)}});
    CHECK_FALSE(is_two_connected(rose));
}

TEST_CASE("edge profile splits lengths by type") {
    auto prof = edge_profile(dumbbell());
    CHECK(prof.delta0 == Rational(4));       // the two loops
    CHECK(prof.deltaH.at(1) == Rational(2)); // the bridge splits 2 = 1 + 1
    CHECK(prof.delta == Rational(6));

    auto bprof = edge_profile(banana(3));
    CHECK(bprof.deltaH.empty());
    CHECK(bprof.delta0 == bprof.delta);

    auto twogon = make_graph({{"p1", 1}, {"p2", 1}},
                             {{"e1", "p1", "p2", Rational(2)}, {"e2", "p1", "p2", Rational(3)}});
    auto tprof = edge_profile(twogon);
    CHECK(tprof.delta0 == Rational(5));
}

TEST_CASE("contraction keeps one edge and collapses the rest") {
    auto t = theta_graph();
    auto c = contract_all_but(t, "e1");
    CHECK(c.graph.vertex_count() == 1);
    CHECK(c.graph.edge_count() == 1);
    CHECK(c.graph.edge(0).is_loop());
    CHECK(c.graph.vertex(0).genus == 1);
    CHECK(c.graph.genus() == t.genus());
    CHECK(c.vertex_map.at("u") == c.vertex_map.at("v"));

    auto d = contract_all_but(dumbbell(), "b");
    CHECK(d.graph.vertex_count() == 2);
    CHECK(d.graph.vertex(0).genus == 1);
    CHECK(d.graph.vertex(1).genus == 1);

    auto twogon = make_graph({{"p1", 1}, {"p2", 2}},
                             {{"e1", "p1", "p2", Rational(2)}, {"e2", "p1", "p2", Rational(3)}});
    auto tc = contract_all_but(twogon, "e1");
    CHECK(tc.graph.vertex_count() == 1);
    CHECK(tc.graph.vertex(0).genus == twogon.genus() - 1);
}

TEST_CASE("an edge is a bridge iff its contraction is a segment") {
    auto g = make_graph({{"a", 1}, {"b", 0}, {"c", 1}},
                        {{"e1", "a", "b", Rational(1)},
                         {"e2", "a", "b", Rational(1)},
                         {"e3", "b", "c", Rational(1)}});
    for (int e = 0; e < g.edge_count(); ++e) {
        auto c = contract_all_but(g, g.edge(e).id);
        CHECK(g.is_bridge(e) == (c.graph.vertex_count() == 2));
    }
}

TEST_CASE("refinement preserves the metric graph") {
    auto t = theta_graph();
    auto r = refine(t, {{"e1", {Rational(1, 4), Rational(1, 2)}}});
    CHECK(r.graph.vertex_count() == 4);
    CHECK(r.graph.edge_count() == 5);
    CHECK(r.graph.genus() == t.genus());
    CHECK(r.graph.total_length() == t.total_length());
    CHECK(r.pieces.at("e1").size() == 3);
    CHECK(r.interior.at("e1").size() == 2);
}
