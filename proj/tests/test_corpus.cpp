#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "slopelab/corpus.hpp"
#include "slopelab/json_io.hpp"

using namespace slopelab;

TEST_CASE("random graphs respect the documented bounds") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 50; ++i) {
        auto g = random_graph(rng);
        CHECK(g.vertex_count() <= 8);
        CHECK(g.edge_count() <= 12);
        CHECK(g.genus() >= 2);
        CHECK(g.genus() <= 6);
        for (const auto& e : g.edges()) CHECK(e.length > 0);
        for (int e = 0; e < g.edge_count(); ++e) {
            if (!g.is_bridge(e)) continue;
            long h = g.component_genus(g.component_of(g.edge(e).u, {e}), {e});
            CHECK(h >= 1);
            CHECK(h <= g.genus() - 1);
        }
    }
}

TEST_CASE("the identity suite passes on a small corpus") {
    CorpusOptions opt;
    opt.seed = 2;
    opt.count = 12;
    auto sum = run_corpus(opt);
    CHECK(sum.all_passed());
    for (const auto& c : sum.checks) {
        INFO(c.name);
        CHECK(c.failed == 0);
        CHECK(c.passed > 0);
    }
}

TEST_CASE("corpus runs are deterministic for a fixed seed") {
    CorpusOptions opt;
    opt.seed = 5;
    opt.count = 6;
    opt.heavy_checks = false;
    auto serialize = [](const CorpusSummary& s) {
        std::ostringstream out;
        out << s.seed << "|" << s.count;
        for (const auto& c : s.checks) {
            out << "|" << c.name << ":" << c.passed << "/" << c.failed;
            for (const auto& f : c.failures) out << ";" << f;
        }
        return out.str();
    };
    auto a = run_corpus(opt);
    auto b = run_corpus(opt);
    CHECK(serialize(a) == serialize(b));
    opt.threads = 2;
    auto c = run_corpus(opt);
    CHECK(serialize(a) == serialize(c));
}

TEST_CASE("corpus rejects a non-positive count") {
    CorpusOptions opt;
    opt.count = 0;
    CHECK_THROWS_AS(run_corpus(opt), validation_error);
}

TEST_CASE("graph JSON round trip") {
    auto g = make_graph({{"u", 1}, {"v", 0}},
                        {{"e1", "u", "v", Rational(3, 2)}, {"e2", "u", "v", Rational(2)}});
    auto j = graph_to_json(g);
    auto g2 = graph_from_json(j);
    CHECK(g2.genus() == g.genus());
    CHECK(g2.edge(0).length == Rational(3, 2));
    CHECK(graph_to_json(g2) == j);

    auto parsed = graph_from_json(json::parse(
        R"({"vertices":[{"id":"u","genus":0},{"id":"v","genus":0}],
            "edges":[{"id":"e1","u":"u","v":"v","length":"3/2"},
                     {"id":"e2","u":"u","v":"v","length":2}]})"));
    CHECK(parsed.edge(0).length == Rational(3, 2));
    CHECK(parsed.edge(1).length == Rational(2));
}

TEST_CASE("matrix and family JSON parsing") {
    auto m = matrix_from_json(json::parse(R"({"dim":2,"entries":[["2","1"],["1","2"]]})"));
    CHECK(m(0, 1) == Rational(1));
    auto bare = matrix_from_json(json::parse(R"([["1/3"]])"));
    CHECK(bare(0, 0) == Rational(1, 3));
    CHECK_THROWS_AS(matrix_from_json(json::parse(R"({"dim":3,"entries":[["1"]]})")),
                    validation_error);

    auto fam = family_from_json(json::parse(
        R"({"g":2,"r":1,"A0":[["1"]],
            "B":[{"k":0,"re":[[0,0],[0,0]],"im":[[1,0.1],[0.1,1]]}],"radius":0.5})"));
    CHECK(fam.genus() == 2);
    CHECK(fam.toric_rank() == 1);
    CHECK(fam.a0()(0, 0) == Rational(1));
}

TEST_CASE("rational JSON values carry exact and decimal fields") {
    auto j = rational_json(Rational(3, 2));
    CHECK(j.at("exact") == "3/2");
    CHECK(j.at("approx") == "1.5");
    CHECK(rational_from_json(json("7/4")) == Rational(7, 4));
    CHECK(rational_from_json(json(5)) == Rational(5));
    CHECK_THROWS_AS(rational_from_json(json(1.5)), validation_error);
}
