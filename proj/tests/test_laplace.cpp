#include <catch2/catch_amalgamated.hpp>

#include "slopelab/corpus.hpp"
#include "slopelab/laplace.hpp"

using namespace slopelab;

namespace {

PolarizedWeightedGraph segment(Rational len, long qa = 1, long qb = 1) {
    return make_graph({{"a", qa}, {"b", qb}}, {{"e", "a", "b", len}});
}

PolarizedWeightedGraph circle(Rational len, long q = 0) {
    return make_graph({{"w", q}}, {{"l", "w", "w", len}});
}

} // namespace

TEST_CASE("j-function on a segment is the arc length") {
    auto g = segment(Rational(5));
    auto j = j_function(g, "a", "b");
    CHECK(j.at("a") == 0);
    CHECK(j.at("b") == Rational(5));
    auto q = j.edge_restriction.at("e");
    CHECK(q.c == 0);

    auto same = j_function(g, "a", "a");
    CHECK(same.at("a") == 0);
    CHECK(same.at("b") == 0);
}

TEST_CASE("j-function equals resistance on the theta graph") {
    auto t = make_graph({{"u", 0}, {"v", 0}}, {{"e1", "u", "v", Rational(1)},
                                               {"e2", "u", "v", Rational(1)},
                                               {"e3", "u", "v", Rational(1)}});
    auto j = j_function(t, "u", "v");
    CHECK(j.at("v") == Rational(1, 3));
}

TEST_CASE("effective resistance obeys series and parallel laws") {
    auto par = make_graph({{"a", 1}, {"b", 1}},
                          {{"e1", "a", "b", Rational(3)}, {"e2", "a", "b", Rational(6)}});
    CHECK(effective_resistance(par, "a", "b") == Rational(2));  // 3*6/9

    auto ser = make_graph({{"a", 1}, {"m", 1}, {"b", 1}},
                          {{"e1", "a", "m", Rational(3)}, {"e2", "m", "b", Rational(6)}});
    CHECK(effective_resistance(ser, "a", "b") == Rational(9));

    CHECK(effective_resistance(circle(Rational(4), 1), "w", "w") == 0);
}

TEST_CASE("j-function and resistances agree through the three-point identity") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 8; ++trial) {
        auto g = random_graph(rng);
        RatMatrix R = resistance_matrix(g);
        const int n = g.vertex_count();
        for (int z = 0; z < n; ++z)
            for (int y = 0; y < n; ++y) {
                auto j = j_function(g, g.vertex(z).id, g.vertex(y).id);
                for (int x = 0; x < n; ++x) {
                    Rational expect = (R(x, z) + R(y, z) - R(x, y)) / 2;
                    CHECK(j.at(g.vertex(x).id) == expect);
                }
            }
    }
}

TEST_CASE("foster coefficients") {
    auto twogon = make_graph({{"p1", 1}, {"p2", 1}},
                             {{"e1", "p1", "p2", Rational(2)}, {"e2", "p1", "p2", Rational(3)}});
    CHECK(foster(twogon, 0) == Rational(2, 5));  // m1/(m1+m2)
    CHECK(foster(twogon, 1) == Rational(3, 5));

    auto seg = segment(Rational(7));
    CHECK(foster(seg, 0) == 0);  // bridges only
    CHECK(foster(circle(Rational(2), 1), 0) == 1);
}

TEST_CASE("Green's function of the uniform circle is constant L/12") {
    auto g = circle(Rational(6), 1);
    GraphMeasure uniform;
    uniform.edge_density["l"] = Rational(1, 6);
    auto gf = green_function(g, uniform);
    CHECK(gf.values(0, 0) == Rational(1, 2));  // 6/12
    auto q = gf.diagonal.at("l");
    CHECK(q.is_constant());
    CHECK(q.a == Rational(1, 2));
}

TEST_CASE("Green's function of the segment with half-half endpoint masses") {
    auto g = segment(Rational(8));
    GraphMeasure mu;
    mu.vertex_mass["a"] = Rational(1, 2);
    mu.vertex_mass["b"] = Rational(1, 2);
    auto gf = green_function(g, mu);
    CHECK(gf.values(0, 0) == Rational(2));  // L/4
    CHECK(gf.diagonal.at("e").is_constant());
    CHECK(gf.diagonal.at("e").a == Rational(2));
}

TEST_CASE("Green's diagonal against the point measure is the resistance") {
    auto g = circle(Rational(5), 1);
    GraphMeasure dirac;
    dirac.vertex_mass["w"] = Rational(1);
    auto gf = green_function(g, dirac);
    // g(x,x) = d(L-d)/L along the loop.
    auto q = gf.diagonal.at("l");
    CHECK(q.a == 0);
    CHECK(q.b == Rational(1));
    CHECK(q.c == Rational(-1, 5));
}

TEST_CASE("Green's function rejects measures without unit mass") {
    auto g = segment(Rational(1));
    GraphMeasure mu;
    mu.vertex_mass["a"] = Rational(1, 3);
    CHECK_THROWS_AS(green_function(g, mu), validation_error);
}

TEST_CASE("canonical measure has unit mass and the expected shape") {
    auto g = circle(Rational(3), 1);
    auto mu = canonical_measure(g);
    CHECK(mu.mass_at("w") == 0);
    CHECK(mu.density_on("l") == Rational(1, 3));
    CHECK(mu.total_mass(g) == 1);

    auto seg = segment(Rational(9));
    auto ms = canonical_measure(seg);
    CHECK(ms.mass_at("a") == Rational(1, 2));
    CHECK(ms.density_on("e") == 0);

    auto theta = make_graph({{"u", 0}, {"v", 0}}, {{"e1", "u", "v", Rational(1)},
                                                   {"e2", "u", "v", Rational(1)},
                                                   {"e3", "u", "v", Rational(1)}});
    auto mt = canonical_measure(theta);
    CHECK(mt.mass_at("u") == Rational(-1, 2));
    CHECK(mt.density_on("e1") == Rational(2, 3));
    CHECK(mt.total_mass(theta) == 1);
}

TEST_CASE("tau of basic shapes and block additivity") {
    CHECK(tau(circle(Rational(7), 1)) == Rational(7, 12));
    CHECK(tau(segment(Rational(7))) == Rational(7, 4));
    auto dumb = make_graph({{"u", 0}, {"v", 0}}, {{"a", "u", "u", Rational(1)},
                                                  {"b", "u", "v", Rational(2)},
                                                  {"c", "v", "v", Rational(4)}});
    CHECK(tau(dumb) == Rational(1, 12) + Rational(2, 4) + Rational(4, 12));
}

TEST_CASE("admissible measure fixtures") {
    auto g = circle(Rational(4), 0);  // genus 1, q = 0
    auto mu = admissible_measure(g);
    CHECK(mu.density_on("l") == Rational(1, 4));
    CHECK(mu.mass_at("w") == 0);

    auto point = make_graph({{"p", 3}}, {});
    auto mp = admissible_measure(point);
    CHECK(mp.mass_at("p") == 1);

    auto seg = segment(Rational(5), 2, 3);  // genera (2, 3), g = 5
    auto ms = admissible_measure(seg);
    CHECK(ms.mass_at("a") == Rational(2, 5));
    CHECK(ms.mass_at("b") == Rational(3, 5));
}

TEST_CASE("Green solve satisfies the discrete balance equation") {
    auto dumb = make_graph({{"u", 1}, {"v", 0}}, {{"a", "u", "u", Rational(2)},
                                                  {"b", "u", "v", Rational(1)},
                                                  {"c", "v", "v", Rational(3)}});
    CHECK(detail::green_balance_holds(dumb, admissible_measure(dumb)));
    CHECK(detail::green_balance_holds(dumb, canonical_measure(dumb)));
}
