#pragma once

#include <map>
#include <string>

#include "slopelab/graph.hpp"
#include "slopelab/invariants.hpp"

namespace slopelab {

/// Rebuilds the graph with some (or all) edge lengths replaced.
inline PolarizedWeightedGraph with_lengths(const PolarizedWeightedGraph& g,
                                           const std::map<std::string, Rational>& lengths) {
    std::vector<VertexSpec> vs;
    for (const auto& v : g.vertices()) vs.push_back({v.id, v.genus});
    std::vector<EdgeSpec> es;
    for (const auto& e : g.edges()) {
        auto it = lengths.find(e.id);
        es.push_back({e.id, g.vertex(e.u).id, g.vertex(e.v).id,
                      it == lengths.end() ? e.length : it->second});
    }
    return PolarizedWeightedGraph::validate(std::move(vs), std::move(es));
}

/// Height jump of the Ceresa cycle at the boundary point with this stable
/// dual graph: equal to the slope at the given edge lengths.
inline Rational height_jump(const PolarizedWeightedGraph& g) {
    if (g.genus() < 2)
        throw validation_error("GenusTooSmall: height jump needs genus >= 2");
    if (!g.is_stable())
        throw validation_error("NotStable: height jump is defined for stable dual graphs");
    return slope(g);
}

struct JumpReport {
    Rational jump;
    std::map<std::string, Rational> edge_lambda;  // one-edge degeneration lambdas
    Rational residual;                            // must be exactly zero
    VanishingClass vanishing = VanishingClass::nonvanishing;
};

/// Computes the jump twice: as the slope, and via the contraction identity
///   j = (8g+4) (lambda(G) - sum_i lambda(G_i)),
/// with lambda(G) from the phi/epsilon pipeline and lambda(G_i) from the
/// per-branch graphs obtained by contracting all edges but one. The residual
/// must vanish exactly.
inline JumpReport jump_crosscheck(const PolarizedWeightedGraph& g) {
    JumpReport rep;
    rep.jump = height_jump(g);
    const long gg = g.genus();
    const Rational denom(8 * gg + 4);

    Rational contracted_sum(0);
    for (const auto& e : g.edges()) {
        Contraction c = contract_all_but(g, e.id);
        const auto& gi = c.graph;
        Rational li;
        if (gi.vertex_count() == 1) {
            // Loop graph of genus g on one vertex of genus g-1.
            if (gi.vertex(0).genus != gg - 1)
                throw identity_violation("IdentityViolation: contraction lost genus at " + e.id);
            li = Rational(gg) * e.length / denom;
        } else {
            // Edge segment with endpoint genera (h, g-h).
            long h = gi.vertex(0).genus;
            if (h + gi.vertex(1).genus != gg)
                throw identity_violation("IdentityViolation: contraction lost genus at " + e.id);
            li = Rational(4 * h * (gg - h)) * e.length / denom;
        }
        rep.edge_lambda[e.id] = li;
        contracted_sum += li;
    }
    Rational lambda_g = lambda_direct(g);
    rep.residual = rep.jump - denom * (lambda_g - contracted_sum);
    if (rep.residual != 0)
        throw identity_violation("IdentityViolation: jump does not match the contraction identity");
    rep.vanishing = classify_vanishing(g);
    return rep;
}

} // namespace slopelab
