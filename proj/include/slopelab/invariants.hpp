#pragma once

#include <map>
#include <string>
#include <vector>

#include "slopelab/graph.hpp"
#include "slopelab/laplace.hpp"
#include "slopelab/tropical.hpp"

namespace slopelab {

namespace detail {

/// sigma(p) for every vertex of a bridgeless graph:
///   sigma(p) = sum_q r(p,q) q(q) + sum_e j^{G\e}_p(e+,e-) F(e),
/// where the j-value is expressed through resistances of the edge-deleted
/// graph. Terms for edges incident to p vanish.
inline std::vector<Rational> sigma_all(const PolarizedWeightedGraph& g) {
    const int n = g.vertex_count();
    RatMatrix R = resistance_matrix(g);
    auto F = foster_coefficients(g);
    std::vector<Rational> sig(n, Rational(0));
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            if (g.vertex(q).genus != 0) sig[p] += R(p, q) * Rational(g.vertex(q).genus);
    for (int e = 0; e < g.edge_count(); ++e) {
        if (F[e] == 0) continue;
        const int eu = g.edge(e).u, ev = g.edge(e).v;
        RatMatrix Rd = resistance_matrix(delete_edge(g, e));
        for (int p = 0; p < n; ++p) {
            if (p == eu || p == ev) continue;
            Rational j = (Rd(eu, p) + Rd(ev, p) - Rd(eu, ev)) / 2;
            sig[p] += j * F[e];
        }
    }
    return sig;
}

inline void require_bridgeless(const PolarizedWeightedGraph& g) {
    if (!is_bridgeless(g))
        throw validation_error("HasBridge: operation requires a bridgeless graph");
}

} // namespace detail

inline Rational sigma(const PolarizedWeightedGraph& g, const std::string& p) {
    detail::require_bridgeless(g);
    return detail::sigma_all(g)[g.vertex_index(p)];
}

/// Slope of a bridgeless polarized graph as the sigma-weighted degree of the
/// canonical divisor.
inline Rational slope_bridgeless(const PolarizedWeightedGraph& g) {
    detail::require_bridgeless(g);
    auto sig = detail::sigma_all(g);
    Rational s(0);
    for (int p = 0; p < g.vertex_count(); ++p)
        s += Rational(g.canonical_value(p)) * sig[p];
    return s;
}

/// Slope of a general connected polarized graph: sum of the slopes of its
/// loop and 2-connected blocks with their induced polarizations (bridges
/// contribute zero).
inline Rational slope(const PolarizedWeightedGraph& g) {
    if (g.genus() < 2)
        throw validation_error("GenusTooSmall: slope needs genus >= 2");
    Rational s(0);
    for (const auto& b : blocks(g).blocks) {
        if (b.kind == BlockKind::bridge) continue;
        s += slope_bridgeless(b.graph);
    }
    return s;
}

/// Pipeline A: lambda recovered by inverting the slope definition,
///   (8g+4) lambda = s + g delta0 + sum_h 4h(g-h) deltaH.
inline Rational lambda_from_slope(const PolarizedWeightedGraph& g) {
    const long gg = g.genus();
    if (gg < 2)
        throw validation_error("GenusTooSmall: lambda-from-slope needs genus >= 2");
    EdgeProfile prof = edge_profile(g);
    Rational acc = slope(g) + Rational(gg) * prof.delta0;
    for (const auto& [h, len] : prof.deltaH) acc += Rational(4 * h * (gg - h)) * len;
    return acc / Rational(8 * gg + 4);
}

namespace detail {

struct PhiEpsilon {
    Rational phi;
    Rational epsilon;
};

inline PhiEpsilon phi_epsilon(const PolarizedWeightedGraph& g) {
    const long gg = g.genus();
    if (gg < 1)
        throw validation_error("GenusTooSmall: phi/epsilon need genus >= 1");
    GraphMeasure mu = admissible_measure(g);
    GreenFunction gf = green_function(g, mu);

    // integral of g(x,x) against mu, and against delta_K.
    Rational T(0), KT(0);
    for (int p = 0; p < g.vertex_count(); ++p) {
        const std::string& id = g.vertex(p).id;
        Rational d = gf.values(p, p);
        T += mu.mass_at(id) * d;
        KT += Rational(g.canonical_value(p)) * d;
    }
    for (const auto& e : g.edges()) {
        Rational rho = mu.density_on(e.id);
        if (rho == 0) continue;
        T += rho * gf.diagonal.at(e.id).integral(e.length);
    }
    Rational delta = g.total_length();
    PhiEpsilon out;
    out.phi = -delta / 4 + (Rational(10 * gg + 2) * T - KT) / 4;
    out.epsilon = Rational(2 * gg - 2) * T + KT;
    return out;
}

} // namespace detail

inline Rational phi(const PolarizedWeightedGraph& g) { return detail::phi_epsilon(g).phi; }
inline Rational epsilon(const PolarizedWeightedGraph& g) { return detail::phi_epsilon(g).epsilon; }

/// Pipeline B: lambda straight from its definition,
///   lambda = (g-1)/(6(2g+1)) phi + (delta + epsilon)/12.
inline Rational lambda_direct(const PolarizedWeightedGraph& g) {
    const long gg = g.genus();
    auto pe = detail::phi_epsilon(g);
    return Rational(gg - 1, 6 * (2 * gg + 1)) * pe.phi + (g.total_length() + pe.epsilon) / 12;
}

// --- Vanishing classification ----------------------------------------------

enum class VanishingClass { banana, loops_and_bridges, nonvanishing };

inline std::string to_string(VanishingClass c) {
    switch (c) {
        case VanishingClass::banana: return "banana";
        case VanishingClass::loops_and_bridges: return "loops-and-bridges";
        default: return "nonvanishing";
    }
}

/// Classification of vanishing slope on the minimal model: a banana with
/// trivial polarization, a block tree of loops and bridges, or neither.
inline VanishingClass classify_vanishing(const PolarizedWeightedGraph& g) {
    if (g.genus() < 2)
        throw validation_error("GenusTooSmall: classification needs genus >= 2");
    PolarizedWeightedGraph m = minimal_model(g);
    if (m.vertex_count() == 2 && m.total_vertex_genus() == 0 &&
        m.edge_count() == m.genus() + 1) {
        bool parallel = true;
        for (const auto& e : m.edges())
            if (e.is_loop()) parallel = false;
        if (parallel) return VanishingClass::banana;
    }
    bool simple = true;
    for (const auto& b : blocks(m).blocks)
        if (b.kind == BlockKind::two_connected) simple = false;
    if (simple) return VanishingClass::loops_and_bridges;
    return VanishingClass::nonvanishing;
}

// --- Full report --------------------------------------------------------------

struct InvariantReport {
    long genus = 0;
    Rational delta, delta0;
    std::map<long, Rational> deltaH;
    Rational phi, epsilon;
    Rational lambda_pipelineA;  // slope inversion
    Rational lambda_pipelineB;  // phi/epsilon/Green route
    Rational slope;
    Rational tau;
    Rational jacobian_moment;
    VanishingClass vanishing = VanishingClass::nonvanishing;
    bool pipelines_equal = false;
    bool identity_moment_tau = false;     // I + tau/2 = delta/8
    bool identity_phi_epsilon = false;    // 2 phi = delta + epsilon - 12 I
    bool identity_epsilon_tau = false;    // (delta+eps-2phi)/12 + tau/2 = delta/8
};

/// All invariants of a genus >= 2 polarized weighted graph, with both lambda
/// pipelines and the cross-identities verified. Throws identity_violation on
/// any mismatch; such a mismatch certifies an implementation bug.
inline InvariantReport report(const PolarizedWeightedGraph& g) {
    InvariantReport r;
    r.genus = g.genus();
    if (r.genus < 2)
        throw validation_error("GenusTooSmall: report needs genus >= 2");
    EdgeProfile prof = edge_profile(g);
    r.delta = prof.delta;
    r.delta0 = prof.delta0;
    r.deltaH = prof.deltaH;
    auto pe = detail::phi_epsilon(g);
    r.phi = pe.phi;
    r.epsilon = pe.epsilon;
    r.slope = slope(g);
    r.lambda_pipelineA = lambda_from_slope(g);
    r.lambda_pipelineB = Rational(r.genus - 1, 6 * (2 * r.genus + 1)) * r.phi +
                         (r.delta + r.epsilon) / 12;
    r.tau = tau(g);
    r.jacobian_moment = jac_moment(g);
    r.vanishing = classify_vanishing(g);

    r.pipelines_equal = r.lambda_pipelineA == r.lambda_pipelineB;
    r.identity_moment_tau = r.jacobian_moment + r.tau / 2 == r.delta / 8;
    r.identity_phi_epsilon = 2 * r.phi == r.delta + r.epsilon - 12 * r.jacobian_moment;
    r.identity_epsilon_tau =
        (r.delta + r.epsilon - 2 * r.phi) / 12 + r.tau / 2 == r.delta / 8;

    if (!r.pipelines_equal)
        throw identity_violation("lambda pipelines disagree");
    if (!r.identity_moment_tau || !r.identity_phi_epsilon || !r.identity_epsilon_tau)
        throw identity_violation("tropical identity failed");
    return r;
}

} // namespace slopelab
