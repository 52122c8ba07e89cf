#pragma once

#include <atomic>
#include <cstdlib>
#include <map>
#include <random>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "slopelab/invariants.hpp"
#include "slopelab/jump.hpp"
#include "slopelab/laplace.hpp"

namespace slopelab {

/// Random connected polarized weighted graph: |V| <= 8, |E| <= 12, rational
/// lengths with numerator/denominator <= 12, genus between 2 and 6. Bridges
/// always split into two positive genera, matching the class of graphs the
/// polarization inequality allows.
inline PolarizedWeightedGraph random_graph(std::mt19937_64& rng) {
    auto draw = [&](long lo, long hi) {
        return lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1));
    };
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const long nv = draw(1, 8);
        std::vector<VertexSpec> vs;
        for (long v = 0; v < nv; ++v) vs.push_back({"v" + std::to_string(v), 0});
        std::vector<EdgeSpec> es;
        long eid = 0;
        auto add_edge = [&](long a, long b) {
            es.push_back({"e" + std::to_string(eid++), vs[a].id, vs[b].id,
                          Rational(draw(1, 12), draw(1, 12))});
        };
        for (long v = 1; v < nv; ++v) add_edge(draw(0, v - 1), v);
        const long extra = draw(0, std::min<long>(5, 12 - (nv - 1)));
        for (long k = 0; k < extra; ++k) add_edge(draw(0, nv - 1), draw(0, nv - 1));

        long b1 = static_cast<long>(es.size()) - nv + 1;
        if (b1 > 6) continue;
        for (auto& v : vs) v.genus = draw(0, 2);
        long g = b1;
        for (const auto& v : vs) g += v.genus;
        while (g > 6) {
            long i = draw(0, nv - 1);
            if (vs[i].genus > 0) {
                --vs[i].genus;
                --g;
            }
        }
        while (g < 2) {
            ++vs[draw(0, nv - 1)].genus;
            ++g;
        }

        auto graph = PolarizedWeightedGraph::validate(vs, es);
        bool ok = true;
        for (int e = 0; e < graph.edge_count() && ok; ++e) {
            if (!graph.is_bridge(e)) continue;
            auto comp = graph.component_of(graph.edge(e).u, {e});
            long h = graph.component_genus(comp, {e});
            if (h == 0 || h == g) ok = false;
        }
        if (ok) return graph;
    }
    throw numeric_error("random graph generation failed to converge");
}

/// Named fixtures exercised alongside the random corpus.
inline std::vector<std::pair<std::string, PolarizedWeightedGraph>> corpus_fixtures() {
    std::vector<std::pair<std::string, PolarizedWeightedGraph>> out;
    // Banana family: two genus-0 vertices joined by g+1 parallel edges.
    for (long g = 2; g <= 6; ++g) {
        std::vector<EdgeSpec> es;
        for (long k = 0; k <= g; ++k)
            es.push_back({"e" + std::to_string(k), "u", "v", Rational(k + 1, 2)});
        out.emplace_back("banana" + std::to_string(g),
                         make_graph({{"u", 0}, {"v", 0}}, std::move(es)));
    }
    out.emplace_back("dumbbell", make_graph({{"u", 0}, {"v", 0}},
                                            {{"a", "u", "u", Rational(3)},
                                             {"b", "u", "v", Rational(5, 2)},
                                             {"c", "v", "v", Rational(7, 3)}}));
    // Caterpillar: a path of bridges with loops hanging off its spine.
    out.emplace_back("caterpillar",
                     make_graph({{"v0", 0}, {"v1", 1}, {"v2", 0}},
                                {{"l0", "v0", "v0", Rational(1)},
                                 {"b0", "v0", "v1", Rational(2)},
                                 {"b1", "v1", "v2", Rational(1, 2)},
                                 {"l2", "v2", "v2", Rational(5, 3)}}));
    out.emplace_back("k4", make_graph({{"a", 0}, {"b", 0}, {"c", 0}, {"d", 0}},
                                      {{"e1", "a", "b", Rational(1)},
                                       {"e2", "a", "c", Rational(1)},
                                       {"e3", "a", "d", Rational(1)},
                                       {"e4", "b", "c", Rational(1)},
                                       {"e5", "b", "d", Rational(1)},
                                       {"e6", "c", "d", Rational(1)}}));
    out.emplace_back("theta", make_graph({{"u", 0}, {"v", 0}},
                                         {{"e1", "u", "v", Rational(1)},
                                          {"e2", "u", "v", Rational(2)},
                                          {"e3", "u", "v", Rational(3, 2)}}));
    out.emplace_back("twogon", make_graph({{"p1", 1}, {"p2", 1}},
                                          {{"e1", "p1", "p2", Rational(2)},
                                           {"e2", "p1", "p2", Rational(3)}}));
    out.emplace_back("loop3", make_graph({{"p", 2}}, {{"l", "p", "p", Rational(4, 3)}}));
    out.emplace_back("segment", make_graph({{"a", 1}, {"b", 2}},
                                           {{"s", "a", "b", Rational(7, 5)}}));
    out.emplace_back("point", make_graph({{"p", 3}}, {}));
    return out;
}

// --- Identity suite -----------------------------------------------------------

struct CorpusCheck {
    std::string name;
    long passed = 0;
    long failed = 0;
    std::vector<std::string> failures;
};

struct CorpusSummary {
    unsigned long seed = 0;
    long count = 0;
    std::vector<CorpusCheck> checks;

    bool all_passed() const {
        for (const auto& c : checks)
            if (c.failed > 0) return false;
        return true;
    }
};

struct CorpusOptions {
    unsigned long seed = 1;
    long count = 200;
    bool include_fixtures = true;
    long jump_length_draws = 5;
    bool heavy_checks = true;  // Voronoi, scaling covariance, Rayleigh
    int threads = 0;           // 0: SLOPELAB_THREADS, else hardware
};

namespace detail {

/// Discrete balance of the Green function: edge slopes around each vertex of
/// the refined graph reproduce delta_y - mu exactly.
inline bool green_balance_holds(const PolarizedWeightedGraph& g, const GraphMeasure& mu) {
    auto gs = green_solve(g, mu);
    const auto& rg = gs.refined.graph;
    const auto& rmu = gs.refined_measure;
    const int n = rg.vertex_count();
    for (int y = 0; y < n; ++y) {
        for (int p = 0; p < n; ++p) {
            Rational balance(0);
            for (auto [e, w] : rg.incident(p)) {
                const auto& er = rg.edge(e);
                balance += (gs.values(p, y) - gs.values(w, y)) / er.length;
                balance += rmu.density_on(er.id) * er.length / 2;
            }
            Rational expected = (p == y ? Rational(1) : Rational(0)) -
                                rmu.mass_at(rg.vertex(p).id);
            if (balance != expected) return false;
        }
    }
    return true;
}

using CheckEntry = std::tuple<std::string, bool, std::string>;

/// All exact identities for a single graph; pure and thread-safe, with its
/// own deterministic random draws.
inline std::vector<CheckEntry> corpus_checks_for(const std::string& name,
                                                 const PolarizedWeightedGraph& g,
                                                 const CorpusOptions& opt,
                                                 unsigned long graph_seed) {
    std::vector<CheckEntry> out;
    std::mt19937_64 rng(graph_seed);
    auto draw = [&](long lo, long hi) {
        return lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1));
    };
    auto push = [&](const std::string& check, bool ok, const std::string& why = "") {
        out.emplace_back(check, ok, ok ? "" : (name + (why.empty() ? "" : ": " + why)));
    };

    {
        Rational fs(0);
        for (const auto& f : foster_coefficients(g)) fs += f;
        push("foster_sum_is_b1", fs == g.betti1());
    }
    {
        RatMatrix R = resistance_matrix(g);
        bool ok = true;
        const int n = g.vertex_count();
        for (int i = 0; i < n && ok; ++i)
            for (int j = 0; j < n && ok; ++j) {
                if (R(i, j) != R(j, i)) ok = false;
                if (i == j && R(i, j) != 0) ok = false;
                if (i != j && R(i, j) <= 0) ok = false;
                for (int k = 0; k < n && ok; ++k)
                    if (R(i, j) > R(i, k) + R(k, j)) ok = false;
            }
        push("resistance_metric", ok);
    }
    if (is_two_connected(g)) {
        bool ok = true;
        const int n = g.vertex_count();
        for (int z = 0; z < n && ok; ++z)
            for (int y = 0; y < n && ok; ++y) {
                if (z == y) continue;
                auto jf = j_function(g, g.vertex(z).id, g.vertex(y).id);
                for (int x = 0; x < n && ok; ++x)
                    if (x != z && jf.at(g.vertex(x).id) <= 0) ok = false;
            }
        push("j_positivity_two_connected", ok);
    }
    try {
        push("green_balance_and_quarter_point",
             green_balance_holds(g, admissible_measure(g)));
    } catch (const std::exception& ex) {
        push("green_balance_and_quarter_point", false, ex.what());
    }
    {
        auto prof = edge_profile(g);
        Rational total = prof.delta0;
        bool range_ok = true;
        for (const auto& [h, len] : prof.deltaH) {
            total += len;
            if (h < 1 || h > g.genus() / 2) range_ok = false;
        }
        push("delta_splits_exactly", total == prof.delta && range_ok);
    }
    {
        auto dec = blocks(g);
        bool ok = true;
        long b1_sum = 0;
        for (const auto& b : dec.blocks) {
            if (b.graph.genus() != g.genus()) ok = false;
            b1_sum += b.graph.betti1();
        }
        if (b1_sum != g.betti1()) ok = false;
        if (g.is_stable())
            for (const auto& b : dec.blocks)
                if (!b.graph.is_stable()) ok = false;
        // The block-cut incidences form a tree on blocks + cut vertices.
        if (!dec.blocks.empty() &&
            dec.tree_edges.size() + 1 != dec.blocks.size() + dec.cut_vertices.size())
            ok = false;
        push("blocks_preserve_genus", ok);
    }
    {
        auto m = minimal_model(g);
        bool ok = m.genus() == g.genus();
        auto p1 = edge_profile(g), p2 = edge_profile(m);
        if (p1.delta != p2.delta || p1.delta0 != p2.delta0 || p1.deltaH != p2.deltaH)
            ok = false;
        auto m2 = minimal_model(m);
        if (m2.vertex_count() != m.vertex_count() || m2.edge_count() != m.edge_count())
            ok = false;
        push("minimal_model_invariants", ok);
    }

    InvariantReport rep;
    try {
        rep = report(g);
        push("lambda_pipelines_and_identities", true);
    } catch (const std::exception& ex) {
        push("lambda_pipelines_and_identities", false, ex.what());
        return out;
    }
    push("slope_nonnegative", rep.slope >= 0);
    push("classifier_matches_slope",
         (rep.slope == 0) == (rep.vanishing != VanishingClass::nonvanishing));
    if (is_bridgeless(g)) push("slope_block_additivity", rep.slope == slope_bridgeless(g));

    try {
        auto mm = minimal_model(g);
        for (long k = 0; k < opt.jump_length_draws; ++k) {
            std::map<std::string, Rational> lens;
            for (const auto& e : mm.edges()) lens[e.id] = Rational(draw(1, 12), draw(1, 12));
            auto jr = jump_crosscheck(with_lengths(mm, lens));
            push("jump_identity", jr.residual == 0 && jr.jump >= 0);
        }
    } catch (const std::exception& ex) {
        push("jump_identity", false, ex.what());
    }

    if (!opt.heavy_checks) return out;

    if (g.betti1() >= 1 && g.betti1() <= 5) {
        try {
            auto gram = cycle_gram(g);
            auto cell = voronoi_cell(gram);  // throws unless volume == 1
            // Weighted matrix-tree: det of the reduced (1/len) Laplacian times
            // the product of all lengths counts cotree monomials.
            Rational prod(1);
            for (const auto& e : g.edges()) prod *= e.length;
            RatMatrix L = weighted_laplacian(g);
            Rational red_det =
                g.vertex_count() > 1
                    ? exact_det(RatMatrix(L.bottomRightCorner(g.vertex_count() - 1,
                                                              g.vertex_count() - 1)))
                    : Rational(1);
            push("voronoi_volume_and_matrix_tree",
                 exact_det(gram.Z) == prod * red_det && cell.volume == 1);
        } catch (const std::exception& ex) {
            push("voronoi_volume_and_matrix_tree", false, ex.what());
        }
    }
    if (g.betti1() >= 1 && g.betti1() <= 4) {
        try {
            auto gram = cycle_gram(g);
            Rational lam(draw(1, 9), draw(1, 9));
            bool ok = moment(GramLattice(RatMatrix(lam * gram.Z))) == lam * moment(gram);
            const int b = gram.dim();
            RatMatrix U = RatMatrix::Identity(b, b);
            if (b >= 2) {
                int i = static_cast<int>(draw(0, b - 1)), j = i;
                while (j == i) j = static_cast<int>(draw(0, b - 1));
                U(i, j) = Rational(draw(-1, 1));
            }
            RatMatrix Zu = U.transpose() * gram.Z * U;
            if (moment(GramLattice(Zu)) != moment(gram)) ok = false;
            push("moment_scaling_and_unimodular", ok);
        } catch (const std::exception& ex) {
            push("moment_scaling_and_unimodular", false, ex.what());
        }
    }
    if (g.edge_count() >= 1) {
        try {
            Rational cfac(draw(1, 7), draw(1, 7));
            auto reps = report(scale_lengths(g, cfac));
            bool ok = reps.delta == cfac * rep.delta && reps.delta0 == cfac * rep.delta0 &&
                      reps.phi == cfac * rep.phi && reps.epsilon == cfac * rep.epsilon &&
                      reps.slope == cfac * rep.slope && reps.tau == cfac * rep.tau &&
                      reps.lambda_pipelineB == cfac * rep.lambda_pipelineB &&
                      reps.jacobian_moment == cfac * rep.jacobian_moment;
            push("scaling_covariance", ok);
        } catch (const std::exception& ex) {
            push("scaling_covariance", false, ex.what());
        }
    }
    {
        std::vector<int> candidates;
        for (int e = 0; e < g.edge_count(); ++e)
            if (!g.is_bridge(e) && !g.edge(e).is_loop()) candidates.push_back(e);
        if (!candidates.empty()) {
            int e = candidates[static_cast<size_t>(
                draw(0, static_cast<long>(candidates.size()) - 1))];
            RatMatrix before = resistance_matrix(g);
            RatMatrix after = resistance_matrix(delete_edge(g, e));
            bool ok = true;
            for (int i = 0; i < g.vertex_count() && ok; ++i)
                for (int j = 0; j < g.vertex_count() && ok; ++j)
                    if (after(i, j) < before(i, j)) ok = false;
            push("rayleigh_monotonicity", ok);
        }
    }
    return out;
}

inline int corpus_thread_count(const CorpusOptions& opt) {
    if (opt.threads > 0) return opt.threads;
    if (const char* env = std::getenv("SLOPELAB_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

} // namespace detail

/// Runs every exact identity of the library over random graphs plus the
/// named fixtures; any failure is a bug certificate. Deterministic for a
/// fixed seed independent of the thread count.
inline CorpusSummary run_corpus(const CorpusOptions& opt) {
    if (opt.count < 1)
        throw validation_error("corpus count must be at least 1");
    std::mt19937_64 rng(opt.seed);
    CorpusSummary sum;
    sum.seed = opt.seed;
    sum.count = opt.count;

    std::vector<std::pair<std::string, PolarizedWeightedGraph>> graphs;
    for (long i = 0; i < opt.count; ++i)
        graphs.emplace_back("rnd" + std::to_string(i), random_graph(rng));
    if (opt.include_fixtures)
        for (auto& [name, g] : corpus_fixtures())
            if (g.genus() >= 2) graphs.emplace_back(name, g);

    const int threads = std::min<int>(detail::corpus_thread_count(opt),
                                      static_cast<int>(graphs.size()));
    std::vector<std::vector<detail::CheckEntry>> results(graphs.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= graphs.size()) break;
            results[i] = detail::corpus_checks_for(graphs[i].first, graphs[i].second, opt,
                                                   opt.seed * 0x9e3779b9ULL + 7919 * i);
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // Deterministic reduction in graph order.
    for (const auto& entries : results) {
        for (const auto& [check, ok, why] : entries) {
            CorpusCheck* slot = nullptr;
            for (auto& c : sum.checks)
                if (c.name == check) slot = &c;
            if (!slot) {
                CorpusCheck fresh;
                fresh.name = check;
                sum.checks.push_back(std::move(fresh));
                slot = &sum.checks.back();
            }
            if (ok) {
                ++slot->passed;
            } else {
                ++slot->failed;
                if (slot->failures.size() < 16) slot->failures.push_back(why);
            }
        }
    }
    return sum;
}

} // namespace slopelab
