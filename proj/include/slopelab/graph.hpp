#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "slopelab/rational.hpp"

namespace slopelab {

struct VertexSpec {
    std::string id;
    long genus = 0;
};

struct EdgeSpec {
    std::string id;
    std::string u;
    std::string v;
    Rational length;
};

/// Divisor on the vertex set (element of Z^V).
struct Divisor {
    std::map<std::string, long> values;

    long degree() const {
        long d = 0;
        for (const auto& [_, n] : values) d += n;
        return d;
    }
    bool effective() const {
        for (const auto& [_, n] : values)
            if (n < 0) return false;
        return true;
    }
    long at(const std::string& id) const {
        auto it = values.find(id);
        return it == values.end() ? 0 : it->second;
    }
};

/// Connected multigraph with loops, per-vertex genus and positive rational
/// edge lengths. Immutable after validation.
class PolarizedWeightedGraph {
public:
    struct Vertex {
        std::string id;
        long genus;
    };
    struct Edge {
        std::string id;
        int u;
        int v;
        Rational length;
        bool is_loop() const { return u == v; }
    };

    static PolarizedWeightedGraph validate(std::vector<VertexSpec> vs, std::vector<EdgeSpec> es) {
        PolarizedWeightedGraph g;
        if (vs.empty())
            throw validation_error("EmptyVertexSet: graph needs at least one vertex");
        for (auto& v : vs) {
            if (v.genus < 0)
                throw validation_error("vertex genus must be non-negative: " + v.id);
            if (g.vertex_index_.count(v.id))
                throw validation_error("duplicate vertex id: " + v.id);
            g.vertex_index_[v.id] = static_cast<int>(g.vertices_.size());
            g.vertices_.push_back({v.id, v.genus});
        }
        std::set<std::string> edge_ids;
        for (auto& e : es) {
            if (!edge_ids.insert(e.id).second)
                throw validation_error("duplicate edge id: " + e.id);
            if (e.length <= 0)
                throw validation_error("NonPositiveLength: edge " + e.id);
            auto iu = g.vertex_index_.find(e.u);
            auto iv = g.vertex_index_.find(e.v);
            if (iu == g.vertex_index_.end() || iv == g.vertex_index_.end())
                throw validation_error("edge " + e.id + " references unknown vertex");
            g.edges_.push_back({e.id, iu->second, iv->second, e.length});
        }
        g.build_adjacency();
        if (!g.connected_all())
            throw validation_error("DisconnectedGraph");
        return g;
    }

    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<Vertex>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Vertex& vertex(int i) const { return vertices_[i]; }
    const Edge& edge(int i) const { return edges_[i]; }

    int vertex_index(const std::string& id) const {
        auto it = vertex_index_.find(id);
        if (it == vertex_index_.end())
            throw validation_error("unknown vertex id: " + id);
        return it->second;
    }
    std::optional<int> find_vertex(const std::string& id) const {
        auto it = vertex_index_.find(id);
        if (it == vertex_index_.end()) return std::nullopt;
        return it->second;
    }
    int edge_index(const std::string& id) const {
        for (int i = 0; i < edge_count(); ++i)
            if (edges_[i].id == id) return i;
        throw validation_error("unknown edge id: " + id);
    }

    /// Incident (edge index, opposite endpoint) pairs; a loop appears twice.
    const std::vector<std::pair<int, int>>& incident(int v) const { return adjacency_[v]; }

    /// Number of emanating half-edges (a loop counts twice).
    int valency(int v) const { return static_cast<int>(adjacency_[v].size()); }

    int betti1() const { return edge_count() - vertex_count() + 1; }

    long total_vertex_genus() const {
        long s = 0;
        for (const auto& v : vertices_) s += v.genus;
        return s;
    }

    long genus() const { return betti1() + total_vertex_genus(); }

    Rational total_length() const {
        Rational t(0);
        for (const auto& e : edges_) t += e.length;
        return t;
    }

    long canonical_value(int v) const { return valency(v) - 2 + 2 * vertices_[v].genus; }

    Divisor canonical_divisor() const {
        Divisor d;
        for (int i = 0; i < vertex_count(); ++i) d.values[vertices_[i].id] = canonical_value(i);
        return d;
    }

    bool is_stable() const {
        for (int i = 0; i < vertex_count(); ++i)
            if (canonical_value(i) <= 0) return false;
        return true;
    }

    /// Connectivity of the subgraph on all vertices with the given edges
    /// removed; used for bridge detection and block polarizations.
    bool connected_without_edges(const std::set<int>& removed) const {
        if (vertex_count() == 0) return false;
        std::vector<char> seen(vertex_count(), 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int reached = 1;
        while (!stack.empty()) {
            int p = stack.back();
            stack.pop_back();
            for (auto [e, w] : adjacency_[p]) {
                if (removed.count(e) || seen[w]) continue;
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
        return reached == vertex_count();
    }

    bool is_bridge(int e) const {
        if (edges_[e].is_loop()) return false;
        return !connected_without_edges({e});
    }

    /// Vertex indices of the component of `start` after removing `removed`.
    std::vector<int> component_of(int start, const std::set<int>& removed) const {
        std::vector<char> seen(vertex_count(), 0);
        std::vector<int> stack{start}, comp;
        seen[start] = 1;
        while (!stack.empty()) {
            int p = stack.back();
            stack.pop_back();
            comp.push_back(p);
            for (auto [e, w] : adjacency_[p]) {
                if (removed.count(e) || seen[w]) continue;
                seen[w] = 1;
                stack.push_back(w);
            }
        }
        std::sort(comp.begin(), comp.end());
        return comp;
    }

    /// Genus of the polarized subgraph induced by a vertex component and the
    /// edges lying inside it, after removing `removed`.
    long component_genus(const std::vector<int>& comp, const std::set<int>& removed) const {
        std::set<int> in(comp.begin(), comp.end());
        long ecount = 0;
        for (int e = 0; e < edge_count(); ++e) {
            if (removed.count(e)) continue;
            if (in.count(edges_[e].u) && in.count(edges_[e].v)) ++ecount;
        }
        long q = 0;
        for (int v : comp) q += vertices_[v].genus;
        return ecount - static_cast<long>(comp.size()) + 1 + q;
    }

private:
    void build_adjacency() {
        adjacency_.assign(vertices_.size(), {});
        for (int e = 0; e < edge_count(); ++e) {
            adjacency_[edges_[e].u].emplace_back(e, edges_[e].v);
            if (edges_[e].is_loop())
                adjacency_[edges_[e].u].emplace_back(e, edges_[e].u);
            else
                adjacency_[edges_[e].v].emplace_back(e, edges_[e].u);
        }
    }
    bool connected_all() const { return connected_without_edges({}); }

    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::pair<int, int>>> adjacency_;
    std::map<std::string, int> vertex_index_;
};

/// Convenience builder for tests and fixtures.
inline PolarizedWeightedGraph make_graph(std::vector<VertexSpec> vs, std::vector<EdgeSpec> es) {
    return PolarizedWeightedGraph::validate(std::move(vs), std::move(es));
}

inline long genus(const PolarizedWeightedGraph& g) { return g.genus(); }
inline Divisor canonical_divisor(const PolarizedWeightedGraph& g) { return g.canonical_divisor(); }
inline bool is_stable(const PolarizedWeightedGraph& g) { return g.is_stable(); }

// --- Block decomposition -------------------------------------------------

enum class BlockKind { loop, bridge, two_connected };

struct Block {
    BlockKind kind;
    PolarizedWeightedGraph graph;           // carries the induced polarization
    std::vector<std::string> attachments;   // separating vertices lying on it
    std::vector<int> edge_indices;          // edges in the parent graph
};

struct BlockDecomposition {
    std::vector<Block> blocks;
    std::vector<std::string> cut_vertices;
    // Bipartite block-cut tree: (block index, cut vertex id) incidences.
    std::vector<std::pair<int, std::string>> tree_edges;
};

namespace detail {

/// Edge partition into blocks: every loop alone, remaining edges grouped
/// into biconnected components (iterative Hopcroft-Tarjan on the multigraph).
inline std::vector<std::vector<int>> block_edge_partition(const PolarizedWeightedGraph& g) {
    const int n = g.vertex_count();
    std::vector<std::vector<int>> result;
    for (int e = 0; e < g.edge_count(); ++e)
        if (g.edge(e).is_loop()) result.push_back({e});

    std::vector<int> disc(n, -1), low(n, 0);
    std::vector<int> edge_stack;
    std::vector<char> edge_seen(g.edge_count(), 0);
    int timer = 0;

    struct Frame {
        int v;
        int via_edge;
        size_t next;
    };

    for (int root = 0; root < n; ++root) {
        if (disc[root] != -1) continue;
        std::vector<Frame> stack{{root, -1, 0}};
        disc[root] = low[root] = timer++;
        while (!stack.empty()) {
            Frame& f = stack.back();
            const auto& adj = g.incident(f.v);
            if (f.next < adj.size()) {
                auto [e, w] = adj[f.next++];
                if (g.edge(e).is_loop() || e == f.via_edge) continue;
                if (!edge_seen[e]) {
                    edge_seen[e] = 1;
                    edge_stack.push_back(e);
                }
                if (disc[w] == -1) {
                    disc[w] = low[w] = timer++;
                    stack.push_back({w, e, 0});
                } else {
                    low[f.v] = std::min(low[f.v], disc[w]);
                }
            } else {
                int child = f.v;
                int via = f.via_edge;
                stack.pop_back();
                if (stack.empty()) break;
                int parent = stack.back().v;
                low[parent] = std::min(low[parent], low[child]);
                if (low[child] >= disc[parent]) {
                    std::vector<int> comp;
                    while (true) {
                        int e = edge_stack.back();
                        edge_stack.pop_back();
                        comp.push_back(e);
                        if (e == via) break;
                    }
                    std::sort(comp.begin(), comp.end());
                    result.push_back(std::move(comp));
                }
            }
        }
    }
    std::sort(result.begin(), result.end());
    return result;
}

} // namespace detail

/// Block-tree decomposition with induced (pushforward) polarizations: at a
/// vertex p of block H, the induced genus is q(p) plus the genus of the
/// whole subgraph hanging off H at p, so every block has the genus of G.
inline BlockDecomposition blocks(const PolarizedWeightedGraph& g) {
    BlockDecomposition out;
    auto partition = detail::block_edge_partition(g);

    std::vector<int> blocks_at(g.vertex_count(), 0);
    for (const auto& comp : partition) {
        std::set<int> vs;
        for (int e : comp) {
            vs.insert(g.edge(e).u);
            vs.insert(g.edge(e).v);
        }
        for (int v : vs) ++blocks_at[v];
    }
    std::set<int> cuts;
    for (int v = 0; v < g.vertex_count(); ++v)
        if (blocks_at[v] >= 2) cuts.insert(v);

    for (const auto& comp : partition) {
        std::set<int> removed(comp.begin(), comp.end());
        std::set<int> vs;
        for (int e : comp) {
            vs.insert(g.edge(e).u);
            vs.insert(g.edge(e).v);
        }
        std::vector<VertexSpec> bverts;
        std::vector<std::string> attach;
        for (int v : vs) {
            long q = g.vertex(v).genus;
            if (cuts.count(v)) {
                // Genus of the whole subgraph touching this block at v,
                // including q(v) itself.
                q = g.component_genus(g.component_of(v, removed), removed);
                attach.push_back(g.vertex(v).id);
            }
            bverts.push_back({g.vertex(v).id, q});
        }
        std::vector<EdgeSpec> bedges;
        for (int e : comp) {
            const auto& er = g.edge(e);
            bedges.push_back({er.id, g.vertex(er.u).id, g.vertex(er.v).id, er.length});
        }
        BlockKind kind;
        if (comp.size() == 1 && g.edge(comp[0]).is_loop())
            kind = BlockKind::loop;
        else if (comp.size() == 1)
            kind = BlockKind::bridge;
        else
            kind = BlockKind::two_connected;
        out.blocks.push_back(
            {kind, PolarizedWeightedGraph::validate(std::move(bverts), std::move(bedges)),
             std::move(attach), comp});
    }
    for (int v : cuts) out.cut_vertices.push_back(g.vertex(v).id);
    for (size_t b = 0; b < out.blocks.size(); ++b)
        for (const auto& a : out.blocks[b].attachments)
            out.tree_edges.emplace_back(static_cast<int>(b), a);
    return out;
}

/// Metric-graph 2-connectivity: a single loop counts as 2-connected, a
/// single edge segment does not.
inline bool is_two_connected(const PolarizedWeightedGraph& g) {
    auto d = blocks(g);
    return d.blocks.size() == 1 && d.blocks[0].kind != BlockKind::bridge;
}

inline bool is_bridgeless(const PolarizedWeightedGraph& g) {
    for (int e = 0; e < g.edge_count(); ++e)
        if (g.is_bridge(e)) return false;
    return true;
}

// --- Minimal model --------------------------------------------------------

/// Stable model of the underlying polarized metric graph: suppresses every
/// genus-0 valency-2 vertex, merging its two incident edges.
inline PolarizedWeightedGraph minimal_model(const PolarizedWeightedGraph& g) {
    if (g.genus() < 2)
        throw validation_error("GenusTooSmall: minimal model needs genus >= 2");

    std::vector<VertexSpec> vs;
    for (const auto& v : g.vertices()) vs.push_back({v.id, v.genus});
    std::vector<EdgeSpec> es;
    for (const auto& e : g.edges())
        es.push_back({e.id, g.vertex(e.u).id, g.vertex(e.v).id, e.length});

    auto valency_of = [&](const std::string& id) {
        int val = 0;
        for (const auto& e : es) {
            if (e.u == id) ++val;
            if (e.v == id) ++val;
        }
        return val;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < vs.size(); ++i) {
            if (vs[i].genus != 0 || valency_of(vs[i].id) != 2) continue;
            const std::string p = vs[i].id;
            std::vector<size_t> inc;
            for (size_t k = 0; k < es.size(); ++k)
                if (es[k].u == p || es[k].v == p) inc.push_back(k);
            if (inc.size() == 1) continue;  // circle component: genus 1, unreachable here
            size_t a = inc[0], b = inc[1];
            if (es[b].id < es[a].id) std::swap(a, b);
            std::string endA = (es[a].u == p) ? es[a].v : es[a].u;
            std::string endB = (es[b].u == p) ? es[b].v : es[b].u;
            EdgeSpec merged{es[a].id + "+" + es[b].id, endA, endB, es[a].length + es[b].length};
            std::vector<EdgeSpec> next;
            for (size_t k = 0; k < es.size(); ++k)
                if (k != a && k != b) next.push_back(es[k]);
            next.push_back(merged);
            es = std::move(next);
            vs.erase(vs.begin() + static_cast<long>(i));
            changed = true;
            break;
        }
    }
    return PolarizedWeightedGraph::validate(std::move(vs), std::move(es));
}

// --- Edge profile ----------------------------------------------------------

struct EdgeProfile {
    Rational delta;
    Rational delta0;
    std::map<long, Rational> deltaH;  // bridge type h -> total length
};

/// Total length split by edge type: non-bridges (type 0) and bridges of
/// type h, where removing the bridge splits the genus as (h, g-h).
inline EdgeProfile edge_profile(const PolarizedWeightedGraph& g) {
    const long gg = g.genus();
    if (gg < 2)
        throw validation_error("GenusTooSmall: edge profile needs genus >= 2");
    EdgeProfile prof;
    prof.delta = Rational(0);
    prof.delta0 = Rational(0);
    for (int e = 0; e < g.edge_count(); ++e) {
        prof.delta += g.edge(e).length;
        if (!g.is_bridge(e)) {
            prof.delta0 += g.edge(e).length;
            continue;
        }
        auto comp = g.component_of(g.edge(e).u, {e});
        long h = g.component_genus(comp, {e});
        h = std::min(h, gg - h);
        prof.deltaH[h] += g.edge(e).length;
    }
    return prof;
}

// --- Contraction -----------------------------------------------------------

struct Contraction {
    PolarizedWeightedGraph graph;
    std::map<std::string, std::string> vertex_map;  // old id -> new id
};

/// Contracts every edge except `keep_edge_id`. Contracting a non-loop edge
/// merges its endpoints adding genera; a contracted loop adds one to the
/// genus of its vertex. The result is a one-vertex loop graph or a segment.
inline Contraction contract_all_but(const PolarizedWeightedGraph& g, const std::string& keep_edge_id) {
    const int keep = g.edge_index(keep_edge_id);
    std::set<int> removed{keep};

    std::vector<std::vector<int>> classes;
    std::vector<int> class_of(g.vertex_count(), -1);
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (class_of[v] != -1) continue;
        auto comp = g.component_of(v, removed);
        for (int w : comp) class_of[w] = static_cast<int>(classes.size());
        classes.push_back(comp);
    }

    std::vector<VertexSpec> vs;
    std::vector<std::string> class_ids;
    for (const auto& comp : classes) {
        std::vector<std::string> ids;
        long q = 0;
        long inner_edges = 0;
        for (int w : comp) {
            ids.push_back(g.vertex(w).id);
            q += g.vertex(w).genus;
        }
        std::sort(ids.begin(), ids.end());
        std::string nid = ids[0];
        for (size_t k = 1; k < ids.size(); ++k) nid += "+" + ids[k];
        std::set<int> in(comp.begin(), comp.end());
        for (int e = 0; e < g.edge_count(); ++e) {
            if (e == keep) continue;
            if (in.count(g.edge(e).u) && in.count(g.edge(e).v)) ++inner_edges;
        }
        q += inner_edges - static_cast<long>(comp.size()) + 1;  // loops collapsed into genus
        vs.push_back({nid, q});
        class_ids.push_back(nid);
    }
    const auto& ke = g.edge(keep);
    std::vector<EdgeSpec> es{{ke.id, class_ids[class_of[ke.u]], class_ids[class_of[ke.v]], ke.length}};
    Contraction out{PolarizedWeightedGraph::validate(std::move(vs), std::move(es)), {}};
    for (int v = 0; v < g.vertex_count(); ++v)
        out.vertex_map[g.vertex(v).id] = class_ids[class_of[v]];
    return out;
}

// --- Refinement ------------------------------------------------------------

struct RefinedGraph {
    PolarizedWeightedGraph graph;
    // Original edge id -> interior vertex ids in increasing arc-length order.
    std::map<std::string, std::vector<std::string>> interior;
    // Original edge id -> piece edge ids in increasing arc-length order.
    std::map<std::string, std::vector<std::string>> pieces;
};

/// Splits edges at the given fractions of their length (strictly inside
/// (0,1), strictly increasing). Interior vertices carry genus 0 and ids
/// derived from the edge id; the metric graph is unchanged.
inline RefinedGraph refine(const PolarizedWeightedGraph& g,
                           const std::map<std::string, std::vector<Rational>>& cuts) {
    std::vector<VertexSpec> vs;
    for (const auto& v : g.vertices()) vs.push_back({v.id, v.genus});
    std::vector<EdgeSpec> es;
    RefinedGraph out;
    for (const auto& e : g.edges()) {
        auto it = cuts.find(e.id);
        if (it == cuts.end() || it->second.empty()) {
            es.push_back({e.id, g.vertex(e.u).id, g.vertex(e.v).id, e.length});
            out.pieces[e.id] = {e.id};
            out.interior[e.id] = {};
            continue;
        }
        std::string prev = g.vertex(e.u).id;
        Rational prev_pos(0);
        int k = 0;
        for (const auto& f : it->second) {
            if (f <= 0 || f >= 1)
                throw validation_error("refinement fraction outside (0,1)");
            Rational pos = f * e.length;
            std::string vid = e.id + "@" + to_string(f);
            std::string pid = e.id + "#" + std::to_string(k++);
            vs.push_back({vid, 0});
            es.push_back({pid, prev, vid, pos - prev_pos});
            out.interior[e.id].push_back(vid);
            out.pieces[e.id].push_back(pid);
            prev = vid;
            prev_pos = pos;
        }
        std::string pid = e.id + "#" + std::to_string(k);
        es.push_back({pid, prev, g.vertex(e.v).id, e.length - prev_pos});
        out.pieces[e.id].push_back(pid);
    }
    out.graph = PolarizedWeightedGraph::validate(std::move(vs), std::move(es));
    return out;
}

/// Deletes one edge, keeping all vertices. The caller is responsible for
/// the result staying connected.
inline PolarizedWeightedGraph delete_edge(const PolarizedWeightedGraph& g, int edge_idx) {
    std::vector<VertexSpec> vs;
    for (const auto& v : g.vertices()) vs.push_back({v.id, v.genus});
    std::vector<EdgeSpec> es;
    for (int e = 0; e < g.edge_count(); ++e) {
        if (e == edge_idx) continue;
        const auto& er = g.edge(e);
        es.push_back({er.id, g.vertex(er.u).id, g.vertex(er.v).id, er.length});
    }
    return PolarizedWeightedGraph::validate(std::move(vs), std::move(es));
}

/// Rescales all edge lengths by c > 0.
inline PolarizedWeightedGraph scale_lengths(const PolarizedWeightedGraph& g, const Rational& c) {
    if (c <= 0) throw validation_error("scale factor must be positive");
    std::vector<VertexSpec> vs;
    for (const auto& v : g.vertices()) vs.push_back({v.id, v.genus});
    std::vector<EdgeSpec> es;
    for (const auto& e : g.edges())
        es.push_back({e.id, g.vertex(e.u).id, g.vertex(e.v).id, e.length * c});
    return PolarizedWeightedGraph::validate(std::move(vs), std::move(es));
}

} // namespace slopelab
