#pragma once

#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "slopelab/graph.hpp"
#include "slopelab/linalg.hpp"

namespace slopelab {

/// Symmetric positive definite rational matrix, viewed as the Gram matrix
/// of Z^b.
struct GramLattice {
    RatMatrix Z;

    explicit GramLattice(RatMatrix z) : Z(std::move(z)) {
        if (Z.rows() != Z.cols() || Z.rows() == 0)
            throw validation_error("Gram matrix must be square and non-empty");
        for (Eigen::Index i = 0; i < Z.rows(); ++i)
            for (Eigen::Index j = 0; j < i; ++j)
                if (Z(i, j) != Z(j, i))
                    throw validation_error("Gram matrix must be symmetric");
        if (!is_positive_definite(Z))
            throw validation_error("Gram matrix must be positive definite");
    }

    int dim() const { return static_cast<int>(Z.rows()); }
};

/// Exact H- and V-representation of a Voronoi cell, with a simplicial
/// decomposition by coning over triangulated facets from the origin.
struct VoronoiPolytope {
    int dim = 0;
    std::vector<std::vector<long>> relevant;  // facet normals n (integer vectors)
    std::vector<RatVector> halfspace_normal;  // a = Z n
    std::vector<Rational> halfspace_rhs;      // (1/2) n^T Z n
    std::vector<RatVector> vertices;
    // Each entry lists dim vertex indices; the simplex is their convex hull
    // together with the origin.
    std::vector<std::vector<int>> simplices;
    Rational volume;
    RatMatrix second_moment;  // integral of beta beta^T over the cell

    bool contains(const RatVector& x) const {
        for (size_t k = 0; k < halfspace_normal.size(); ++k)
            if (halfspace_normal[k].dot(x) > halfspace_rhs[k]) return false;
        return true;
    }
};

namespace detail {

inline Rational quad_form(const RatMatrix& Z, const std::vector<long>& n) {
    const int b = static_cast<int>(Z.rows());
    Rational s(0);
    for (int i = 0; i < b; ++i) {
        if (n[i] == 0) continue;
        for (int j = 0; j < b; ++j) s += Rational(n[i]) * Z(i, j) * Rational(n[j]);
    }
    return s;
}

/// Strict minimizers of n^T Z n over each nonzero parity class of Z^b,
/// enumerated inside the box |n_i| <= radius. Candidates come in +/- pairs;
/// classes whose in-box minimum is attained by two distinct pairs are
/// dropped (their bisectors support no facet). A double-precision sweep
/// shortlists the near-minimal representatives; strictness is decided by
/// exact comparison on the shortlist only.
inline std::vector<std::vector<long>> coset_minimizers(const RatMatrix& Z, long radius) {
    const int b = static_cast<int>(Z.rows());
    Eigen::MatrixXd Zd(b, b);
    for (int i = 0; i < b; ++i)
        for (int j = 0; j < b; ++j) Zd(i, j) = to_double(Z(i, j));

    std::vector<std::vector<long>> out;
    std::vector<long> parity(b, 0);
    for (long mask = 1; mask < (1L << b); ++mask) {
        for (int i = 0; i < b; ++i) parity[i] = (mask >> i) & 1;
        std::vector<std::vector<long>> coords(b);
        for (int i = 0; i < b; ++i)
            for (long v = -radius; v <= radius; ++v)
                if (((v % 2) + 2) % 2 == parity[i]) coords[i].push_back(v);

        std::vector<std::vector<long>> shortlist;
        double best_d = 0;
        std::vector<long> n(b, 0);
        std::vector<size_t> idx(b, 0);
        Eigen::VectorXd nd(b);
        while (true) {
            for (int i = 0; i < b; ++i) {
                n[i] = coords[i][idx[i]];
                nd(i) = static_cast<double>(n[i]);
            }
            double val = nd.dot(Zd * nd);
            if (shortlist.empty() || val < best_d * (1 - 1e-9)) {
                best_d = val;
                shortlist.clear();
                shortlist.push_back(n);
            } else if (val <= best_d * (1 + 1e-9)) {
                shortlist.push_back(n);
                if (val < best_d) best_d = val;
            }
            int pos = 0;
            while (pos < b && ++idx[pos] == coords[pos].size()) idx[pos++] = 0;
            if (pos == b) break;
        }

        // Exact minimum over the shortlist.
        std::vector<std::vector<long>> best;
        Rational best_val(0);
        for (const auto& cand : shortlist) {
            Rational val = quad_form(Z, cand);
            if (best.empty() || val < best_val) {
                best.clear();
                best.push_back(cand);
                best_val = val;
            } else if (val == best_val) {
                best.push_back(cand);
            }
        }
        // best always contains n and -n together; a strict pair has size 2.
        if (best.size() == 2) {
            out.push_back(best[0]);
            out.push_back(best[1]);
        }
    }
    return out;
}

struct HalfspaceSystem {
    std::vector<RatVector> normal;
    std::vector<Rational> rhs;
};

/// Exhaustive exact vertex enumeration: depth-first over independent
/// constraint subsets with an incrementally eliminated system, so dependent
/// branches are pruned early. Used as the fallback when the float-guided
/// pass fails the exact volume certificate.
inline std::vector<RatVector> enumerate_vertices_exact(const HalfspaceSystem& hs, int b) {
    const int f = static_cast<int>(hs.normal.size());
    std::set<std::vector<Rational>> found;

    struct Row {
        RatVector a;
        Rational c;
        int pivot;
    };
    std::vector<Row> rows;

    auto feasible = [&](const RatVector& x) {
        for (int k = 0; k < f; ++k)
            if (hs.normal[k].dot(x) > hs.rhs[k]) return false;
        return true;
    };

    auto solve_current = [&]() {
        // Back-substitution on the echelon rows.
        RatVector x = RatVector::Zero(b);
        for (int i = static_cast<int>(rows.size()) - 1; i >= 0; --i) {
            Rational s = rows[i].c;
            for (int j = 0; j < b; ++j)
                if (j != rows[i].pivot) s -= rows[i].a(j) * x(j);
            x(rows[i].pivot) = s / rows[i].a(rows[i].pivot);
        }
        return x;
    };

    auto dfs = [&](auto&& self, int start) -> void {
        if (static_cast<int>(rows.size()) == b) {
            RatVector x = solve_current();
            if (feasible(x)) {
                std::vector<Rational> key(x.data(), x.data() + b);
                found.insert(key);
            }
            return;
        }
        for (int k = start; k < f; ++k) {
            RatVector a = hs.normal[k];
            Rational c = hs.rhs[k];
            for (const auto& r : rows) {
                if (a(r.pivot) == 0) continue;
                Rational factor = a(r.pivot) / r.a(r.pivot);
                a -= factor * r.a;
                c -= factor * r.c;
            }
            int pivot = -1;
            for (int j = 0; j < b; ++j)
                if (a(j) != 0) {
                    pivot = j;
                    break;
                }
            if (pivot < 0) continue;  // dependent on chosen rows
            rows.push_back({std::move(a), std::move(c), pivot});
            self(self, k + 1);
            rows.pop_back();
        }
    };
    dfs(dfs, 0);

    std::vector<RatVector> out;
    for (const auto& key : found) {
        RatVector x(b);
        for (int j = 0; j < b; ++j) x(j) = key[j];
        out.push_back(std::move(x));
    }
    return out;
}

/// Float-guided vertex enumeration: a fast double-precision subset search
/// proposes candidate vertices with their tight constraint sets, which are
/// then re-solved and feasibility-checked exactly. Completeness is certified
/// downstream by the exact volume check, with enumerate_vertices_exact as
/// the fallback.
inline std::vector<RatVector> enumerate_vertices_guided(const HalfspaceSystem& hs, int b) {
    const int f = static_cast<int>(hs.normal.size());
    Eigen::MatrixXd A(f, b);
    Eigen::VectorXd c(f);
    for (int k = 0; k < f; ++k) {
        double scale = 0;
        for (int j = 0; j < b; ++j) scale = std::max(scale, std::abs(to_double(hs.normal[k](j))));
        if (scale == 0) scale = 1;
        for (int j = 0; j < b; ++j) A(k, j) = to_double(hs.normal[k](j)) / scale;
        c(k) = to_double(hs.rhs[k]) / scale;
    }

    struct Row {
        Eigen::VectorXd a;
        double c;
        int pivot;
    };
    std::vector<Row> rows;
    std::map<std::vector<long>, std::vector<int>> candidates;  // quantized point -> tight set

    auto dfs = [&](auto&& self, int start) -> void {
        if (static_cast<int>(rows.size()) == b) {
            Eigen::VectorXd x = Eigen::VectorXd::Zero(b);
            for (int i = b - 1; i >= 0; --i) {
                double s = rows[i].c;
                for (int j = 0; j < b; ++j)
                    if (j != rows[i].pivot) s -= rows[i].a(j) * x(j);
                x(rows[i].pivot) = s / rows[i].a(rows[i].pivot);
            }
            std::vector<int> tight;
            for (int k = 0; k < f; ++k) {
                double slack = c(k) - A.row(k).dot(x);
                if (slack < -1e-7) return;  // infeasible
                if (slack < 1e-7) tight.push_back(k);
            }
            std::vector<long> key(b);
            for (int j = 0; j < b; ++j) key[j] = std::lround(x(j) * 1048576.0);
            candidates.emplace(std::move(key), std::move(tight));
            return;
        }
        for (int k = start; k < f; ++k) {
            Eigen::VectorXd a = A.row(k);
            double rhs = c(k);
            for (const auto& r : rows) {
                double factor = a(r.pivot) / r.a(r.pivot);
                if (factor == 0) continue;
                a -= factor * r.a;
                rhs -= factor * r.c;
            }
            int pivot = -1;
            double best = 1e-9;
            for (int j = 0; j < b; ++j)
                if (std::abs(a(j)) > best) {
                    best = std::abs(a(j));
                    pivot = j;
                }
            if (pivot < 0) continue;
            rows.push_back({std::move(a), rhs, pivot});
            self(self, k + 1);
            rows.pop_back();
        }
    };
    dfs(dfs, 0);

    std::set<std::vector<Rational>> found;
    for (const auto& [key, tight] : candidates) {
        // Exact echelon over the proposed tight rows.
        std::vector<std::pair<RatVector, Rational>> sys;
        std::vector<int> pivots;
        for (int k : tight) {
            if (static_cast<int>(sys.size()) == b) break;
            RatVector a = hs.normal[k];
            Rational rhs = hs.rhs[k];
            for (size_t i = 0; i < sys.size(); ++i) {
                if (a(pivots[i]) == 0) continue;
                Rational factor = a(pivots[i]) / sys[i].first(pivots[i]);
                a -= factor * sys[i].first;
                rhs -= factor * sys[i].second;
            }
            int pivot = -1;
            for (int j = 0; j < b; ++j)
                if (a(j) != 0) {
                    pivot = j;
                    break;
                }
            if (pivot < 0) continue;
            sys.emplace_back(std::move(a), std::move(rhs));
            pivots.push_back(pivot);
        }
        if (static_cast<int>(sys.size()) != b) continue;
        RatVector x = RatVector::Zero(b);
        for (int i = b - 1; i >= 0; --i) {
            Rational s = sys[i].second;
            for (int j = 0; j < b; ++j)
                if (j != pivots[i]) s -= sys[i].first(j) * x(j);
            x(pivots[i]) = s / sys[i].first(pivots[i]);
        }
        bool ok = true;
        for (int k = 0; k < f && ok; ++k)
            if (hs.normal[k].dot(x) > hs.rhs[k]) ok = false;
        if (!ok) continue;
        found.insert(std::vector<Rational>(x.data(), x.data() + b));
    }

    std::vector<RatVector> out;
    for (const auto& key : found) {
        RatVector x(b);
        for (int j = 0; j < b; ++j) x(j) = key[j];
        out.push_back(std::move(x));
    }
    return out;
}

/// Drops candidate bisectors whose midpoint n/2 falls outside the candidate
/// intersection; facets always survive.
inline void drop_nonsupporting(std::vector<std::vector<long>>& cands, HalfspaceSystem& hs,
                               int b) {
    std::vector<size_t> keep;
    for (size_t k = 0; k < hs.normal.size(); ++k) {
        RatVector mid(b);
        for (int j = 0; j < b; ++j) mid(j) = Rational(cands[k][j], 2);
        bool inside = true;
        for (size_t i = 0; i < hs.normal.size() && inside; ++i)
            if (hs.normal[i].dot(mid) > hs.rhs[i]) inside = false;
        if (inside) keep.push_back(k);
    }
    if (keep.size() == hs.normal.size()) return;
    std::vector<std::vector<long>> c2;
    HalfspaceSystem h2;
    for (size_t k : keep) {
        c2.push_back(cands[k]);
        h2.normal.push_back(hs.normal[k]);
        h2.rhs.push_back(hs.rhs[k]);
    }
    cands = std::move(c2);
    hs = std::move(h2);
}

inline int affine_dim(const std::vector<RatVector>& pts) {
    if (pts.empty()) return -1;
    const int b = static_cast<int>(pts[0].size());
    RatMatrix D(static_cast<int>(pts.size()) - 1, b);
    for (size_t i = 1; i < pts.size(); ++i) D.row(static_cast<int>(i) - 1) = (pts[i] - pts[0]).transpose();
    if (D.rows() == 0) return 0;
    return static_cast<int>(exact_rank(D));
}

/// Pulling triangulation of a d-dimensional face given by the vertices lying
/// on it: cones the lexicographically smallest vertex over the triangulated
/// ridges that do not contain it.
inline void triangulate_face(const std::vector<int>& face, int d,
                             const std::vector<RatVector>& verts, const HalfspaceSystem& hs,
                             std::vector<std::vector<int>>& out) {
    if (d == 0) {
        out.push_back(face);
        return;
    }
    if (static_cast<int>(face.size()) == d + 1) {
        out.push_back(face);
        return;
    }
    auto lex_less = [&](int i, int j) {
        for (int k = 0; k < verts[i].size(); ++k) {
            if (verts[i](k) != verts[j](k)) return verts[i](k) < verts[j](k);
        }
        return i < j;
    };
    int apex = face[0];
    for (int v : face)
        if (lex_less(v, apex)) apex = v;

    std::set<std::vector<int>> seen;
    for (size_t k = 0; k < hs.normal.size(); ++k) {
        std::vector<int> sub;
        bool apex_on = false;
        for (int v : face) {
            if (hs.normal[k].dot(verts[v]) == hs.rhs[k]) {
                sub.push_back(v);
                if (v == apex) apex_on = true;
            }
        }
        if (apex_on || sub.empty()) continue;
        std::vector<RatVector> pts;
        for (int v : sub) pts.push_back(verts[v]);
        if (affine_dim(pts) != d - 1) continue;
        if (!seen.insert(sub).second) continue;
        std::vector<std::vector<int>> subsimps;
        triangulate_face(sub, d - 1, verts, hs, subsimps);
        for (auto& s : subsimps) {
            s.push_back(apex);
            out.push_back(std::move(s));
        }
    }
}

/// Assembles the cell from an enumerated vertex set: filters candidate
/// bisectors down to genuine facets, triangulates them, and accumulates the
/// exact volume and second moment by coning from the origin.
inline VoronoiPolytope build_cell(const std::vector<std::vector<long>>& cands,
                                  const HalfspaceSystem& hs,
                                  const std::vector<RatVector>& verts, int b) {
    VoronoiPolytope cell;
    cell.dim = b;
    cell.vertices = verts;
    cell.volume = Rational(0);
    cell.second_moment = RatMatrix::Zero(b, b);
    std::vector<std::vector<int>> facet_verts;
    for (size_t k = 0; k < hs.normal.size(); ++k) {
        std::vector<int> on;
        std::vector<RatVector> pts;
        for (size_t v = 0; v < verts.size(); ++v) {
            if (hs.normal[k].dot(verts[v]) == hs.rhs[k]) {
                on.push_back(static_cast<int>(v));
                pts.push_back(verts[v]);
            }
        }
        if (affine_dim(pts) != b - 1) continue;
        cell.relevant.push_back(cands[k]);
        cell.halfspace_normal.push_back(hs.normal[k]);
        cell.halfspace_rhs.push_back(hs.rhs[k]);
        facet_verts.push_back(std::move(on));
    }

    HalfspaceSystem facets_only{cell.halfspace_normal, cell.halfspace_rhs};
    Rational bfact(1);
    for (int i = 2; i <= b; ++i) bfact *= i;
    std::vector<RatMatrix> vertex_outer;
    vertex_outer.reserve(verts.size());
    for (const auto& v : verts) vertex_outer.push_back(v * v.transpose());
    for (const auto& fv : facet_verts) {
        std::vector<std::vector<int>> tris;
        triangulate_face(fv, b - 1, cell.vertices, facets_only, tris);
        for (const auto& t : tris) {
            cell.simplices.push_back(t);
            RatMatrix W(b, b);
            for (int c = 0; c < b; ++c) W.col(c) = cell.vertices[t[c]];
            Rational vol = exact_det(std::move(W)) / bfact;
            if (vol < 0) vol = -vol;
            cell.volume += vol;
            RatVector sum = RatVector::Zero(b);
            RatMatrix outer = RatMatrix::Zero(b, b);
            for (int c = 0; c < b; ++c) {
                sum += cell.vertices[t[c]];
                outer += vertex_outer[t[c]];
            }
            outer += sum * sum.transpose();
            cell.second_moment += (vol / Rational((b + 1) * (b + 2))) * outer;
        }
    }
    return cell;
}

} // namespace detail

/// Facet normals of Vor(Z): the lattice vectors whose bisector half-spaces
/// support facets. Enumerated as strict parity-coset minimizers inside an
/// adaptively grown box; the exact volume-one certificate rejects any
/// incomplete cell, falling back from the float-guided vertex search to the
/// exhaustive exact one before widening the box.
inline VoronoiPolytope voronoi_cell(const GramLattice& lattice) {
    const int b = lattice.dim();
    if (b > 6)
        throw validation_error("DimensionTooLarge: Voronoi cells computed for b <= 6 only");
    const RatMatrix& Z = lattice.Z;

    for (int pass = 0; pass < 2; ++pass) {
        for (long radius = 3; radius <= 9; radius += 2) {
            auto cands = detail::coset_minimizers(Z, radius);
            detail::HalfspaceSystem hs;
            for (const auto& n : cands) {
                RatVector a = RatVector::Zero(b);
                for (int i = 0; i < b; ++i)
                    for (int j = 0; j < b; ++j) a(i) += Z(i, j) * Rational(n[j]);
                hs.normal.push_back(std::move(a));
                hs.rhs.push_back(detail::quad_form(Z, n) / 2);
            }
            detail::drop_nonsupporting(cands, hs, b);
            auto verts = pass == 0 ? detail::enumerate_vertices_guided(hs, b)
                                   : detail::enumerate_vertices_exact(hs, b);
            if (verts.empty()) continue;
            VoronoiPolytope cell = detail::build_cell(cands, hs, verts, b);
            if (cell.volume == 1) return cell;
        }
    }
    throw numeric_error("VolumeMismatch: Voronoi cell volume != 1 at maximal search radius");
}

inline std::vector<std::vector<long>> relevant_vectors(const GramLattice& lattice) {
    return voronoi_cell(lattice).relevant;
}

/// Tropical moment I(Z) of a positive definite matrix: the exact integral of
/// beta^T Z beta over Vor(Z).
inline Rational moment(const GramLattice& lattice) {
    VoronoiPolytope cell = voronoi_cell(lattice);
    return lattice.Z.cwiseProduct(cell.second_moment).sum();
}

// --- Integration domains for I_V -------------------------------------------

/// Product of centrally symmetric unit-volume factors in consecutive
/// coordinate blocks: centered unit boxes and exact Voronoi cells. The
/// cross second moments vanish by symmetry, so the second-moment matrix is
/// block diagonal.
struct MomentDomain {
    struct Factor {
        int dim;
        bool is_box;            // centered unit box when true
        VoronoiPolytope cell;   // used when !is_box
    };
    std::vector<Factor> factors;

    static MomentDomain unit_box(int dim) {
        MomentDomain d;
        if (dim > 0) d.factors.push_back({dim, true, {}});
        return d;
    }
    static MomentDomain cell(VoronoiPolytope c) {
        MomentDomain d;
        d.factors.push_back({c.dim, false, std::move(c)});
        return d;
    }
    MomentDomain& append(const MomentDomain& other) {
        for (const auto& f : other.factors) factors.push_back(f);
        return *this;
    }

    int dim() const {
        int d = 0;
        for (const auto& f : factors) d += f.dim;
        return d;
    }

    RatMatrix second_moment() const {
        const int d = dim();
        RatMatrix s = RatMatrix::Zero(d, d);
        int off = 0;
        for (const auto& f : factors) {
            if (f.is_box) {
                for (int i = 0; i < f.dim; ++i) s(off + i, off + i) = Rational(1, 12);
            } else {
                s.block(off, off, f.dim, f.dim) = f.cell.second_moment;
            }
            off += f.dim;
        }
        return s;
    }
};

/// I_V(Z) for a symmetric (not necessarily definite) rational matrix over a
/// unit-volume product domain; linear in Z.
inline Rational moment_over(const MomentDomain& domain, const RatMatrix& Z) {
    if (Z.rows() != Z.cols() || Z.rows() != domain.dim())
        throw validation_error("matrix/domain dimension mismatch in moment_over");
    if (Z.rows() == 0) return Rational(0);
    return Z.cwiseProduct(domain.second_moment()).sum();
}

/// Float overload for Schur-complement integrands.
inline double moment_over(const MomentDomain& domain, const Eigen::MatrixXd& Z) {
    if (Z.rows() != Z.cols() || Z.rows() != domain.dim())
        throw validation_error("matrix/domain dimension mismatch in moment_over");
    if (Z.rows() == 0) return 0.0;
    RatMatrix s = domain.second_moment();
    double acc = 0;
    for (Eigen::Index i = 0; i < Z.rows(); ++i)
        for (Eigen::Index j = 0; j < Z.cols(); ++j) acc += Z(i, j) * to_double(s(i, j));
    return acc;
}

// --- Graph Jacobians --------------------------------------------------------

/// Gram matrix of the cycle pairing on H_1 of the metric graph, in the
/// fundamental-cycle basis of a deterministic spanning tree (BFS from the
/// lexicographically smallest vertex id, edges scanned in id order).
inline GramLattice cycle_gram(const PolarizedWeightedGraph& g) {
    const int b = g.betti1();
    if (b < 1)
        throw validation_error("TreeGraph: trivial Jacobian has no Gram matrix");

    int root = 0;
    for (int v = 1; v < g.vertex_count(); ++v)
        if (g.vertex(v).id < g.vertex(root).id) root = v;

    std::vector<int> parent_edge(g.vertex_count(), -1);
    std::vector<int> parent(g.vertex_count(), -1);
    std::vector<char> seen(g.vertex_count(), 0);
    std::vector<char> in_tree(g.edge_count(), 0);
    std::vector<int> order{root};
    seen[root] = 1;
    for (size_t head = 0; head < order.size(); ++head) {
        int v = order[head];
        auto inc = g.incident(v);
        std::sort(inc.begin(), inc.end(), [&](const auto& a, const auto& b2) {
            return g.edge(a.first).id < g.edge(b2.first).id;
        });
        for (auto [e, w] : inc) {
            if (g.edge(e).is_loop() || seen[w]) continue;
            seen[w] = 1;
            parent[w] = v;
            parent_edge[w] = e;
            in_tree[e] = 1;
            order.push_back(w);
        }
    }

    std::vector<int> depth(g.vertex_count(), 0);
    for (size_t i = 1; i < order.size(); ++i) depth[order[i]] = depth[parent[order[i]]] + 1;

    std::vector<int> cotree;
    for (int e = 0; e < g.edge_count(); ++e)
        if (!in_tree[e]) cotree.push_back(e);
    std::sort(cotree.begin(), cotree.end(),
              [&](int a, int b2) { return g.edge(a).id < g.edge(b2).id; });

    // Signed cycle vectors over the edge set.
    std::vector<std::vector<long>> cyc(b, std::vector<long>(g.edge_count(), 0));
    for (int i = 0; i < b; ++i) {
        int e = cotree[i];
        cyc[i][e] = 1;  // traverse e from u to v
        if (g.edge(e).is_loop()) continue;
        int x = g.edge(e).v, y = g.edge(e).u;  // tree path v -> u
        while (x != y) {
            if (depth[x] >= depth[y]) {
                int t = parent_edge[x];
                cyc[i][t] += (g.edge(t).v == x) ? -1 : 1;  // traversed child -> parent
                x = parent[x];
            } else {
                int t = parent_edge[y];
                cyc[i][t] += (g.edge(t).v == y) ? 1 : -1;
                y = parent[y];
            }
        }
    }

    RatMatrix Z(b, b);
    for (int i = 0; i < b; ++i)
        for (int j = 0; j < b; ++j) {
            Rational s(0);
            for (int e = 0; e < g.edge_count(); ++e)
                if (cyc[i][e] != 0 && cyc[j][e] != 0)
                    s += g.edge(e).length * Rational(cyc[i][e]) * Rational(cyc[j][e]);
            Z(i, j) = s;
        }
    return GramLattice(std::move(Z));
}

/// Tropical moment of the Jacobian of the metric graph; zero on trees.
inline Rational jac_moment(const PolarizedWeightedGraph& g) {
    if (g.betti1() < 1) return Rational(0);
    return moment(cycle_gram(g));
}

} // namespace slopelab
