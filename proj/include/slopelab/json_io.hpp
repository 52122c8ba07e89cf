#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "slopelab/degeneration.hpp"
#include "slopelab/invariants.hpp"
#include "slopelab/jump.hpp"

namespace slopelab {

using nlohmann::json;

/// Rational output value: exact "p/q" plus a 17-significant-digit decimal.
inline json rational_json(const Rational& r) {
    return json{{"approx", decimal_string(r)}, {"exact", to_string(r)}};
}

inline Rational rational_from_json(const json& j) {
    if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long>()));
    if (j.is_string()) return parse_rational(j.get<std::string>());
    throw validation_error("expected a decimal integer or \"p/q\" string");
}

// --- Graphs -------------------------------------------------------------------

inline PolarizedWeightedGraph graph_from_json(const json& j) {
    if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
        throw validation_error("graph JSON needs \"vertices\" and \"edges\"");
    std::vector<VertexSpec> vs;
    for (const auto& v : j.at("vertices"))
        vs.push_back({v.at("id").get<std::string>(), v.value("genus", 0l)});
    std::vector<EdgeSpec> es;
    for (const auto& e : j.at("edges"))
        es.push_back({e.at("id").get<std::string>(), e.at("u").get<std::string>(),
                      e.at("v").get<std::string>(), rational_from_json(e.at("length"))});
    return PolarizedWeightedGraph::validate(std::move(vs), std::move(es));
}

inline json graph_to_json(const PolarizedWeightedGraph& g) {
    json verts = json::array();
    for (const auto& v : g.vertices()) verts.push_back({{"genus", v.genus}, {"id", v.id}});
    json edges = json::array();
    for (const auto& e : g.edges())
        edges.push_back({{"id", e.id},
                         {"length", to_string(e.length)},
                         {"u", g.vertex(e.u).id},
                         {"v", g.vertex(e.v).id}});
    return json{{"edges", edges}, {"vertices", verts}};
}

inline std::map<std::string, Rational> lengths_from_json(const json& j) {
    if (!j.is_object())
        throw validation_error("lengths JSON must map edge ids to lengths");
    std::map<std::string, Rational> out;
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = rational_from_json(*it);
    return out;
}

// --- Matrices -----------------------------------------------------------------

/// Accepts {"dim": b, "entries": [[...], ...]} or a bare row array.
inline RatMatrix matrix_from_json(const json& j) {
    const json& entries = j.is_object() ? j.at("entries") : j;
    if (!entries.is_array() || entries.empty())
        throw validation_error("matrix JSON must be a non-empty array of rows");
    const int n = static_cast<int>(entries.size());
    if (j.is_object() && j.contains("dim") && j.at("dim").get<int>() != n)
        throw validation_error("matrix dim field disagrees with entry count");
    RatMatrix m(n, n);
    for (int i = 0; i < n; ++i) {
        const auto& row = entries.at(i);
        if (static_cast<int>(row.size()) != n)
            throw validation_error("matrix JSON must be square");
        for (int k = 0; k < n; ++k) m(i, k) = rational_from_json(row.at(k));
    }
    return m;
}

inline json matrix_to_json(const RatMatrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(to_string(m(i, k)));
        rows.push_back(row);
    }
    return json{{"dim", m.rows()}, {"entries", rows}};
}

inline Eigen::MatrixXd dmatrix_from_json(const json& j) {
    if (!j.is_array() || j.empty())
        throw validation_error("expected an array-of-rows matrix");
    const int n = static_cast<int>(j.size());
    const int c = static_cast<int>(j.at(0).size());
    Eigen::MatrixXd m(n, c);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < c; ++k) m(i, k) = j.at(i).at(k).get<double>();
    return m;
}

/// Period matrix JSON: {"re": [[...]], "im": [[...]]}.
inline SiegelMatrix siegel_from_json(const json& j) {
    Eigen::MatrixXd re = dmatrix_from_json(j.at("re"));
    Eigen::MatrixXd im = dmatrix_from_json(j.at("im"));
    if (re.rows() != im.rows() || re.cols() != im.cols())
        throw validation_error("re/im blocks must have equal shape");
    Eigen::MatrixXcd omega = re.cast<std::complex<double>>();
    omega += std::complex<double>(0, 1) * im.cast<std::complex<double>>();
    return SiegelMatrix(omega);
}

/// Period-family JSON:
/// {"g":2,"r":1,"A0":[[1]],"B":[{"k":0,"re":[[...]],"im":[[...]]}],"radius":0.5}
inline PeriodFamily family_from_json(const json& j) {
    const int g = j.at("g").get<int>();
    const int r = j.at("r").get<int>();
    RatMatrix a0(r, r);
    if (r > 0) a0 = matrix_from_json(j.at("A0"));
    int max_k = -1;
    for (const auto& term : j.at("B")) max_k = std::max(max_k, term.at("k").get<int>());
    std::vector<Eigen::MatrixXcd> coeffs(static_cast<size_t>(max_k + 1),
                                         Eigen::MatrixXcd::Zero(g, g));
    for (const auto& term : j.at("B")) {
        Eigen::MatrixXd re = dmatrix_from_json(term.at("re"));
        Eigen::MatrixXd im = dmatrix_from_json(term.at("im"));
        coeffs[term.at("k").get<int>()] =
            re.cast<std::complex<double>>() +
            std::complex<double>(0, 1) * im.cast<std::complex<double>>();
    }
    return PeriodFamily(g, r, std::move(a0), std::move(coeffs), j.value("radius", 0.5));
}

// --- Reports ------------------------------------------------------------------

inline json measure_to_json(const GraphMeasure& mu) {
    json masses = json::object();
    for (const auto& [id, m] : mu.vertex_mass) masses[id] = rational_json(m);
    json densities = json::object();
    for (const auto& [id, d] : mu.edge_density) densities[id] = rational_json(d);
    return json{{"edge_densities", densities}, {"vertex_masses", masses}};
}

inline json report_to_json(const InvariantReport& r) {
    json dh = json::object();
    for (const auto& [h, len] : r.deltaH) dh[std::to_string(h)] = rational_json(len);
    return json{{"class", to_string(r.vanishing)},
                {"delta", rational_json(r.delta)},
                {"delta0", rational_json(r.delta0)},
                {"deltaH", dh},
                {"epsilon", rational_json(r.epsilon)},
                {"genus", r.genus},
                {"identities",
                 json{{"lambda_pipelines_equal", r.pipelines_equal},
                      {"moment_tau_delta", r.identity_moment_tau},
                      {"phi_epsilon_moment", r.identity_phi_epsilon},
                      {"epsilon_tau_delta", r.identity_epsilon_tau}}},
                {"jacobian_moment", rational_json(r.jacobian_moment)},
                {"lambda", json{{"pipelineA", rational_json(r.lambda_pipelineA)},
                                {"pipelineB", rational_json(r.lambda_pipelineB)}}},
                {"phi", rational_json(r.phi)},
                {"slope", rational_json(r.slope)},
                {"tau", rational_json(r.tau)}};
}

inline json jump_report_to_json(const JumpReport& r) {
    json per_edge = json::object();
    for (const auto& [id, l] : r.edge_lambda) per_edge[id] = rational_json(l);
    return json{{"class", to_string(r.vanishing)},
                {"edge_lambda", per_edge},
                {"jump", rational_json(r.jump)},
                {"residual", rational_json(r.residual)}};
}

inline json scan_to_json(const ScanResult& s) {
    json rows = json::array();
    for (const auto& r : s.rows)
        rows.push_back({{"h", r.h},
                        {"log_det_term", r.log_det_term},
                        {"sigma", r.sigma},
                        {"t", r.t},
                        {"toric_term", r.toric_term},
                        {"two_i", r.two_i}});
    return json{{"limit", s.limit},
                {"limit_error", s.limit_error},
                {"rows", rows},
                {"tropical_moment", s.tropical_moment}};
}

inline std::string scan_to_tsv(const ScanResult& s) {
    std::string out = "t\ttwo_i\tsigma\ttoric_term\tlog_det_term\th\n";
    for (const auto& r : s.rows) {
        out += decimal_string(r.t) + "\t" + decimal_string(r.two_i) + "\t" +
               decimal_string(r.sigma) + "\t" + decimal_string(r.toric_term) + "\t" +
               decimal_string(r.log_det_term) + "\t" + decimal_string(r.h) + "\n";
    }
    return out;
}

// --- Files ---------------------------------------------------------------------

inline json load_json(const std::string& path_or_inline) {
    if (!path_or_inline.empty() && (path_or_inline[0] == '{' || path_or_inline[0] == '['))
        return json::parse(path_or_inline);
    std::ifstream in(path_or_inline);
    if (!in)
        throw validation_error("cannot open input: " + path_or_inline);
    json j;
    in >> j;
    return j;
}

} // namespace slopelab
