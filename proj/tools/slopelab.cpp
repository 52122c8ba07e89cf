#include <complex>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "slopelab/corpus.hpp"
#include "slopelab/json_io.hpp"

namespace {

using namespace slopelab;

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw validation_error("cannot open output file: " + out_path);
    out << j.dump(2) << "\n";
}

std::vector<double> parse_schedule(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        double t = std::stod(tok);
        if (t <= 0 || t >= 1) throw validation_error("schedule values must lie in (0,1)");
        out.push_back(t);
    }
    return out;
}

json corpus_to_json(const CorpusSummary& sum) {
    json checks = json::object();
    for (const auto& c : sum.checks) {
        json entry{{"failed", c.failed}, {"passed", c.passed}};
        if (!c.failures.empty()) entry["failures"] = c.failures;
        checks[c.name] = entry;
    }
    return json{{"all_passed", sum.all_passed()},
                {"checks", checks},
                {"count", sum.count},
                {"seed", sum.seed}};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "slopelab: invariants of polarized weighted graphs, height jumps of the "
        "Ceresa cycle, tropical moments, and Riemann-theta degeneration numerics"};
    app.require_subcommand(1);

    std::string input, lengths_path, out_path, family_path, schedule_text, tsv_path;
    unsigned long seed = 1;
    long samples = 100000;
    long count = 200;
    double tol = 1e-10;

    auto add_out = [&](CLI::App* cmd) { cmd->add_option("--out", out_path, "write JSON here instead of stdout"); };

    auto* check = app.add_subcommand("graph-check", "validate a graph and report its basic data");
    check->add_option("input", input, "graph JSON (path or inline)")->required();
    add_out(check);

    auto* invariants = app.add_subcommand("graph-invariants", "full invariant report with both lambda pipelines");
    invariants->add_option("input", input, "graph JSON (path or inline)")->required();
    invariants->add_option("--lengths", lengths_path, "JSON object overriding edge lengths");
    add_out(invariants);

    auto* jump = app.add_subcommand("graph-jump", "height jump of the Ceresa cycle with the contraction cross-check");
    jump->add_option("input", input, "graph JSON (path or inline)")->required();
    jump->add_option("--lengths", lengths_path, "JSON object overriding edge lengths");
    add_out(jump);

    auto* classify = app.add_subcommand("graph-classify", "vanishing classification of the slope");
    classify->add_option("input", input, "graph JSON (path or inline)")->required();
    add_out(classify);

    auto* lattice = app.add_subcommand("lattice-moment", "tropical moment of a positive definite Gram matrix");
    lattice->add_option("input", input, "matrix JSON (path or inline)")->required();
    add_out(lattice);

    auto* theta_i = app.add_subcommand("theta-i", "I-invariant of a principally polarized abelian variety");
    theta_i->add_option("input", input, "period matrix JSON {\"re\":..,\"im\":..}")->required();
    theta_i->add_option("--samples", samples, "Monte Carlo sample count");
    theta_i->add_option("--seed", seed, "Monte Carlo seed");
    theta_i->add_option("--tol", tol, "theta truncation tolerance");
    add_out(theta_i);

    auto* theta_l2 = app.add_subcommand("theta-l2", "Monte Carlo check of the L2 theta normalization 2^{-g/2}");
    theta_l2->add_option("input", input, "period matrix JSON {\"re\":..,\"im\":..}")->required();
    theta_l2->add_option("--samples", samples, "Monte Carlo sample count");
    theta_l2->add_option("--seed", seed, "Monte Carlo seed");
    theta_l2->add_option("--tol", tol, "theta truncation tolerance");
    add_out(theta_l2);

    auto* scan = app.add_subcommand("theta-scan", "degeneration scan of the I-invariant along t -> 0");
    scan->add_option("--family", family_path, "period-family JSON")->required();
    scan->add_option("--samples", samples, "Monte Carlo sample count");
    scan->add_option("--seed", seed, "Monte Carlo seed");
    scan->add_option("--tol", tol, "theta truncation tolerance");
    scan->add_option("--schedule", schedule_text, "comma-separated t values, e.g. 1e-2,1e-3");
    scan->add_option("--tsv", tsv_path, "also write a gnuplot-ready TSV table here");
    add_out(scan);

    auto* corpus = app.add_subcommand("corpus", "run the exact identity suite on a random graph corpus");
    corpus->add_option("--seed", seed, "corpus seed");
    corpus->add_option("--count", count, "number of random graphs");
    add_out(corpus);

    app.footer("Exit codes: 1 input/validation error, 2 numerical failure, 3 internal identity violation.\n"
               "SLOPELAB_THREADS caps corpus and Monte Carlo parallelism.");

    try {
        app.parse(argc, argv);

        if (check->parsed()) {
            auto g = graph_from_json(load_json(input));
            json kdiv = json::object();
            for (const auto& [id, k] : g.canonical_divisor().values) kdiv[id] = k;
            auto dec = blocks(g);
            json blocklist = json::array();
            for (const auto& b : dec.blocks) {
                const char* kind = b.kind == BlockKind::loop ? "loop"
                                   : b.kind == BlockKind::bridge ? "bridge"
                                                                 : "two-connected";
                blocklist.push_back({{"edges", b.edge_indices.size()},
                                     {"genus", b.graph.genus()},
                                     {"kind", kind}});
            }
            json out{{"betti1", g.betti1()},
                     {"blocks", blocklist},
                     {"canonical_divisor", kdiv},
                     {"canonical_measure", measure_to_json(canonical_measure(g))},
                     {"edges", g.edge_count()},
                     {"genus", g.genus()},
                     {"stable", g.is_stable()},
                     {"two_connected", is_two_connected(g)},
                     {"vertices", g.vertex_count()}};
            if (g.genus() >= 1)
                out["admissible_measure"] = measure_to_json(admissible_measure(g));
            emit(out, out_path);
        } else if (invariants->parsed()) {
            auto g = graph_from_json(load_json(input));
            if (!lengths_path.empty()) g = with_lengths(g, lengths_from_json(load_json(lengths_path)));
            emit(report_to_json(report(g)), out_path);
        } else if (jump->parsed()) {
            auto g = graph_from_json(load_json(input));
            if (!lengths_path.empty()) g = with_lengths(g, lengths_from_json(load_json(lengths_path)));
            emit(jump_report_to_json(jump_crosscheck(g)), out_path);
        } else if (classify->parsed()) {
            auto g = graph_from_json(load_json(input));
            emit(json{{"class", to_string(classify_vanishing(g))},
                      {"slope", rational_json(slope(g))}},
                 out_path);
        } else if (lattice->parsed()) {
            GramLattice gram(matrix_from_json(load_json(input)));
            auto cell = voronoi_cell(gram);
            emit(json{{"I", rational_json(gram.Z.cwiseProduct(cell.second_moment).sum())},
                      {"facets", cell.relevant.size()},
                      {"vertices", cell.vertices.size()},
                      {"volume", to_string(cell.volume)}},
                 out_path);
        } else if (theta_i->parsed()) {
            SiegelMatrix s = siegel_from_json(load_json(input));
            MCConfig mc;
            mc.samples = samples;
            mc.seed = seed;
            mc.theta_tol = tol;
            auto r = i_invariant(s, mc);
            emit(json{{"I", r.value}, {"genus", s.genus()}, {"samples", samples}, {"sigma", r.sigma}},
                 out_path);
        } else if (theta_l2->parsed()) {
            SiegelMatrix s = siegel_from_json(load_json(input));
            MCConfig mc;
            mc.samples = samples;
            mc.seed = seed;
            mc.theta_tol = tol;
            auto r = l2_norm_check(s, mc);
            emit(json{{"expected", std::pow(2.0, -s.genus() / 2.0)},
                      {"genus", s.genus()},
                      {"mean", r.value},
                      {"samples", samples},
                      {"sigma", r.sigma}},
                 out_path);
        } else if (scan->parsed()) {
            PeriodFamily fam = family_from_json(load_json(family_path));
            MCConfig mc;
            mc.samples = samples;
            mc.seed = seed;
            mc.theta_tol = tol;
            std::vector<double> schedule;
            if (!schedule_text.empty()) schedule = parse_schedule(schedule_text);
            auto result = degeneration_scan(fam, schedule, mc);
            if (!tsv_path.empty()) {
                std::ofstream tsv(tsv_path);
                if (!tsv) throw validation_error("cannot open TSV output: " + tsv_path);
                tsv << scan_to_tsv(result);
            }
            emit(scan_to_json(result), out_path);
        } else if (corpus->parsed()) {
            CorpusOptions opt;
            opt.seed = seed;
            opt.count = count;
            auto sum = run_corpus(opt);
            emit(corpus_to_json(sum), out_path);
            if (!sum.all_passed()) {
                std::cerr << "corpus identity failure\n";
                return 3;
            }
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const identity_violation& e) {
        std::cerr << "identity violation (bug certificate): " << e.what() << "\n";
        return 3;
    } catch (const numeric_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const validation_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    }
}
