#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tridecomp/boosting.hpp"
#include "tridecomp/coverdown.hpp"
#include "tridecomp/fixtures.hpp"
#include "tridecomp/fractional.hpp"
#include "tridecomp/pipeline.hpp"

using namespace tridecomp;
using nlohmann::json;

namespace {

// Exit codes: 0 success/true, 1 definitive negative, 2 inconclusive/failure,
// 3 usage or input error.
constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kFailure = 2;
constexpr int kUsage = 3;

EdgeListFile load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open");
    try {
        return read_edge_list(in);
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

void write_artifact(const std::string& path, const std::function<void(std::ostream&)>& fn) {
    if (path.empty() || path == "-") {
        fn(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    fn(out);
}

struct Reporter {
    bool as_json = false;
    json j{{"schema", 1}};

    void set(const std::string& key, json value) { j[key] = std::move(value); }

    void flush() {
        if (as_json) {
            std::cout << j.dump(2) << "\n";
        } else {
            for (const auto& [k, v] : j.items()) {
                if (k == "schema") continue;
                std::cout << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump())
                          << "\n";
            }
        }
    }
};

std::uint64_t resolve_seed(const std::string& s) {
    if (s == "random") return std::random_device{}();
    return std::stoull(s);
}

std::string rat_str(const Rational& r) { return to_string(r); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"triangle decomposition toolkit"};
    app.require_subcommand(1);

    // Reproducible by default; entropy is strictly opt-in.
    std::string seed_str = "1";
    bool as_json = false;
    app.add_option("--seed", seed_str, "RNG seed (integer or 'random')")->capture_default_str();
    app.add_flag("--json", as_json, "emit a JSON report");

    std::string graph_path, second_path, out_path;
    std::string eps_s = "1/2", rho_s = "1/3", gamma_s = "1/2", delta_s = "2/3", p_s = "3/4";
    long m_prime = 14, u_size = 0, k_param = 1;
    std::uint64_t budget = kDefaultOracleBudget;
    int max_retries = 100;
    std::string mode_s = "hybrid";

    auto* c_div = app.add_subcommand("divisible", "test K3-divisibility");
    c_div->add_option("graph", graph_path)->required();

    auto* c_oracle = app.add_subcommand("oracle", "exact decomposition search");
    c_oracle->add_option("graph", graph_path)->required();
    c_oracle->add_option("-o,--output", out_path, "decomposition file ('-' = stdout)");
    c_oracle->add_option("--budget", budget, "node budget");

    auto* c_verify = app.add_subcommand("verify", "check a decomposition file");
    c_verify->add_option("graph", graph_path)->required();
    c_verify->add_option("decomposition", second_path)->required();

    auto* c_frac = app.add_subcommand("fractional-verify", "check a fractional weighting");
    c_frac->add_option("graph", graph_path)->required();
    c_frac->add_option("weighting", second_path)->required();

    auto* c_ext = app.add_subcommand("extremal", "minimum-degree extremal fixture");
    c_ext->add_option("k", k_param, "family index")->required();
    c_ext->add_option("-o,--output", out_path, "edge list file ('-' = stdout)");

    auto* c_gadget = app.add_subcommand("gadget", "build and validate gadgets");
    c_gadget->require_subcommand(1);
    std::string phi_path;
    auto* g_trans = c_gadget->add_subcommand("transformer", "L -> L' transformer");
    g_trans->add_option("source", graph_path)->required();
    g_trans->add_option("target", second_path)->required();
    g_trans->add_option("phi", phi_path, "vertex map file: lines 'x y'")->required();
    auto* g_abs = c_gadget->add_subcommand("absorber", "exclusive absorber for a leftover");
    g_abs->add_option("leftover", graph_path)->required();

    auto* c_vortex = app.add_subcommand("vortex", "sample a nested vortex");
    c_vortex->add_option("graph", graph_path)->required();
    c_vortex->add_option("--delta", delta_s, "degree fraction")->capture_default_str();
    c_vortex->add_option("--epsilon", eps_s)->capture_default_str();
    c_vortex->add_option("--m-prime", m_prime)->capture_default_str();
    c_vortex->add_option("--max-retries", max_retries)->capture_default_str();
    c_vortex->add_option("-o,--output", out_path, "vortex file ('-' = stdout)");

    auto* c_approx = app.add_subcommand("approx", "approximate decomposition");
    c_approx->add_option("graph", graph_path)->required();
    c_approx->add_option("--gamma", gamma_s, "leftover degree target")->capture_default_str();
    c_approx->add_option("-o,--output", out_path, "partial decomposition ('-' = stdout)");

    auto* c_boost = app.add_subcommand("boost", "boosted fractional weighting psi");
    c_boost->add_option("graph", graph_path)->required();
    c_boost->add_option("--p", p_s, "density parameter")->capture_default_str();
    c_boost->add_option("-o,--output", out_path, "weighting file ('-' = stdout)");

    auto* c_cover = app.add_subcommand("coverdown", "cover all edges outside U");
    c_cover->add_option("graph", graph_path)->required();
    c_cover->add_option("--u-size", u_size, "U = the first u-size vertices")->required();
    c_cover->add_option("--rho", rho_s)->capture_default_str();
    c_cover->add_option("--gamma", gamma_s)->capture_default_str();
    c_cover->add_option("-o,--output", out_path, "decomposition of H ('-' = stdout)");

    auto* c_dec = app.add_subcommand("decompose", "full pipeline");
    c_dec->add_option("graph", graph_path)->required();
    c_dec->add_option("--mode", mode_s, "hybrid | faithful")->capture_default_str();
    c_dec->add_option("--epsilon", eps_s)->capture_default_str();
    c_dec->add_option("--m-prime", m_prime)->capture_default_str();
    c_dec->add_option("--rho", rho_s)->capture_default_str();
    c_dec->add_option("-o,--output", out_path, "decomposition file ('-' = stdout)");

    // Let --seed / --json appear after the subcommand name as well.
    auto all = [](CLI::App*) { return true; };
    for (auto* s : app.get_subcommands(all)) {
        s->fallthrough();
        for (auto* inner : s->get_subcommands(all)) inner->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    Reporter rep;
    rep.as_json = as_json;
    try {
        const std::uint64_t seed = resolve_seed(seed_str);
        rep.set("seed", seed);

        if (c_div->parsed()) {
            Graph g = load_graph(graph_path).graph;
            bool yes = is_k3_divisible(g);
            rep.set("command", "divisible");
            rep.set("divisible", yes);
            rep.flush();
            return yes ? kOk : kNegative;
        }

        if (c_oracle->parsed()) {
            Graph g = load_graph(graph_path).graph;
            OracleResult res = oracle_decompose(g, budget);
            rep.set("command", "oracle");
            rep.set("nodes_expanded", res.nodes_expanded);
            if (res.status == OracleStatus::found) {
                write_artifact(out_path,
                               [&](std::ostream& os) { write_decomposition(os, res.decomposition); });
                rep.set("status", "found");
                rep.set("triangles", res.decomposition.triangles.size());
                rep.flush();
                return kOk;
            }
            rep.set("status", res.status == OracleStatus::none ? "no decomposition"
                                                               : "budget exhausted");
            rep.flush();
            return res.status == OracleStatus::none ? kNegative : kFailure;
        }

        if (c_verify->parsed()) {
            Graph g = load_graph(graph_path).graph;
            std::ifstream din(second_path);
            if (!din) throw std::runtime_error(second_path + ": cannot open");
            TriangleDecomposition d = read_decomposition(din, g.edge_count());
            bool yes = verify_decomposition(g, d);
            rep.set("command", "verify");
            rep.set("valid", yes);
            rep.flush();
            return yes ? kOk : kNegative;
        }

        if (c_frac->parsed()) {
            Graph g = load_graph(graph_path).graph;
            std::ifstream win(second_path);
            if (!win) throw std::runtime_error(second_path + ": cannot open");
            FractionalWeighting w = read_weighting(win);
            bool yes = verify_fractional(g, w);
            rep.set("command", "fractional-verify");
            rep.set("valid", yes);
            rep.flush();
            return yes ? kOk : kNegative;
        }

        if (c_ext->parsed()) {
            Graph g = build_extremal_example(static_cast<int>(k_param));
            bool cert = certify_no_decomposition_by_counting(
                g, extremal_inner_edges(static_cast<int>(k_param)));
            write_artifact(out_path, [&](std::ostream& os) { write_edge_list(os, g); });
            rep.set("command", "extremal");
            rep.set("n", g.vertex_count());
            rep.set("min_degree", g.min_degree());
            rep.set("divisible", is_k3_divisible(g));
            rep.set("no_decomposition_certified", cert);
            rep.flush();
            return cert ? kOk : kFailure;
        }

        if (g_trans->parsed() || g_abs->parsed()) {
            RootedGadget gd;
            rep.set("command", "gadget");
            if (g_abs->parsed()) {
                gd = build_absorber(load_graph(graph_path).graph);
                rep.set("kind", "absorber");
            } else {
                Graph l = load_graph(graph_path).graph;
                Graph lp = load_graph(second_path).graph;
                std::ifstream pin(phi_path);
                if (!pin) throw std::runtime_error(phi_path + ": cannot open");
                EdgeBijectiveHom phi;
                phi.map.assign(l.vertex_count(), -1);
                int x, y, lineno = 0;
                std::string line;
                while (std::getline(pin, line)) {
                    ++lineno;
                    if (line.empty() || line[0] == '#') continue;
                    std::istringstream ls(line);
                    ls >> x >> y;
                    if (ls.fail() || x < 0 || x >= l.vertex_count())
                        throw std::runtime_error(phi_path + ": line " + std::to_string(lineno) +
                                                 ": expected 'x y'");
                    phi.map[x] = y;
                }
                gd = build_transformer(l, lp, phi);
                rep.set("kind", "transformer");
            }
            std::string why;
            bool valid = gd.validate(&why);
            rep.set("vertices", gd.graph.vertex_count());
            rep.set("edges", gd.graph.edge_count());
            rep.set("roots", gd.roots.size());
            rep.set("degeneracy_bound", gd.degeneracy_bound);
            rep.set("valid", valid);
            if (!valid) rep.set("why", why);
            rep.flush();
            return valid ? kOk : kFailure;
        }

        if (c_vortex->parsed()) {
            Graph g = load_graph(graph_path).graph;
            VortexOutcome vo = find_vortex(g, parse_rational(delta_s), parse_rational(eps_s),
                                           m_prime, seed, max_retries);
            rep.set("command", "vortex");
            if (!vo.ok) {
                rep.set("error", vo.error);
                rep.set("failed_level", vo.failed_level);
                rep.flush();
                return kFailure;
            }
            write_artifact(out_path, [&](std::ostream& os) { write_vortex(os, vo.vortex); });
            rep.set("levels", vo.vortex.levels());
            rep.set("m", vo.vortex.m);
            rep.flush();
            return kOk;
        }

        if (c_approx->parsed()) {
            Graph g = load_graph(graph_path).graph;
            Rational gamma = parse_rational(gamma_s);
            ApproxResult res = approx_decompose_greedy(g, gamma, seed);
            write_artifact(out_path,
                           [&](std::ostream& os) { write_decomposition(os, res.decomposed); });
            rep.set("command", "approx");
            rep.set("triangles", res.decomposed.triangles.size());
            rep.set("leftover_max_degree", res.leftover_max_degree);
            rep.set("target_met", res.target_met);
            rep.flush();
            return res.target_met ? kOk : kFailure;
        }

        if (c_boost->parsed()) {
            Graph g = load_graph(graph_path).graph;
            PsiOutcome psi = assemble_psi(g, parse_rational(p_s));
            write_artifact(out_path, [&](std::ostream& os) { write_weighting(os, psi.psi); });
            rep.set("command", "boost");
            rep.set("support", psi.psi.size());
            rep.set("in_range", psi.in_range);
            rep.set("identity_ok", psi.identity_ok);
            rep.set("support_bound_ok", psi.support_bound_ok);
            rep.flush();
            return (psi.in_range && psi.identity_ok) ? kOk : kFailure;
        }

        if (c_cover->parsed()) {
            Graph g = load_graph(graph_path).graph;
            if (u_size < 1 || u_size > g.vertex_count())
                throw std::runtime_error("--u-size outside [1, n]");
            std::vector<int> u(u_size);
            std::iota(u.begin(), u.end(), 0);
            CoverDownParams params;
            params.rho = parse_rational(rho_s);
            params.gamma = parse_rational(gamma_s);
            auto out = cover_down(g, u, params, seed);
            rep.set("command", "coverdown");
            rep.set("attempts", out.attempts);
            if (!out.ok) {
                rep.set("failed_stage", out.failed_stage);
                rep.set("error", out.error);
                rep.flush();
                return kFailure;
            }
            write_artifact(out_path,
                           [&](std::ostream& os) { write_decomposition(os, out.decomposition); });
            rep.set("covered_edges", out.h.edge_count());
            rep.set("max_hu_degree", out.max_hu_degree);
            rep.flush();
            return kOk;
        }

        if (c_dec->parsed()) {
            Graph g = load_graph(graph_path).graph;
            PipelineParams params;
            if (mode_s == "hybrid") {
                params.mode = PipelineMode::hybrid;
            } else if (mode_s == "faithful") {
                params.mode = PipelineMode::faithful;
            } else {
                throw std::runtime_error("--mode must be hybrid or faithful");
            }
            params.epsilon = parse_rational(eps_s);
            params.m_prime = m_prime;
            params.cover.rho = parse_rational(rho_s);
            auto out = decompose(g, params, seed);
            rep.set("command", "decompose");
            rep.set("mode", mode_s);
            rep.set("epsilon", rat_str(params.epsilon));
            rep.set("levels", out.levels);
            rep.set("m", out.m);
            rep.set("notes", out.notes);
            if (!out.ok) {
                rep.set("failed_step", out.failed_step);
                rep.set("error", out.error);
                rep.flush();
                return out.failed_step == "divisibility" ? kNegative : kFailure;
            }
            write_artifact(out_path,
                           [&](std::ostream& os) { write_decomposition(os, out.decomposition); });
            rep.set("triangles", out.decomposition.triangles.size());
            rep.flush();
            return kOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
