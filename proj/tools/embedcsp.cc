#include <embedcsp/compile.hh>
#include <embedcsp/config.hh>
#include <embedcsp/errors.hh>
#include <embedcsp/harness.hh>
#include <embedcsp/serialize.hh>

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace embedcsp;

using std::cerr;
using std::optional;
using std::string;
using std::uint64_t;
using std::vector;

namespace
{
    struct Globals
    {
        uint64_t seed = 0;
        string config_path;
        string out;
        string format = "json";
    };

    auto emit(const Globals & g, const string & text) -> void
    {
        if (g.out.empty() || g.out == "-")
            std::cout << text;
        else
            write_text_file(g.out, text);
    }

    auto require_json(const Globals & g, const string & command) -> void
    {
        if (g.format != "json")
            throw InputError(command + " only writes json");
    }

    auto sidecar_path(const string & graph_path) -> string
    {
        std::filesystem::path p(graph_path);
        return (p.parent_path() / (p.stem().string() + ".cert.json")).string();
    }

    auto with_seed(json j, uint64_t seed) -> json
    {
        j["seed"] = seed;
        return j;
    }

    /// A CSP file, or a compiled instance file, in which case the compiled side is returned.
    auto load_instance(const string & path) -> CspInstance
    {
        auto j = read_json_file(path);
        if (j.is_object() && j.contains("kind"))
            return compiled_from_json(j).phi;
        return csp_from_json(j);
    }
}

auto main(int argc, char * argv[]) -> int
{
    CLI::App app{ "Expander embeddings and compilation of binary constraint satisfaction problems" };
    app.require_subcommand(1);
    app.fallthrough();

    Globals globals;
    app.add_option("--seed", globals.seed, "Seed for every randomised step")->capture_default_str();
    app.add_option("--config", globals.config_path, "JSON file overriding default constants");
    app.add_option("--out", globals.out, "Output file (stdout when omitted)");
    app.add_option("--format", globals.format, "Output format")->check(CLI::IsMember({ "json", "csv" }))->capture_default_str();

    ExperimentConfig config;
    std::function<int ()> action;

    // expander
    auto * expander_cmd = app.add_subcommand("expander", "Build a certified 3-regular bipartite expander");
    int expander_n = 0;
    string certify;
    expander_cmd->add_option("--n", expander_n, "Even vertex count, at least 6")->required();
    expander_cmd->add_option("--certify", certify, "Force a certificate method")->check(CLI::IsMember({ "exact", "spectral" }));
    expander_cmd->callback([&] {
        action = [&] {
            require_json(globals, "expander");
            auto params = config.embedding.expander;
            if (! certify.empty())
                params.certify = certificate_method_from_string(certify);
            auto h = bipartite_expander(expander_n, globals.seed, params);
            auto certificate = with_seed(certificate_to_json(h), globals.seed);
            if (globals.out.empty() || globals.out == "-")
                std::cout << dump(json{ { "graph", graph_to_json(h.graph) }, { "certificate", certificate } });
            else {
                write_text_file(globals.out, dump(graph_to_json(h.graph)));
                write_text_file(sidecar_path(globals.out), dump(certificate));
            }
            return 0;
        };
    });

    // route
    auto * route_cmd = app.add_subcommand("route", "Route a demand set on a certified host");
    string host_path, demands_path;
    optional<double> alpha_override;
    route_cmd->add_option("--host", host_path, "Host graph JSON")->required();
    route_cmd->add_option("--demands", demands_path, "Demands JSON")->required();
    route_cmd->add_option("--alpha", alpha_override, "Expansion lower bound, when the host has no certificate");
    route_cmd->callback([&] {
        action = [&] {
            require_json(globals, "route");
            auto host_json = read_json_file(host_path);
            optional<json> certificate;
            if (host_json.contains("graph")) {
                if (host_json.contains("certificate"))
                    certificate = host_json["certificate"];
                host_json = json(host_json["graph"]);
            }
            else if (std::filesystem::exists(sidecar_path(host_path)))
                certificate = read_json_file(sidecar_path(host_path));

            double alpha = 0.0;
            if (alpha_override)
                alpha = *alpha_override;
            else if (certificate && certificate->contains("cheeger_lb") && (*certificate)["cheeger_lb"].is_number())
                alpha = (*certificate)["cheeger_lb"].get<double>();
            else
                throw InputError("host '" + host_path + "' has no certificate; supply one or pass --alpha");
            if (! (alpha > 0.0))
                throw InputError("expansion lower bound must be positive");

            auto host = graph_from_json(host_json);
            auto demands = demands_from_json(read_json_file(demands_path));
            auto solution = route_matching(host, alpha, demands, globals.seed, config.embedding.routing);
            emit(globals, dump(with_seed(routing_to_json(solution), globals.seed)));
            return 0;
        };
    });

    // embed
    auto * embed_cmd = app.add_subcommand("embed", "Embed a source graph into an expander");
    string src_path;
    int embed_k = 0;
    embed_cmd->add_option("--src", src_path, "Source graph JSON")->required();
    embed_cmd->add_option("--k", embed_k, "Even host size, at least 6")->required();
    embed_cmd->callback([&] {
        action = [&] {
            require_json(globals, "embed");
            auto source = graph_from_json(read_json_file(src_path));
            auto result = embed(source, embed_k, globals.seed, config.embedding);
            auto check = verify_embedding(source, result.embedding, config.embedding.z);
            auto j = embedding_to_json(result.embedding, result.depth);
            j["fitted_z"] = result.fitted_z;
            j["max_edge_congestion"] = result.max_edge_congestion;
            j["certificate"] = certificate_to_json(result.host);
            j["seed"] = globals.seed;
            emit(globals, dump(j));
            if (! check.ok()) {
                cerr << "embedding failed verification: " << check.violations.front().message << "\n";
                return 1;
            }
            return 0;
        };
    });

    // compile
    auto * compile_cmd = app.add_subcommand("compile", "Compile a CSP onto an expander host");
    string gamma_path, metrics_path;
    int compile_k = 0;
    bool padded = false;
    compile_cmd->add_option("--gamma", gamma_path, "CSP JSON")->required();
    compile_cmd->add_option("--k", compile_k, "Even host size, at least 6")->required();
    compile_cmd->add_option("--metrics", metrics_path, "Also write pipeline metrics here");
    compile_cmd->add_flag("--padded", padded, "Pad every tuple to the maximum bag width");
    compile_cmd->callback([&] {
        action = [&] {
            require_json(globals, "compile");
            auto gamma = csp_from_json(read_json_file(gamma_path));
            auto params = config.pipeline();
            params.compile.padded = padded;
            auto result = pipeline(gamma, compile_k, globals.seed, params);
            emit(globals, dump(with_seed(compiled_to_json(result.compiled, config.compile.materialize_limit), globals.seed)));
            if (! metrics_path.empty()) {
                auto & m = result.metrics;
                write_text_file(metrics_path, dump(json{
                    { "format_version", format_version },
                    { "seed", globals.seed },
                    { "host_vertices", m.host_vertices },
                    { "host_edges", m.host_edges },
                    { "depth", m.depth },
                    { "depth_bound", m.depth_bound },
                    { "fitted_z", m.fitted_z },
                    { "max_edge_congestion", m.max_edge_congestion },
                    { "max_alphabet", m.max_alphabet },
                    { "log2_max_alphabet", m.log2_max_alphabet },
                    { "log2_alphabet_bound", m.log2_alphabet_bound },
                    { "alphabet_within_bound", m.alphabet_within_bound } }));
            }
            return 0;
        };
    });

    // solve, count
    auto * solve_cmd = app.add_subcommand("solve", "Lexicographically least solution by exhaustive search");
    auto * count_cmd = app.add_subcommand("count", "Count solutions by exhaustive search");
    string instance_path;
    for (auto * cmd : { solve_cmd, count_cmd })
        cmd->add_option("--instance", instance_path, "CSP or compiled instance JSON")->required();
    solve_cmd->callback([&] {
        action = [&] {
            require_json(globals, "solve");
            auto solution = solve_bruteforce(load_instance(instance_path), config.solver);
            json j{ { "satisfiable", solution.has_value() } };
            if (solution)
                j["assignment"] = assignment_to_json(*solution);
            emit(globals, dump(j));
            return 0;
        };
    });
    count_cmd->callback([&] {
        action = [&] {
            require_json(globals, "count");
            emit(globals, dump(json{ { "count", count_satisfying(load_instance(instance_path), config.solver) } }));
            return 0;
        };
    });

    // transport
    auto * transport_cmd = app.add_subcommand("transport", "Move assignments between a CSP and its compiled form");
    string direction, assignment_path, compiled_path;
    transport_cmd->add_option("--direction", direction)->required()->check(CLI::IsMember({ "encode", "decode" }));
    transport_cmd->add_option("--assignment", assignment_path, "Assignment JSON, or the output of solve")->required();
    transport_cmd->add_option("--compiled", compiled_path, "Compiled instance JSON")->required();
    transport_cmd->callback([&] {
        action = [&] {
            require_json(globals, "transport");
            auto compiled = compiled_from_json(read_json_file(compiled_path));
            // accept the output of solve as well as a bare assignment
            auto aj = read_json_file(assignment_path);
            auto a = assignment_from_json(aj.is_object() && aj.contains("assignment") ? aj["assignment"] : aj);
            auto result = direction == "encode" ? encode_assignment(a, compiled) : decode_assignment(a, compiled);
            auto & target = direction == "encode" ? compiled.phi : compiled.gamma;
            emit(globals, dump(json{ { "values", result.values }, { "satisfies", is_satisfied(target, result) } }));
            return 0;
        };
    });

    // e2e
    auto * e2e_cmd = app.add_subcommand("e2e", "Generate, compile and solve both sides, checking agreement");
    string gamma_source = "octahedron";
    int e2e_k = 6;
    bool e2e_count = false;
    e2e_cmd->add_option("--gamma", gamma_source, "octahedron, complete5, four-regular:N or file:PATH")->capture_default_str();
    e2e_cmd->add_option("--k", e2e_k, "Even host size, at least 6")->capture_default_str();
    e2e_cmd->add_flag("--count", e2e_count, "Also compare solution counts");
    e2e_cmd->callback([&] {
        action = [&] {
            require_json(globals, "e2e");
            CspInstance gamma = [&] {
                try {
                    return gamma_from_source(gamma_source, globals.seed);
                }
                catch (const BudgetExceeded & e) {
                    throw StageError("parse", ExitStatus::BudgetExceeded, e.what());
                }
                catch (const std::exception & e) {
                    throw StageError("parse", ExitStatus::InputError, e.what());
                }
            }();
            auto outcome = run_e2e(gamma, e2e_k, globals.seed, config, e2e_count);
            emit(globals, dump(outcome.report));
            if (! outcome.agreement) {
                cerr << "agreement: satisfiability of the source and compiled instances differs\n";
                return 1;
            }
            return 0;
        };
    });

    // depth-sweep
    auto * depth_cmd = app.add_subcommand("depth-sweep", "Embedding depth against its bound over a grid");
    vector<int> depth_ns{ 24 }, depth_ks{ 6 };
    vector<uint64_t> depth_seeds;
    depth_cmd->add_option("--n", depth_ns, "Source sizes (even)")->delimiter(',')->capture_default_str();
    depth_cmd->add_option("--k", depth_ks, "Host sizes (even)")->delimiter(',')->capture_default_str();
    depth_cmd->add_option("--seeds", depth_seeds, "Seeds; defaults to the global seed")->delimiter(',');
    depth_cmd->callback([&] {
        action = [&] {
            auto seeds = depth_seeds.empty() ? vector<uint64_t>{ globals.seed } : depth_seeds;
            auto rows = depth_sweep(depth_ns, depth_ks, seeds, config);
            if (globals.format == "csv")
                emit(globals, depth_sweep_csv(rows));
            else {
                json j{ { "format_version", format_version }, { "rows", json::array() } };
                double max_z = 0.0;
                for (auto & r : rows) {
                    j["rows"].push_back(json{ { "n", r.n }, { "k", r.k }, { "seed", r.seed }, { "depth", r.depth },
                            { "bound", r.bound }, { "fitted_z", r.fitted_z }, { "verified", r.verified } });
                    max_z = std::max(max_z, r.fitted_z);
                }
                j["max_fitted_z"] = max_z;
                emit(globals, dump(j));
            }
            for (auto & r : rows)
                if (! r.verified || r.depth > r.bound)
                    return 1;
            return 0;
        };
    });

    // congestion-sweep
    auto * congestion_cmd = app.add_subcommand("congestion-sweep", "Routing congestion on random perfect matchings");
    vector<int> congestion_ks{ 16 };
    int trials = 5;
    congestion_cmd->add_option("--k", congestion_ks, "Host sizes (even)")->delimiter(',')->capture_default_str();
    congestion_cmd->add_option("--trials", trials, "Matchings per host size")->capture_default_str()->check(CLI::PositiveNumber);
    congestion_cmd->callback([&] {
        action = [&] {
            auto rows = congestion_sweep(congestion_ks, trials, globals.seed, config);
            if (globals.format == "csv")
                emit(globals, congestion_sweep_csv(rows));
            else {
                json j{ { "format_version", format_version }, { "seed", globals.seed }, { "rows", json::array() } };
                for (auto & r : rows)
                    j["rows"].push_back(json{ { "k", r.k }, { "trial", r.trial }, { "seed", r.seed },
                            { "max_edge_congestion", r.max_edge_congestion }, { "max_path_length", r.max_path_length },
                            { "log2k_ratio", r.log2k_ratio } });
                j["slope"] = congestion_slope(rows);
                emit(globals, dump(j));
            }
            for (auto & r : rows)
                if (! r.endpoints_ok || ! r.bookkeeping_ok)
                    return 1;
            return 0;
        };
    });

    // gen
    auto * gen_cmd = app.add_subcommand("gen", "Instance generators");
    string gen_kind;
    string gen_graph_path;
    int gen_n = 6, gen_clique = 3;
    double gen_p = 0.5, gen_density = 0.5;
    Value gen_q = 3;
    gen_cmd->add_option("--kind", gen_kind)->required()->check(CLI::IsMember(
                { "random", "coloring", "four-regular-coloring", "clique", "regularize", "octahedron", "complete" }));
    gen_cmd->add_option("--graph", gen_graph_path, "Graph JSON for coloring and clique, CSP JSON for regularize");
    gen_cmd->add_option("--n", gen_n, "Vertex count for random and complete")->capture_default_str();
    gen_cmd->add_option("--p", gen_p, "Edge probability for random")->capture_default_str();
    gen_cmd->add_option("--q", gen_q, "Alphabet size")->capture_default_str();
    gen_cmd->add_option("--density", gen_density, "Allowed pair probability for random")->capture_default_str();
    gen_cmd->add_option("--clique", gen_clique, "Clique size for clique")->capture_default_str();
    gen_cmd->callback([&] {
        action = [&] {
            require_json(globals, "gen");
            auto need_graph = [&] {
                if (gen_graph_path.empty())
                    throw InputError("--kind " + gen_kind + " needs --graph");
                return graph_from_json(read_json_file(gen_graph_path));
            };
            std::optional<CspInstance> inst;
            if (gen_kind == "random")
                inst = random_instance(gen_n, gen_p, gen_q, gen_density, globals.seed);
            else if (gen_kind == "coloring")
                inst = coloring_instance(need_graph(), gen_q);
            else if (gen_kind == "four-regular-coloring")
                inst = four_regular_coloring_instance(need_graph(), gen_q).instance;
            else if (gen_kind == "clique")
                inst = clique_instance(need_graph(), gen_clique);
            else if (gen_kind == "octahedron")
                inst = coloring_instance(octahedron(), gen_q);
            else if (gen_kind == "complete")
                inst = coloring_instance(complete_graph(gen_n), gen_q);
            else {
                if (gen_graph_path.empty())
                    throw InputError("--kind regularize needs --graph pointing at a CSP");
                inst = regularize(csp_from_json(read_json_file(gen_graph_path))).instance;
            }
            emit(globals, dump(csp_to_json(*inst, config.compile.materialize_limit)));
            return 0;
        };
    });

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError & e) {
        auto status = app.exit(e);
        return status == 0 ? 0 : int(ExitStatus::InputError);
    }

    try {
        if (! globals.config_path.empty())
            config = load_config(globals.config_path);
        return action();
    }
    catch (const StageError & e) {
        cerr << "stage " << e.stage() << " failed: " << e.what() << "\n";
        return int(e.status());
    }
    catch (const InputError & e) {
        cerr << "input error: " << e.what() << "\n";
        return int(ExitStatus::InputError);
    }
    catch (const BudgetExceeded & e) {
        cerr << "budget exceeded: " << e.what() << "\n";
        return int(ExitStatus::BudgetExceeded);
    }
    catch (const DecodeError & e) {
        cerr << "decode failed: " << e.what() << "\n";
        return int(ExitStatus::AssertionFailure);
    }
    catch (const std::exception & e) {
        cerr << "error: " << e.what() << "\n";
        return int(ExitStatus::AssertionFailure);
    }
}
