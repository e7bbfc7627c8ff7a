#include <embedcsp/harness.hh>
#include <embedcsp/errors.hh>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>

using std::string;
using std::uint64_t;
using std::vector;

namespace embedcsp
{
    using std::to_string;

    namespace
    {
        auto format_double(double x) -> string
        {
            char buffer[64];
            std::snprintf(buffer, sizeof(buffer), "%.17g", x);
            return buffer;
        }

        template <typename F_>
        auto stage(const string & name, F_ && f) -> decltype(f())
        {
            try {
                return f();
            }
            catch (const StageError &) {
                throw;
            }
            catch (const InputError & e) {
                throw StageError(name, ExitStatus::InputError, e.what());
            }
            catch (const BudgetExceeded & e) {
                throw StageError(name, ExitStatus::BudgetExceeded, e.what());
            }
            catch (const std::exception & e) {
                throw StageError(name, ExitStatus::AssertionFailure, e.what());
            }
        }

        auto random_perfect_matching(int k, std::mt19937_64 & rng) -> DemandSet
        {
            vector<Vertex> order(k);
            std::iota(order.begin(), order.end(), 0);
            std::shuffle(order.begin(), order.end(), rng);
            DemandSet d;
            for (int i = 0 ; i + 1 < k ; i += 2)
                d.pairs.emplace_back(order[i], order[i + 1]);
            return d;
        }

        auto random_max_degree_four(int n, std::mt19937_64 & rng) -> Graph
        {
            vector<std::pair<Vertex, Vertex>> candidates, chosen;
            for (Vertex u = 0 ; u < n ; ++u)
                for (Vertex v = u + 1 ; v < n ; ++v)
                    candidates.emplace_back(u, v);
            std::shuffle(candidates.begin(), candidates.end(), rng);
            vector<int> degree(n, 0);
            for (auto [u, v] : candidates)
                if (degree[u] < 4 && degree[v] < 4) {
                    ++degree[u];
                    ++degree[v];
                    chosen.emplace_back(u, v);
                }
            return Graph::from_edges(n, chosen);
        }
    }

    StageError::StageError(string stage, ExitStatus status, const string & message) :
        std::runtime_error(stage + ": " + message),
        _stage(std::move(stage)),
        _status(status)
    {
    }

    auto gamma_from_source(const string & source, uint64_t seed) -> CspInstance
    {
        if (source == "octahedron")
            return coloring_instance(octahedron(), 3);
        if (source == "complete5")
            return coloring_instance(complete_graph(5), 3);
        if (source.starts_with("four-regular:")) {
            int n = 0;
            try {
                n = std::stoi(source.substr(13));
            }
            catch (const std::exception &) {
                throw InputError("bad vertex count in '" + source + "'");
            }
            if (n < 5)
                throw InputError("four-regular source needs at least 5 vertices");
            std::mt19937_64 rng(seed);
            for (int attempt = 0 ; attempt < 1000 ; ++attempt) {
                try {
                    return four_regular_coloring_instance(random_max_degree_four(n, rng), 3).instance;
                }
                catch (const InputError &) {
                }
            }
            throw InputError("could not pad a random graph on " + to_string(n) + " vertices to 4-regular");
        }
        if (source.starts_with("file:"))
            return csp_from_json(read_json_file(source.substr(5)));
        throw InputError("unknown source '" + source + "'");
    }

    auto run_e2e(const CspInstance & gamma, int k, uint64_t seed, const ExperimentConfig & config, bool count_solutions) -> E2EOutcome
    {
        auto start = std::chrono::steady_clock::now();
        auto result = stage("pipeline", [&] { return pipeline(gamma, k, seed, config.pipeline()); });

        auto solve_start = std::chrono::steady_clock::now();
        auto gamma_solution = stage("solve-gamma", [&] { return solve_bruteforce(gamma, config.solver); });
        auto phi_solution = stage("solve-phi", [&] { return solve_bruteforce(result.compiled.phi, config.solver); });
        double solve_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - solve_start).count();

        bool agreement = gamma_solution.has_value() == phi_solution.has_value();
        if (phi_solution) {
            // the decoded witness must itself solve gamma
            auto decoded = stage("decode", [&] { return decode_assignment(*phi_solution, result.compiled); });
            agreement = agreement && is_satisfied(gamma, decoded);
        }

        auto & m = result.metrics;
        json report{
            { "format_version", format_version },
            { "seed", seed },
            { "k", k },
            { "gamma", json{ { "vertices", gamma.size() }, { "edges", gamma.graph().edge_count() } } },
            { "host", json{ { "vertices", m.host_vertices }, { "edges", m.host_edges },
                { "certificate", certificate_to_json(result.embedding.host) } } },
            { "depth", m.depth },
            { "depth_bound", m.depth_bound },
            { "fitted_z", m.fitted_z },
            { "max_edge_congestion", m.max_edge_congestion },
            { "max_alphabet", m.max_alphabet },
            { "alphabet_within_bound", m.alphabet_within_bound },
            { "gamma_satisfiable", gamma_solution.has_value() },
            { "phi_satisfiable", phi_solution.has_value() },
            { "agreement", agreement }
        };

        if (count_solutions) {
            auto gamma_count = stage("count-gamma", [&] { return count_satisfying(gamma, config.solver); });
            auto phi_count = stage("count-phi", [&] { return count_satisfying(result.compiled.phi, config.solver); });
            report["gamma_count"] = gamma_count;
            report["phi_count"] = phi_count;
            agreement = agreement && gamma_count == phi_count;
            report["agreement"] = agreement;
        }

        double total_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        // wall-clock figures are the only non-reproducible part of the report
        report["timings_ms"] = json{ { "embed", m.embed_ms }, { "compile", m.compile_ms }, { "solve", solve_ms }, { "total", total_ms } };
        return E2EOutcome{ std::move(report), agreement };
    }

    auto depth_sweep(const vector<int> & ns, const vector<int> & ks, const vector<uint64_t> & seeds, const ExperimentConfig & config) -> vector<DepthRow>
    {
        vector<DepthRow> rows;
        for (auto n : ns)
            for (auto k : ks)
                for (auto seed : seeds) {
                    std::mt19937_64 rng(seed * 1000003 + uint64_t(n));
                    auto source = random_regular_graph(n, 3, rng);
                    auto result = embed(source, k, seed, config.embedding);
                    auto check = verify_embedding(source, result.embedding, config.embedding.z);
                    rows.push_back(DepthRow{ n, k, seed, result.depth.depth, result.depth.bound, result.fitted_z,
                            check.ok() && check.depth == result.depth });
                }
        std::sort(rows.begin(), rows.end(), [] (const DepthRow & a, const DepthRow & b) {
                return std::tie(a.n, a.k, a.seed) < std::tie(b.n, b.k, b.seed); });
        return rows;
    }

    auto depth_sweep_csv(const vector<DepthRow> & rows) -> string
    {
        std::ostringstream out;
        out << "n,k,seed,depth,bound,fitted_z,verified\n";
        double max_z = 0.0;
        int max_depth = 0;
        for (auto & r : rows) {
            out << r.n << ',' << r.k << ',' << r.seed << ',' << r.depth << ',' << format_double(r.bound) << ','
                << format_double(r.fitted_z) << ',' << (r.verified ? 1 : 0) << '\n';
            max_z = std::max(max_z, r.fitted_z);
            max_depth = std::max(max_depth, r.depth);
        }
        out << "max,,," << max_depth << ",," << format_double(max_z) << ",\n";
        return out.str();
    }

    auto parse_depth_sweep_csv(const string & text) -> vector<DepthRow>
    {
        std::istringstream in(text);
        string line;
        vector<DepthRow> rows;
        if (! std::getline(in, line) || line != "n,k,seed,depth,bound,fitted_z,verified")
            throw InputError("depth sweep CSV has an unexpected header");
        while (std::getline(in, line)) {
            if (line.empty() || line.starts_with("max,"))
                continue;
            std::istringstream fields(line);
            vector<string> f;
            string item;
            while (std::getline(fields, item, ','))
                f.push_back(item);
            if (f.size() != 7)
                throw InputError("depth sweep CSV row has " + to_string(f.size()) + " fields");
            try {
                rows.push_back(DepthRow{ std::stoi(f[0]), std::stoi(f[1]), std::stoull(f[2]), std::stoi(f[3]),
                        std::stod(f[4]), std::stod(f[5]), f[6] == "1" });
            }
            catch (const std::exception &) {
                throw InputError("malformed depth sweep CSV row '" + line + "'");
            }
        }
        return rows;
    }

    auto congestion_sweep(const vector<int> & ks, int trials, uint64_t seed, const ExperimentConfig & config) -> vector<CongestionRow>
    {
        vector<CongestionRow> rows;
        for (auto k : ks) {
            auto host = bipartite_expander(k, seed, config.embedding.expander);
            std::mt19937_64 rng(seed ^ (uint64_t(k) << 32));
            for (int trial = 0 ; trial < trials ; ++trial) {
                auto demands = random_perfect_matching(k, rng);
                auto routing_seed = rng();
                auto solution = route_matching(host, demands, routing_seed, config.embedding.routing);

                bool endpoints = solution.paths.size() == demands.pairs.size();
                for (size_t i = 0 ; endpoints && i < demands.pairs.size() ; ++i)
                    endpoints = is_valid_path(host.graph, solution.paths[i])
                        && solution.paths[i].front() == demands.pairs[i].first && solution.paths[i].back() == demands.pairs[i].second;
                bool bookkeeping = congestion_of(host.graph, solution.paths) == solution.congestion
                    && solution.congestion.max_edge() == solution.max_edge_congestion;

                rows.push_back(CongestionRow{ k, trial, routing_seed, solution.max_edge_congestion, solution.max_path_length,
                        solution.max_edge_congestion / std::log2(double(k)), endpoints, bookkeeping });
            }
        }
        std::sort(rows.begin(), rows.end(), [] (const CongestionRow & a, const CongestionRow & b) {
                return std::tie(a.k, a.trial) < std::tie(b.k, b.trial); });
        return rows;
    }

    auto congestion_slope(const vector<CongestionRow> & rows) -> double
    {
        if (rows.size() < 2)
            return 0.0;
        double mx = 0, my = 0;
        for (auto & r : rows) {
            mx += std::log2(double(r.k));
            my += r.max_edge_congestion;
        }
        mx /= rows.size();
        my /= rows.size();
        double sxy = 0, sxx = 0;
        for (auto & r : rows) {
            double dx = std::log2(double(r.k)) - mx;
            sxy += dx * (r.max_edge_congestion - my);
            sxx += dx * dx;
        }
        return sxx > 0 ? sxy / sxx : 0.0;
    }

    auto congestion_sweep_csv(const vector<CongestionRow> & rows) -> string
    {
        std::ostringstream out;
        out << "k,trial,seed,max_edge_congestion,max_path_length,log2k_ratio\n";
        double max_ratio = 0.0;
        for (auto & r : rows) {
            out << r.k << ',' << r.trial << ',' << r.seed << ',' << r.max_edge_congestion << ',' << r.max_path_length << ','
                << format_double(r.log2k_ratio) << '\n';
            max_ratio = std::max(max_ratio, r.log2k_ratio);
        }
        out << "slope," << format_double(congestion_slope(rows)) << ",,,," << format_double(max_ratio) << '\n';
        return out.str();
    }
}
