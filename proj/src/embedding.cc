#include <embedcsp/embedding.hh>
#include <embedcsp/errors.hh>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using std::uint64_t;
using std::vector;

namespace embedcsp
{
    using std::to_string;

    auto depth_bound(int source_vertices, int source_edges, int k, double z) -> double
    {
        return z * (1.0 + double(source_vertices + source_edges) / k) * std::log2(double(k));
    }

    auto fitted_z(int depth, int source_vertices, int source_edges, int k) -> double
    {
        return depth / depth_bound(source_vertices, source_edges, k, 1.0);
    }

    auto depth_report(const ConnectedEmbedding & emb, int source_edges, double z) -> DepthReport
    {
        DepthReport result;
        result.per_vertex.assign(emb.host.size(), 0);
        for (auto & set : emb.psi)
            for (auto x : set)
                if (x >= 0 && x < emb.host.size())
                    ++result.per_vertex[x];
        result.depth = result.per_vertex.empty() ? 0 : *std::max_element(result.per_vertex.begin(), result.per_vertex.end());
        result.bound = depth_bound(int(emb.psi.size()), source_edges, emb.host.size(), z);
        return result;
    }

    auto balanced_map(const Graph & source, int k, uint64_t seed) -> vector<Vertex>
    {
        if (k < 1)
            throw InputError("balanced map needs k >= 1");
        vector<Vertex> order(source.size());
        std::iota(order.begin(), order.end(), 0);
        std::mt19937_64 rng(seed);
        std::shuffle(order.begin(), order.end(), rng);

        vector<Vertex> anchor(source.size());
        for (size_t i = 0 ; i < order.size() ; ++i)
            anchor[order[i]] = Vertex(i % k);
        return anchor;
    }

    auto demand_graph(const Graph & source, const vector<Vertex> & anchor, int k) -> DemandGraph
    {
        if (int(anchor.size()) != source.size())
            throw InputError("anchor map must cover every source vertex");
        vector<MultiEdge> edges;
        DemandGraph result;
        for (int id = 0 ; id < source.edge_count() ; ++id) {
            auto [u, v] = source.edge(id);
            if (anchor[u] == anchor[v])
                result.intra_class.push_back(id);
            else
                edges.push_back(MultiEdge{ anchor[u], anchor[v], id });
        }
        result.graph = Multigraph(k, std::move(edges));
        return result;
    }

    auto embed(const Graph & source, int k, uint64_t seed, const EmbeddingParams & params) -> EmbeddingResult
    {
        if (k < 6 || k % 2 != 0)
            throw InputError("embedding host size must be an even integer >= 6, got " + to_string(k));

        // independent streams for host construction, anchoring and routing
        std::seed_seq seq{ seed, uint64_t(k) };
        vector<uint64_t> seeds(3);
        seq.generate(seeds.begin(), seeds.end());

        EmbeddingResult result;
        result.host = bipartite_expander(k, seeds[0], params.expander);
        auto & host = result.host.graph;

        auto anchor = balanced_map(source, k, seeds[1]);
        auto demands = demand_graph(source, anchor, k);
        auto matchings = matching_decomposition(demands.graph);
        result.matchings = int(matchings.size());

        vector<MultiEdge> by_id(source.edge_count());
        for (auto & e : demands.graph.edges())
            by_id[e.id] = e;

        result.edge_paths.assign(source.edge_count(), Path{});
        vector<int> load(host.edge_count(), 0);
        vector<RoutingSolution> solutions;
        std::mt19937_64 routing_rng(seeds[2]);
        for (auto & matching : matchings) {
            DemandSet set;
            for (auto id : matching) {
                // orient each demand from the anchor of the lower source endpoint
                auto [u, v] = source.edge(id);
                set.pairs.emplace_back(anchor[u], anchor[v]);
            }
            auto solution = route_matching(result.host, set, routing_rng(), params.routing,
                    params.accumulate ? std::span<const int>(load) : std::span<const int>());
            for (size_t i = 0 ; i < matching.size() ; ++i)
                result.edge_paths[matching[i]] = solution.paths[i];
            for (int e = 0 ; e < host.edge_count() ; ++e)
                load[e] += solution.congestion.edge[e];
            result.routing_met_targets = result.routing_met_targets && solution.met_targets;
            solutions.push_back(std::move(solution));
        }
        result.max_edge_congestion = accumulate_congestion(solutions, host).max_edge();

        auto & emb = result.embedding;
        emb.host = host;
        emb.anchor = anchor;
        emb.psi.assign(source.size(), {});
        for (Vertex v = 0 ; v < source.size() ; ++v)
            emb.psi[v].push_back(anchor[v]);
        for (int id = 0 ; id < source.edge_count() ; ++id) {
            auto [u, v] = source.edge(id);
            for (auto x : result.edge_paths[id].vertices) {
                emb.psi[u].push_back(x);
                emb.psi[v].push_back(x);
            }
        }
        for (auto & set : emb.psi) {
            std::sort(set.begin(), set.end());
            set.erase(std::unique(set.begin(), set.end()), set.end());
        }

        result.depth = depth_report(emb, source.edge_count(), params.z);
        result.fitted_z = fitted_z(result.depth.depth, source.size(), source.edge_count(), k);
        result.within_bound = result.depth.depth <= result.depth.bound;
        return result;
    }

    auto verify_embedding(const Graph & source, const ConnectedEmbedding & emb, double z) -> VerificationReport
    {
        VerificationReport report;
        auto add = [&] (Violation::Kind kind, Vertex v, int e, std::string message) {
            report.violations.push_back(Violation{ kind, v, e, std::move(message) });
        };

        if (int(emb.psi.size()) != source.size() || int(emb.anchor.size()) != source.size()) {
            add(Violation::Kind::Shape, -1, -1, "embedding does not have one set and one anchor per source vertex");
            report.depth = depth_report(emb, source.edge_count(), z);
            return report;
        }

        vector<vector<char>> member(source.size());
        for (Vertex v = 0 ; v < source.size() ; ++v) {
            auto & set = emb.psi[v];
            if (set.empty()) {
                add(Violation::Kind::Empty, v, -1, "psi(" + to_string(v) + ") is empty");
                continue;
            }
            bool in_range = std::all_of(set.begin(), set.end(), [&] (Vertex x) { return x >= 0 && x < emb.host.size(); });
            if (! in_range) {
                add(Violation::Kind::OutOfRange, v, -1, "psi(" + to_string(v) + ") names a vertex outside the host");
                continue;
            }
            member[v].assign(emb.host.size(), 0);
            for (auto x : set)
                member[v][x] = 1;
            if (emb.anchor[v] < 0 || emb.anchor[v] >= emb.host.size() || ! member[v][emb.anchor[v]])
                add(Violation::Kind::AnchorMissing, v, -1, "anchor of " + to_string(v) + " is not in psi(" + to_string(v) + ")");
            if (! induces_connected(emb.host, set))
                add(Violation::Kind::Disconnected, v, -1, "psi(" + to_string(v) + ") is not connected in the host");
        }

        for (int id = 0 ; id < source.edge_count() ; ++id) {
            auto [u, v] = source.edge(id);
            if (member[u].empty() || member[v].empty())
                continue;
            bool touch = false;
            for (auto x : emb.psi[u]) {
                if (member[v][x])
                    touch = true;
                for (auto y : emb.host.neighbours(x))
                    if (member[v][y])
                        touch = true;
                if (touch)
                    break;
            }
            if (! touch)
                add(Violation::Kind::NotTouching, -1, id, "psi(" + to_string(u) + ") and psi(" + to_string(v) + ") do not touch for source edge " + to_string(id));
        }

        report.depth = depth_report(emb, source.edge_count(), z);
        return report;
    }
}
