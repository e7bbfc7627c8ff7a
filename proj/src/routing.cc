#include <embedcsp/routing.hh>
#include <embedcsp/errors.hh>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using std::pair;
using std::span;
using std::uint64_t;
using std::vector;

namespace embedcsp
{
    using std::to_string;

    namespace
    {
        auto add_path(const Graph & h, const Path & p, vector<int> & load, int delta) -> void
        {
            for (size_t i = 1 ; i < p.vertices.size() ; ++i)
                load[*h.edge_index(p.vertices[i - 1], p.vertices[i])] += delta;
        }

        auto uses_edge_with_load(const Graph & h, const Path & p, const vector<int> & load, int level) -> bool
        {
            for (size_t i = 1 ; i < p.vertices.size() ; ++i)
                if (load[*h.edge_index(p.vertices[i - 1], p.vertices[i])] == level)
                    return true;
            return false;
        }

        /// (max load, number of edges at max): smaller is better.
        auto objective(const vector<int> & load) -> pair<int, int>
        {
            int top = load.empty() ? 0 : *std::max_element(load.begin(), load.end());
            return { top, int(std::count(load.begin(), load.end(), top)) };
        }
    }

    auto DemandSet::validate(int host_size) const -> void
    {
        vector<char> used(host_size, 0);
        for (auto [s, t] : pairs)
            for (auto x : { s, t }) {
                if (x < 0 || x >= host_size)
                    throw InputError("demand endpoint " + to_string(x) + " out of range");
                if (used[x])
                    throw InputError("demand endpoint " + to_string(x) + " used twice; demands must form a matching");
                used[x] = 1;
            }
    }

    auto CongestionProfile::max_edge() const -> int
    {
        return edge.empty() ? 0 : *std::max_element(edge.begin(), edge.end());
    }

    auto CongestionProfile::max_vertex() const -> int
    {
        return vertex.empty() ? 0 : *std::max_element(vertex.begin(), vertex.end());
    }

    auto host_signature(const Graph & g) -> uint64_t
    {
        // FNV-1a over the vertex count and sorted edge list
        uint64_t h = 1469598103934665603ull;
        auto mix = [&] (uint64_t x) {
            for (int i = 0 ; i < 8 ; ++i) {
                h ^= (x >> (8 * i)) & 0xff;
                h *= 1099511628211ull;
            }
        };
        mix(uint64_t(g.size()));
        for (auto [u, v] : g.edges()) {
            mix(uint64_t(u));
            mix(uint64_t(v));
        }
        return h;
    }

    auto congestion_of(const Graph & h, span<const Path> paths) -> CongestionProfile
    {
        CongestionProfile result{ vector<int>(h.edge_count(), 0), vector<int>(h.size(), 0) };
        vector<int> seen(h.size(), -1);
        for (size_t i = 0 ; i < paths.size() ; ++i) {
            auto & p = paths[i];
            if (! is_valid_path(h, p))
                throw InputError("path " + to_string(i) + " is not a walk in the host");
            for (auto v : p.vertices)
                if (seen[v] != int(i)) {
                    seen[v] = int(i);
                    ++result.vertex[v];
                }
            add_path(h, p, result.edge, 1);
        }
        return result;
    }

    auto route_matching(const Graph & h, double alpha, const DemandSet & demands, uint64_t seed,
            const RoutingParams & params, span<const int> base_load) -> RoutingSolution
    {
        demands.validate(h.size());
        if (! is_connected(h))
            throw InputError("routing host is disconnected");
        if (! (alpha > 0.0))
            throw InputError("routing needs a positive Cheeger certificate for the host");
        if (! base_load.empty() && int(base_load.size()) != h.edge_count())
            throw InputError("base load must have one entry per host edge");

        std::mt19937_64 rng(seed);
        auto n_demands = demands.pairs.size();

        vector<int> load(h.edge_count(), 0);
        if (! base_load.empty())
            std::copy(base_load.begin(), base_load.end(), load.begin());

        vector<double> weights(h.edge_count());
        auto route_one = [&] (size_t i) {
            for (int e = 0 ; e < h.edge_count() ; ++e)
                weights[e] = std::exp(params.beta * load[e]);
            auto [s, t] = demands.pairs[i];
            auto p = shortest_path(h, s, t, weights);
            if (! p)
                throw InputError("demand " + to_string(i) + " is unreachable");
            return std::move(*p);
        };

        vector<size_t> order(n_demands);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);

        vector<Path> paths(n_demands);
        for (auto i : order) {
            paths[i] = route_one(i);
            add_path(h, paths[i], load, 1);
        }

        auto best_paths = paths;
        auto best_objective = objective(load);
        int sweeps_run = 0;
        for (int sweep = 0 ; sweep < params.sweeps && best_objective.first > 1 ; ++sweep) {
            ++sweeps_run;
            std::shuffle(order.begin(), order.end(), rng);
            for (auto i : order) {
                int level = *std::max_element(load.begin(), load.end());
                if (! uses_edge_with_load(h, paths[i], load, level))
                    continue;
                add_path(h, paths[i], load, -1);
                paths[i] = route_one(i);
                add_path(h, paths[i], load, 1);
            }

            auto current = objective(load);
            if (current < best_objective) {
                best_objective = current;
                best_paths = paths;
            }
            else
                break;
        }

        RoutingSolution result;
        result.paths = std::move(best_paths);
        result.congestion = congestion_of(h, result.paths);
        result.host_signature = host_signature(h);
        result.max_edge_congestion = result.congestion.max_edge();
        for (auto & p : result.paths)
            result.max_path_length = std::max(result.max_path_length, p.length());
        double log_k = std::log2(double(h.size()));
        result.congestion_target = params.c_cong * log_k / alpha;
        result.length_target = params.c_len * log_k / alpha;
        result.met_targets = result.max_edge_congestion <= result.congestion_target && result.max_path_length <= result.length_target;
        result.sweeps_run = sweeps_run;
        return result;
    }

    auto route_matching(const CertifiedExpander & h, const DemandSet & demands, uint64_t seed,
            const RoutingParams & params, span<const int> base_load) -> RoutingSolution
    {
        return route_matching(h.graph, h.cheeger_lower_bound, demands, seed, params, base_load);
    }

    auto accumulate_congestion(span<const RoutingSolution> solutions, const Graph & h) -> CongestionProfile
    {
        CongestionProfile result{ vector<int>(h.edge_count(), 0), vector<int>(h.size(), 0) };
        auto signature = host_signature(h);
        for (auto & s : solutions) {
            if (s.host_signature != signature || s.congestion.edge.size() != result.edge.size() || s.congestion.vertex.size() != result.vertex.size())
                throw InputError("routing solution was produced on a different host");
            for (size_t e = 0 ; e < result.edge.size() ; ++e)
                result.edge[e] += s.congestion.edge[e];
            for (size_t v = 0 ; v < result.vertex.size() ; ++v)
                result.vertex[v] += s.congestion.vertex[v];
        }
        return result;
    }
}
