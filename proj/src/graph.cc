#include <embedcsp/graph.hh>
#include <embedcsp/errors.hh>

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>
#include <string>

using std::optional;
using std::pair;
using std::span;
using std::string;
using std::vector;

namespace embedcsp
{
    using std::to_string;

    Graph::Graph(int n) :
        _size(n),
        _adjacency(n),
        _incident(n)
    {
        if (n < 0)
            throw InputError("graph size must be nonnegative, got " + to_string(n));
    }

    auto Graph::from_edges(int n, const vector<pair<Vertex, Vertex>> & edges) -> Graph
    {
        Graph result(n);
        result._edges.reserve(edges.size());
        for (auto [a, b] : edges) {
            if (a < 0 || b < 0 || a >= n || b >= n)
                throw InputError("edge (" + to_string(a) + ", " + to_string(b) + ") out of range for " + to_string(n) + " vertices");
            if (a == b)
                throw InputError("self-loop at vertex " + to_string(a));
            result._edges.push_back(Edge{ std::min(a, b), std::max(a, b) });
        }

        std::sort(result._edges.begin(), result._edges.end());
        auto dup = std::adjacent_find(result._edges.begin(), result._edges.end());
        if (dup != result._edges.end())
            throw InputError("duplicate edge (" + to_string(dup->u) + ", " + to_string(dup->v) + ")");

        for (int id = 0 ; id < int(result._edges.size()) ; ++id) {
            auto [u, v] = result._edges[id];
            result._adjacency[u].push_back(v);
            result._adjacency[v].push_back(u);
        }

        // incident edge ids in the same order as the sorted neighbour lists
        for (Vertex v = 0 ; v < n ; ++v) {
            std::sort(result._adjacency[v].begin(), result._adjacency[v].end());
            result._incident[v].reserve(result._adjacency[v].size());
            for (auto w : result._adjacency[v])
                result._incident[v].push_back(*result.edge_index(v, w));
        }

        return result;
    }

    auto Graph::max_degree() const -> int
    {
        int result = 0;
        for (auto & a : _adjacency)
            result = std::max(result, int(a.size()));
        return result;
    }

    auto Graph::is_regular(int d) const -> bool
    {
        return std::all_of(_adjacency.begin(), _adjacency.end(), [d] (const auto & a) { return int(a.size()) == d; });
    }

    auto Graph::adjacent(Vertex u, Vertex v) const -> bool
    {
        if (u < 0 || v < 0 || u >= _size || v >= _size)
            return false;
        return std::binary_search(_adjacency[u].begin(), _adjacency[u].end(), v);
    }

    auto Graph::edge_index(Vertex u, Vertex v) const -> optional<int>
    {
        Edge e{ std::min(u, v), std::max(u, v) };
        auto it = std::lower_bound(_edges.begin(), _edges.end(), e);
        if (it == _edges.end() || *it != e)
            return std::nullopt;
        return int(it - _edges.begin());
    }

    auto Bipartition::count(Side s) const -> int
    {
        return int(std::count(side.begin(), side.end(), s));
    }

    auto Bipartition::balanced() const -> bool
    {
        return count(Side::Left) == count(Side::Right);
    }

    auto Bipartition::valid_for(const Graph & g) const -> bool
    {
        if (int(side.size()) != g.size())
            return false;
        return std::all_of(g.edges().begin(), g.edges().end(), [&] (const Edge & e) { return side[e.u] != side[e.v]; });
    }

    Multigraph::Multigraph(int n, vector<MultiEdge> edges) :
        _size(n),
        _edges(std::move(edges))
    {
        vector<int> ids;
        for (auto & e : _edges) {
            if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
                throw InputError("multigraph edge " + to_string(e.id) + " out of range");
            if (e.u == e.v)
                throw InputError("multigraph self-loop on edge " + to_string(e.id));
            ids.push_back(e.id);
        }
        std::sort(ids.begin(), ids.end());
        if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
            throw InputError("multigraph edge ids are not unique");
    }

    auto Multigraph::degree(Vertex v) const -> int
    {
        return int(std::count_if(_edges.begin(), _edges.end(), [v] (const MultiEdge & e) { return e.u == v || e.v == v; }));
    }

    auto Multigraph::max_degree() const -> int
    {
        vector<int> deg(_size, 0);
        for (auto & e : _edges) {
            ++deg[e.u];
            ++deg[e.v];
        }
        return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
    }

    auto is_valid_path(const Graph & g, const Path & p) -> bool
    {
        if (p.vertices.empty())
            return false;
        for (auto v : p.vertices)
            if (v < 0 || v >= g.size())
                return false;
        for (size_t i = 1 ; i < p.vertices.size() ; ++i)
            if (! g.adjacent(p.vertices[i - 1], p.vertices[i]))
                return false;
        return true;
    }

    auto is_bipartite(const Graph & g) -> optional<Bipartition>
    {
        vector<int> colour(g.size(), -1);
        for (Vertex root = 0 ; root < g.size() ; ++root) {
            if (colour[root] != -1)
                continue;
            colour[root] = 0;
            std::queue<Vertex> queue;
            queue.push(root);
            while (! queue.empty()) {
                auto v = queue.front();
                queue.pop();
                for (auto w : g.neighbours(v)) {
                    if (colour[w] == -1) {
                        colour[w] = 1 - colour[v];
                        queue.push(w);
                    }
                    else if (colour[w] == colour[v])
                        return std::nullopt;
                }
            }
        }

        Bipartition result;
        for (auto c : colour)
            result.side.push_back(c == 0 ? Side::Left : Side::Right);
        return result;
    }

    auto min_odd_cycle(const Graph & g) -> optional<Path>
    {
        // An edge joining two vertices at equal BFS depth d closes an odd walk of
        // length 2d + 1 through the root. At the global minimum over all roots the
        // two tree paths are internally disjoint, so the walk is a cycle.
        int best_length = std::numeric_limits<int>::max();
        optional<Path> best;

        vector<int> depth(g.size()), parent(g.size());
        for (Vertex root = 0 ; root < g.size() ; ++root) {
            std::fill(depth.begin(), depth.end(), -1);
            depth[root] = 0;
            parent[root] = -1;
            std::queue<Vertex> queue;
            queue.push(root);
            while (! queue.empty()) {
                auto v = queue.front();
                queue.pop();
                if (2 * depth[v] + 1 >= best_length)
                    break;
                for (auto w : g.neighbours(v)) {
                    if (depth[w] == -1) {
                        depth[w] = depth[v] + 1;
                        parent[w] = v;
                        queue.push(w);
                    }
                    else if (depth[w] == depth[v] && v < w) {
                        best_length = 2 * depth[v] + 1;
                        vector<Vertex> left, right;
                        for (auto x = v ; x != -1 ; x = parent[x])
                            left.push_back(x);
                        for (auto x = w ; x != root ; x = parent[x])
                            right.push_back(x);
                        // root .. v, then w back down to the root's child
                        std::reverse(left.begin(), left.end());
                        Path cycle;
                        cycle.vertices = std::move(left);
                        cycle.vertices.insert(cycle.vertices.end(), right.begin(), right.end());
                        best = std::move(cycle);
                        break;
                    }
                }
            }
        }

        return best;
    }

    auto double_cover(const Graph & g) -> Graph
    {
        int n = g.size();
        vector<pair<Vertex, Vertex>> edges;
        edges.reserve(2 * g.edge_count());
        for (auto [u, v] : g.edges()) {
            edges.emplace_back(u, v + n);
            edges.emplace_back(v, u + n);
        }
        return Graph::from_edges(2 * n, edges);
    }

    auto matching_decomposition(const Multigraph & d) -> vector<vector<int>>
    {
        // colour edges in order of increasing id with the least colour free at both ends
        auto edges = d.edges();
        std::sort(edges.begin(), edges.end(), [] (const MultiEdge & a, const MultiEdge & b) { return a.id < b.id; });

        vector<vector<char>> used(d.size());
        vector<vector<int>> result;
        for (auto & e : edges) {
            int colour = 0;
            auto taken = [&] (Vertex v, int c) { return c < int(used[v].size()) && used[v][c]; };
            while (taken(e.u, colour) || taken(e.v, colour))
                ++colour;
            for (auto v : { e.u, e.v }) {
                if (int(used[v].size()) <= colour)
                    used[v].resize(colour + 1, 0);
                used[v][colour] = 1;
            }
            if (int(result.size()) <= colour)
                result.resize(colour + 1);
            result[colour].push_back(e.id);
        }
        return result;
    }

    auto shortest_path(const Graph & g, Vertex s, Vertex t, span<const double> weights) -> optional<Path>
    {
        if (int(weights.size()) != g.edge_count())
            throw InputError("shortest_path needs one weight per edge");
        if (s < 0 || t < 0 || s >= g.size() || t >= g.size())
            throw InputError("shortest_path endpoint out of range");
        for (auto w : weights)
            if (! (w >= 0.0))
                throw InputError("shortest_path needs nonnegative edge weights");

        auto close = [] (double a, double b) {
            return std::abs(a - b) <= 1e-9 * std::max({ 1.0, std::abs(a), std::abs(b) });
        };

        // Dijkstra from t keyed by (cost, hops), then walk greedily from s
        // along the smallest-numbered neighbour that stays on an optimal path.
        constexpr double inf = std::numeric_limits<double>::infinity();
        vector<double> cost(g.size(), inf);
        vector<int> hops(g.size(), std::numeric_limits<int>::max());
        vector<char> done(g.size(), 0);
        using Entry = std::tuple<double, int, Vertex>;
        std::priority_queue<Entry, vector<Entry>, std::greater<Entry>> queue;
        cost[t] = 0;
        hops[t] = 0;
        queue.emplace(0.0, 0, t);
        while (! queue.empty()) {
            auto [c, h, v] = queue.top();
            queue.pop();
            if (done[v])
                continue;
            done[v] = 1;
            auto nbrs = g.neighbours(v);
            auto ids = g.incident_edges(v);
            for (size_t i = 0 ; i < nbrs.size() ; ++i) {
                auto w = nbrs[i];
                if (done[w])
                    continue;
                double wc = c + weights[ids[i]];
                int wh = h + 1;
                bool better = (! close(wc, cost[w]) && wc < cost[w]) || (close(wc, cost[w]) && wh < hops[w]);
                if (cost[w] == inf || better) {
                    cost[w] = wc;
                    hops[w] = wh;
                    queue.emplace(wc, wh, w);
                }
            }
        }

        if (cost[s] == inf)
            return std::nullopt;

        Path path;
        path.vertices.push_back(s);
        for (auto v = s ; v != t ; ) {
            auto nbrs = g.neighbours(v);
            auto ids = g.incident_edges(v);
            Vertex next = -1;
            for (size_t i = 0 ; i < nbrs.size() ; ++i) {
                auto w = nbrs[i];
                if (cost[w] != inf && hops[w] == hops[v] - 1 && close(cost[w] + weights[ids[i]], cost[v])) {
                    next = w;
                    break;
                }
            }
            if (next == -1)
                throw std::logic_error("shortest_path lost the optimal successor");
            path.vertices.push_back(next);
            v = next;
        }
        return path;
    }

    auto connected_components(const Graph & g) -> vector<int>
    {
        vector<int> component(g.size(), -1);
        int next = 0;
        for (Vertex root = 0 ; root < g.size() ; ++root) {
            if (component[root] != -1)
                continue;
            vector<Vertex> stack{ root };
            component[root] = next;
            while (! stack.empty()) {
                auto v = stack.back();
                stack.pop_back();
                for (auto w : g.neighbours(v))
                    if (component[w] == -1) {
                        component[w] = next;
                        stack.push_back(w);
                    }
            }
            ++next;
        }
        return component;
    }

    auto is_connected(const Graph & g) -> bool
    {
        auto c = connected_components(g);
        return std::all_of(c.begin(), c.end(), [] (int x) { return x == 0; });
    }

    auto induces_connected(const Graph & g, span<const Vertex> vertices) -> bool
    {
        if (vertices.empty())
            return false;
        vector<char> inside(g.size(), 0), seen(g.size(), 0);
        for (auto v : vertices) {
            if (v < 0 || v >= g.size())
                return false;
            inside[v] = 1;
        }
        vector<Vertex> stack{ vertices.front() };
        seen[vertices.front()] = 1;
        while (! stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            for (auto w : g.neighbours(v))
                if (inside[w] && ! seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
        }
        return std::all_of(vertices.begin(), vertices.end(), [&] (Vertex v) { return seen[v]; });
    }
}

namespace embedcsp
{
    auto complete_graph(int n) -> Graph
    {
        vector<pair<Vertex, Vertex>> edges;
        for (Vertex u = 0 ; u < n ; ++u)
            for (Vertex v = u + 1 ; v < n ; ++v)
                edges.emplace_back(u, v);
        return Graph::from_edges(n, edges);
    }

    auto cycle_graph(int n) -> Graph
    {
        if (n < 3)
            throw InputError("cycle needs at least 3 vertices");
        vector<pair<Vertex, Vertex>> edges;
        for (Vertex v = 0 ; v < n ; ++v)
            edges.emplace_back(v, (v + 1) % n);
        return Graph::from_edges(n, edges);
    }

    auto octahedron() -> Graph
    {
        vector<pair<Vertex, Vertex>> edges;
        for (Vertex u = 0 ; u < 6 ; ++u)
            for (Vertex v = u + 1 ; v < 6 ; ++v)
                if (u / 2 != v / 2)
                    edges.emplace_back(u, v);
        return Graph::from_edges(6, edges);
    }

    auto erdos_renyi(int n, double p, std::uint64_t seed) -> Graph
    {
        std::mt19937_64 rng(seed);
        std::bernoulli_distribution coin(p);
        vector<pair<Vertex, Vertex>> edges;
        for (Vertex u = 0 ; u < n ; ++u)
            for (Vertex v = u + 1 ; v < n ; ++v)
                if (coin(rng))
                    edges.emplace_back(u, v);
        return Graph::from_edges(n, edges);
    }
}
