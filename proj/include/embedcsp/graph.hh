#ifndef EMBEDCSP_GRAPH_HH
#define EMBEDCSP_GRAPH_HH 1

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace embedcsp
{
    using Vertex = int;

    /// An undirected edge, always stored with u < v.
    struct Edge
    {
        Vertex u, v;

        auto operator<=> (const Edge &) const = default;
    };

    /**
     * Simple undirected graph on vertices 0..n-1.
     *
     * Immutable once built. Adjacency lists are kept sorted, and the edge
     * list is sorted lexicographically, so every traversal is deterministic.
     */
    class Graph
    {
        private:
            int _size = 0;
            std::vector<Edge> _edges;
            std::vector<std::vector<Vertex>> _adjacency;
            std::vector<std::vector<int>> _incident;

        public:
            Graph() = default;
            explicit Graph(int n);

            /// Throws InputError on self-loops, duplicates or out-of-range endpoints.
            static auto from_edges(int n, const std::vector<std::pair<Vertex, Vertex>> & edges) -> Graph;

            auto size() const -> int { return _size; }
            auto edge_count() const -> int { return int(_edges.size()); }
            auto edges() const -> const std::vector<Edge> & { return _edges; }
            auto edge(int id) const -> const Edge & { return _edges[id]; }

            auto neighbours(Vertex v) const -> std::span<const Vertex> { return _adjacency[v]; }

            /// Edge ids incident to v, parallel to neighbours(v).
            auto incident_edges(Vertex v) const -> std::span<const int> { return _incident[v]; }

            auto degree(Vertex v) const -> int { return int(_adjacency[v].size()); }
            auto max_degree() const -> int;
            auto is_regular(int d) const -> bool;
            auto adjacent(Vertex u, Vertex v) const -> bool;
            auto edge_index(Vertex u, Vertex v) const -> std::optional<int>;

            auto operator== (const Graph & other) const -> bool { return _size == other._size && _edges == other._edges; }
    };

    enum class Side
    {
        Left,
        Right
    };

    struct Bipartition
    {
        std::vector<Side> side;

        auto balanced() const -> bool;
        auto valid_for(const Graph &) const -> bool;
        auto count(Side) const -> int;
    };

    struct MultiEdge
    {
        Vertex u, v;
        int id;

        auto operator<=> (const MultiEdge &) const = default;
    };

    /// Undirected multigraph whose edges carry caller-chosen unique ids.
    class Multigraph
    {
        private:
            int _size = 0;
            std::vector<MultiEdge> _edges;

        public:
            Multigraph() = default;

            /// Throws InputError on self-loops, repeated ids or out-of-range endpoints.
            Multigraph(int n, std::vector<MultiEdge> edges);

            auto size() const -> int { return _size; }
            auto edges() const -> const std::vector<MultiEdge> & { return _edges; }
            auto degree(Vertex v) const -> int;
            auto max_degree() const -> int;
    };

    struct Path
    {
        std::vector<Vertex> vertices;

        auto length() const -> int { return int(vertices.size()) - 1; }
        auto front() const -> Vertex { return vertices.front(); }
        auto back() const -> Vertex { return vertices.back(); }

        auto operator== (const Path &) const -> bool = default;
    };

    auto is_valid_path(const Graph &, const Path &) -> bool;

    auto is_bipartite(const Graph &) -> std::optional<Bipartition>;

    /// A shortest odd cycle as a closed vertex sequence (first vertex not repeated), if any.
    auto min_odd_cycle(const Graph &) -> std::optional<Path>;

    /// Bipartite double cover: vertex i and its copy i + n, with i ~ j + n iff i ~ j.
    auto double_cover(const Graph &) -> Graph;

    /// Greedy proper edge colouring; returns at most 2 * max_degree - 1 matchings of edge ids.
    auto matching_decomposition(const Multigraph &) -> std::vector<std::vector<int>>;

    /**
     * Minimum weight path from s to t, weights indexed by edge id.
     *
     * Among minimum weight paths the one with fewest edges is chosen, and
     * remaining ties go to the lexicographically smallest vertex sequence.
     */
    auto shortest_path(const Graph &, Vertex s, Vertex t, std::span<const double> weights) -> std::optional<Path>;

    auto connected_components(const Graph &) -> std::vector<int>;
    auto is_connected(const Graph &) -> bool;

    /// Whether the subgraph induced by the given vertex set is connected (empty sets are not).
    auto induces_connected(const Graph &, std::span<const Vertex> vertices) -> bool;

    auto complete_graph(int n) -> Graph;
    auto cycle_graph(int n) -> Graph;
    /// Complete tripartite graph with parts of size 2.
    auto octahedron() -> Graph;
    auto erdos_renyi(int n, double p, std::uint64_t seed) -> Graph;
}

#endif
