#ifndef EMBEDCSP_EMBEDDING_HH
#define EMBEDCSP_EMBEDDING_HH 1

#include <embedcsp/expander.hh>
#include <embedcsp/graph.hh>
#include <embedcsp/routing.hh>

#include <cstdint>
#include <string>
#include <vector>

namespace embedcsp
{
    /**
     * Maps each source vertex v to a nonempty connected set psi[v] of host
     * vertices containing anchor[v]. Each psi[v] is kept sorted.
     */
    struct ConnectedEmbedding
    {
        Graph host;
        std::vector<Vertex> anchor;
        std::vector<std::vector<Vertex>> psi;

        auto operator== (const ConnectedEmbedding &) const -> bool = default;
    };

    struct DepthReport
    {
        int depth = 0;
        std::vector<int> per_vertex;
        double bound = 0.0;

        auto operator== (const DepthReport &) const -> bool = default;
    };

    /// Z * (1 + (|V| + |E|) / k) * log2 k.
    auto depth_bound(int source_vertices, int source_edges, int k, double z) -> double;

    /// depth / ((1 + (|V| + |E|) / k) * log2 k), the smallest Z that would have sufficed.
    auto fitted_z(int depth, int source_vertices, int source_edges, int k) -> double;

    /// Host vertex count per psi-membership.
    auto depth_report(const ConnectedEmbedding &, int source_edges, double z) -> DepthReport;

    /// Anchors from a seeded shuffle, dealt round robin so every class has at most ceil(|V| / k) members.
    auto balanced_map(const Graph & source, int k, std::uint64_t seed) -> std::vector<Vertex>;

    struct DemandGraph
    {
        /// One edge per source edge with distinct anchors, carrying the source edge id.
        Multigraph graph;
        /// Ids of source edges whose endpoints share an anchor.
        std::vector<int> intra_class;
    };

    auto demand_graph(const Graph & source, const std::vector<Vertex> & anchor, int k) -> DemandGraph;

    struct EmbeddingParams
    {
        double z = 64.0;
        ExpanderParams expander;
        RoutingParams routing;
        /// Later matchings are routed against the congestion left by earlier ones.
        bool accumulate = true;
    };

    struct EmbeddingResult
    {
        CertifiedExpander host;
        ConnectedEmbedding embedding;
        DepthReport depth;

        /// Routed path per source edge id; empty for intra-class edges.
        std::vector<Path> edge_paths;
        int matchings = 0;
        int max_edge_congestion = 0;
        bool routing_met_targets = true;
        double fitted_z = 0.0;
        bool within_bound = false;
    };

    auto embed(const Graph & source, int k, std::uint64_t seed, const EmbeddingParams & = {}) -> EmbeddingResult;

    struct Violation
    {
        enum class Kind
        {
            Shape,
            Empty,
            OutOfRange,
            AnchorMissing,
            Disconnected,
            NotTouching
        };

        Kind kind;
        /// Offending source vertex, or -1.
        Vertex vertex = -1;
        /// Offending source edge id, or -1.
        int edge = -1;
        std::string message;
    };

    struct VerificationReport
    {
        std::vector<Violation> violations;
        DepthReport depth;

        auto ok() const -> bool { return violations.empty(); }
    };

    /// Checks every embedding invariant and recomputes the depth from scratch.
    auto verify_embedding(const Graph & source, const ConnectedEmbedding &, double z = 64.0) -> VerificationReport;
}

#endif
