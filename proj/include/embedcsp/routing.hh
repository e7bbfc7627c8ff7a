#ifndef EMBEDCSP_ROUTING_HH
#define EMBEDCSP_ROUTING_HH 1

#include <embedcsp/expander.hh>
#include <embedcsp/graph.hh>

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace embedcsp
{
    /// Source/target pairs whose endpoints are pairwise distinct host vertices.
    struct DemandSet
    {
        std::vector<std::pair<Vertex, Vertex>> pairs;

        /// Throws InputError unless every endpoint is in range and used at most once.
        auto validate(int host_size) const -> void;
    };

    struct RoutingParams
    {
        double beta = 1.0;
        int sweeps = 20;
        double c_cong = 8.0;
        double c_len = 8.0;
    };

    struct CongestionProfile
    {
        std::vector<int> edge;
        std::vector<int> vertex;

        auto max_edge() const -> int;
        auto max_vertex() const -> int;
        auto operator== (const CongestionProfile &) const -> bool = default;
    };

    struct RoutingSolution
    {
        std::vector<Path> paths;
        CongestionProfile congestion;
        std::uint64_t host_signature = 0;

        int max_edge_congestion = 0;
        int max_path_length = 0;
        double congestion_target = 0.0;
        double length_target = 0.0;
        bool met_targets = false;
        int sweeps_run = 0;
    };

    /// Fingerprint of a host's vertex count and edge list.
    auto host_signature(const Graph &) -> std::uint64_t;

    /// Congestion of a path set recomputed from scratch.
    auto congestion_of(const Graph &, std::span<const Path>) -> CongestionProfile;

    /**
     * Route every demand through h by penalised shortest paths.
     *
     * Edge weights are exp(beta * load), where load counts paths already on
     * the edge plus base_load (congestion left by earlier routings on the
     * same host). After the initial pass, up to params.sweeps rerouting
     * sweeps move paths off the most loaded edges; the best solution seen is
     * kept. Targets c * log2(k) / alpha are checked and reported, never
     * enforced by dropping demands.
     */
    auto route_matching(const Graph & h, double alpha, const DemandSet & demands, std::uint64_t seed,
            const RoutingParams & params = {}, std::span<const int> base_load = {}) -> RoutingSolution;

    auto route_matching(const CertifiedExpander & h, const DemandSet & demands, std::uint64_t seed,
            const RoutingParams & params = {}, std::span<const int> base_load = {}) -> RoutingSolution;

    /// Pointwise sum of the congestion profiles of solutions routed on h.
    auto accumulate_congestion(std::span<const RoutingSolution> solutions, const Graph & h) -> CongestionProfile;
}

#endif
