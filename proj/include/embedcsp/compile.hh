#ifndef EMBEDCSP_COMPILE_HH
#define EMBEDCSP_COMPILE_HH 1

#include <embedcsp/csp.hh>
#include <embedcsp/embedding.hh>
#include <embedcsp/graph.hh>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace embedcsp
{
    /**
     * Per host vertex x, the bag of source vertices whose image contains x,
     * in ascending source id (the position of v in bags[x] is its slot in
     * the tuple at x). Per host edge {x, y}, the shared source vertices and
     * the source edges with one endpoint in each bag.
     */
    struct BagIndex
    {
        std::vector<std::vector<Vertex>> bags;
        /// Source edge ids with both endpoints in bags[x].
        std::vector<std::vector<int>> internal_edges;
        /// Indexed by host edge id.
        std::vector<std::vector<Vertex>> shared;
        /// Indexed by host edge id.
        std::vector<std::vector<int>> crossing_edges;

        auto slot(Vertex x, Vertex v) const -> std::optional<int>;
        auto width(Vertex x) const -> int { return int(bags[x].size()); }
        auto max_width() const -> int;
    };

    /// Refuses (InputError) embeddings that fail verification or leave a source edge uncovered.
    auto build_bag_index(const Graph & source, const ConnectedEmbedding &) -> BagIndex;

    /**
     * Little-endian mixed-radix ranking of tuples: slot 0 is least
     * significant, and slot i has radix radices[i].
     */
    class TupleCodec
    {
        private:
            std::vector<Value> _radices;
            std::vector<Value> _weights;
            Value _size = 1;

        public:
            TupleCodec() = default;
            explicit TupleCodec(std::vector<Value> radices);

            auto slots() const -> int { return int(_radices.size()); }
            auto size() const -> Value { return _size; }
            auto radices() const -> const std::vector<Value> & { return _radices; }
            auto rank(const std::vector<Value> & tuple) const -> Value;
            auto unrank(Value r) const -> std::vector<Value>;
            auto digit(Value r, int slot) const -> Value { return (r / _weights[slot]) % _radices[slot]; }
    };

    struct CompileParams
    {
        /// Check each bag-internal source edge on one incident host edge only.
        bool deduplicate_internal = false;
        /// Materialise a relation explicitly when its full pair space is at most this size.
        std::uint64_t materialize_limit = 1'000'000;
        /// When set, every tuple has max bag width slots, padding slots ranging freely.
        bool padded = false;
    };

    struct CompiledInstance
    {
        CspInstance phi;
        BagIndex index;
        std::vector<TupleCodec> codecs;

        CspInstance gamma;
        ConnectedEmbedding embedding;
        bool padded = false;
    };

    /// Compiles gamma onto the host along the embedding so that both are satisfiable together.
    auto compile(const CspInstance & gamma, const Graph & host, const ConnectedEmbedding &, const CompileParams & = {}) -> CompiledInstance;

    /// Tuple at x lists sigma over bags[x] in slot order (padding slots take `filler`).
    auto encode_assignment(const Assignment & sigma, const CompiledInstance &, Value filler = 0) -> Assignment;

    class DecodeError : public std::runtime_error
    {
        private:
            Vertex _vertex, _first_host, _second_host;

        public:
            DecodeError(Vertex v, Vertex first_host, Vertex second_host);

            auto vertex() const -> Vertex { return _vertex; }
            auto first_host() const -> Vertex { return _first_host; }
            auto second_host() const -> Vertex { return _second_host; }
    };

    /// Reads every representative of every source vertex; throws DecodeError when they disagree.
    auto decode_assignment(const Assignment & sigma_tilde, const CompiledInstance &) -> Assignment;

    struct PipelineParams
    {
        EmbeddingParams embedding;
        CompileParams compile;
    };

    struct PipelineMetrics
    {
        int host_vertices = 0;
        int host_edges = 0;
        int depth = 0;
        double depth_bound = 0.0;
        double fitted_z = 0.0;
        int max_edge_congestion = 0;
        Value max_alphabet = 0;
        /// log2 of the largest compiled alphabet against log2 |Sigma|^bound.
        double log2_max_alphabet = 0.0;
        double log2_alphabet_bound = 0.0;
        bool alphabet_within_bound = false;
        double embed_ms = 0.0;
        double compile_ms = 0.0;
    };

    struct PipelineResult
    {
        EmbeddingResult embedding;
        CompiledInstance compiled;
        PipelineMetrics metrics;
    };

    /// Embed gamma's constraint graph into a k-vertex expander, then compile.
    auto pipeline(const CspInstance & gamma, int k, std::uint64_t seed, const PipelineParams & = {}) -> PipelineResult;

    /// Largest even k in [6, k_max] whose depth bound is at most the target, if any.
    auto host_size_for_depth(int source_vertices, int source_edges, double z, double target_depth, int k_max) -> std::optional<int>;
}

#endif
