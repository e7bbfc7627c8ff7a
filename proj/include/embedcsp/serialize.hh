#ifndef EMBEDCSP_SERIALIZE_HH
#define EMBEDCSP_SERIALIZE_HH 1

#include <embedcsp/compile.hh>
#include <embedcsp/csp.hh>
#include <embedcsp/embedding.hh>
#include <embedcsp/expander.hh>
#include <embedcsp/graph.hh>
#include <embedcsp/routing.hh>

#include <json.hpp>

#include <cstdint>
#include <string>

namespace embedcsp
{
    using json = nlohmann::ordered_json;

    constexpr int format_version = 1;

    /// Two-space indented with a trailing newline; identical inputs give identical bytes.
    auto dump(const json &) -> std::string;

    /// Throws InputError naming the file on I/O or parse failure.
    auto read_json_file(const std::string & path) -> json;
    auto write_text_file(const std::string & path, const std::string & contents) -> void;

    auto graph_to_json(const Graph &) -> json;
    auto graph_from_json(const json &) -> Graph;

    auto multigraph_to_json(const Multigraph &) -> json;
    auto multigraph_from_json(const json &) -> Multigraph;

    /// Intensional relations are expanded; more than `limit` pairs in any relation is a BudgetExceeded error.
    auto csp_to_json(const CspInstance &, std::uint64_t limit = 1'000'000) -> json;
    auto csp_from_json(const json &) -> CspInstance;

    auto assignment_to_json(const Assignment &) -> json;
    auto assignment_from_json(const json &) -> Assignment;

    auto demands_to_json(const DemandSet &) -> json;
    auto demands_from_json(const json &) -> DemandSet;

    auto routing_to_json(const RoutingSolution &) -> json;

    auto certificate_to_json(const CertifiedExpander &) -> json;

    auto embedding_to_json(const ConnectedEmbedding &, const DepthReport &) -> json;
    auto embedding_from_json(const json &) -> ConnectedEmbedding;

    /// The compiled instance as explicit relations when it fits the budget, always with the (gamma, embedding) recipe.
    auto compiled_to_json(const CompiledInstance &, std::uint64_t limit = 1'000'000) -> json;
    /// Rebuilds the compiled instance from its recipe.
    auto compiled_from_json(const json &) -> CompiledInstance;
}

#endif
