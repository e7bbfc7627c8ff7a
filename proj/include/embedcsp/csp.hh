#ifndef EMBEDCSP_CSP_HH
#define EMBEDCSP_CSP_HH 1

#include <embedcsp/graph.hh>

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace embedcsp
{
    using Value = std::int64_t;

    /**
     * A binary relation between the values of the lower-numbered endpoint
     * ("low") and the higher-numbered endpoint ("high") of a constraint edge.
     *
     * Explicit relations store their pairs; intensional ones hold a pure
     * membership predicate and, optionally, support enumerators that list
     * every partner of a given value faster than scanning the other alphabet.
     */
    class Relation
    {
        public:
            using Predicate = std::function<bool (Value, Value)>;
            using Supports = std::function<void (Value, std::vector<Value> &)>;

        private:
            struct Imp;
            std::shared_ptr<const Imp> _imp;

            explicit Relation(std::shared_ptr<const Imp>);

        public:
            /// Throws InputError on duplicate or out-of-range pairs.
            static auto explicit_pairs(Value low_size, Value high_size, std::vector<std::pair<Value, Value>> pairs) -> Relation;
            static auto intensional(Value low_size, Value high_size, Predicate contains,
                    Supports low_supports = {}, Supports high_supports = {}) -> Relation;

            static auto full(Value low_size, Value high_size) -> Relation;
            static auto inequality(Value q) -> Relation;
            static auto equality(Value q) -> Relation;

            auto low_size() const -> Value;
            auto high_size() const -> Value;
            auto is_explicit() const -> bool;

            auto contains(Value low, Value high) const -> bool;

            /// Every high value b with (low, b) in the relation, ascending.
            auto supports_of_low(Value low, std::vector<Value> & out) const -> void;
            /// Every low value a with (a, high) in the relation, ascending.
            auto supports_of_high(Value high, std::vector<Value> & out) const -> void;

            /// Sorted pair list; intensional relations are expanded, refusing beyond the limit.
            auto pairs(std::uint64_t limit = 1'000'000) const -> std::vector<std::pair<Value, Value>>;
            auto materialize(std::uint64_t limit = 1'000'000) const -> Relation;
    };

    /**
     * A 2-CSP: a constraint graph, an alphabet size per variable, and one
     * relation per edge (indexed by edge id, oriented low to high vertex).
     */
    class CspInstance
    {
        private:
            Graph _graph;
            std::vector<Value> _alphabet_sizes;
            std::vector<Relation> _constraints;

        public:
            CspInstance() = default;

            /// Throws InputError if relations and alphabets disagree.
            CspInstance(Graph, std::vector<Value> alphabet_sizes, std::vector<Relation> constraints);

            auto graph() const -> const Graph & { return _graph; }
            auto size() const -> int { return _graph.size(); }
            auto alphabet_size(Vertex v) const -> Value { return _alphabet_sizes[v]; }
            auto alphabet_sizes() const -> const std::vector<Value> & { return _alphabet_sizes; }
            auto constraint(int edge_id) const -> const Relation & { return _constraints[edge_id]; }
            auto constraints() const -> const std::vector<Relation> & { return _constraints; }
            auto uniform_alphabet() const -> std::optional<Value>;
    };

    struct Assignment
    {
        std::vector<Value> values;

        auto operator== (const Assignment &) const -> bool = default;
        auto operator<=> (const Assignment &) const = default;
    };

    /// Throws InputError on a wrongly sized or out-of-range assignment.
    auto is_satisfied(const CspInstance &, const Assignment &) -> bool;

    struct SolverParams
    {
        /// Candidate values examined across the whole search before refusing.
        std::uint64_t node_budget = 100'000'000;
    };

    /// Lexicographically least satisfying assignment (vertex 0 most significant), if any.
    auto solve_bruteforce(const CspInstance &, const SolverParams & = {}) -> std::optional<Assignment>;

    /// Some satisfying assignment, found without the lexicographic minimisation.
    auto find_any_solution(const CspInstance &, const SolverParams & = {}) -> std::optional<Assignment>;

    auto count_satisfying(const CspInstance &, const SolverParams & = {}) -> std::uint64_t;

    /// Calls back for every satisfying assignment; intended for small instances.
    auto for_each_solution(const CspInstance &, const std::function<void (const Assignment &)> &, const SolverParams & = {}) -> void;

    auto random_instance(int n, double edge_probability, Value alphabet_size, double pair_density, std::uint64_t seed) -> CspInstance;

    /// Uniform alphabet q, inequality on every edge.
    auto coloring_instance(const Graph &, Value q) -> CspInstance;

    struct PaddedColoring
    {
        CspInstance instance;
        /// Edges added to reach 4-regularity; their relations accept every pair.
        std::vector<Edge> dummy_edges;
    };

    /// Colouring instance on g padded to a 4-regular constraint graph with all-accepting constraints.
    auto four_regular_coloring_instance(const Graph &, Value q) -> PaddedColoring;

    /// k variables over V(g), complete constraint graph, every constraint the adjacency of g.
    auto clique_instance(const Graph &, int k) -> CspInstance;

    struct Regularized
    {
        CspInstance instance;
        /// Original variable of each output variable, or -1 for a gadget variable.
        std::vector<Vertex> origin;
    };

    /**
     * Replace each variable of degree c by max(c, 3) copies on a cycle of
     * equality constraints, each original constraint moving to one copy per
     * endpoint, giving a 3-regular constraint graph with the same number of
     * solutions.
     *
     * Copies left with degree 2 (from variables of degree 1 or 2) are paired
     * across variables by all-accepting constraints. Any that cannot be
     * paired that way are attached to small gadgets of extra variables whose
     * internal constraints admit only the value 0, so each gadget has exactly
     * one satisfying assignment and the count is unchanged.
     */
    auto regularize(const CspInstance &) -> Regularized;
}

#endif
