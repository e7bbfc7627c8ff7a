#include <embedcsp/csp.hh>
#include <embedcsp/errors.hh>

#include <algorithm>
#include <limits>
#include <string>

using std::function;
using std::optional;
using std::pair;
using std::string;
using std::uint64_t;
using std::vector;

namespace embedcsp
{
    using std::to_string;

    struct Relation::Imp
    {
        Value low_size = 0, high_size = 0;
        bool is_explicit = false;

        // explicit: sorted (low, high) pairs and sorted (high, low) pairs
        vector<pair<Value, Value>> by_low, by_high;

        Predicate predicate;
        Supports low_supports, high_supports;
    };

    Relation::Relation(std::shared_ptr<const Imp> imp) :
        _imp(std::move(imp))
    {
    }

    auto Relation::explicit_pairs(Value low_size, Value high_size, vector<pair<Value, Value>> pairs) -> Relation
    {
        if (low_size < 1 || high_size < 1)
            throw InputError("relation alphabets must be nonempty");
        auto imp = std::make_shared<Imp>();
        imp->low_size = low_size;
        imp->high_size = high_size;
        imp->is_explicit = true;
        for (auto [a, b] : pairs)
            if (a < 0 || b < 0 || a >= low_size || b >= high_size)
                throw InputError("relation pair (" + to_string(a) + ", " + to_string(b) + ") outside its alphabets");
        std::sort(pairs.begin(), pairs.end());
        if (std::adjacent_find(pairs.begin(), pairs.end()) != pairs.end())
            throw InputError("relation contains a duplicate pair");
        imp->by_high.reserve(pairs.size());
        for (auto [a, b] : pairs)
            imp->by_high.emplace_back(b, a);
        std::sort(imp->by_high.begin(), imp->by_high.end());
        imp->by_low = std::move(pairs);
        return Relation(std::move(imp));
    }

    auto Relation::intensional(Value low_size, Value high_size, Predicate contains, Supports low_supports, Supports high_supports) -> Relation
    {
        if (low_size < 1 || high_size < 1)
            throw InputError("relation alphabets must be nonempty");
        if (! contains)
            throw InputError("intensional relation needs a predicate");
        auto imp = std::make_shared<Imp>();
        imp->low_size = low_size;
        imp->high_size = high_size;
        imp->predicate = std::move(contains);
        imp->low_supports = std::move(low_supports);
        imp->high_supports = std::move(high_supports);
        return Relation(std::move(imp));
    }

    auto Relation::full(Value low_size, Value high_size) -> Relation
    {
        vector<pair<Value, Value>> pairs;
        for (Value a = 0 ; a < low_size ; ++a)
            for (Value b = 0 ; b < high_size ; ++b)
                pairs.emplace_back(a, b);
        return explicit_pairs(low_size, high_size, std::move(pairs));
    }

    auto Relation::inequality(Value q) -> Relation
    {
        vector<pair<Value, Value>> pairs;
        for (Value a = 0 ; a < q ; ++a)
            for (Value b = 0 ; b < q ; ++b)
                if (a != b)
                    pairs.emplace_back(a, b);
        return explicit_pairs(q, q, std::move(pairs));
    }

    auto Relation::equality(Value q) -> Relation
    {
        vector<pair<Value, Value>> pairs;
        for (Value a = 0 ; a < q ; ++a)
            pairs.emplace_back(a, a);
        return explicit_pairs(q, q, std::move(pairs));
    }

    auto Relation::low_size() const -> Value
    {
        return _imp->low_size;
    }

    auto Relation::high_size() const -> Value
    {
        return _imp->high_size;
    }

    auto Relation::is_explicit() const -> bool
    {
        return _imp->is_explicit;
    }

    auto Relation::contains(Value low, Value high) const -> bool
    {
        if (low < 0 || high < 0 || low >= _imp->low_size || high >= _imp->high_size)
            return false;
        if (_imp->is_explicit)
            return std::binary_search(_imp->by_low.begin(), _imp->by_low.end(), pair{ low, high });
        return _imp->predicate(low, high);
    }

    auto Relation::supports_of_low(Value low, vector<Value> & out) const -> void
    {
        out.clear();
        if (_imp->is_explicit) {
            auto it = std::lower_bound(_imp->by_low.begin(), _imp->by_low.end(), pair{ low, std::numeric_limits<Value>::min() });
            for ( ; it != _imp->by_low.end() && it->first == low ; ++it)
                out.push_back(it->second);
        }
        else if (_imp->low_supports)
            _imp->low_supports(low, out);
        else
            for (Value b = 0 ; b < _imp->high_size ; ++b)
                if (_imp->predicate(low, b))
                    out.push_back(b);
    }

    auto Relation::supports_of_high(Value high, vector<Value> & out) const -> void
    {
        out.clear();
        if (_imp->is_explicit) {
            auto it = std::lower_bound(_imp->by_high.begin(), _imp->by_high.end(), pair{ high, std::numeric_limits<Value>::min() });
            for ( ; it != _imp->by_high.end() && it->first == high ; ++it)
                out.push_back(it->second);
        }
        else if (_imp->high_supports)
            _imp->high_supports(high, out);
        else
            for (Value a = 0 ; a < _imp->low_size ; ++a)
                if (_imp->predicate(a, high))
                    out.push_back(a);
    }

    auto Relation::pairs(uint64_t limit) const -> vector<pair<Value, Value>>
    {
        if (_imp->is_explicit) {
            if (_imp->by_low.size() > limit)
                throw BudgetExceeded("relation has " + to_string(_imp->by_low.size()) + " pairs, above the limit of " + to_string(limit));
            return _imp->by_low;
        }

        vector<pair<Value, Value>> result;
        vector<Value> partners;
        for (Value a = 0 ; a < _imp->low_size ; ++a) {
            supports_of_low(a, partners);
            for (auto b : partners) {
                if (result.size() >= limit)
                    throw BudgetExceeded("intensional relation expands beyond the limit of " + to_string(limit) + " pairs");
                result.emplace_back(a, b);
            }
        }
        return result;
    }

    auto Relation::materialize(uint64_t limit) const -> Relation
    {
        if (_imp->is_explicit)
            return *this;
        return explicit_pairs(_imp->low_size, _imp->high_size, pairs(limit));
    }

    CspInstance::CspInstance(Graph graph, vector<Value> alphabet_sizes, vector<Relation> constraints) :
        _graph(std::move(graph)),
        _alphabet_sizes(std::move(alphabet_sizes)),
        _constraints(std::move(constraints))
    {
        if (int(_alphabet_sizes.size()) != _graph.size())
            throw InputError("need one alphabet size per variable");
        for (Vertex v = 0 ; v < _graph.size() ; ++v)
            if (_alphabet_sizes[v] < 1)
                throw InputError("alphabet of variable " + to_string(v) + " is empty");
        if (int(_constraints.size()) != _graph.edge_count())
            throw InputError("need exactly one constraint per edge");
        for (int id = 0 ; id < _graph.edge_count() ; ++id) {
            auto [u, v] = _graph.edge(id);
            if (_constraints[id].low_size() != _alphabet_sizes[u] || _constraints[id].high_size() != _alphabet_sizes[v])
                throw InputError("constraint on edge (" + to_string(u) + ", " + to_string(v) + ") does not match the endpoint alphabets");
        }
    }

    auto CspInstance::uniform_alphabet() const -> optional<Value>
    {
        if (_alphabet_sizes.empty())
            return std::nullopt;
        auto q = _alphabet_sizes.front();
        if (std::all_of(_alphabet_sizes.begin(), _alphabet_sizes.end(), [q] (Value s) { return s == q; }))
            return q;
        return std::nullopt;
    }

    auto is_satisfied(const CspInstance & inst, const Assignment & a) -> bool
    {
        if (int(a.values.size()) != inst.size())
            throw InputError("assignment has " + to_string(a.values.size()) + " values for " + to_string(inst.size()) + " variables");
        for (Vertex v = 0 ; v < inst.size() ; ++v)
            if (a.values[v] < 0 || a.values[v] >= inst.alphabet_size(v))
                throw InputError("value " + to_string(a.values[v]) + " of variable " + to_string(v) + " is outside its alphabet");
        for (int id = 0 ; id < inst.graph().edge_count() ; ++id) {
            auto [u, v] = inst.graph().edge(id);
            if (! inst.constraint(id).contains(a.values[u], a.values[v]))
                return false;
        }
        return true;
    }

    namespace
    {
        struct Earlier
        {
            Vertex other;
            int edge;
            bool self_is_low;
        };

        /**
         * Depth-first search over one set of variables in a fixed order. Each
         * variable's candidates come from the supports of its first already
         * assigned neighbour (or its whole alphabet) and are then filtered by
         * every other assigned neighbour.
         */
        class Searcher
        {
            private:
                const CspInstance & _inst;
                uint64_t _budget;
                uint64_t & _nodes;

                vector<Vertex> _order;
                vector<vector<Earlier>> _earlier;
                vector<optional<Value>> _fixed;
                optional<Value> _bound;
                int _bound_position = -1;

                vector<Value> _values;
                vector<vector<Value>> _buffers;

                auto charge(uint64_t n) -> void
                {
                    _nodes += n;
                    if (_nodes > _budget)
                        throw BudgetExceeded("exhaustive search exceeded its budget of " + to_string(_budget) + " nodes");
                }

                auto consistent(int position, Value value, size_t skip) const -> bool
                {
                    auto & earlier = _earlier[position];
                    for (size_t i = 0 ; i < earlier.size() ; ++i) {
                        if (i == skip)
                            continue;
                        auto & e = earlier[i];
                        auto & r = _inst.constraint(e.edge);
                        bool ok = e.self_is_low ? r.contains(value, _values[e.other]) : r.contains(_values[e.other], value);
                        if (! ok)
                            return false;
                    }
                    return true;
                }

                auto recurse(int position, const function<bool ()> & on_solution) -> bool
                {
                    if (position == int(_order.size()))
                        return on_solution();

                    auto v = _order[position];
                    auto & candidates = _buffers[position];
                    size_t skip = std::numeric_limits<size_t>::max();
                    candidates.clear();
                    if (_fixed[v])
                        candidates.push_back(*_fixed[v]);
                    else if (! _earlier[position].empty()) {
                        auto & e = _earlier[position][0];
                        auto & r = _inst.constraint(e.edge);
                        if (e.self_is_low)
                            r.supports_of_high(_values[e.other], candidates);
                        else
                            r.supports_of_low(_values[e.other], candidates);
                        skip = 0;
                    }
                    else {
                        charge(uint64_t(_inst.alphabet_size(v)));
                        for (Value x = 0 ; x < _inst.alphabet_size(v) ; ++x)
                            candidates.push_back(x);
                    }

                    charge(candidates.size() + 1);
                    for (auto x : candidates) {
                        if (position == _bound_position && x >= *_bound)
                            break;
                        if (! consistent(position, x, skip))
                            continue;
                        _values[v] = x;
                        if (recurse(position + 1, on_solution))
                            return true;
                    }
                    return false;
                }

            public:
                /// Variables in `fixed` come first, then `probe` (restricted below `bound`), then the rest greedily.
                Searcher(const CspInstance & inst, uint64_t budget, uint64_t & nodes, const vector<Vertex> & vertices,
                        const vector<optional<Value>> & fixed, optional<Vertex> probe = std::nullopt, optional<Value> bound = std::nullopt) :
                    _inst(inst),
                    _budget(budget),
                    _nodes(nodes),
                    _fixed(fixed),
                    _bound(bound),
                    _values(inst.size(), 0)
                {
                    auto & g = inst.graph();
                    vector<char> placed(g.size(), 0), wanted(g.size(), 0);
                    for (auto v : vertices)
                        wanted[v] = 1;
                    vector<int> placed_neighbours(g.size(), 0);

                    auto place = [&] (Vertex v) {
                        placed[v] = 1;
                        _order.push_back(v);
                        for (auto w : g.neighbours(v))
                            ++placed_neighbours[w];
                    };

                    for (auto v : vertices)
                        if (fixed[v])
                            place(v);
                    if (probe) {
                        _bound_position = int(_order.size());
                        place(*probe);
                    }
                    while (_order.size() < vertices.size()) {
                        Vertex best = -1;
                        for (auto v : vertices) {
                            if (placed[v])
                                continue;
                            if (best == -1 || placed_neighbours[v] > placed_neighbours[best]
                                    || (placed_neighbours[v] == placed_neighbours[best] && inst.alphabet_size(v) < inst.alphabet_size(best)))
                                best = v;
                        }
                        place(best);
                    }

                    vector<int> position(g.size(), -1);
                    for (int i = 0 ; i < int(_order.size()) ; ++i)
                        position[_order[i]] = i;
                    _earlier.resize(_order.size());
                    for (int i = 0 ; i < int(_order.size()) ; ++i) {
                        auto v = _order[i];
                        auto nbrs = g.neighbours(v);
                        auto ids = g.incident_edges(v);
                        for (size_t j = 0 ; j < nbrs.size() ; ++j) {
                            auto w = nbrs[j];
                            if (wanted[w] && position[w] < i)
                                _earlier[i].push_back(Earlier{ w, ids[j], v < w });
                        }
                    }
                    _buffers.resize(_order.size());
                }

                auto run(const function<bool ()> & on_solution) -> bool
                {
                    return recurse(0, on_solution);
                }

                auto values() const -> const vector<Value> & { return _values; }
        };

        auto components_of(const Graph & g) -> vector<vector<Vertex>>
        {
            auto c = connected_components(g);
            int count = c.empty() ? 0 : *std::max_element(c.begin(), c.end()) + 1;
            vector<vector<Vertex>> result(count);
            for (Vertex v = 0 ; v < g.size() ; ++v)
                result[c[v]].push_back(v);
            return result;
        }

        auto find_in(const CspInstance & inst, uint64_t budget, uint64_t & nodes, const vector<Vertex> & vertices,
                const vector<optional<Value>> & fixed, optional<Vertex> probe, optional<Value> bound) -> optional<vector<Value>>
        {
            Searcher search(inst, budget, nodes, vertices, fixed, probe, bound);
            if (search.run([] { return true; }))
                return search.values();
            return std::nullopt;
        }
    }

    auto find_any_solution(const CspInstance & inst, const SolverParams & params) -> optional<Assignment>
    {
        uint64_t nodes = 0;
        Assignment result{ vector<Value>(inst.size(), 0) };
        vector<optional<Value>> none(inst.size());
        for (auto & component : components_of(inst.graph())) {
            auto found = find_in(inst, params.node_budget, nodes, component, none, std::nullopt, std::nullopt);
            if (! found)
                return std::nullopt;
            for (auto v : component)
                result.values[v] = (*found)[v];
        }
        return result;
    }

    auto solve_bruteforce(const CspInstance & inst, const SolverParams & params) -> optional<Assignment>
    {
        // Components are independent, so the overall lexicographic minimum is the
        // per-component minimum. Within a component, starting from any solution,
        // fix variables in id order to the least value that still extends.
        uint64_t nodes = 0;
        Assignment result{ vector<Value>(inst.size(), 0) };
        for (auto & component : components_of(inst.graph())) {
            vector<optional<Value>> fixed(inst.size());
            auto current = find_in(inst, params.node_budget, nodes, component, fixed, std::nullopt, std::nullopt);
            if (! current)
                return std::nullopt;
            for (auto v : component) {
                if ((*current)[v] > 0) {
                    auto better = find_in(inst, params.node_budget, nodes, component, fixed, v, (*current)[v]);
                    if (better)
                        current = std::move(better);
                }
                fixed[v] = (*current)[v];
            }
            for (auto v : component)
                result.values[v] = (*current)[v];
        }
        return result;
    }

    auto count_satisfying(const CspInstance & inst, const SolverParams & params) -> uint64_t
    {
        uint64_t nodes = 0, total = 1;
        vector<optional<Value>> none(inst.size());
        for (auto & component : components_of(inst.graph())) {
            uint64_t here = 0;
            if (component.size() == 1)
                here = uint64_t(inst.alphabet_size(component.front()));
            else {
                Searcher search(inst, params.node_budget, nodes, component, none);
                search.run([&] { ++here; return false; });
            }
            if (here == 0)
                return 0;
            if (total > std::numeric_limits<uint64_t>::max() / here)
                throw BudgetExceeded("solution count overflows 64 bits");
            total *= here;
        }
        return total;
    }

    auto for_each_solution(const CspInstance & inst, const function<void (const Assignment &)> & callback, const SolverParams & params) -> void
    {
        uint64_t nodes = 0;
        vector<Vertex> all(inst.size());
        for (Vertex v = 0 ; v < inst.size() ; ++v)
            all[v] = v;
        vector<optional<Value>> none(inst.size());
        Searcher search(inst, params.node_budget, nodes, all, none);
        Assignment a;
        search.run([&] {
            a.values = search.values();
            callback(a);
            return false;
        });
    }
}
