#include <embedcsp/csp.hh>
#include <embedcsp/errors.hh>

#include <algorithm>
#include <random>
#include <string>

using std::pair;
using std::uint64_t;
using std::vector;

namespace embedcsp
{
    using std::to_string;

    auto random_instance(int n, double edge_probability, Value alphabet_size, double pair_density, uint64_t seed) -> CspInstance
    {
        if (n < 0 || alphabet_size < 1 || edge_probability < 0.0 || edge_probability > 1.0 || pair_density < 0.0 || pair_density > 1.0)
            throw InputError("random instance parameters out of range");

        std::mt19937_64 rng(seed);
        std::bernoulli_distribution edge_coin(edge_probability), pair_coin(pair_density);
        vector<pair<Vertex, Vertex>> edges;
        for (Vertex u = 0 ; u < n ; ++u)
            for (Vertex v = u + 1 ; v < n ; ++v)
                if (edge_coin(rng))
                    edges.emplace_back(u, v);
        auto g = Graph::from_edges(n, edges);

        vector<Relation> constraints;
        for (int id = 0 ; id < g.edge_count() ; ++id) {
            vector<pair<Value, Value>> pairs;
            for (Value a = 0 ; a < alphabet_size ; ++a)
                for (Value b = 0 ; b < alphabet_size ; ++b)
                    if (pair_coin(rng))
                        pairs.emplace_back(a, b);
            constraints.push_back(Relation::explicit_pairs(alphabet_size, alphabet_size, std::move(pairs)));
        }
        return CspInstance(std::move(g), vector<Value>(n, alphabet_size), std::move(constraints));
    }

    auto coloring_instance(const Graph & g, Value q) -> CspInstance
    {
        if (q < 1)
            throw InputError("colouring needs at least one colour");
        auto neq = Relation::inequality(q);
        return CspInstance(g, vector<Value>(g.size(), q), vector<Relation>(g.edge_count(), neq));
    }

    auto four_regular_coloring_instance(const Graph & g, Value q) -> PaddedColoring
    {
        if (g.max_degree() > 4)
            throw InputError("four-regular padding needs maximum degree at most 4");

        vector<pair<Vertex, Vertex>> edges;
        for (auto [u, v] : g.edges())
            edges.emplace_back(u, v);
        vector<int> degree(g.size());
        vector<vector<char>> adjacent(g.size(), vector<char>(g.size(), 0));
        for (Vertex v = 0 ; v < g.size() ; ++v) {
            degree[v] = g.degree(v);
            for (auto w : g.neighbours(v))
                adjacent[v][w] = 1;
        }

        // greedily join the two least-numbered deficient vertices that are not yet adjacent
        vector<Edge> dummies;
        for (Vertex u = 0 ; u < g.size() ; ++u)
            while (degree[u] < 4) {
                Vertex partner = -1;
                for (Vertex v = u + 1 ; v < g.size() && partner == -1 ; ++v)
                    if (degree[v] < 4 && ! adjacent[u][v])
                        partner = v;
                if (partner == -1)
                    throw InputError("cannot pad vertex " + to_string(u) + " to degree 4 without parallel edges");
                adjacent[u][partner] = adjacent[partner][u] = 1;
                ++degree[u];
                ++degree[partner];
                edges.emplace_back(u, partner);
                dummies.push_back(Edge{ u, partner });
            }

        auto padded = Graph::from_edges(g.size(), edges);
        auto neq = Relation::inequality(q), all = Relation::full(q, q);
        vector<Relation> constraints;
        for (auto e : padded.edges())
            constraints.push_back(std::binary_search(dummies.begin(), dummies.end(), e) ? all : neq);
        return PaddedColoring{ CspInstance(std::move(padded), vector<Value>(g.size(), q), std::move(constraints)), std::move(dummies) };
    }

    auto clique_instance(const Graph & g, int k) -> CspInstance
    {
        if (k < 2)
            throw InputError("clique instance needs k >= 2");
        if (g.size() < 1)
            throw InputError("clique instance needs a nonempty graph");
        vector<pair<Value, Value>> pairs;
        for (auto [u, v] : g.edges()) {
            pairs.emplace_back(u, v);
            pairs.emplace_back(v, u);
        }
        auto adjacency = Relation::explicit_pairs(g.size(), g.size(), std::move(pairs));
        auto constraint_graph = complete_graph(k);
        return CspInstance(constraint_graph, vector<Value>(k, g.size()), vector<Relation>(constraint_graph.edge_count(), adjacency));
    }

    auto regularize(const CspInstance & inst) -> Regularized
    {
        auto q = inst.uniform_alphabet();
        if (! q)
            throw InputError("regularize needs a uniform alphabet");
        auto & g = inst.graph();
        for (Vertex v = 0 ; v < g.size() ; ++v)
            if (g.degree(v) == 0)
                throw InputError("regularize refuses isolated variable " + to_string(v));

        vector<int> offset(g.size() + 1, 0);
        for (Vertex v = 0 ; v < g.size() ; ++v)
            offset[v + 1] = offset[v] + std::max(g.degree(v), 3);
        int copies = offset[g.size()];

        vector<Vertex> origin(copies);
        vector<pair<Vertex, Vertex>> edges;
        vector<Relation> relations;
        auto equal = Relation::equality(*q), all = Relation::full(*q, *q);
        auto only_zero = Relation::explicit_pairs(*q, *q, { { 0, 0 } });

        for (Vertex v = 0 ; v < g.size() ; ++v) {
            int c = offset[v + 1] - offset[v];
            for (int i = 0 ; i < c ; ++i) {
                origin[offset[v] + i] = v;
                edges.emplace_back(offset[v] + i, offset[v] + (i + 1) % c);
                relations.push_back(equal);
            }
        }

        // the i-th incident edge of v (in neighbour order) lands on copy i of v
        for (int id = 0 ; id < g.edge_count() ; ++id) {
            auto [u, v] = g.edge(id);
            auto slot = [&] (Vertex x, int edge) {
                auto ids = g.incident_edges(x);
                return int(std::find(ids.begin(), ids.end(), edge) - ids.begin());
            };
            edges.emplace_back(offset[u] + slot(u, id), offset[v] + slot(v, id));
            relations.push_back(inst.constraint(id));
        }

        vector<Vertex> stubs;
        for (Vertex v = 0 ; v < g.size() ; ++v)
            for (int i = g.degree(v) ; i < 3 ; ++i)
                stubs.push_back(offset[v] + i);

        int next = copies;
        auto add_gadget = [&] (const vector<pair<int, int>> & internal, const vector<pair<Vertex, int>> & attach, int size) {
            for (int i = 0 ; i < size ; ++i)
                origin.push_back(-1);
            for (auto [a, b] : internal) {
                edges.emplace_back(next + a, next + b);
                relations.push_back(only_zero);
            }
            for (auto [stub, slot] : attach) {
                edges.emplace_back(stub, next + slot);
                relations.push_back(all);
            }
            next += size;
        };

        // one stub: five vertices with degrees 3, 3, 3, 3, 2, the last taking the stub
        if (stubs.size() % 2 == 1) {
            add_gadget({ { 4, 0 }, { 4, 1 }, { 0, 2 }, { 0, 3 }, { 1, 2 }, { 1, 3 }, { 2, 3 } }, { { stubs.back(), 4 } }, 5);
            stubs.pop_back();
        }

        // two stubs of the same variable are already adjacent on its cycle;
        // give them four vertices with degrees 3, 3, 2, 2 instead
        if (stubs.size() == 2 && origin[stubs[0]] == origin[stubs[1]]) {
            add_gadget({ { 0, 1 }, { 0, 2 }, { 0, 3 }, { 1, 2 }, { 1, 3 } }, { { stubs[0], 2 }, { stubs[1], 3 } }, 4);
            stubs.clear();
        }

        // each variable owns at most two consecutive stubs, so i and i + half differ in owner
        auto half = stubs.size() / 2;
        for (size_t i = 0 ; i < half ; ++i) {
            edges.emplace_back(stubs[i], stubs[i + half]);
            relations.push_back(all);
        }

        // Graph::from_edges sorts edges; carry relations along by sorting indices the
        // same way. Only symmetric relations (cycle closers, gadget edges) arrive reversed.
        vector<size_t> index(edges.size());
        for (size_t i = 0 ; i < index.size() ; ++i) {
            index[i] = i;
            if (edges[i].first > edges[i].second)
                std::swap(edges[i].first, edges[i].second);
        }
        std::sort(index.begin(), index.end(), [&] (size_t a, size_t b) { return edges[a] < edges[b]; });
        vector<Relation> sorted_relations;
        for (auto i : index)
            sorted_relations.push_back(relations[i]);

        auto out = Graph::from_edges(next, edges);
        return Regularized{ CspInstance(std::move(out), vector<Value>(next, *q), std::move(sorted_relations)), std::move(origin) };
    }
}
