#include <embedcsp/serialize.hh>
#include <embedcsp/errors.hh>

#include <fstream>
#include <sstream>

using std::pair;
using std::string;
using std::uint64_t;
using std::vector;

namespace embedcsp
{
    using std::to_string;

    namespace
    {
        template <typename T_>
        auto field(const json & j, const char * name) -> T_
        {
            if (! j.is_object() || ! j.contains(name))
                throw InputError(string("missing field '") + name + "'");
            try {
                return j.at(name).get<T_>();
            }
            catch (const json::exception & e) {
                throw InputError(string("field '") + name + "' has the wrong type: " + e.what());
            }
        }
    }

    auto dump(const json & j) -> string
    {
        return j.dump(2) + "\n";
    }

    auto read_json_file(const string & path) -> json
    {
        std::ifstream in(path);
        if (! in)
            throw InputError("cannot open '" + path + "'");
        try {
            return json::parse(in);
        }
        catch (const json::exception & e) {
            throw InputError("cannot parse '" + path + "': " + e.what());
        }
    }

    auto write_text_file(const string & path, const string & contents) -> void
    {
        std::ofstream out(path, std::ios::binary);
        if (! out)
            throw InputError("cannot write '" + path + "'");
        out << contents;
        if (! out)
            throw InputError("failed writing '" + path + "'");
    }

    auto graph_to_json(const Graph & g) -> json
    {
        json edges = json::array();
        for (auto [u, v] : g.edges())
            edges.push_back({ u, v });
        return json{ { "n", g.size() }, { "edges", edges } };
    }

    auto graph_from_json(const json & j) -> Graph
    {
        auto n = field<int>(j, "n");
        auto edges = field<vector<pair<Vertex, Vertex>>>(j, "edges");
        return Graph::from_edges(n, edges);
    }

    auto multigraph_to_json(const Multigraph & m) -> json
    {
        json edges = json::array(), ids = json::array();
        for (auto & e : m.edges()) {
            edges.push_back({ std::min(e.u, e.v), std::max(e.u, e.v) });
            ids.push_back(e.id);
        }
        return json{ { "n", m.size() }, { "edges", edges }, { "edge_ids", ids } };
    }

    auto multigraph_from_json(const json & j) -> Multigraph
    {
        auto n = field<int>(j, "n");
        auto edges = field<vector<pair<Vertex, Vertex>>>(j, "edges");
        auto ids = field<vector<int>>(j, "edge_ids");
        if (ids.size() != edges.size())
            throw InputError("multigraph needs one edge id per edge");
        vector<MultiEdge> result;
        for (size_t i = 0 ; i < edges.size() ; ++i)
            result.push_back(MultiEdge{ edges[i].first, edges[i].second, ids[i] });
        return Multigraph(n, std::move(result));
    }

    auto csp_to_json(const CspInstance & inst, uint64_t limit) -> json
    {
        json edges = json::array();
        for (int id = 0 ; id < inst.graph().edge_count() ; ++id) {
            auto [u, v] = inst.graph().edge(id);
            json pairs = json::array();
            for (auto [a, b] : inst.constraint(id).pairs(limit))
                pairs.push_back({ a, b });
            edges.push_back(json{ { "u", u }, { "v", v }, { "pairs", pairs } });
        }
        return json{ { "n", inst.size() }, { "alphabet_sizes", inst.alphabet_sizes() }, { "edges", edges } };
    }

    auto csp_from_json(const json & j) -> CspInstance
    {
        auto n = field<int>(j, "n");
        auto alphabet = field<vector<Value>>(j, "alphabet_sizes");
        if (int(alphabet.size()) != n)
            throw InputError("alphabet_sizes must have n entries");

        auto edges_json = field<json>(j, "edges");
        if (! edges_json.is_array())
            throw InputError("field 'edges' must be an array");

        vector<pair<Vertex, Vertex>> edges;
        vector<vector<pair<Value, Value>>> pairs;
        for (auto & e : edges_json) {
            auto u = field<int>(e, "u"), v = field<int>(e, "v");
            auto p = field<vector<pair<Value, Value>>>(e, "pairs");
            if (u > v) {
                // normalise to (lower vertex value, higher vertex value)
                std::swap(u, v);
                for (auto & [a, b] : p)
                    std::swap(a, b);
            }
            edges.emplace_back(u, v);
            pairs.push_back(std::move(p));
        }

        auto g = Graph::from_edges(n, edges);
        vector<Relation> relations(g.edge_count(), Relation::full(1, 1));
        for (size_t i = 0 ; i < edges.size() ; ++i) {
            auto [u, v] = edges[i];
            if (u < 0 || v >= n)
                throw InputError("edge endpoint out of range");
            relations[*g.edge_index(u, v)] = Relation::explicit_pairs(alphabet.at(u), alphabet.at(v), std::move(pairs[i]));
        }
        return CspInstance(std::move(g), std::move(alphabet), std::move(relations));
    }

    auto assignment_to_json(const Assignment & a) -> json
    {
        return json{ { "values", a.values } };
    }

    auto assignment_from_json(const json & j) -> Assignment
    {
        return Assignment{ field<vector<Value>>(j, "values") };
    }

    auto demands_to_json(const DemandSet & d) -> json
    {
        json pairs = json::array();
        for (auto [s, t] : d.pairs)
            pairs.push_back({ s, t });
        return json{ { "pairs", pairs } };
    }

    auto demands_from_json(const json & j) -> DemandSet
    {
        return DemandSet{ field<vector<pair<Vertex, Vertex>>>(j, "pairs") };
    }

    auto routing_to_json(const RoutingSolution & s) -> json
    {
        json paths = json::array();
        for (auto & p : s.paths)
            paths.push_back(p.vertices);
        return json{
            { "paths", paths },
            { "max_edge_congestion", s.max_edge_congestion },
            { "max_path_len", s.max_path_length },
            { "met_targets", s.met_targets }
        };
    }

    auto certificate_to_json(const CertifiedExpander & h) -> json
    {
        json j{ { "cheeger_lb", h.cheeger_lower_bound }, { "method", to_string(h.method) } };
        if (h.lambda2)
            j["lambda2"] = *h.lambda2;
        if (h.cheeger_exact)
            j["cheeger_exact"] = h.cheeger_exact->to_string();
        return j;
    }

    auto embedding_to_json(const ConnectedEmbedding & emb, const DepthReport & depth) -> json
    {
        return json{
            { "host", graph_to_json(emb.host) },
            { "anchor", emb.anchor },
            { "psi", emb.psi },
            { "depth", depth.depth },
            { "bound", depth.bound }
        };
    }

    auto embedding_from_json(const json & j) -> ConnectedEmbedding
    {
        ConnectedEmbedding emb;
        emb.host = graph_from_json(field<json>(j, "host"));
        emb.anchor = field<vector<Vertex>>(j, "anchor");
        emb.psi = field<vector<vector<Vertex>>>(j, "psi");
        for (auto & set : emb.psi)
            std::sort(set.begin(), set.end());
        return emb;
    }

    auto compiled_to_json(const CompiledInstance & c, uint64_t limit) -> json
    {
        json j{ { "format_version", format_version } };
        j["padded"] = c.padded;
        j["gamma"] = csp_to_json(c.gamma, limit);
        j["embedding"] = embedding_to_json(c.embedding, depth_report(c.embedding, c.gamma.graph().edge_count(), 0.0));
        json bags = json::array();
        for (auto & b : c.index.bags)
            bags.push_back(b);
        j["bags"] = bags;
        json sizes = json::array();
        for (auto & codec : c.codecs)
            sizes.push_back(codec.size());
        j["alphabet_sizes"] = sizes;

        try {
            j["phi"] = csp_to_json(c.phi, limit);
            j["kind"] = "explicit";
        }
        catch (const BudgetExceeded &) {
            j["kind"] = "recipe";
        }
        return j;
    }

    auto compiled_from_json(const json & j) -> CompiledInstance
    {
        auto gamma = csp_from_json(field<json>(j, "gamma"));
        auto emb = embedding_from_json(field<json>(j, "embedding"));
        CompileParams params;
        params.padded = j.value("padded", false);
        return compile(gamma, emb.host, emb, params);
    }
}
