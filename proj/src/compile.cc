#include <embedcsp/compile.hh>
#include <embedcsp/errors.hh>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <span>

using std::optional;
using std::pair;
using std::span;
using std::string;
using std::uint64_t;
using std::vector;

namespace embedcsp
{
    using std::to_string;

    auto BagIndex::slot(Vertex x, Vertex v) const -> optional<int>
    {
        auto & bag = bags[x];
        auto it = std::lower_bound(bag.begin(), bag.end(), v);
        if (it == bag.end() || *it != v)
            return std::nullopt;
        return int(it - bag.begin());
    }

    auto BagIndex::max_width() const -> int
    {
        int result = 0;
        for (auto & b : bags)
            result = std::max(result, int(b.size()));
        return result;
    }

    auto build_bag_index(const Graph & source, const ConnectedEmbedding & emb) -> BagIndex
    {
        auto report = verify_embedding(source, emb);
        if (! report.ok())
            throw InputError("cannot index an invalid embedding: " + report.violations.front().message);

        auto & host = emb.host;
        BagIndex idx;
        idx.bags.assign(host.size(), {});
        for (Vertex v = 0 ; v < source.size() ; ++v)
            for (auto x : emb.psi[v])
                idx.bags[x].push_back(v);
        for (auto & bag : idx.bags)
            std::sort(bag.begin(), bag.end());

        vector<char> covered(source.edge_count(), 0);
        idx.internal_edges.assign(host.size(), {});
        for (Vertex x = 0 ; x < host.size() ; ++x)
            for (int id = 0 ; id < source.edge_count() ; ++id) {
                auto [u, v] = source.edge(id);
                if (idx.slot(x, u) && idx.slot(x, v)) {
                    idx.internal_edges[x].push_back(id);
                    covered[id] = 1;
                }
            }

        idx.shared.assign(host.edge_count(), {});
        idx.crossing_edges.assign(host.edge_count(), {});
        for (int f = 0 ; f < host.edge_count() ; ++f) {
            auto [x, y] = host.edge(f);
            std::set_intersection(idx.bags[x].begin(), idx.bags[x].end(), idx.bags[y].begin(), idx.bags[y].end(),
                    std::back_inserter(idx.shared[f]));
            for (int id = 0 ; id < source.edge_count() ; ++id) {
                auto [u, v] = source.edge(id);
                if ((idx.slot(x, u) && idx.slot(y, v)) || (idx.slot(x, v) && idx.slot(y, u))) {
                    idx.crossing_edges[f].push_back(id);
                    covered[id] = 1;
                }
            }
        }

        for (int id = 0 ; id < source.edge_count() ; ++id)
            if (! covered[id])
                throw InputError("source edge " + to_string(id) + " is not covered by any bag or host edge");

        return idx;
    }

    TupleCodec::TupleCodec(vector<Value> radices) :
        _radices(std::move(radices))
    {
        _weights.reserve(_radices.size());
        for (auto r : _radices) {
            if (r < 1)
                throw InputError("tuple codec radix must be positive");
            _weights.push_back(_size);
            if (_size > (Value(1) << 62) / r)
                throw BudgetExceeded("tuple alphabet exceeds 2^62 values");
            _size *= r;
        }
    }

    auto TupleCodec::rank(const vector<Value> & tuple) const -> Value
    {
        if (tuple.size() != _radices.size())
            throw InputError("tuple has the wrong number of slots");
        Value r = 0;
        for (size_t i = 0 ; i < tuple.size() ; ++i) {
            if (tuple[i] < 0 || tuple[i] >= _radices[i])
                throw InputError("tuple entry out of range for its slot");
            r += tuple[i] * _weights[i];
        }
        return r;
    }

    auto TupleCodec::unrank(Value r) const -> vector<Value>
    {
        if (r < 0 || r >= _size)
            throw InputError("tuple rank out of range");
        vector<Value> tuple(_radices.size());
        for (size_t i = 0 ; i < _radices.size() ; ++i) {
            tuple[i] = r % _radices[i];
            r /= _radices[i];
        }
        return tuple;
    }

    namespace
    {
        struct SlotRef
        {
            bool high;
            int slot;
        };

        /// relation->contains(first, second), or equality when relation is empty
        struct Check
        {
            SlotRef first, second;
            optional<Relation> relation;
        };

        /// Everything a compiled host-edge relation consults, shared by its closures.
        struct EdgeChecks
        {
            TupleCodec low, high;
            vector<Check> low_only, high_only, mixed;
            /// (low slot, high slot) pairs that must carry equal values.
            vector<pair<int, int>> equal;

            static auto holds(const Check & c, span<const Value> a, span<const Value> b) -> bool
            {
                auto first = c.first.high ? b[c.first.slot] : a[c.first.slot];
                auto second = c.second.high ? b[c.second.slot] : a[c.second.slot];
                return c.relation ? c.relation->contains(first, second) : first == second;
            }

            static auto all_hold(const vector<Check> & checks, span<const Value> a, span<const Value> b) -> bool
            {
                for (auto & c : checks)
                    if (! holds(c, a, b))
                        return false;
                return true;
            }

            auto unrank_into(const TupleCodec & codec, Value r, vector<Value> & out) const -> void
            {
                out.resize(codec.slots());
                for (int i = 0 ; i < codec.slots() ; ++i) {
                    out[i] = r % codec.radices()[i];
                    r /= codec.radices()[i];
                }
            }

            auto contains(Value a, Value b) const -> bool
            {
                thread_local vector<Value> da, db;
                unrank_into(low, a, da);
                unrank_into(high, b, db);
                for (auto [i, j] : equal)
                    if (da[i] != db[j])
                        return false;
                return all_hold(low_only, da, db) && all_hold(high_only, da, db) && all_hold(mixed, da, db);
            }

            /// Partners of a value on one side, enumerating only slots not pinned by equality.
            auto supports(bool given_high, Value given, vector<Value> & out) const -> void
            {
                out.clear();
                auto & given_codec = given_high ? high : low;
                auto & other_codec = given_high ? low : high;
                vector<Value> dg, dother(other_codec.slots(), 0);
                unrank_into(given_codec, given, dg);
                vector<char> pinned(other_codec.slots(), 0);
                for (auto [i, j] : equal) {
                    auto [gs, os] = given_high ? pair{ j, i } : pair{ i, j };
                    dother[os] = dg[gs];
                    pinned[os] = 1;
                }

                auto & da = given_high ? dother : dg;
                auto & db = given_high ? dg : dother;
                if (! all_hold(given_high ? high_only : low_only, da, db))
                    return;

                vector<int> free;
                for (int s = 0 ; s < other_codec.slots() ; ++s)
                    if (! pinned[s])
                        free.push_back(s);

                auto & other_only = given_high ? low_only : high_only;
                while (true) {
                    if (all_hold(mixed, da, db) && all_hold(other_only, da, db))
                        out.push_back(other_codec.rank(dother));
                    // odometer over free slots, least significant first, so ranks ascend
                    size_t i = 0;
                    for ( ; i < free.size() ; ++i) {
                        auto s = free[i];
                        if (++dother[s] < other_codec.radices()[s])
                            break;
                        dother[s] = 0;
                    }
                    if (i == free.size())
                        break;
                }
            }
        };

        auto since(std::chrono::steady_clock::time_point start) -> double
        {
            return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        }
    }

    auto compile(const CspInstance & gamma, const Graph & host, const ConnectedEmbedding & emb, const CompileParams & params) -> CompiledInstance
    {
        auto & source = gamma.graph();
        if (emb.host != host)
            throw InputError("embedding was built on a different host");
        for (Vertex x = 0 ; x < host.size() ; ++x)
            if (host.degree(x) == 0)
                throw InputError("host vertex " + to_string(x) + " is isolated; its bag constraints would go unchecked");

        CompiledInstance result;
        result.index = build_bag_index(source, emb);
        result.gamma = gamma;
        result.embedding = emb;
        result.padded = params.padded;
        auto & idx = result.index;

        optional<Value> filler_radix;
        int width = idx.max_width();
        if (params.padded) {
            filler_radix = gamma.uniform_alphabet();
            if (! filler_radix)
                throw InputError("padded compilation needs a uniform source alphabet");
        }

        for (Vertex x = 0 ; x < host.size() ; ++x) {
            vector<Value> radices;
            for (auto v : idx.bags[x])
                radices.push_back(gamma.alphabet_size(v));
            if (filler_radix)
                radices.resize(width, *filler_radix);
            result.codecs.emplace_back(std::move(radices));
        }

        // bag-internal edges are checked on every incident host edge, or only on the first
        vector<int> designated(host.size(), -1);
        for (Vertex x = 0 ; x < host.size() ; ++x)
            designated[x] = host.incident_edges(x).empty() ? -1 : *std::min_element(host.incident_edges(x).begin(), host.incident_edges(x).end());

        vector<Relation> relations;
        vector<Value> alphabet;
        for (auto & c : result.codecs)
            alphabet.push_back(c.size());

        for (int f = 0 ; f < host.edge_count() ; ++f) {
            auto [x, y] = host.edge(f);
            auto checks = std::make_shared<EdgeChecks>();
            checks->low = result.codecs[x];
            checks->high = result.codecs[y];

            for (auto v : idx.shared[f])
                checks->equal.emplace_back(*idx.slot(x, v), *idx.slot(y, v));

            for (auto id : idx.crossing_edges[f]) {
                auto [u, v] = source.edge(id);
                if (idx.slot(x, u) && idx.slot(y, v))
                    checks->mixed.push_back(Check{ { false, *idx.slot(x, u) }, { true, *idx.slot(y, v) }, gamma.constraint(id) });
                if (idx.slot(x, v) && idx.slot(y, u))
                    checks->mixed.push_back(Check{ { true, *idx.slot(y, u) }, { false, *idx.slot(x, v) }, gamma.constraint(id) });
            }

            if (! params.deduplicate_internal || designated[x] == f)
                for (auto id : idx.internal_edges[x]) {
                    auto [u, v] = source.edge(id);
                    checks->low_only.push_back(Check{ { false, *idx.slot(x, u) }, { false, *idx.slot(x, v) }, gamma.constraint(id) });
                }
            if (! params.deduplicate_internal || designated[y] == f)
                for (auto id : idx.internal_edges[y]) {
                    auto [u, v] = source.edge(id);
                    checks->high_only.push_back(Check{ { true, *idx.slot(y, u) }, { true, *idx.slot(y, v) }, gamma.constraint(id) });
                }

            auto relation = Relation::intensional(alphabet[x], alphabet[y],
                    [checks] (Value a, Value b) { return checks->contains(a, b); },
                    [checks] (Value a, vector<Value> & out) { checks->supports(false, a, out); },
                    [checks] (Value b, vector<Value> & out) { checks->supports(true, b, out); });

            if (__int128(alphabet[x]) * alphabet[y] <= __int128(params.materialize_limit))
                relation = relation.materialize(params.materialize_limit);
            relations.push_back(std::move(relation));
        }

        result.phi = CspInstance(host, std::move(alphabet), std::move(relations));
        return result;
    }

    auto encode_assignment(const Assignment & sigma, const CompiledInstance & compiled, Value filler) -> Assignment
    {
        auto & gamma = compiled.gamma;
        if (int(sigma.values.size()) != gamma.size())
            throw InputError("assignment does not match the source instance");
        for (Vertex v = 0 ; v < gamma.size() ; ++v)
            if (sigma.values[v] < 0 || sigma.values[v] >= gamma.alphabet_size(v))
                throw InputError("source value out of range at variable " + to_string(v));

        Assignment result;
        for (size_t x = 0 ; x < compiled.index.bags.size() ; ++x) {
            auto & codec = compiled.codecs[x];
            vector<Value> tuple(codec.slots(), filler);
            auto & bag = compiled.index.bags[x];
            for (size_t i = 0 ; i < bag.size() ; ++i)
                tuple[i] = sigma.values[bag[i]];
            result.values.push_back(codec.rank(tuple));
        }
        return result;
    }

    DecodeError::DecodeError(Vertex v, Vertex first_host, Vertex second_host) :
        std::runtime_error("not a satisfying assignment: source vertex " + to_string(v) + " reads differently at host vertices "
                + to_string(first_host) + " and " + to_string(second_host)),
        _vertex(v),
        _first_host(first_host),
        _second_host(second_host)
    {
    }

    auto decode_assignment(const Assignment & sigma_tilde, const CompiledInstance & compiled) -> Assignment
    {
        auto & idx = compiled.index;
        if (sigma_tilde.values.size() != idx.bags.size())
            throw InputError("assignment does not match the compiled instance");

        int n = compiled.gamma.size();
        vector<Value> value(n, -1);
        vector<Vertex> seen_at(n, -1);
        for (Vertex x = 0 ; x < int(idx.bags.size()) ; ++x) {
            auto & codec = compiled.codecs[x];
            if (sigma_tilde.values[x] < 0 || sigma_tilde.values[x] >= codec.size())
                throw InputError("compiled value out of range at host vertex " + to_string(x));
            auto & bag = idx.bags[x];
            for (int i = 0 ; i < int(bag.size()) ; ++i) {
                auto v = bag[i];
                auto d = codec.digit(sigma_tilde.values[x], i);
                if (seen_at[v] == -1) {
                    value[v] = d;
                    seen_at[v] = x;
                }
                else if (value[v] != d)
                    throw DecodeError(v, seen_at[v], x);
            }
        }

        for (Vertex v = 0 ; v < n ; ++v)
            if (seen_at[v] == -1)
                throw InputError("source vertex " + to_string(v) + " has no representative");
        return Assignment{ std::move(value) };
    }

    auto pipeline(const CspInstance & gamma, int k, uint64_t seed, const PipelineParams & params) -> PipelineResult
    {
        auto start = std::chrono::steady_clock::now();
        auto embedded = embed(gamma.graph(), k, seed, params.embedding);
        double embed_ms = since(start);

        start = std::chrono::steady_clock::now();
        auto compiled = compile(gamma, embedded.host.graph, embedded.embedding, params.compile);
        double compile_ms = since(start);

        PipelineMetrics m;
        m.host_vertices = embedded.host.graph.size();
        m.host_edges = embedded.host.graph.edge_count();
        m.depth = embedded.depth.depth;
        m.depth_bound = embedded.depth.bound;
        m.fitted_z = embedded.fitted_z;
        m.max_edge_congestion = embedded.max_edge_congestion;
        Value largest_source = 1;
        for (auto s : gamma.alphabet_sizes())
            largest_source = std::max(largest_source, s);
        for (auto & c : compiled.codecs)
            m.max_alphabet = std::max(m.max_alphabet, c.size());
        m.log2_max_alphabet = std::log2(double(m.max_alphabet));
        m.log2_alphabet_bound = m.depth_bound * std::log2(double(largest_source));
        m.alphabet_within_bound = m.log2_max_alphabet <= m.log2_alphabet_bound + 1e-9;
        m.embed_ms = embed_ms;
        m.compile_ms = compile_ms;

        return PipelineResult{ std::move(embedded), std::move(compiled), m };
    }

    auto host_size_for_depth(int source_vertices, int source_edges, double z, double target_depth, int k_max) -> optional<int>
    {
        optional<int> best;
        for (int k = 6 ; k <= k_max ; k += 2)
            if (depth_bound(source_vertices, source_edges, k, z) <= target_depth)
                best = k;
        return best;
    }
}
