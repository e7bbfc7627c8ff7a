#include "oracles.hh"

#include <embedcsp/embedding.hh>
#include <embedcsp/errors.hh>

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

using namespace embedcsp;

using std::vector;

namespace
{
    auto class_sizes(const vector<Vertex> & anchor, int k) -> vector<int>
    {
        vector<int> sizes(k, 0);
        for (auto a : anchor)
            ++sizes[a];
        return sizes;
    }

    auto ordered(Vertex a, Vertex b) -> std::pair<Vertex, Vertex>
    {
        return { std::min(a, b), std::max(a, b) };
    }

    auto random_cubic(int n, std::uint64_t seed) -> Graph
    {
        std::mt19937_64 rng(seed);
        return random_regular_graph(n, 3, rng);
    }
}

TEST_CASE("depth bound arithmetic")
{
    CHECK(depth_bound(48, 72, 12, 64.0) == Catch::Approx(64.0 * (1.0 + 120.0 / 12.0) * std::log2(12.0)));
    CHECK(fitted_z(10, 48, 72, 12) == Catch::Approx(10.0 / ((1.0 + 120.0 / 12.0) * std::log2(12.0))));
}

TEST_CASE("balanced_map")
{
    SECTION("ten vertices into four classes") {
        auto sizes = class_sizes(balanced_map(Graph(10), 4, 1), 4);
        CHECK(*std::max_element(sizes.begin(), sizes.end()) <= 3);
    }

    SECTION("as many vertices as classes gives a bijection") {
        auto anchor = balanced_map(Graph(8), 8, 5);
        std::sort(anchor.begin(), anchor.end());
        for (int i = 0 ; i < 8 ; ++i)
            CHECK(anchor[i] == i);
    }

    SECTION("seven vertices into three classes") {
        for (std::uint64_t seed = 0 ; seed < 20 ; ++seed) {
            auto sizes = class_sizes(balanced_map(Graph(7), 3, seed), 3);
            std::sort(sizes.begin(), sizes.end());
            REQUIRE(sizes == vector<int>{ 2, 2, 3 });
        }
    }

    SECTION("deterministic per seed") {
        CHECK(balanced_map(Graph(30), 6, 4) == balanced_map(Graph(30), 6, 4));
    }
}

TEST_CASE("demand_graph")
{
    SECTION("injective anchors keep the source edge set") {
        auto src = cycle_graph(5);
        vector<Vertex> anchor{ 3, 0, 4, 1, 2 };
        auto d = demand_graph(src, anchor, 6);
        CHECK(d.intra_class.empty());
        REQUIRE(d.graph.edges().size() == 5);
        for (auto & e : d.graph.edges()) {
            auto [u, v] = src.edge(e.id);
            CHECK(ordered(e.u, e.v) == ordered(anchor[u], anchor[v]));
        }
    }

    SECTION("one class collapses everything") {
        auto d = demand_graph(complete_graph(4), vector<Vertex>(4, 2), 6);
        CHECK(d.graph.edges().empty());
        CHECK(d.intra_class.size() == 6);
    }

    SECTION("4-cycle with alternating anchors") {
        auto d = demand_graph(cycle_graph(4), { 0, 1, 0, 1 }, 6);
        REQUIRE(d.graph.edges().size() == 4);
        for (auto & e : d.graph.edges())
            CHECK(ordered(e.u, e.v) == std::pair<Vertex, Vertex>{ 0, 1 });
    }
}

TEST_CASE("embedding a single edge")
{
    auto src = Graph::from_edges(2, { { 0, 1 } });
    auto r = embed(src, 6, 3);
    auto & emb = r.embedding;
    auto & path = r.edge_paths[0];
    for (auto x : path.vertices) {
        CHECK(std::binary_search(emb.psi[0].begin(), emb.psi[0].end(), x));
        CHECK(std::binary_search(emb.psi[1].begin(), emb.psi[1].end(), x));
    }
    CHECK(r.depth.depth <= 2);
    CHECK(verify_embedding(src, emb).ok());
}

TEST_CASE("embedding an edgeless source")
{
    auto r = embed(Graph(13), 6, 1);
    for (int v = 0 ; v < 13 ; ++v)
        CHECK(r.embedding.psi[v] == vector<Vertex>{ r.embedding.anchor[v] });
    CHECK(r.depth.depth == 3);
    CHECK(r.matchings == 0);
}

TEST_CASE("embedding random cubic graphs")
{
    for (auto [n, k] : vector<std::pair<int, int>>{ { 48, 12 }, { 24, 6 }, { 96, 24 }, { 20, 8 }, { 30, 14 } })
        for (std::uint64_t seed = 0 ; seed < 5 ; ++seed) {
            auto src = random_cubic(n, seed);
            auto r = embed(src, k, seed);
            auto & emb = r.embedding;
            auto report = verify_embedding(src, emb);
            REQUIRE(report.ok());
            REQUIRE(report.depth == r.depth);
            REQUIRE(r.depth.depth <= depth_bound(n, src.edge_count(), k, 64.0));
            REQUIRE(r.within_bound);
            REQUIRE(emb.host.size() == k);
            REQUIRE(emb.host.is_regular(3));

            // independent recount of depth and of the invariants
            vector<int> per(k, 0);
            for (int v = 0 ; v < n ; ++v) {
                REQUIRE(oracle::connected_set(emb.host, emb.psi[v]));
                REQUIRE(std::binary_search(emb.psi[v].begin(), emb.psi[v].end(), emb.anchor[v]));
                for (auto x : emb.psi[v])
                    ++per[x];
            }
            REQUIRE(per == r.depth.per_vertex);
            REQUIRE(*std::max_element(per.begin(), per.end()) == r.depth.depth);
            for (int id = 0 ; id < src.edge_count() ; ++id) {
                auto [u, v] = src.edge(id);
                vector<Vertex> common;
                std::set_intersection(emb.psi[u].begin(), emb.psi[u].end(), emb.psi[v].begin(), emb.psi[v].end(), std::back_inserter(common));
                REQUIRE(! common.empty());
                auto & p = r.edge_paths[id];
                if (emb.anchor[u] != emb.anchor[v]) {
                    REQUIRE(is_valid_path(emb.host, p));
                    REQUIRE(ordered(p.front(), p.back()) == ordered(emb.anchor[u], emb.anchor[v]));
                }
            }
            REQUIRE(r.matchings <= 2 * 3 * ((n + k - 1) / k) - 1);
        }
}

TEST_CASE("embedding is deterministic per seed")
{
    auto src = random_cubic(30, 2);
    auto a = embed(src, 10, 7), b = embed(src, 10, 7);
    CHECK(a.embedding == b.embedding);
    CHECK(a.depth == b.depth);
}

TEST_CASE("independent matching routing also gives valid embeddings")
{
    EmbeddingParams params;
    params.accumulate = false;
    auto src = random_cubic(40, 1);
    auto r = embed(src, 12, 1, params);
    CHECK(verify_embedding(src, r.embedding).ok());
}

TEST_CASE("embed preconditions")
{
    CHECK_THROWS_AS(embed(cycle_graph(5), 7, 0), InputError);
    CHECK_THROWS_AS(embed(cycle_graph(5), 4, 0), InputError);
}

TEST_CASE("verify_embedding catches violations")
{
    auto src = cycle_graph(6);
    auto good = embed(src, 8, 2).embedding;
    REQUIRE(verify_embedding(src, good).ok());

    auto has = [] (const VerificationReport & r, Violation::Kind kind, Vertex v, int e) {
        for (auto & x : r.violations)
            if (x.kind == kind && (v < 0 || x.vertex == v) && (e < 0 || x.edge == e))
                return true;
        return false;
    };

    SECTION("a split image is reported against its vertex") {
        auto bad = good;
        // pick a host vertex far from the anchor so the image falls apart
        Vertex a = bad.anchor[0];
        for (Vertex x = 0 ; x < bad.host.size() ; ++x)
            if (x != a && ! bad.host.adjacent(a, x)) {
                bad.psi[0] = { std::min(a, x), std::max(a, x) };
                break;
            }
        auto r = verify_embedding(src, bad);
        CHECK(has(r, Violation::Kind::Disconnected, 0, -1));
    }

    SECTION("dropping a routed path breaks touching for that edge") {
        auto bad = good;
        for (int v = 0 ; v < src.size() ; ++v)
            bad.psi[v] = { bad.anchor[v] };
        auto r = verify_embedding(src, bad);
        for (int id = 0 ; id < src.edge_count() ; ++id) {
            auto [u, v] = src.edge(id);
            bool touching = bad.anchor[u] == bad.anchor[v] || bad.host.adjacent(bad.anchor[u], bad.anchor[v]);
            CHECK(has(r, Violation::Kind::NotTouching, -1, id) == ! touching);
        }
    }

    SECTION("missing anchor, empty image, out of range, bad shape") {
        auto bad = good;
        bad.psi[1] = {};
        CHECK(has(verify_embedding(src, bad), Violation::Kind::Empty, 1, -1));

        bad = good;
        bad.psi[2] = { bad.host.size() + 3 };
        CHECK(has(verify_embedding(src, bad), Violation::Kind::OutOfRange, 2, -1));

        bad = good;
        Vertex other = (bad.anchor[3] + 1) % bad.host.size();
        bad.psi[3] = { other };
        CHECK(has(verify_embedding(src, bad), Violation::Kind::AnchorMissing, 3, -1));

        bad = good;
        bad.psi.pop_back();
        CHECK(has(verify_embedding(src, bad), Violation::Kind::Shape, -1, -1));
    }
}
