#include "oracles.hh"

#include <embedcsp/errors.hh>
#include <embedcsp/expander.hh>

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace embedcsp;

using std::vector;

namespace
{
    auto complete_bipartite_3_3() -> Graph
    {
        vector<std::pair<Vertex, Vertex>> edges;
        for (int i = 0 ; i < 3 ; ++i)
            for (int j = 3 ; j < 6 ; ++j)
                edges.emplace_back(i, j);
        return Graph::from_edges(6, edges);
    }

    auto as_pair(Ratio r) -> std::pair<long, long>
    {
        return { long(r.num), long(r.den) };
    }
}

TEST_CASE("ratios reduce and order")
{
    CHECK(Ratio::make(10, 6) == Ratio::make(5, 3));
    CHECK(Ratio::make(1, 3) < Ratio::make(1, 2));
    CHECK(Ratio::make(5, 3).to_string() == "5/3");
    CHECK(Ratio::make(3, 2).to_double() == 1.5);
}

TEST_CASE("cheeger_exact")
{
    SECTION("single edge") {
        CHECK(cheeger_exact(complete_graph(2)) == Ratio::make(1, 1));
    }

    SECTION("complete bipartite 3+3") {
        auto g = complete_bipartite_3_3();
        REQUIRE(oracle::cheeger(g) == std::pair<long, long>{ 5, 3 });
        CHECK(cheeger_exact(g) == Ratio::make(5, 3));
    }

    SECTION("4-cycle") {
        REQUIRE(oracle::cheeger(cycle_graph(4)) == std::pair<long, long>{ 1, 1 });
        CHECK(cheeger_exact(cycle_graph(4)) == Ratio::make(1, 1));
    }

    SECTION("matches subset enumeration on random graphs") {
        std::mt19937_64 rng(2);
        for (int trial = 0 ; trial < 200 ; ++trial) {
            auto g = erdos_renyi(2 + int(rng() % 11), 0.4, rng());
            REQUIRE(as_pair(cheeger_exact(g)) == oracle::cheeger(g));
        }
    }

    SECTION("refuses graphs above the threshold and trivial graphs") {
        CHECK_THROWS_AS(cheeger_exact(cycle_graph(26)), InputError);
        CHECK_THROWS_AS(cheeger_exact(cycle_graph(10), 8), InputError);
        CHECK_THROWS_AS(cheeger_exact(Graph(1)), InputError);
    }
}

TEST_CASE("second_eigenvalue")
{
    CHECK(second_eigenvalue(complete_graph(4)) == Catch::Approx(-1.0).margin(1e-9));
    CHECK(second_eigenvalue(complete_bipartite_3_3()) == Catch::Approx(0.0).margin(1e-9));
    CHECK(second_eigenvalue(cycle_graph(6)) == Catch::Approx(1.0).margin(1e-9));

    auto spectrum = adjacency_spectrum(complete_bipartite_3_3());
    vector<double> expected{ -3, 0, 0, 0, 0, 3 };
    for (int i = 0 ; i < 6 ; ++i)
        CHECK(spectrum[i] == Catch::Approx(expected[i]).margin(1e-9));

    CHECK_THROWS_AS(second_eigenvalue(Graph::from_edges(4, { { 0, 1 }, { 1, 2 } })), InputError);
    CHECK_THROWS_AS(second_eigenvalue(Graph::from_edges(6, { { 0, 1 }, { 1, 2 }, { 0, 2 }, { 3, 4 }, { 4, 5 }, { 3, 5 } })), InputError);
}

TEST_CASE("second_eigenvalue agrees with the dense spectrum on larger graphs")
{
    std::mt19937_64 rng(77);
    for (int n : { 40, 600 }) {
        auto g = random_regular_graph(n, 3, rng);
        if (! is_connected(g))
            continue;
        auto spectrum = adjacency_spectrum(g);
        CHECK(second_eigenvalue(g) == Catch::Approx(spectrum[n - 2]).margin(1e-6));
    }
}

TEST_CASE("cheeger_spectral_bound")
{
    CHECK(cheeger_spectral_bound(complete_bipartite_3_3()) == Catch::Approx(1.5));
    CHECK(cheeger_spectral_bound(complete_graph(4)) == Catch::Approx(2.0));

    std::mt19937_64 rng(9);
    int checked = 0;
    while (checked < 50) {
        int n = 4 + 2 * int(rng() % 7);
        auto g = random_regular_graph(n, 3, rng);
        if (! is_connected(g))
            continue;
        REQUIRE(cheeger_spectral_bound(g) <= cheeger_exact(g).to_double() + 1e-6);
        ++checked;
    }
}

TEST_CASE("random_regular_graph")
{
    std::mt19937_64 a(1), b(1);
    auto g = random_regular_graph(20, 3, a);
    CHECK(g.is_regular(3));
    CHECK(g == random_regular_graph(20, 3, b));
    std::mt19937_64 c(1);
    CHECK_THROWS_AS(random_regular_graph(7, 3, c), InputError);
    CHECK_THROWS_AS(random_regular_graph(4, 4, c), InputError);
}

TEST_CASE("base_expander")
{
    SECTION("m = 8 is certified") {
        for (std::uint64_t seed = 0 ; seed < 5 ; ++seed) {
            auto base = base_expander(8, seed);
            CHECK(base.graph.is_regular(3));
            CHECK(base.lambda2 <= 2.85);
            CHECK(second_eigenvalue(base.graph) == Catch::Approx(base.lambda2).margin(1e-9));
            CHECK(cheeger_spectral_bound(base.graph) >= 0.075);
            CHECK(! is_bipartite(base.graph));
        }
    }

    SECTION("preconditions") {
        CHECK_THROWS_AS(base_expander(4, 0), InputError);
        CHECK_THROWS_AS(base_expander(7, 0), InputError);
    }

    SECTION("the retry budget is reported") {
        ExpanderParams strict;
        strict.lambda2_limit = -5.0;
        strict.retry_budget = 3;
        try {
            base_expander(10, 0, strict);
            FAIL("expected a construction failure");
        }
        catch (const ConstructionFailure & e) {
            CHECK(std::string(e.what()).find("3") != std::string::npos);
        }
    }

    SECTION("deterministic per seed") {
        CHECK(base_expander(14, 3).graph == base_expander(14, 3).graph);
    }
}

TEST_CASE("small case family")
{
    auto six = small_case_expander(6);
    CHECK(oracle::isomorphic(six, complete_bipartite_3_3()));
    for (int n = 6 ; n < 12 ; n += 2) {
        auto g = small_case_expander(n);
        CHECK(g.is_regular(3));
        CHECK(cheeger_exact(g).to_double() >= 2.0 / n);
    }
}

TEST_CASE("bipartite_expander")
{
    SECTION("n = 6 is the complete bipartite graph") {
        auto h = bipartite_expander(6, 0);
        CHECK(oracle::isomorphic(h.graph, complete_bipartite_3_3()));
        CHECK(h.method == CertificateMethod::Exact);
        REQUIRE(h.cheeger_exact);
        CHECK(*h.cheeger_exact == Ratio::make(5, 3));
        CHECK(h.cheeger_lower_bound == Catch::Approx(5.0 / 3.0));
    }

    SECTION("structural properties and exact floors") {
        for (int n = 6 ; n <= 40 ; n += 2)
            for (std::uint64_t seed = 0 ; seed < 3 ; ++seed) {
                auto h = bipartite_expander(n, seed);
                REQUIRE(h.graph.size() == n);
                REQUIRE(h.graph.is_regular(3));
                REQUIRE(h.bipartition.valid_for(h.graph));
                REQUIRE(h.bipartition.balanced());
                REQUIRE(is_connected(h.graph));
                REQUIRE(h.cheeger_lower_bound > 0.0);
                if (n <= 20)
                    REQUIRE(cheeger_exact(h.graph).to_double() >= 2.0 / n);
                if (n <= 22 && n % 4 == 2)
                    REQUIRE(cheeger_exact(h.graph).to_double() >= 0.015);
            }
    }

    SECTION("certificates are sound where they can be checked") {
        ExpanderParams spectral;
        spectral.certify = CertificateMethod::Spectral;
        for (int n = 12 ; n <= 22 ; n += 2) {
            auto h = bipartite_expander(n, 1, spectral);
            CHECK(h.method != CertificateMethod::Exact);
            CHECK(h.cheeger_lower_bound <= cheeger_exact(h.graph).to_double() + 1e-9);
        }
    }

    SECTION("case tags") {
        CHECK(bipartite_expander(8, 0).construction == ExpanderCase::SmallExplicit);
        CHECK(bipartite_expander(16, 0).construction == ExpanderCase::DoubleCover);
        CHECK(bipartite_expander(18, 0).construction == ExpanderCase::Surgery);
    }

    SECTION("refuses odd and small sizes") {
        CHECK_THROWS_AS(bipartite_expander(7, 0), InputError);
        CHECK_THROWS_AS(bipartite_expander(4, 0), InputError);
    }

    SECTION("deterministic per seed") {
        CHECK(bipartite_expander(30, 5).graph == bipartite_expander(30, 5).graph);
    }
}

TEST_CASE("surgery")
{
    for (int m = 6 ; m <= 12 ; m += 2)
        for (std::uint64_t seed = 0 ; seed < 4 ; ++seed) {
            auto base = base_expander(m, seed);
            auto cover = double_cover(base.graph);
            auto out = surgery(cover, base.graph);
            auto & g = out.graph;
            REQUIRE(g.size() == 2 * m - 2);
            REQUIRE(g.is_regular(3));
            REQUIRE(is_bipartite(g));
            REQUIRE(is_connected(g));
            // the charging argument: expansion drops by at most a factor of five
            REQUIRE(cheeger_exact(g).to_double() >= cheeger_exact(cover).to_double() / 5.0 - 1e-12);
        }
}

TEST_CASE("surgery rewiring keeps the removed pair's neighbourhood well expanding")
{
    // When the four rewired neighbours make up the whole of one cut side, the ratio is at least 1/4.
    for (std::uint64_t seed = 0 ; seed < 6 ; ++seed) {
        auto base = base_expander(8, seed);
        auto cover = double_cover(base.graph);
        auto out = surgery(cover, base.graph);
        auto relabel = [&] (Vertex x) { return x - (x > out.u ? 1 : 0) - (x > out.v ? 1 : 0); };
        vector<Vertex> four{ relabel(out.first.first), relabel(out.first.second), relabel(out.second.first), relabel(out.second.second) };
        auto & g = out.graph;
        int boundary = 0;
        for (auto [u, v] : g.edges()) {
            bool a = std::find(four.begin(), four.end(), u) != four.end();
            bool b = std::find(four.begin(), four.end(), v) != four.end();
            boundary += a != b;
        }
        CHECK(double(boundary) / 4.0 >= 0.25);
    }
}

TEST_CASE("certificate method names")
{
    for (auto m : { CertificateMethod::Exact, CertificateMethod::Spectral, CertificateMethod::Charged, CertificateMethod::Connectivity })
        CHECK(certificate_method_from_string(to_string(m)) == m);
    CHECK_THROWS_AS(certificate_method_from_string("psychic"), InputError);
}
