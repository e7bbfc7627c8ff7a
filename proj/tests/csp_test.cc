#include "oracles.hh"

#include <embedcsp/csp.hh>
#include <embedcsp/errors.hh>

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

using namespace embedcsp;

using std::pair;
using std::vector;

namespace
{
    auto single_edge(Relation r, Value low, Value high) -> CspInstance
    {
        return CspInstance(Graph::from_edges(2, { { 0, 1 } }), { low, high }, { std::move(r) });
    }

    auto random_corpus_instance(std::uint64_t index) -> CspInstance
    {
        std::mt19937_64 rng(index);
        int n = 1 + int(rng() % 7);
        Value q = 1 + Value(rng() % 3);
        double p = std::uniform_real_distribution<double>(0.2, 0.9)(rng);
        double density = std::uniform_real_distribution<double>(0.2, 0.9)(rng);
        return random_instance(n, p, q, density, rng());
    }

    auto has_isolated_vertex(const CspInstance & inst) -> bool
    {
        for (int v = 0 ; v < inst.size() ; ++v)
            if (inst.graph().degree(v) == 0)
                return true;
        return false;
    }
}

TEST_CASE("relations")
{
    SECTION("explicit pairs") {
        auto r = Relation::explicit_pairs(3, 2, { { 2, 1 }, { 0, 0 }, { 0, 1 } });
        CHECK(r.is_explicit());
        CHECK(r.contains(0, 1));
        CHECK(! r.contains(1, 1));
        CHECK(r.pairs() == vector<pair<Value, Value>>{ { 0, 0 }, { 0, 1 }, { 2, 1 } });
        vector<Value> out;
        r.supports_of_low(0, out);
        CHECK(out == vector<Value>{ 0, 1 });
        r.supports_of_high(1, out);
        CHECK(out == vector<Value>{ 0, 2 });
        r.supports_of_low(1, out);
        CHECK(out.empty());
    }

    SECTION("refuses duplicates and out-of-range pairs") {
        CHECK_THROWS_AS(Relation::explicit_pairs(2, 2, { { 0, 1 }, { 0, 1 } }), InputError);
        CHECK_THROWS_AS(Relation::explicit_pairs(2, 2, { { 0, 2 } }), InputError);
    }

    SECTION("inequality, equality and full") {
        CHECK(Relation::inequality(3).pairs().size() == 6);
        CHECK(Relation::equality(4).pairs().size() == 4);
        CHECK(Relation::full(2, 3).pairs().size() == 6);
    }

    SECTION("intensional relations enumerate supports from the predicate") {
        auto r = Relation::intensional(5, 5, [] (Value a, Value b) { return a + b == 4; });
        CHECK(! r.is_explicit());
        vector<Value> out;
        r.supports_of_low(1, out);
        CHECK(out == vector<Value>{ 3 });
        r.supports_of_high(0, out);
        CHECK(out == vector<Value>{ 4 });
        CHECK(r.materialize().pairs() == r.pairs());
        CHECK(r.materialize().is_explicit());
    }

    SECTION("expansion beyond the limit is refused") {
        auto r = Relation::intensional(2000, 2000, [] (Value, Value) { return true; });
        CHECK_THROWS_AS(r.pairs(), BudgetExceeded);
    }
}

TEST_CASE("instances validate their shape")
{
    auto g = Graph::from_edges(2, { { 0, 1 } });
    CHECK_THROWS_AS(CspInstance(g, { 2 }, { Relation::inequality(2) }), InputError);
    CHECK_THROWS_AS(CspInstance(g, { 2, 2 }, {}), InputError);
    CHECK_THROWS_AS(CspInstance(g, { 2, 3 }, { Relation::inequality(2) }), InputError);
    CHECK_THROWS_AS(CspInstance(g, { 0, 2 }, { Relation::full(0, 2) }), InputError);
}

TEST_CASE("is_satisfied")
{
    CHECK(is_satisfied(CspInstance(Graph(3), { 2, 2, 2 }, {}), Assignment{ { 1, 0, 1 } }));
    auto edge = single_edge(Relation::inequality(2), 2, 2);
    CHECK(is_satisfied(edge, Assignment{ { 0, 1 } }));
    CHECK(! is_satisfied(edge, Assignment{ { 1, 1 } }));
    CHECK(is_satisfied(coloring_instance(cycle_graph(3), 3), Assignment{ { 0, 1, 2 } }));
    CHECK_THROWS_AS(is_satisfied(edge, Assignment{ { 0 } }), InputError);
    CHECK_THROWS_AS(is_satisfied(edge, Assignment{ { 0, 2 } }), InputError);
}

TEST_CASE("solve_bruteforce")
{
    CHECK(! solve_bruteforce(coloring_instance(cycle_graph(5), 2)));

    auto triangle = coloring_instance(cycle_graph(3), 3);
    auto truth = oracle::enumerate(triangle);
    auto s = solve_bruteforce(triangle);
    REQUIRE(s);
    CHECK(s->values == *truth.least);
    CHECK(s->values == vector<Value>{ 0, 1, 2 });

    auto g = Graph::from_edges(4, { { 0, 1 }, { 1, 2 }, { 2, 3 } });
    CspInstance blocked(g, { 3, 3, 3, 3 }, { Relation::full(3, 3), Relation::explicit_pairs(3, 3, {}), Relation::full(3, 3) });
    CHECK(! solve_bruteforce(blocked));
}

TEST_CASE("count_satisfying")
{
    CHECK(oracle::enumerate(single_edge(Relation::inequality(2), 2, 2)).count == 2);
    CHECK(count_satisfying(single_edge(Relation::inequality(2), 2, 2)) == 2);
    CHECK(oracle::enumerate(coloring_instance(cycle_graph(3), 3)).count == 6);
    CHECK(count_satisfying(coloring_instance(cycle_graph(3), 3)) == 6);
    CHECK(count_satisfying(CspInstance(Graph(4), { 3, 3, 3, 3 }, {})) == 81);
    CHECK(count_satisfying(CspInstance(Graph(3), { 2, 5, 1 }, {})) == 10);
}

TEST_CASE("solvers agree with exhaustive enumeration")
{
    for (std::uint64_t i = 0 ; i < 400 ; ++i) {
        auto inst = random_corpus_instance(i);
        auto truth = oracle::enumerate(inst);
        auto least = solve_bruteforce(inst);
        auto any = find_any_solution(inst);
        REQUIRE(count_satisfying(inst) == truth.count);
        REQUIRE(least.has_value() == (truth.count > 0));
        REQUIRE(any.has_value() == (truth.count > 0));
        if (least) {
            REQUIRE(least->values == *truth.least);
            REQUIRE(is_satisfied(inst, *least));
            REQUIRE(is_satisfied(inst, *any));
        }
        std::set<vector<Value>> seen;
        for_each_solution(inst, [&] (const Assignment & a) { seen.insert(a.values); });
        REQUIRE(seen == std::set<vector<Value>>(truth.all.begin(), truth.all.end()));
    }
}

TEST_CASE("the node budget is enforced")
{
    SolverParams tiny;
    tiny.node_budget = 10;
    CHECK_THROWS_AS(count_satisfying(coloring_instance(complete_graph(6), 5), tiny), BudgetExceeded);
}

TEST_CASE("counting mixed alphabets")
{
    auto g = Graph::from_edges(3, { { 0, 1 }, { 1, 2 } });
    CspInstance inst(g, { 2, 4, 3 }, {
            Relation::intensional(2, 4, [] (Value a, Value b) { return b >= a; }),
            Relation::intensional(4, 3, [] (Value a, Value b) { return a != b; }) });
    CHECK(count_satisfying(inst) == oracle::enumerate(inst).count);
}

TEST_CASE("random_instance")
{
    SECTION("density one is always satisfiable") {
        auto inst = random_instance(6, 0.8, 3, 1.0, 4);
        for (auto & r : inst.constraints())
            CHECK(r.pairs().size() == 9);
        CHECK(solve_bruteforce(inst));
    }

    SECTION("density zero with an edge is unsatisfiable") {
        auto inst = random_instance(5, 1.0, 3, 0.0, 4);
        REQUIRE(inst.graph().edge_count() > 0);
        CHECK(! solve_bruteforce(inst));
    }

    SECTION("deterministic per seed") {
        auto a = random_instance(6, 0.5, 3, 0.5, 99), b = random_instance(6, 0.5, 3, 0.5, 99);
        CHECK(a.graph() == b.graph());
        for (int id = 0 ; id < a.graph().edge_count() ; ++id)
            CHECK(a.constraint(id).pairs() == b.constraint(id).pairs());
    }
}

TEST_CASE("coloring_instance")
{
    auto k4 = coloring_instance(complete_graph(4), 3);
    for (auto & r : k4.constraints())
        CHECK(r.pairs().size() == 6);
    CHECK(oracle::count_colourings(complete_graph(5), 3) == 0);
    CHECK(! solve_bruteforce(coloring_instance(complete_graph(5), 3)));
    CHECK(oracle::count_colourings(octahedron(), 3) > 0);
    CHECK(solve_bruteforce(coloring_instance(octahedron(), 3)));

    std::mt19937_64 rng(6);
    for (int trial = 0 ; trial < 150 ; ++trial) {
        auto g = erdos_renyi(1 + int(rng() % 8), 0.5, rng());
        Value q = 1 + Value(rng() % 4);
        REQUIRE(count_satisfying(coloring_instance(g, q)) == oracle::count_colourings(g, q));
    }
}

TEST_CASE("four_regular_coloring_instance")
{
    SECTION("already 4-regular graphs are unchanged") {
        auto padded = four_regular_coloring_instance(octahedron(), 3);
        CHECK(padded.dummy_edges.empty());
        CHECK(padded.instance.graph() == octahedron());
    }

    SECTION("dummy constraints accept everything") {
        auto g = cycle_graph(5);
        auto padded = four_regular_coloring_instance(g, 3);
        CHECK(padded.instance.graph().is_regular(4));
        REQUIRE(! padded.dummy_edges.empty());
        for (auto [u, v] : padded.dummy_edges) {
            CHECK(! g.adjacent(u, v));
            auto id = padded.instance.graph().edge_index(u, v);
            REQUIRE(id);
            CHECK(padded.instance.constraint(*id).pairs().size() == 9);
        }
    }

    SECTION("satisfiability is unchanged") {
        std::mt19937_64 rng(12);
        int checked = 0;
        while (checked < 50) {
            int n = 5 + int(rng() % 4);
            auto g = erdos_renyi(n, 0.5, rng());
            if (g.max_degree() > 4)
                continue;
            try {
                auto padded = four_regular_coloring_instance(g, 3);
                REQUIRE(padded.instance.graph().is_regular(4));
                REQUIRE((oracle::count_colourings(g, 3) > 0) == solve_bruteforce(padded.instance).has_value());
                ++checked;
            }
            catch (const InputError &) {
            }
        }
    }

    SECTION("refuses graphs that cannot be padded") {
        CHECK_THROWS_AS(four_regular_coloring_instance(complete_graph(6), 3), InputError);
        CHECK_THROWS_AS(four_regular_coloring_instance(Graph(3), 3), InputError);
    }
}

TEST_CASE("clique_instance")
{
    auto c5 = cycle_graph(5);
    CHECK(solve_bruteforce(clique_instance(c5, 2)));
    CHECK(! oracle::has_clique(c5, 3));
    CHECK(! solve_bruteforce(clique_instance(c5, 3)));
    CHECK(clique_instance(c5, 4).graph().edge_count() == 6);

    std::mt19937_64 rng(13);
    for (int trial = 0 ; trial < 60 ; ++trial) {
        auto g = erdos_renyi(4 + int(rng() % 7), 0.5, rng());
        int k = 2 + int(rng() % 3);
        REQUIRE(solve_bruteforce(clique_instance(g, k)).has_value() == oracle::has_clique(g, k));
    }
}

TEST_CASE("regularize")
{
    SECTION("graphs of minimum degree three give 2m variables") {
        for (auto & g : { complete_graph(4), complete_graph(5), octahedron() }) {
            auto r = regularize(coloring_instance(g, 3));
            CHECK(r.instance.size() == 2 * g.edge_count());
            CHECK(r.instance.graph().is_regular(3));
        }
    }

    SECTION("solution counts are preserved") {
        int checked = 0;
        for (std::uint64_t i = 0 ; checked < 100 ; ++i) {
            std::mt19937_64 rng(i);
            int n = 2 + int(rng() % 5);
            Value q = 1 + Value(rng() % 3);
            auto inst = random_instance(n, 0.6, q, 0.6, rng());
            if (has_isolated_vertex(inst))
                continue;
            auto r = regularize(inst);
            REQUIRE(r.instance.graph().is_regular(3));
            REQUIRE(r.origin.size() == size_t(r.instance.size()));
            auto before = oracle::enumerate(inst).count;
            REQUIRE(count_satisfying(r.instance) == before);
            ++checked;
        }
    }

    SECTION("copies carry the original value") {
        auto inst = coloring_instance(cycle_graph(4), 2);
        auto r = regularize(inst);
        for_each_solution(r.instance, [&] (const Assignment & a) {
            vector<Value> seen(inst.size(), -1);
            for (int i = 0 ; i < r.instance.size() ; ++i)
                if (r.origin[i] >= 0) {
                    if (seen[r.origin[i]] >= 0)
                        REQUIRE(seen[r.origin[i]] == a.values[i]);
                    seen[r.origin[i]] = a.values[i];
                }
            REQUIRE(oracle::satisfies(inst, seen));
        });
    }

    SECTION("refuses isolated variables and mixed alphabets") {
        CHECK_THROWS_AS(regularize(CspInstance(Graph(2), { 2, 2 }, {})), InputError);
        CHECK_THROWS_AS(regularize(single_edge(Relation::full(2, 3), 2, 3)), InputError);
    }
}
