#include <embedcsp/expander.hh>
#include <embedcsp/errors.hh>

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

using std::optional;
using std::pair;
using std::string;
using std::uint64_t;
using std::vector;

namespace embedcsp
{
    using std::to_string;

    namespace
    {
        constexpr int dense_eigen_limit = 512;

        auto second_eigenvalue_power(const Graph & g, int d) -> double
        {
            // power iteration on A + dI (positive semidefinite) restricted to the
            // complement of the all-ones vector; fixed start so results are input-determined
            int n = g.size();
            Eigen::VectorXd x(n);
            std::mt19937_64 rng(0x5eed);
            std::uniform_real_distribution<double> dist(-1.0, 1.0);
            for (int i = 0 ; i < n ; ++i)
                x[i] = dist(rng);

            auto project = [&] (Eigen::VectorXd & y) {
                y.array() -= y.mean();
                y.normalize();
            };
            project(x);

            double previous = 0.0, estimate = 0.0;
            Eigen::VectorXd y(n);
            for (int iteration = 0 ; iteration < 200000 ; ++iteration) {
                for (int v = 0 ; v < n ; ++v) {
                    double s = d * x[v];
                    for (auto w : g.neighbours(v))
                        s += x[w];
                    y[v] = s;
                }
                estimate = x.dot(y) - d;
                project(y);
                x.swap(y);
                if (iteration > 10 && std::abs(estimate - previous) < 1e-13)
                    break;
                previous = estimate;
            }
            return estimate;
        }

        auto best_certificate(CertifiedExpander & result, const ExpanderParams & params, optional<double> charged) -> void
        {
            auto & g = result.graph;
            auto forced = params.certify;

            if (forced == CertificateMethod::Exact && g.size() > params.exact_threshold)
                throw InputError("exact certificate requested for " + to_string(g.size()) + " vertices, above threshold " + to_string(params.exact_threshold));

            if (forced == CertificateMethod::Exact || (! forced && g.size() <= params.exact_threshold)) {
                result.cheeger_exact = cheeger_exact(g, params.exact_threshold);
                result.cheeger_lower_bound = result.cheeger_exact->to_double();
                result.method = CertificateMethod::Exact;
                return;
            }

            double spectral = cheeger_spectral_bound(g);
            if (forced == CertificateMethod::Spectral || ! charged || spectral >= *charged) {
                result.cheeger_lower_bound = spectral;
                result.method = CertificateMethod::Spectral;
            }
            else {
                result.cheeger_lower_bound = *charged;
                result.method = CertificateMethod::Charged;
            }

            if (result.cheeger_lower_bound <= 0.0) {
                // connected graphs always cut at least one edge per set of size <= n/2
                result.cheeger_lower_bound = 2.0 / g.size();
                result.method = CertificateMethod::Connectivity;
            }
        }
    }

    auto Ratio::make(long long num, long long den) -> Ratio
    {
        if (den <= 0 || num < 0)
            throw InputError("ratio needs a nonnegative numerator and positive denominator");
        auto g = std::gcd(num, den);
        return Ratio{ num / g, den / g };
    }

    auto Ratio::operator<=> (const Ratio & other) const -> std::strong_ordering
    {
        return (__int128(num) * other.den) <=> (__int128(other.num) * den);
    }

    auto Ratio::to_string() const -> string
    {
        return std::to_string(num) + "/" + std::to_string(den);
    }

    auto to_string(CertificateMethod m) -> string
    {
        switch (m) {
            case CertificateMethod::Exact:        return "exact";
            case CertificateMethod::Spectral:     return "spectral";
            case CertificateMethod::Charged:      return "charged";
            case CertificateMethod::Connectivity: return "connectivity";
        }
        return "unknown";
    }

    auto certificate_method_from_string(const string & s) -> CertificateMethod
    {
        for (auto m : { CertificateMethod::Exact, CertificateMethod::Spectral, CertificateMethod::Charged, CertificateMethod::Connectivity })
            if (to_string(m) == s)
                return m;
        throw InputError("unknown certificate method '" + s + "'");
    }

    auto cheeger_exact(const Graph & g, int threshold) -> Ratio
    {
        int n = g.size();
        if (n < 2)
            throw InputError("Cheeger constant needs at least two vertices");
        if (n > threshold || n > 62)
            throw InputError("exact Cheeger refused: " + to_string(n) + " vertices exceeds threshold " + to_string(threshold) + "; use the spectral bound");

        vector<uint64_t> adjacency(n, 0);
        for (auto [u, v] : g.edges()) {
            adjacency[u] |= uint64_t(1) << v;
            adjacency[v] |= uint64_t(1) << u;
        }

        // Gray code walk: each step toggles one vertex and updates the cut incrementally
        uint64_t set = 0;
        long long cut = 0, size = 0;
        Ratio best{ 1, 0 };
        bool have_best = false;
        uint64_t limit = uint64_t(1) << n;
        for (uint64_t i = 1 ; i < limit ; ++i) {
            int b = std::countr_zero(i);
            uint64_t bit = uint64_t(1) << b;
            int inside = std::popcount(adjacency[b] & set & ~bit);
            int deg = g.degree(b);
            if (set & bit) {
                set &= ~bit;
                --size;
                cut -= deg - 2 * inside;
            }
            else {
                set |= bit;
                ++size;
                cut += deg - 2 * inside;
            }

            if (2 * size <= n && (! have_best || __int128(cut) * best.den < __int128(best.num) * size)) {
                best = Ratio{ cut, size };
                have_best = true;
            }
        }

        return Ratio::make(best.num, best.den);
    }

    auto adjacency_spectrum(const Graph & g) -> vector<double>
    {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.size(), g.size());
        for (auto [u, v] : g.edges()) {
            a(u, v) = 1.0;
            a(v, u) = 1.0;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
        auto & values = solver.eigenvalues();
        return vector<double>(values.data(), values.data() + values.size());
    }

    auto second_eigenvalue(const Graph & g) -> double
    {
        if (g.size() < 2)
            throw InputError("second eigenvalue needs at least two vertices");
        int d = g.degree(0);
        if (! g.is_regular(d))
            throw InputError("second eigenvalue needs a regular graph");
        if (! is_connected(g))
            throw InputError("second eigenvalue needs a connected graph");

        if (g.size() <= dense_eigen_limit) {
            auto spectrum = adjacency_spectrum(g);
            return spectrum[spectrum.size() - 2];
        }
        return second_eigenvalue_power(g, d);
    }

    auto cheeger_spectral_bound(const Graph & g) -> double
    {
        auto lambda2 = second_eigenvalue(g);
        return (g.degree(0) - lambda2) / 2.0;
    }

    auto random_regular_graph(int n, int d, std::mt19937_64 & rng, int max_attempts) -> Graph
    {
        if (n <= d || (n * d) % 2 != 0 || d < 0)
            throw InputError("no simple " + to_string(d) + "-regular graph on " + to_string(n) + " vertices");

        vector<Vertex> stubs;
        for (Vertex v = 0 ; v < n ; ++v)
            for (int i = 0 ; i < d ; ++i)
                stubs.push_back(v);

        for (int attempt = 0 ; attempt < max_attempts ; ++attempt) {
            std::shuffle(stubs.begin(), stubs.end(), rng);
            vector<pair<Vertex, Vertex>> edges;
            bool simple = true;
            for (size_t i = 0 ; i < stubs.size() && simple ; i += 2) {
                auto a = std::min(stubs[i], stubs[i + 1]), b = std::max(stubs[i], stubs[i + 1]);
                if (a == b)
                    simple = false;
                else
                    edges.emplace_back(a, b);
            }
            if (! simple)
                continue;
            std::sort(edges.begin(), edges.end());
            if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
                continue;
            return Graph::from_edges(n, edges);
        }

        throw ConstructionFailure("pairing model produced no simple graph in " + to_string(max_attempts) + " attempts");
    }

    auto base_expander(int m, uint64_t seed, const ExpanderParams & params) -> BaseExpander
    {
        if (m < 6)
            throw InputError("base expander needs at least 6 vertices, got " + to_string(m));
        if (m % 2 != 0)
            throw InputError("base expander needs an even vertex count (3-regular handshake), got " + to_string(m));

        std::mt19937_64 rng(seed);
        double limit = params.lambda2_limit - params.certificate_margin;
        for (int attempt = 1 ; attempt <= params.retry_budget ; ++attempt) {
            auto g = random_regular_graph(m, 3, rng);
            auto spectrum = adjacency_spectrum(g);
            double lambda2 = spectrum[spectrum.size() - 2], least = spectrum.front();
            // lambda2 < 3 forces connectivity, least > -3 forces an odd cycle
            if (lambda2 <= limit && least > -3.0 + params.certificate_margin)
                return BaseExpander{ std::move(g), lambda2, least, attempt };
        }

        throw ConstructionFailure("no base expander on " + to_string(m) + " vertices with lambda2 <= "
                + to_string(limit) + " within the retry budget of " + to_string(params.retry_budget) + " attempts");
    }

    auto small_case_expander(int n) -> Graph
    {
        if (n < 6 || n % 2 != 0)
            throw InputError("small case expander needs an even n >= 6, got " + to_string(n));
        int half = n / 2;
        vector<pair<Vertex, Vertex>> edges;
        for (int i = 0 ; i < half ; ++i)
            for (int t : { -1, 0, 1 })
                edges.emplace_back(i, ((i + t + half) % half) + half);
        return Graph::from_edges(n, edges);
    }

    auto surgery(const Graph & cover, const Graph & base) -> SurgeryResult
    {
        int m = base.size();
        if (! base.is_regular(3))
            throw InputError("surgery needs a 3-regular base");
        if (cover != double_cover(base))
            throw InputError("surgery input is not the double cover of the given base");

        auto cycle = min_odd_cycle(base);
        if (! cycle)
            throw InputError("surgery needs a non-bipartite base");

        auto & c = cycle->vertices;
        Edge least{ std::min(c.back(), c.front()), std::max(c.back(), c.front()) };
        for (size_t i = 0 ; i + 1 < c.size() ; ++i)
            least = std::min(least, Edge{ std::min(c[i], c[i + 1]), std::max(c[i], c[i + 1]) });

        Vertex u = least.u, v = least.v + m;
        vector<Vertex> vs, us;
        for (auto w : cover.neighbours(u))
            if (w != v)
                vs.push_back(w);
        for (auto w : cover.neighbours(v))
            if (w != u)
                us.push_back(w);

        optional<pair<pair<Vertex, Vertex>, pair<Vertex, Vertex>>> choice;
        if (! cover.adjacent(us[0], vs[0]) && ! cover.adjacent(us[1], vs[1]))
            choice = { { us[0], vs[0] }, { us[1], vs[1] } };
        else if (! cover.adjacent(us[0], vs[1]) && ! cover.adjacent(us[1], vs[0]))
            choice = { { us[0], vs[1] }, { us[1], vs[0] } };
        else
            throw ConstructionFailure("surgery found no rewiring without parallel edges; minimum odd cycle precondition violated");

        auto relabel = [&] (Vertex x) { return x - (x > u ? 1 : 0) - (x > v ? 1 : 0); };
        vector<pair<Vertex, Vertex>> edges;
        for (auto [a, b] : cover.edges())
            if (a != u && a != v && b != u && b != v)
                edges.emplace_back(relabel(a), relabel(b));
        edges.emplace_back(relabel(choice->first.first), relabel(choice->first.second));
        edges.emplace_back(relabel(choice->second.first), relabel(choice->second.second));

        return SurgeryResult{ Graph::from_edges(cover.size() - 2, edges), u, v, choice->first, choice->second };
    }

    auto bipartite_expander(int n, uint64_t seed, const ExpanderParams & params) -> CertifiedExpander
    {
        if (n < 6 || n % 2 != 0)
            throw InputError("bipartite expander needs an even n >= 6, got " + to_string(n));

        CertifiedExpander result;
        optional<double> charged;
        if (n < params.small_case_cutoff) {
            result.graph = small_case_expander(n);
            result.construction = ExpanderCase::SmallExplicit;
        }
        else if (n % 4 == 0) {
            auto base = base_expander(n / 2, seed, params);
            result.graph = double_cover(base.graph);
            result.lambda2 = base.lambda2;
            result.construction = ExpanderCase::DoubleCover;
        }
        else {
            auto base = base_expander((n + 2) / 2, seed, params);
            auto cover = double_cover(base.graph);
            result.graph = surgery(cover, base.graph).graph;
            result.lambda2 = base.lambda2;
            result.construction = ExpanderCase::Surgery;
            charged = (3.0 - base.lambda2) / 2.0 / 5.0;
        }

        // the left side is a prefix of the labels in every case
        result.bipartition.side.assign(n, Side::Right);
        std::fill(result.bipartition.side.begin(), result.bipartition.side.begin() + n / 2, Side::Left);

        if (! result.graph.is_regular(3) || ! result.bipartition.valid_for(result.graph) || ! is_connected(result.graph))
            throw ConstructionFailure("bipartite expander on " + to_string(n) + " vertices failed its structural self-check");

        best_certificate(result, params, charged);
        return result;
    }
}
