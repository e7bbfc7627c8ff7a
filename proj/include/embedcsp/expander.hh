#ifndef EMBEDCSP_EXPANDER_HH
#define EMBEDCSP_EXPANDER_HH 1

#include <embedcsp/graph.hh>

#include <compare>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace embedcsp
{
    /// Nonnegative rational in lowest terms.
    struct Ratio
    {
        long long num = 0, den = 1;

        static auto make(long long num, long long den) -> Ratio;

        auto to_double() const -> double { return double(num) / double(den); }
        auto operator<=> (const Ratio & other) const -> std::strong_ordering;
        auto operator== (const Ratio & other) const -> bool = default;
        auto to_string() const -> std::string;
    };

    enum class CertificateMethod
    {
        Exact,
        Spectral,
        Charged,
        Connectivity
    };

    auto to_string(CertificateMethod) -> std::string;
    auto certificate_method_from_string(const std::string &) -> CertificateMethod;

    enum class ExpanderCase
    {
        SmallExplicit,
        DoubleCover,
        Surgery
    };

    struct ExpanderParams
    {
        int small_case_cutoff = 12;
        int exact_threshold = 24;
        int retry_budget = 200;
        double lambda2_limit = 2.85;
        double certificate_margin = 1e-4;

        /// Force a certificate method instead of the best available one.
        std::optional<CertificateMethod> certify;
    };

    struct CertifiedExpander
    {
        Graph graph;
        Bipartition bipartition;
        double cheeger_lower_bound = 0.0;
        CertificateMethod method = CertificateMethod::Exact;
        std::optional<Ratio> cheeger_exact;

        /// Second eigenvalue of the base graph, for the double cover constructions.
        std::optional<double> lambda2;
        ExpanderCase construction = ExpanderCase::SmallExplicit;
    };

    /// Minimum of |cut(S)| / |S| over nonempty S with |S| <= n/2, by enumerating every subset.
    auto cheeger_exact(const Graph &, int threshold = 24) -> Ratio;

    /// All adjacency eigenvalues in ascending order (dense symmetric solver).
    auto adjacency_spectrum(const Graph &) -> std::vector<double>;

    /// Second largest adjacency eigenvalue of a connected regular graph.
    auto second_eigenvalue(const Graph &) -> double;

    /// Lower bound (d - lambda2) / 2 on the Cheeger constant of a d-regular graph.
    auto cheeger_spectral_bound(const Graph &) -> double;

    /// Uniform simple d-regular graph by the pairing model with rejection.
    auto random_regular_graph(int n, int d, std::mt19937_64 & rng, int max_attempts = 100000) -> Graph;

    struct BaseExpander
    {
        Graph graph;
        double lambda2;
        double least_eigenvalue;
        int attempts;
    };

    /// Seeded non-bipartite 3-regular graph with lambda2 certified below the configured limit.
    auto base_expander(int m, std::uint64_t seed, const ExpanderParams & = {}) -> BaseExpander;

    /// The explicit 3-regular bipartite family i ~ ((i + t) mod n/2) + n/2, t in {-1, 0, 1}.
    auto small_case_expander(int n) -> Graph;

    struct SurgeryResult
    {
        Graph graph;
        /// Removed lifted edge and the rewired neighbour pairs, in the input's labels.
        Vertex u, v;
        std::pair<Vertex, Vertex> first, second;
    };

    /**
     * Shrink the double cover of a non-bipartite base by two vertices.
     *
     * Removes the lift (u, v) of the least edge on a minimum odd cycle of the
     * base, then reconnects the four orphaned neighbours with two new edges
     * chosen so that no parallel edge appears. Remaining vertices keep their
     * relative order.
     */
    auto surgery(const Graph & cover, const Graph & base) -> SurgeryResult;

    /// 3-regular simple balanced bipartite connected graph on n vertices, with a Cheeger certificate.
    auto bipartite_expander(int n, std::uint64_t seed, const ExpanderParams & = {}) -> CertifiedExpander;
}

#endif
