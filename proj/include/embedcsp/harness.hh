#ifndef EMBEDCSP_HARNESS_HH
#define EMBEDCSP_HARNESS_HH 1

#include <embedcsp/config.hh>
#include <embedcsp/csp.hh>
#include <embedcsp/serialize.hh>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace embedcsp
{
    enum class ExitStatus
    {
        Ok = 0,
        AssertionFailure = 1,
        InputError = 2,
        BudgetExceeded = 3
    };

    /// A failure attributed to a named stage of a multi-stage command.
    class StageError : public std::runtime_error
    {
        private:
            std::string _stage;
            ExitStatus _status;

        public:
            StageError(std::string stage, ExitStatus status, const std::string & message);

            auto stage() const -> const std::string & { return _stage; }
            auto status() const -> ExitStatus { return _status; }
    };

    /**
     * Builds a source instance from a short description:
     *   octahedron        3-colouring of the octahedron
     *   complete5         3-colouring of the complete graph on 5 vertices
     *   four-regular:N    3-colouring of a random graph on N vertices, padded to 4-regular
     *   file:PATH         a CSP JSON file
     */
    auto gamma_from_source(const std::string & source, std::uint64_t seed) -> CspInstance;

    struct E2EOutcome
    {
        json report;
        bool agreement = false;
    };

    /// Pipeline plus brute-force solving of both sides. Stage failures become StageError.
    auto run_e2e(const CspInstance & gamma, int k, std::uint64_t seed, const ExperimentConfig &, bool count_solutions) -> E2EOutcome;

    struct DepthRow
    {
        int n = 0, k = 0;
        std::uint64_t seed = 0;
        int depth = 0;
        double bound = 0.0;
        double fitted_z = 0.0;
        bool verified = false;

        auto operator== (const DepthRow &) const -> bool = default;
    };

    /// Embeds a seeded random 3-regular source for every (n, k, seed).
    auto depth_sweep(const std::vector<int> & ns, const std::vector<int> & ks, const std::vector<std::uint64_t> & seeds,
            const ExperimentConfig &) -> std::vector<DepthRow>;
    auto depth_sweep_csv(const std::vector<DepthRow> &) -> std::string;
    auto parse_depth_sweep_csv(const std::string &) -> std::vector<DepthRow>;

    struct CongestionRow
    {
        int k = 0;
        int trial = 0;
        std::uint64_t seed = 0;
        int max_edge_congestion = 0;
        int max_path_length = 0;
        double log2k_ratio = 0.0;
        bool endpoints_ok = false;
        bool bookkeeping_ok = false;

        auto operator== (const CongestionRow &) const -> bool = default;
    };

    /// Routes `trials` random perfect matchings on a k-vertex expander, for each k.
    auto congestion_sweep(const std::vector<int> & ks, int trials, std::uint64_t seed, const ExperimentConfig &) -> std::vector<CongestionRow>;

    /// Least-squares slope of max congestion against log2 k.
    auto congestion_slope(const std::vector<CongestionRow> &) -> double;
    auto congestion_sweep_csv(const std::vector<CongestionRow> &) -> std::string;
}

#endif
