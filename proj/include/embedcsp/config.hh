#ifndef EMBEDCSP_CONFIG_HH
#define EMBEDCSP_CONFIG_HH 1

#include <embedcsp/compile.hh>
#include <embedcsp/csp.hh>
#include <embedcsp/serialize.hh>

#include <string>

namespace embedcsp
{
    /**
     * Every tunable constant in one place. Defaults:
     *
     *   z                      64      depth bound constant
     *   c_cong, c_len          8       routing congestion / path length constants
     *   beta                   1       routing penalty exponent
     *   reroute_sweeps         20
     *   accumulate_congestion  true    later matchings see earlier load
     *   small_case_cutoff      12      explicit expander family below this order
     *   exact_cheeger_limit    24      exhaustive Cheeger computation up to this order
     *   base_retry_budget      200     base expander samples before giving up
     *   lambda2_limit          2.85    base expander spectral certificate
     *   certificate_margin     1e-4
     *   node_budget            1e8     exhaustive CSP search nodes
     *   materialize_limit      1e6     explicit relation pairs
     *   deduplicate_internal   false
     */
    struct ExperimentConfig
    {
        EmbeddingParams embedding;
        CompileParams compile;
        SolverParams solver;

        auto pipeline() const -> PipelineParams { return PipelineParams{ embedding, compile }; }
    };

    auto config_to_json(const ExperimentConfig &) -> json;

    /// Unknown keys are rejected so that typos do not silently fall back to defaults.
    auto config_from_json(const json &) -> ExperimentConfig;

    auto load_config(const std::string & path) -> ExperimentConfig;
}

#endif
