#include <embedcsp/config.hh>
#include <embedcsp/errors.hh>

using std::string;

namespace embedcsp
{
    auto config_to_json(const ExperimentConfig & c) -> json
    {
        auto & e = c.embedding;
        return json{
            { "z", e.z },
            { "c_cong", e.routing.c_cong },
            { "c_len", e.routing.c_len },
            { "beta", e.routing.beta },
            { "reroute_sweeps", e.routing.sweeps },
            { "accumulate_congestion", e.accumulate },
            { "small_case_cutoff", e.expander.small_case_cutoff },
            { "exact_cheeger_limit", e.expander.exact_threshold },
            { "base_retry_budget", e.expander.retry_budget },
            { "lambda2_limit", e.expander.lambda2_limit },
            { "certificate_margin", e.expander.certificate_margin },
            { "node_budget", c.solver.node_budget },
            { "materialize_limit", c.compile.materialize_limit },
            { "deduplicate_internal", c.compile.deduplicate_internal }
        };
    }

    auto config_from_json(const json & j) -> ExperimentConfig
    {
        if (! j.is_object())
            throw InputError("config must be a JSON object");

        ExperimentConfig c;
        auto & e = c.embedding;
        for (auto & [key, value] : j.items()) {
            try {
                if (key == "z") e.z = value.get<double>();
                else if (key == "c_cong") e.routing.c_cong = value.get<double>();
                else if (key == "c_len") e.routing.c_len = value.get<double>();
                else if (key == "beta") e.routing.beta = value.get<double>();
                else if (key == "reroute_sweeps") e.routing.sweeps = value.get<int>();
                else if (key == "accumulate_congestion") e.accumulate = value.get<bool>();
                else if (key == "small_case_cutoff") e.expander.small_case_cutoff = value.get<int>();
                else if (key == "exact_cheeger_limit") e.expander.exact_threshold = value.get<int>();
                else if (key == "base_retry_budget") e.expander.retry_budget = value.get<int>();
                else if (key == "lambda2_limit") e.expander.lambda2_limit = value.get<double>();
                else if (key == "certificate_margin") e.expander.certificate_margin = value.get<double>();
                else if (key == "node_budget") c.solver.node_budget = value.get<std::uint64_t>();
                else if (key == "materialize_limit") c.compile.materialize_limit = value.get<std::uint64_t>();
                else if (key == "deduplicate_internal") c.compile.deduplicate_internal = value.get<bool>();
                else
                    throw InputError("unknown config key '" + key + "'");
            }
            catch (const json::exception & ex) {
                throw InputError("config key '" + key + "' has the wrong type: " + ex.what());
            }
        }
        return c;
    }

    auto load_config(const string & path) -> ExperimentConfig
    {
        return config_from_json(read_json_file(path));
    }
}
