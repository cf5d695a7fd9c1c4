#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "datasel/flops.hpp"
#include "datasel/perf_model.hpp"

namespace datasel {

/// One budget sweep: a shared per-token training cost, a strictly
/// increasing budget grid, and the methods competing on it.
struct ScenarioPanel {
    std::string label;
    std::vector<double> budget_grid;
    std::vector<std::pair<PerfCurveParams, MethodCostModel>> methods;
};

/// A simulation scenario file: named model configs, the dataset size in
/// the panel's cost unit, and one panel per budget regime.
struct ScenarioConfig {
    std::string name;
    std::int64_t dataset_tokens = 0;
    double validation_tokens = 0.0;
    std::uint64_t seed = 0;
    std::map<std::string, TransformerConfig> model_configs;
    std::vector<ScenarioPanel> panels;
};

/// The three Llama-2 reference configurations, keyed llama2-7b/13b/70b.
const std::map<std::string, TransformerConfig>& builtin_model_configs();

/// Loads a JSON object keyed by model name, each value carrying the six
/// integer dimension fields of TransformerConfig.
std::map<std::string, TransformerConfig> load_model_configs(const std::string& path);

/// Resolves a model name against an optional config file and then the
/// built-in table.
TransformerConfig resolve_model(const std::string& name,
                                const std::map<std::string, TransformerConfig>& extra);

ScenarioConfig load_scenario(const std::string& path);

}  // namespace datasel
