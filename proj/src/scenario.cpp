#include "datasel/scenario.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace datasel {

using nlohmann::json;

namespace {

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw std::runtime_error(path + ": malformed JSON: " + e.what());
    }
}

std::int64_t require_int(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key) || !obj[key].is_number_integer()) {
        throw std::runtime_error(where + ": missing or non-integer field '" + key + "'");
    }
    return obj[key].get<std::int64_t>();
}

double require_number(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key) || !obj[key].is_number()) {
        throw std::runtime_error(where + ": missing or non-numeric field '" + key + "'");
    }
    return obj[key].get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) {
        throw std::runtime_error("field '" + key + "' must be numeric");
    }
    return obj[key].get<double>();
}

TransformerConfig transformer_config_from_json(const std::string& name, const json& obj,
                                               const std::string& where) {
    TransformerConfig cfg;
    cfg.name = name;
    cfg.n_layer = require_int(obj, "n_layer", where);
    cfg.n_ctx = require_int(obj, "n_ctx", where);
    cfg.d_model = require_int(obj, "d_model", where);
    cfg.d_ff = require_int(obj, "d_ff", where);
    cfg.d_attn = require_int(obj, "d_attn", where);
    cfg.n_vocab = require_int(obj, "n_vocab", where);
    validate(cfg);
    return cfg;
}

}  // namespace

const std::map<std::string, TransformerConfig>& builtin_model_configs() {
    static const std::map<std::string, TransformerConfig> configs = {
        {"llama2-7b", {32, 4096, 4096, 11008, 4096, 32000, "llama2-7b"}},
        {"llama2-13b", {40, 4096, 5120, 13824, 5120, 32000, "llama2-13b"}},
        {"llama2-70b", {80, 4096, 8192, 28672, 10240, 32000, "llama2-70b"}},
    };
    return configs;
}

std::map<std::string, TransformerConfig> load_model_configs(const std::string& path) {
    const json root = load_json_file(path);
    if (!root.is_object()) throw std::runtime_error(path + ": expected a JSON object");
    std::map<std::string, TransformerConfig> configs;
    for (const auto& [name, obj] : root.items()) {
        configs.emplace(name, transformer_config_from_json(name, obj, path + ": model '" + name +
                                                                         "'"));
    }
    return configs;
}

TransformerConfig resolve_model(const std::string& name,
                                const std::map<std::string, TransformerConfig>& extra) {
    if (auto it = extra.find(name); it != extra.end()) return it->second;
    const auto& builtin = builtin_model_configs();
    if (auto it = builtin.find(name); it != builtin.end()) return it->second;
    throw std::invalid_argument("unknown model '" + name + "'");
}

ScenarioConfig load_scenario(const std::string& path) {
    const json root = load_json_file(path);
    if (!root.is_object()) throw std::runtime_error(path + ": expected a JSON object");

    ScenarioConfig scenario;
    scenario.name = root.value("name", std::string{});
    scenario.dataset_tokens = require_int(root, "dataset_tokens", path);
    if (scenario.dataset_tokens <= 0) {
        throw std::runtime_error(path + ": dataset_tokens must be positive");
    }
    scenario.validation_tokens = number_or(root, "validation_tokens", 0.0);
    if (root.contains("seed")) {
        scenario.seed = root["seed"].get<std::uint64_t>();
    }
    if (root.contains("model_configs")) {
        for (const auto& [name, obj] : root["model_configs"].items()) {
            scenario.model_configs.emplace(
                name, transformer_config_from_json(name, obj, path + ": model '" + name + "'"));
        }
    }

    if (!root.contains("panels") || !root["panels"].is_array() || root["panels"].empty()) {
        throw std::runtime_error(path + ": missing or empty 'panels' array");
    }

    const double default_p0 = number_or(root, "p0", 0.0);
    const double default_pbar = number_or(root, "pbar", 0.0);

    for (const auto& panel_json : root["panels"]) {
        ScenarioPanel panel;
        panel.label = panel_json.value("label", std::string{});
        const std::string where = path + ": panel '" + panel.label + "'";

        if (!panel_json.contains("budget_grid") || !panel_json["budget_grid"].is_array() ||
            panel_json["budget_grid"].empty()) {
            throw std::runtime_error(where + ": missing or empty 'budget_grid'");
        }
        double prev = 0.0;
        bool first = true;
        for (const auto& b : panel_json["budget_grid"]) {
            const double budget = b.get<double>();
            if (!first && budget <= prev) {
                throw std::runtime_error(where + ": budget_grid must be strictly increasing");
            }
            panel.budget_grid.push_back(budget);
            prev = budget;
            first = false;
        }

        const double panel_c = require_number(panel_json, "train_flops_per_token", where);
        const double panel_p0 = number_or(panel_json, "p0", default_p0);
        const double panel_pbar = number_or(panel_json, "pbar", default_pbar);

        if (!panel_json.contains("methods") || !panel_json["methods"].is_array() ||
            panel_json["methods"].empty()) {
            throw std::runtime_error(where + ": missing or empty 'methods'");
        }
        for (const auto& method_json : panel_json["methods"]) {
            MethodCostModel cost;
            cost.label = method_json.value("label", std::string{});
            const std::string method_where = where + ", method '" + cost.label + "'";
            cost.dataset_tokens = scenario.dataset_tokens;
            cost.train_flops_per_token = number_or(method_json, "train_flops_per_token", panel_c);

            if (method_json.contains("selection")) {
                // Resolve a selection-cost spec against the named models.
                const auto& sel = method_json["selection"];
                SelectionCostSpec spec;
                spec.method = selection_method_from_string(
                    sel.value("method", std::string{"random"}));
                if (sel.contains("selector")) {
                    spec.selector_config = resolve_model(sel["selector"].get<std::string>(),
                                                         scenario.model_configs);
                }
                spec.embed_param_count = number_or(sel, "embed_param_count", 0.0);
                spec.bm25_flops_per_token = number_or(sel, "bm25_flops_per_token", 1.0);
                spec.warmup_fraction = number_or(sel, "warmup_fraction", 0.05);
                if (sel.contains("warmup_epochs")) {
                    spec.warmup_epochs = sel["warmup_epochs"].get<std::int64_t>();
                }
                spec.grad_feature_time_ratio = number_or(sel, "grad_feature_time_ratio", 8.0);
                TransformerConfig trainer;
                trainer.name = "panel";
                trainer.n_layer = trainer.n_ctx = trainer.d_model = trainer.d_ff =
                    trainer.d_attn = trainer.n_vocab = 1;
                cost.fixed_selection_flops =
                    selection_cost(spec, static_cast<double>(scenario.dataset_tokens),
                                   scenario.validation_tokens, trainer)
                        .selection_flops;
            } else {
                cost.fixed_selection_flops =
                    require_number(method_json, "fixed_selection_flops", method_where);
            }

            PerfCurveParams params;
            params.p0 = number_or(method_json, "p0", panel_p0);
            params.pbar = number_or(method_json, "pbar", panel_pbar);
            params.lam = require_number(method_json, "lambda", method_where);
            validate(params);
            validate(cost);
            panel.methods.emplace_back(params, cost);
        }
        scenario.panels.push_back(std::move(panel));
    }
    return scenario;
}

}  // namespace datasel
