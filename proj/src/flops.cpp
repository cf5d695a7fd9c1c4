#include "datasel/flops.hpp"

#include <cmath>
#include <stdexcept>

namespace datasel {

void validate(const TransformerConfig& cfg) {
    auto require_positive = [&](std::int64_t v, const char* field) {
        if (v <= 0) {
            throw std::invalid_argument("TransformerConfig" +
                                        (cfg.name.empty() ? std::string() : " '" + cfg.name + "'") +
                                        ": field " + field + " must be a positive integer");
        }
    };
    require_positive(cfg.n_layer, "n_layer");
    require_positive(cfg.n_ctx, "n_ctx");
    require_positive(cfg.d_model, "d_model");
    require_positive(cfg.d_ff, "d_ff");
    require_positive(cfg.d_attn, "d_attn");
    require_positive(cfg.n_vocab, "n_vocab");
}

double param_count(const TransformerConfig& cfg) {
    validate(cfg);
    const double d_model = static_cast<double>(cfg.d_model);
    const double n_layer = static_cast<double>(cfg.n_layer);
    const double d_attn = static_cast<double>(cfg.d_attn);
    const double d_ff = static_cast<double>(cfg.d_ff);
    const double n_vocab = static_cast<double>(cfg.n_vocab);
    // QKV + attention projection + feedforward blocks, plus the input
    // embedding and the de-embedding head.
    return 2.0 * d_model * n_layer * (2.0 * d_attn + 1.5 * d_ff) + 2.0 * d_model * n_vocab;
}

double forward_flops_per_token(const TransformerConfig& cfg) {
    const double params = param_count(cfg);
    const double context = 4.0 * static_cast<double>(cfg.n_layer) *
                           static_cast<double>(cfg.n_ctx) * static_cast<double>(cfg.d_attn);
    return 2.0 * params + context;
}

double training_flops_per_token(const TransformerConfig& cfg) {
    return 3.0 * forward_flops_per_token(cfg);
}

double approx_6nd(double params, double tokens) {
    if (!(params > 0.0) || !(tokens > 0.0)) {
        throw std::invalid_argument("approx_6nd: params and tokens must be positive");
    }
    return 6.0 * params * tokens;
}

std::string to_string(SelectionMethod m) {
    switch (m) {
        case SelectionMethod::Bm25: return "bm25";
        case SelectionMethod::Embed: return "embed";
        case SelectionMethod::Ppl: return "ppl";
        case SelectionMethod::Gradient: return "grad";
        case SelectionMethod::Random: return "random";
    }
    throw std::invalid_argument("unknown SelectionMethod");
}

SelectionMethod selection_method_from_string(const std::string& s) {
    if (s == "bm25") return SelectionMethod::Bm25;
    if (s == "embed") return SelectionMethod::Embed;
    if (s == "ppl") return SelectionMethod::Ppl;
    if (s == "grad" || s == "gradient") return SelectionMethod::Gradient;
    if (s == "random") return SelectionMethod::Random;
    throw std::invalid_argument("unknown selection method '" + s +
                                "' (expected bm25|embed|ppl|grad|random)");
}

void validate(const SelectionCostSpec& spec) {
    const bool needs_selector =
        spec.method == SelectionMethod::Ppl || spec.method == SelectionMethod::Gradient;
    if (needs_selector != spec.selector_config.has_value()) {
        throw std::invalid_argument(
            needs_selector
                ? "SelectionCostSpec: " + to_string(spec.method) + " requires a selector_config"
                : "SelectionCostSpec: selector_config is only valid for ppl and grad");
    }
    if (spec.selector_config) validate(*spec.selector_config);
    if (spec.method == SelectionMethod::Embed && !(spec.embed_param_count > 0.0)) {
        throw std::invalid_argument("SelectionCostSpec: embed requires embed_param_count > 0");
    }
    if (!(spec.bm25_flops_per_token > 0.0)) {
        throw std::invalid_argument("SelectionCostSpec: bm25_flops_per_token must be positive");
    }
    if (!(spec.warmup_fraction > 0.0) || spec.warmup_fraction > 1.0) {
        throw std::invalid_argument("SelectionCostSpec: warmup_fraction must lie in (0, 1]");
    }
    if (spec.warmup_epochs < 1) {
        throw std::invalid_argument("SelectionCostSpec: warmup_epochs must be >= 1");
    }
    if (!(spec.grad_feature_time_ratio > 0.0)) {
        throw std::invalid_argument("SelectionCostSpec: grad_feature_time_ratio must be positive");
    }
}

CostBreakdown selection_cost(const SelectionCostSpec& spec, double corpus_tokens,
                             double validation_tokens, const TransformerConfig& train_config) {
    validate(spec);
    if (!(corpus_tokens > 0.0)) {
        throw std::invalid_argument("selection_cost: corpus_tokens must be positive");
    }
    if (validation_tokens < 0.0) {
        throw std::invalid_argument("selection_cost: validation_tokens must be non-negative");
    }

    CostBreakdown out;
    out.train_flops_per_token = training_flops_per_token(train_config);

    switch (spec.method) {
        case SelectionMethod::Bm25:
            out.selection_flops = spec.bm25_flops_per_token * corpus_tokens;
            out.notes.push_back("bm25: " + std::to_string(spec.bm25_flops_per_token) +
                                " FLOPs per corpus token, validation tokens not charged");
            break;
        case SelectionMethod::Embed:
            out.selection_flops =
                2.0 * spec.embed_param_count * (corpus_tokens + validation_tokens);
            out.notes.push_back("embed: one encoder forward (2N per token) over corpus and "
                                "validation tokens");
            break;
        case SelectionMethod::Ppl:
            out.selection_flops = forward_flops_per_token(*spec.selector_config) * corpus_tokens;
            out.notes.push_back("ppl: one selector forward pass per corpus token");
            break;
        case SelectionMethod::Gradient: {
            const double warmup = static_cast<double>(spec.warmup_epochs) * spec.warmup_fraction *
                                  corpus_tokens * training_flops_per_token(*spec.selector_config);
            const double features = spec.grad_feature_time_ratio * warmup;
            out.selection_flops = warmup + features;
            out.notes.push_back("grad: warm-up training plus feature computation at " +
                                std::to_string(spec.grad_feature_time_ratio) +
                                "x the warm-up cost");
            break;
        }
        case SelectionMethod::Random:
            out.selection_flops = 0.0;
            break;
    }
    return out;
}

double per_point_gradient_cost(const TransformerConfig& selector, double example_tokens) {
    if (!(example_tokens > 0.0)) {
        throw std::invalid_argument("per_point_gradient_cost: example_tokens must be positive");
    }
    return 3.0 * forward_flops_per_token(selector) * example_tokens;
}

}  // namespace datasel
