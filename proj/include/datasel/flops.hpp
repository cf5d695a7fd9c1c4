#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace datasel {

/// Architectural dimensions of a decoder-only transformer, used for
/// parameter and FLOP-per-token accounting. d_attn is the total attention
/// width across heads (head_dim * n_heads).
struct TransformerConfig {
    std::int64_t n_layer = 0;
    std::int64_t n_ctx = 0;
    std::int64_t d_model = 0;
    std::int64_t d_ff = 0;
    std::int64_t d_attn = 0;
    std::int64_t n_vocab = 0;
    std::string name;
};

/// Throws std::invalid_argument if any dimension is non-positive.
void validate(const TransformerConfig& cfg);

/// Total parameter count including both embedding matrices:
///   N = 2 * d_model * n_layer * (2 * d_attn + 1.5 * d_ff) + 2 * d_model * n_vocab
double param_count(const TransformerConfig& cfg);

/// Forward-pass FLOPs per token at full context:
///   2 * N  +  4 * n_layer * n_ctx * d_attn
/// The context term charges 2 FLOPs per multiply-accumulate for both the
/// query-key dot products and the attention-weighted value sum.
double forward_flops_per_token(const TransformerConfig& cfg);

/// Training FLOPs per token: exactly 3x the forward pass (backward = 2x forward).
double training_flops_per_token(const TransformerConfig& cfg);

/// The 6ND rule of thumb: 6 * params * tokens.
double approx_6nd(double params, double tokens);

enum class SelectionMethod { Bm25, Embed, Ppl, Gradient, Random };

std::string to_string(SelectionMethod m);
SelectionMethod selection_method_from_string(const std::string& s);

/// Cost model inputs for one data-selection method. selector_config is the
/// model that scores examples (PPL and Gradient only); embed_param_count is
/// the encoder size for Embed. The gradient pipeline is a warm-up training
/// phase plus feature computation, with the feature phase costed at
/// grad_feature_time_ratio times the warm-up (48h/6h on the reference runs).
struct SelectionCostSpec {
    SelectionMethod method = SelectionMethod::Random;
    std::optional<TransformerConfig> selector_config;
    double embed_param_count = 0.0;
    double bm25_flops_per_token = 1.0;
    double warmup_fraction = 0.05;
    std::int64_t warmup_epochs = 4;
    double grad_feature_time_ratio = 8.0;
};

void validate(const SelectionCostSpec& spec);

struct CostBreakdown {
    double selection_flops = 0.0;
    double train_flops_per_token = 0.0;
    std::vector<std::string> notes;
};

/// Total selection FLOPs for a method over a corpus, paired with the
/// training model's per-token cost so the result can seed a budget plan.
///   Bm25:     bm25_flops_per_token * corpus_tokens
///   Embed:    2 * embed_param_count * (corpus_tokens + validation_tokens)
///   Ppl:      forward_flops_per_token(selector) * corpus_tokens
///   Gradient: warmup + features, warmup = warmup_epochs * warmup_fraction
///             * corpus_tokens * training_flops_per_token(selector),
///             features = grad_feature_time_ratio * warmup
///   Random:   0
CostBreakdown selection_cost(const SelectionCostSpec& spec, double corpus_tokens,
                             double validation_tokens,
                             const TransformerConfig& train_config);

/// Per-example gradient scoring cost: 3 forward passes per token.
double per_point_gradient_cost(const TransformerConfig& selector, double example_tokens);

}  // namespace datasel
