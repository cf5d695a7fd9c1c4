#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "datasel/corpus.hpp"
#include "datasel/flops.hpp"

namespace datasel {

/// A compute budget split into selection spend and the token budget the
/// remainder buys at the training model's per-token cost.
struct BudgetPlan {
    double total_budget_flops = 0.0;
    double selection_flops = 0.0;
    double train_flops_per_token = 0.0;
    std::int64_t trainable_tokens = 0;
};

struct Selection {
    std::vector<std::string> ids;
    std::int64_t tokens_used = 0;
    double utility_sum = 0.0;
};

/// The k highest-scoring examples, ties broken by ascending id. Requires
/// full score coverage of the corpus and k <= |corpus|.
Selection select_topk(const ScoreTable& scores, const Corpus& corpus, std::int64_t k);

/// trainable_tokens = floor((K - selection_flops) / train_flops_per_token).
/// Throws if selection alone exceeds the budget.
BudgetPlan make_budget_plan(double total_budget_flops, const CostBreakdown& cost);

/// Walks the ranking in order, including every example whose token count
/// fits the remaining token budget and skipping those that do not
/// (skip-and-continue). The result is maximal: no excluded example fits
/// the residual budget. `scores`, when given, fills utility_sum.
Selection select_under_budget(const std::vector<std::string>& ranking, const Corpus& corpus,
                              const BudgetPlan& plan, const ScoreTable* scores = nullptr);

}  // namespace datasel
