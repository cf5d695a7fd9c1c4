#include "datasel/planner.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace datasel {

Selection select_topk(const ScoreTable& scores, const Corpus& corpus, std::int64_t k) {
    if (k < 0) throw std::invalid_argument("select_topk: k must be non-negative");
    if (k > static_cast<std::int64_t>(corpus.examples.size())) {
        throw std::invalid_argument("select_topk: k exceeds corpus size");
    }

    std::vector<const Example*> ranked;
    ranked.reserve(corpus.examples.size());
    for (const auto& ex : corpus.examples) {
        if (scores.scores.find(ex.id) == scores.scores.end()) {
            throw std::invalid_argument("select_topk: no score for id '" + ex.id + "'");
        }
        ranked.push_back(&ex);
    }
    std::sort(ranked.begin(), ranked.end(), [&](const Example* a, const Example* b) {
        const double sa = scores.scores.at(a->id);
        const double sb = scores.scores.at(b->id);
        if (sa != sb) return sa > sb;
        return a->id < b->id;
    });

    Selection sel;
    for (std::int64_t i = 0; i < k; ++i) {
        sel.ids.push_back(ranked[static_cast<std::size_t>(i)]->id);
        sel.tokens_used += ranked[static_cast<std::size_t>(i)]->token_count;
        sel.utility_sum += scores.scores.at(ranked[static_cast<std::size_t>(i)]->id);
    }
    return sel;
}

BudgetPlan make_budget_plan(double total_budget_flops, const CostBreakdown& cost) {
    if (!(total_budget_flops > 0.0)) {
        throw std::invalid_argument("make_budget_plan: budget must be positive");
    }
    if (!(cost.train_flops_per_token > 0.0)) {
        throw std::invalid_argument("make_budget_plan: train_flops_per_token must be positive");
    }
    if (cost.selection_flops < 0.0) {
        throw std::invalid_argument("make_budget_plan: selection_flops must be non-negative");
    }
    if (cost.selection_flops > total_budget_flops) {
        throw std::invalid_argument("make_budget_plan: selection cost exceeds the budget");
    }
    BudgetPlan plan;
    plan.total_budget_flops = total_budget_flops;
    plan.selection_flops = cost.selection_flops;
    plan.train_flops_per_token = cost.train_flops_per_token;
    plan.trainable_tokens = static_cast<std::int64_t>(
        std::floor((total_budget_flops - cost.selection_flops) / cost.train_flops_per_token));
    return plan;
}

Selection select_under_budget(const std::vector<std::string>& ranking, const Corpus& corpus,
                              const BudgetPlan& plan, const ScoreTable* scores) {
    if (ranking.size() != corpus.examples.size()) {
        throw std::invalid_argument("select_under_budget: ranking must be a permutation of the "
                                    "corpus ids (size mismatch)");
    }
    std::unordered_map<std::string, const Example*> by_id;
    by_id.reserve(corpus.examples.size());
    for (const auto& ex : corpus.examples) by_id.emplace(ex.id, &ex);

    std::set<std::string> seen;
    Selection sel;
    std::int64_t remaining = plan.trainable_tokens;
    for (const auto& id : ranking) {
        const auto it = by_id.find(id);
        if (it == by_id.end()) {
            throw std::invalid_argument("select_under_budget: ranking id '" + id +
                                        "' not in corpus");
        }
        if (!seen.insert(id).second) {
            throw std::invalid_argument("select_under_budget: duplicate ranking id '" + id + "'");
        }
        const std::int64_t need = it->second->token_count;
        if (need <= remaining) {
            remaining -= need;
            sel.ids.push_back(id);
            sel.tokens_used += need;
            if (scores != nullptr) {
                const auto score_it = scores->scores.find(id);
                if (score_it == scores->scores.end()) {
                    throw std::invalid_argument("select_under_budget: no score for id '" + id +
                                                "'");
                }
                sel.utility_sum += score_it->second;
            }
        }
    }
    return sel;
}

}  // namespace datasel
