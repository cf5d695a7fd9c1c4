#include "doctest.h"

#include <stdexcept>

#include <algorithm>
#include <random>
#include <set>

#include "datasel/planner.hpp"
#include "datasel/selectors.hpp"
#include "test_helpers.hpp"

using namespace datasel;
using testutil::toy_corpus;

namespace {

/// Exhaustive maximum of summed scores over all subsets of size <= k.
double brute_force_best(const ScoreTable& scores, const Corpus& corpus, std::int64_t k) {
    const std::size_t n = corpus.size();
    double best = 0.0;
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        if (static_cast<std::int64_t>(__builtin_popcountll(mask)) > k) continue;
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1ULL << i)) sum += scores.scores.at(corpus.examples[i].id);
        }
        best = std::max(best, sum);
    }
    return best;
}

}  // namespace

TEST_CASE("select_topk basics") {
    const Corpus corpus = toy_corpus({{"a", "", 1}, {"b", "", 2}, {"c", "", 3}});
    ScoreTable scores;
    scores.scores = {{"a", 1.0}, {"b", 3.0}, {"c", 2.0}};

    const Selection two = select_topk(scores, corpus, 2);
    CHECK(two.ids == std::vector<std::string>{"b", "c"});
    CHECK(two.tokens_used == 5);
    CHECK(two.utility_sum == 5.0);

    const Selection none = select_topk(scores, corpus, 0);
    CHECK(none.ids.empty());
    CHECK(none.utility_sum == 0.0);
    CHECK(none.tokens_used == 0);

    SUBCASE("ties break to ascending id") {
        ScoreTable tied;
        tied.scores = {{"a", 1.0}, {"b", 1.0}, {"c", 1.0}};
        CHECK(select_topk(tied, corpus, 2).ids == std::vector<std::string>{"a", "b"});
    }

    CHECK_THROWS_AS(select_topk(scores, corpus, 4), std::invalid_argument);
}

TEST_CASE("select_topk matches exhaustive subset enumeration") {
    std::mt19937_64 engine(2024);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 1 + engine() % 10;
        std::vector<Example> examples;
        ScoreTable scores;
        for (std::size_t i = 0; i < n; ++i) {
            const std::string id = "e" + std::to_string(i);
            examples.push_back({id, "", 1});
            scores.scores[id] = testutil::dyadic_uniform(engine);
        }
        const Corpus corpus = make_corpus(examples);
        const std::int64_t k = engine() % (n + 1);
        const Selection selection = select_topk(scores, corpus, k);
        CHECK(selection.utility_sum == brute_force_best(scores, corpus, k));
    }
}

TEST_CASE("make_budget_plan floors the trainable tokens") {
    CostBreakdown cost;
    cost.selection_flops = 40.0;
    cost.train_flops_per_token = 6.0;

    const BudgetPlan plan = make_budget_plan(100.0, cost);
    CHECK(plan.trainable_tokens == 10);
    CHECK(plan.selection_flops == 40.0);

    cost.selection_flops = 100.0;
    CHECK(make_budget_plan(100.0, cost).trainable_tokens == 0);

    cost.selection_flops = 120.0;
    CHECK_THROWS_AS(make_budget_plan(100.0, cost), std::invalid_argument);
}

TEST_CASE("select_under_budget is a skip-and-continue greedy") {
    const Corpus corpus = toy_corpus({{"a", "", 5}, {"b", "", 4}, {"c", "", 1}});
    const std::vector<std::string> ranking{"a", "b", "c"};

    BudgetPlan plan;
    plan.train_flops_per_token = 1.0;

    plan.trainable_tokens = 6;
    const Selection six = select_under_budget(ranking, corpus, plan);
    CHECK(six.ids == std::vector<std::string>{"a", "c"});
    CHECK(six.tokens_used == 6);

    plan.trainable_tokens = 0;
    CHECK(select_under_budget(ranking, corpus, plan).ids.empty());

    plan.trainable_tokens = 100;
    CHECK(select_under_budget(ranking, corpus, plan).ids == ranking);

    SUBCASE("ranking must be a permutation of the corpus") {
        plan.trainable_tokens = 6;
        CHECK_THROWS_AS(select_under_budget({"a", "b"}, corpus, plan), std::invalid_argument);
        CHECK_THROWS_AS(select_under_budget({"a", "b", "x"}, corpus, plan),
                        std::invalid_argument);
        CHECK_THROWS_AS(select_under_budget({"a", "b", "b"}, corpus, plan),
                        std::invalid_argument);
    }
}

TEST_CASE("select_under_budget results are maximal and within budget") {
    std::mt19937_64 engine(5);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + engine() % 20;
        std::vector<Example> examples;
        ScoreTable scores;
        for (std::size_t i = 0; i < n; ++i) {
            const std::string id = "e" + std::to_string(i);
            examples.push_back({id, "", static_cast<std::int64_t>(1 + engine() % 9)});
            scores.scores[id] = testutil::dyadic_uniform(engine);
        }
        const Corpus corpus = make_corpus(examples);
        const auto ranking = ppl_rank(scores, PplMode::Top);

        BudgetPlan plan;
        plan.train_flops_per_token = 1.0;
        plan.trainable_tokens = static_cast<std::int64_t>(engine() % 40);
        const Selection sel = select_under_budget(ranking, corpus, plan, &scores);

        CHECK(sel.tokens_used <= plan.trainable_tokens);
        const std::set<std::string> chosen(sel.ids.begin(), sel.ids.end());
        const std::int64_t residual = plan.trainable_tokens - sel.tokens_used;
        for (const auto& ex : corpus.examples) {
            if (chosen.count(ex.id) == 0) CHECK(ex.token_count > residual);
        }

        // Deterministic re-run.
        const Selection again = select_under_budget(ranking, corpus, plan, &scores);
        CHECK(again.ids == sel.ids);
        CHECK(again.utility_sum == sel.utility_sum);
    }
}

TEST_CASE("budget plans and selections grow with the budget") {
    // trainable_tokens is monotone in K for any cost model.
    CostBreakdown cost;
    cost.selection_flops = 37.0;
    cost.train_flops_per_token = 3.0;
    std::int64_t prev_tokens = -1;
    for (double budget = 40.0; budget < 400.0; budget += 7.5) {
        const BudgetPlan plan = make_budget_plan(budget, cost);
        CHECK(plan.trainable_tokens >= prev_tokens);
        prev_tokens = plan.trainable_tokens;
    }

    // With uniform token counts and non-negative scores, the greedy
    // selection is a ranking prefix, so utility also grows with K.
    std::mt19937_64 engine(9);
    std::vector<Example> examples;
    ScoreTable scores;
    for (int i = 0; i < 25; ++i) {
        const std::string id = "e" + std::to_string(i);
        examples.push_back({id, "", 4});
        scores.scores[id] = testutil::dyadic_uniform(engine);
    }
    const Corpus corpus = make_corpus(examples);
    const auto ranking = ppl_rank(scores, PplMode::Top);
    double prev_utility = -1.0;
    prev_tokens = -1;
    for (double budget = 50.0; budget <= 350.0; budget += 13.0) {
        const BudgetPlan plan = make_budget_plan(budget, cost);
        const Selection sel = select_under_budget(ranking, corpus, plan, &scores);
        CHECK(sel.utility_sum >= prev_utility);
        CHECK(sel.tokens_used >= prev_tokens);
        prev_utility = sel.utility_sum;
        prev_tokens = sel.tokens_used;
    }
}
