#include "doctest.h"

#include <stdexcept>

#include <cmath>

#include "datasel/flops.hpp"
#include "datasel/scenario.hpp"

using namespace datasel;

namespace {

TransformerConfig unit_config() { return {1, 1, 1, 1, 1, 1, "unit"}; }

TransformerConfig llama2_7b() { return builtin_model_configs().at("llama2-7b"); }
TransformerConfig llama2_13b() { return builtin_model_configs().at("llama2-13b"); }
TransformerConfig llama2_70b() { return builtin_model_configs().at("llama2-70b"); }

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

TEST_CASE("param_count matches the reference model sizes") {
    // 6,738,149,376: hand expansion of 2*4096*32*(2*4096 + 1.5*11008) + 2*4096*32000.
    CHECK(param_count(llama2_7b()) == doctest::Approx(6738149376.0).epsilon(1e-12));
    CHECK(rel_err(param_count(llama2_7b()), 6.7e9) < 0.02);

    // Hand-evaluated total row: 409600 * 30976 + 327680000.
    CHECK(param_count(llama2_13b()) == doctest::Approx(13015449600.0).epsilon(1e-12));

    // Unit dimensions: 2*1*1*(2 + 1.5) + 2 = 9.
    CHECK(param_count(unit_config()) == 9.0);
}

TEST_CASE("param_count is monotone in every dimension field") {
    const TransformerConfig base = llama2_7b();
    const double reference = param_count(base);
    for (int field = 0; field < 6; ++field) {
        TransformerConfig bigger = base;
        switch (field) {
            case 0: bigger.n_layer += 8; break;
            case 1: bigger.n_ctx += 512; break;
            case 2: bigger.d_model += 128; break;
            case 3: bigger.d_ff += 128; break;
            case 4: bigger.d_attn += 128; break;
            case 5: bigger.n_vocab += 1000; break;
        }
        CHECK(param_count(bigger) >= reference);
    }
}

TEST_CASE("forward pass FLOPs per token") {
    // One third of the 4.69e10 reference training figure.
    CHECK(rel_err(forward_flops_per_token(llama2_7b()), 1.56e10) < 0.01);

    // Unit config: 2*9 + 4*1*1*1.
    CHECK(forward_flops_per_token(unit_config()) == 22.0);

    // Hand-evaluated: 2*83,739,279,360 + 4*80*4096*10240.
    CHECK(forward_flops_per_token(llama2_70b()) ==
          doctest::Approx(180900331520.0).epsilon(1e-12));
}

TEST_CASE("training FLOPs per token are exactly three forward passes") {
    for (const auto& cfg : {unit_config(), llama2_7b(), llama2_13b(), llama2_70b()}) {
        CHECK(training_flops_per_token(cfg) == 3.0 * forward_flops_per_token(cfg));
    }
    CHECK(rel_err(training_flops_per_token(llama2_7b()), 4.69e10) < 0.15);
    CHECK(rel_err(training_flops_per_token(llama2_13b()), 8.82e10) < 0.15);
    CHECK(rel_err(training_flops_per_token(llama2_70b()), 5.03e11) < 0.15);
}

TEST_CASE("6ND approximation") {
    CHECK(approx_6nd(6.7e9, 1.0) == doctest::Approx(4.02e10).epsilon(1e-12));
    CHECK(approx_6nd(1.0, 1.0) == 6.0);
    CHECK(approx_6nd(6.52e10, 1.0) == doctest::Approx(3.912e11).epsilon(1e-12));
    // Reference ratio of exact per-token training cost to 6N is about 1.12.
    const double ratio =
        training_flops_per_token(llama2_7b()) / approx_6nd(param_count(llama2_7b()), 1.0);
    CHECK(rel_err(ratio, 1.12) < 0.05);
}

TEST_CASE("selection costs per method") {
    const TransformerConfig trainer = llama2_7b();

    SUBCASE("bm25 charges one configurable FLOP per corpus token") {
        SelectionCostSpec spec;
        spec.method = SelectionMethod::Bm25;
        const auto cost = selection_cost(spec, 1e8, 0.0, trainer);
        CHECK(cost.selection_flops == 1e8);
        CHECK(cost.train_flops_per_token == training_flops_per_token(trainer));
    }

    SUBCASE("embed charges one encoder forward over corpus plus validation") {
        SelectionCostSpec spec;
        spec.method = SelectionMethod::Embed;
        spec.embed_param_count = 2.2e8;
        CHECK(selection_cost(spec, 1e8, 0.0, trainer).selection_flops == 4.4e16);
        CHECK(selection_cost(spec, 1e8, 1e6, trainer).selection_flops ==
              2.0 * 2.2e8 * (1e8 + 1e6));
    }

    SUBCASE("ppl charges one selector forward pass per corpus token") {
        SelectionCostSpec spec;
        spec.method = SelectionMethod::Ppl;
        spec.selector_config = llama2_7b();
        const auto cost = selection_cost(spec, 9.57e7, 0.0, trainer);
        CHECK(cost.selection_flops == forward_flops_per_token(llama2_7b()) * 9.57e7);
        CHECK(rel_err(cost.selection_flops, 1.53e18) < 0.05);
    }

    SUBCASE("gradient pipeline is warm-up plus feature computation") {
        SelectionCostSpec spec;
        spec.method = SelectionMethod::Gradient;
        spec.selector_config = llama2_7b();
        const auto cost = selection_cost(spec, 9.57e7, 0.0, trainer);
        const double warmup = 4.0 * 0.05 * 9.57e7 * training_flops_per_token(llama2_7b());
        CHECK(cost.selection_flops == doctest::Approx(9.0 * warmup).epsilon(1e-12));
        CHECK(rel_err(cost.selection_flops, 8.27e18) < 0.05);
    }

    SUBCASE("random selection is free") {
        SelectionCostSpec spec;
        spec.method = SelectionMethod::Random;
        CHECK(selection_cost(spec, 1e8, 0.0, trainer).selection_flops == 0.0);
        CHECK(selection_cost(spec, 1.0, 0.0, trainer).selection_flops == 0.0);
    }

    SUBCASE("selection cost is linear in corpus tokens") {
        SelectionCostSpec ppl;
        ppl.method = SelectionMethod::Ppl;
        ppl.selector_config = llama2_7b();
        SelectionCostSpec grad = ppl;
        grad.method = SelectionMethod::Gradient;
        SelectionCostSpec bm25;
        bm25.method = SelectionMethod::Bm25;
        SelectionCostSpec embed;
        embed.method = SelectionMethod::Embed;
        embed.embed_param_count = 2.2e8;
        for (const auto& spec : {ppl, grad, bm25, embed}) {
            const double one = selection_cost(spec, 1e6, 0.0, trainer).selection_flops;
            const double three = selection_cost(spec, 3e6, 0.0, trainer).selection_flops;
            CHECK(three == doctest::Approx(3.0 * one).epsilon(1e-12));
            CHECK(one >= 0.0);
            CHECK(std::isfinite(three));
        }
    }
}

TEST_CASE("selection cost validation") {
    const TransformerConfig trainer = llama2_7b();
    SelectionCostSpec spec;
    spec.method = SelectionMethod::Ppl;  // missing selector_config
    CHECK_THROWS_AS(selection_cost(spec, 1e6, 0.0, trainer), std::invalid_argument);

    spec.method = SelectionMethod::Random;
    spec.selector_config = llama2_7b();  // selector on a non-model method
    CHECK_THROWS_AS(selection_cost(spec, 1e6, 0.0, trainer), std::invalid_argument);

    SelectionCostSpec bad;
    bad.method = SelectionMethod::Gradient;
    bad.selector_config = llama2_7b();
    bad.warmup_fraction = 1.5;
    CHECK_THROWS_AS(selection_cost(bad, 1e6, 0.0, trainer), std::invalid_argument);
}

TEST_CASE("per-point gradient cost is three forward passes per token") {
    CHECK(per_point_gradient_cost(unit_config(), 1.0) == 66.0);
    CHECK(per_point_gradient_cost(llama2_7b(), 1.0) == training_flops_per_token(llama2_7b()));
    CHECK(per_point_gradient_cost(llama2_7b(), 400.0) ==
          400.0 * per_point_gradient_cost(llama2_7b(), 1.0));
}

TEST_CASE("invalid configs are rejected") {
    TransformerConfig cfg = llama2_7b();
    cfg.n_layer = 0;
    CHECK_THROWS_AS(param_count(cfg), std::invalid_argument);
    cfg = llama2_7b();
    cfg.d_ff = -1;
    CHECK_THROWS_AS(forward_flops_per_token(cfg), std::invalid_argument);
    CHECK_THROWS_AS(approx_6nd(0.0, 1.0), std::invalid_argument);
}
