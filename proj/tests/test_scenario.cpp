#include "doctest.h"

#include <stdexcept>

#include "datasel/flops.hpp"
#include "datasel/scenario.hpp"
#include "test_helpers.hpp"

using namespace datasel;
using testutil::TempDir;
using testutil::write_file;

TEST_CASE("model configs resolve from files and built-ins") {
    TempDir dir;
    const auto path = dir.file("models.json");
    write_file(path, R"({
      "tiny": {"n_layer": 2, "n_ctx": 8, "d_model": 4, "d_ff": 16, "d_attn": 4, "n_vocab": 10}
    })");
    const auto configs = load_model_configs(path);
    REQUIRE(configs.count("tiny") == 1);
    CHECK(configs.at("tiny").d_ff == 16);

    CHECK(resolve_model("tiny", configs).n_layer == 2);
    CHECK(resolve_model("llama2-7b", configs).n_layer == 32);
    CHECK_THROWS_AS(resolve_model("nope", configs), std::invalid_argument);

    const auto bad = dir.file("bad.json");
    write_file(bad, R"({"broken": {"n_layer": 2}})");
    CHECK_THROWS_AS(load_model_configs(bad), std::runtime_error);
}

TEST_CASE("scenario files load panels with shared defaults") {
    TempDir dir;
    const auto path = dir.file("scenario.json");
    write_file(path, R"({
      "name": "unit",
      "dataset_tokens": 1000,
      "seed": 7,
      "p0": 0.3,
      "pbar": 0.6,
      "panels": [
        {
          "label": "only",
          "train_flops_per_token": 2.0,
          "budget_grid": [10, 20, 40],
          "methods": [
            {"label": "a", "lambda": 5, "fixed_selection_flops": 0},
            {"label": "b", "lambda": 10, "fixed_selection_flops": 3, "pbar": 0.7}
          ]
        }
      ]
    })");
    const ScenarioConfig scenario = load_scenario(path);
    CHECK(scenario.name == "unit");
    CHECK(scenario.seed == 7);
    REQUIRE(scenario.panels.size() == 1);
    const auto& panel = scenario.panels[0];
    CHECK(panel.budget_grid == std::vector<double>{10.0, 20.0, 40.0});
    REQUIRE(panel.methods.size() == 2);
    CHECK(panel.methods[0].first.p0 == 0.3);
    CHECK(panel.methods[0].second.train_flops_per_token == 2.0);
    CHECK(panel.methods[1].first.pbar == 0.7);
    CHECK(panel.methods[1].second.dataset_tokens == 1000);
}

TEST_CASE("scenario validation failures") {
    TempDir dir;

    const auto decreasing = dir.file("dec.json");
    write_file(decreasing, R"({
      "dataset_tokens": 10,
      "panels": [{"label": "x", "train_flops_per_token": 1.0, "budget_grid": [5, 5],
                  "methods": [{"label": "m", "lambda": 1, "fixed_selection_flops": 0,
                               "p0": 0.1, "pbar": 0.2}]}]
    })");
    CHECK_THROWS_WITH_AS(load_scenario(decreasing), doctest::Contains("strictly increasing"),
                         std::runtime_error);

    const auto unknown_model = dir.file("um.json");
    write_file(unknown_model, R"({
      "dataset_tokens": 10,
      "panels": [{"label": "x", "train_flops_per_token": 1.0, "budget_grid": [5],
                  "methods": [{"label": "m", "lambda": 1, "p0": 0.1, "pbar": 0.2,
                               "selection": {"method": "ppl", "selector": "ghost"}}]}]
    })");
    CHECK_THROWS_AS(load_scenario(unknown_model), std::invalid_argument);
}

TEST_CASE("scenario selection specs resolve referenced models") {
    TempDir dir;
    const auto path = dir.file("resolved.json");
    write_file(path, R"({
      "dataset_tokens": 1000,
      "model_configs": {
        "small": {"n_layer": 1, "n_ctx": 1, "d_model": 1, "d_ff": 1, "d_attn": 1, "n_vocab": 1}
      },
      "panels": [{"label": "x", "train_flops_per_token": 66.0, "budget_grid": [1e5],
                  "methods": [{"label": "ppl", "lambda": 5, "p0": 0.1, "pbar": 0.2,
                               "selection": {"method": "ppl", "selector": "small"}}]}]
    })");
    const ScenarioConfig scenario = load_scenario(path);
    // One forward pass (22 FLOPs/token for the unit model) over 1000 tokens.
    CHECK(scenario.panels[0].methods[0].second.fixed_selection_flops == 22000.0);
}
