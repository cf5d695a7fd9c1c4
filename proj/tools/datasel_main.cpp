// Command-line front end: every operation is a subcommand that reads the
// JSON/JSONL formats documented in the README and prints JSON (optionally
// CSV) deterministically for a fixed seed.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "datasel/analysis.hpp"
#include "datasel/corpus.hpp"
#include "datasel/flops.hpp"
#include "datasel/perf_model.hpp"
#include "datasel/planner.hpp"
#include "datasel/scenario.hpp"
#include "datasel/selectors.hpp"
#include "datasel/theory.hpp"

namespace {

using nlohmann::json;
using namespace datasel;

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << text;
}

void emit(const json& value, const std::string& out_path) {
    const std::string text = value.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_text(out_path, text);
    }
}

json selection_to_json(const Selection& sel) {
    return json{{"ids", sel.ids}, {"tokens_used", sel.tokens_used},
                {"utility_sum", sel.utility_sum}};
}

json plan_to_json(const BudgetPlan& plan) {
    return json{{"total_budget_flops", plan.total_budget_flops},
                {"selection_flops", plan.selection_flops},
                {"train_flops_per_token", plan.train_flops_per_token},
                {"trainable_tokens", plan.trainable_tokens}};
}

std::vector<Run> load_runs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::vector<Run> runs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json row;
        try {
            row = json::parse(line);
        } catch (const json::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": malformed JSON: " + e.what());
        }
        Run run;
        run.method = row.value("method", std::string{});
        run.tokens_trained = row.value("tokens_trained", std::int64_t{0});
        if (!row.contains("compute") || !row.contains("performance")) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": runs need 'compute' and 'performance'");
        }
        run.compute = row["compute"].get<double>();
        run.performance = row["performance"].get<double>();
        runs.push_back(std::move(run));
    }
    if (runs.empty()) throw std::runtime_error(path + ": no runs");
    return runs;
}

struct FlopsArgs {
    std::string model;
    std::string config_path;
    std::string method = "random";
    std::string selector;
    double embed_params = 0.0;
    double tokens = 1.0;
    double validation_tokens = 0.0;
    double bm25_flops_per_token = 1.0;
    double warmup_fraction = 0.05;
    std::int64_t warmup_epochs = 4;
    double grad_feature_ratio = 8.0;
    std::string out;
};

int run_flops(const FlopsArgs& args) {
    std::map<std::string, TransformerConfig> extra;
    if (!args.config_path.empty()) extra = load_model_configs(args.config_path);
    const TransformerConfig model = resolve_model(args.model, extra);

    SelectionCostSpec spec;
    spec.method = selection_method_from_string(args.method);
    if (spec.method == SelectionMethod::Ppl || spec.method == SelectionMethod::Gradient) {
        if (args.selector.empty()) {
            throw std::invalid_argument("flops: --selector is required for ppl and grad");
        }
        spec.selector_config = resolve_model(args.selector, extra);
    }
    spec.embed_param_count = args.embed_params;
    spec.bm25_flops_per_token = args.bm25_flops_per_token;
    spec.warmup_fraction = args.warmup_fraction;
    spec.warmup_epochs = args.warmup_epochs;
    spec.grad_feature_time_ratio = args.grad_feature_ratio;

    const CostBreakdown breakdown =
        selection_cost(spec, args.tokens, args.validation_tokens, model);

    json out{{"model",
              {{"name", model.name},
               {"param_count", param_count(model)},
               {"forward_flops_per_token", forward_flops_per_token(model)},
               {"train_flops_per_token", training_flops_per_token(model)},
               {"approx_6nd_per_token", approx_6nd(param_count(model), 1.0)}}},
             {"method", to_string(spec.method)},
             {"corpus_tokens", args.tokens},
             {"validation_tokens", args.validation_tokens},
             {"selection_flops", breakdown.selection_flops},
             {"train_flops_per_token", breakdown.train_flops_per_token},
             {"train_flops_total", breakdown.train_flops_per_token * args.tokens},
             {"notes", breakdown.notes}};
    emit(out, args.out);
    return 0;
}

struct ScoreArgs {
    std::string method;
    std::string corpus_path;
    std::string validation_path;
    std::string vectors_path;
    std::string validation_vectors_path;
    std::string scores_path;
    double eta = 0.0;
    double k1 = 1.2;
    double b = 0.75;
    std::int64_t dim = 256;
    std::uint64_t seed = 0;
    std::string out;
};

int run_score(const ScoreArgs& args) {
    const SelectionMethod method = selection_method_from_string(args.method);
    const Corpus corpus = load_corpus(args.corpus_path);

    ScoreTable table;
    switch (method) {
        case SelectionMethod::Bm25: {
            if (args.validation_path.empty()) {
                throw std::invalid_argument("score bm25: --validation is required");
            }
            const Corpus validation = load_corpus(args.validation_path);
            table = bm25_utility(corpus, validation, Bm25Params{args.k1, args.b});
            break;
        }
        case SelectionMethod::Embed: {
            if (args.validation_path.empty()) {
                throw std::invalid_argument("score embed: --validation is required");
            }
            const Corpus validation = load_corpus(args.validation_path);
            VectorTable train_vecs, val_vecs;
            if (!args.vectors_path.empty()) {
                train_vecs = load_vectors(args.vectors_path, corpus);
                if (args.validation_vectors_path.empty()) {
                    throw std::invalid_argument(
                        "score embed: --validation-vectors is required with --vectors");
                }
                val_vecs = load_vectors(args.validation_vectors_path, validation);
            } else {
                train_vecs = hashed_tfidf_embed(corpus, args.dim, args.seed);
                val_vecs = hashed_tfidf_embed(validation, args.dim, args.seed);
            }
            table = embed_utility(train_vecs, val_vecs);
            break;
        }
        case SelectionMethod::Gradient: {
            if (args.vectors_path.empty() || args.validation_vectors_path.empty()) {
                throw std::invalid_argument(
                    "score grad: --vectors and --validation-vectors are required");
            }
            if (args.validation_path.empty()) {
                throw std::invalid_argument("score grad: --validation is required");
            }
            if (!(args.eta > 0.0)) {
                throw std::invalid_argument("score grad: --eta is required and must be positive");
            }
            const Corpus validation = load_corpus(args.validation_path);
            const VectorTable train_feats = load_vectors(args.vectors_path, corpus);
            const VectorTable val_feats = load_vectors(args.validation_vectors_path, validation);
            table = gradient_utility(train_feats, val_feats, args.eta);
            break;
        }
        case SelectionMethod::Ppl: {
            if (args.scores_path.empty()) {
                throw std::invalid_argument(
                    "score ppl: --scores (precomputed perplexities) is required");
            }
            table = load_scores(args.scores_path, corpus);
            table.method = "ppl";
            break;
        }
        case SelectionMethod::Random:
            table = random_utility(corpus, args.seed);
            break;
    }

    // Emit in corpus order.
    std::vector<std::string> order;
    order.reserve(corpus.examples.size());
    for (const auto& ex : corpus.examples) order.push_back(ex.id);
    if (args.out.empty()) {
        for (const auto& id : order) {
            json row{{"id", id}, {"score", table.scores.at(id)}, {"method", table.method}};
            std::cout << row.dump() << "\n";
        }
    } else {
        save_scores(table, args.out, &order);
    }
    return 0;
}

struct SelectArgs {
    std::string corpus_path;
    std::string scores_path;
    std::string mode = "top";
    std::int64_t k = -1;
    double budget = 0.0;
    double selection_flops = 0.0;
    double train_flops_per_token = 0.0;
    std::int64_t token_budget = -1;
    std::string out;
};

int run_select(const SelectArgs& args) {
    const Corpus corpus = load_corpus(args.corpus_path);
    const ScoreTable scores = load_scores(args.scores_path, corpus);
    const PplMode mode = ppl_mode_from_string(args.mode);

    if (args.k >= 0) {
        Selection sel;
        if (mode == PplMode::Top) {
            sel = select_topk(scores, corpus, args.k);
        } else {
            const auto ranking = ppl_rank(scores, mode);
            if (args.k > static_cast<std::int64_t>(ranking.size())) {
                throw std::invalid_argument("select: k exceeds corpus size");
            }
            for (std::int64_t i = 0; i < args.k; ++i) {
                const auto& id = ranking[static_cast<std::size_t>(i)];
                sel.ids.push_back(id);
                sel.tokens_used += corpus.at(id).token_count;
                sel.utility_sum += scores.scores.at(id);
            }
        }
        json out = selection_to_json(sel);
        out["k"] = args.k;
        emit(out, args.out);
        return 0;
    }

    const bool have_flop_budget = args.budget > 0.0;
    const bool have_token_budget = args.token_budget >= 0;
    if (!have_flop_budget && !have_token_budget) {
        throw std::invalid_argument(
            "select: provide --k, --token-budget, or --budget with "
            "--train-flops-per-token");
    }

    std::int64_t flop_tokens = -1;
    BudgetPlan plan;
    if (have_flop_budget) {
        CostBreakdown cost;
        cost.selection_flops = args.selection_flops;
        cost.train_flops_per_token = args.train_flops_per_token;
        plan = make_budget_plan(args.budget, cost);
        flop_tokens = plan.trainable_tokens;
    }

    // When both bounds are given, the tighter one wins and is reported.
    std::string binding;
    std::int64_t budget_tokens = 0;
    if (have_flop_budget && have_token_budget) {
        if (flop_tokens < args.token_budget) {
            binding = "flops";
            budget_tokens = flop_tokens;
        } else if (args.token_budget < flop_tokens) {
            binding = "tokens";
            budget_tokens = args.token_budget;
        } else {
            binding = "both";
            budget_tokens = flop_tokens;
        }
        plan.trainable_tokens = budget_tokens;
    } else if (have_flop_budget) {
        binding = "flops";
        budget_tokens = flop_tokens;
    } else {
        binding = "tokens";
        budget_tokens = args.token_budget;
        plan.total_budget_flops = 0.0;
        plan.selection_flops = 0.0;
        plan.train_flops_per_token = 1.0;
        plan.trainable_tokens = budget_tokens;
    }

    const auto ranking = ppl_rank(scores, mode);
    const Selection sel = select_under_budget(ranking, corpus, plan, &scores);
    json out = selection_to_json(sel);
    out["token_budget"] = budget_tokens;
    out["binding"] = binding;
    emit(out, args.out);
    return 0;
}

struct PlanArgs {
    double budget = 0.0;
    double selection_flops = 0.0;
    double train_flops_per_token = 0.0;
    std::string out;
};

int run_plan(const PlanArgs& args) {
    CostBreakdown cost;
    cost.selection_flops = args.selection_flops;
    cost.train_flops_per_token = args.train_flops_per_token;
    emit(plan_to_json(make_budget_plan(args.budget, cost)), args.out);
    return 0;
}

struct SimulateArgs {
    std::string config_path;
    std::string out;
    std::string csv_out;
};

int run_simulate(const SimulateArgs& args) {
    const ScenarioConfig scenario = load_scenario(args.config_path);

    json panels = json::array();
    std::ostringstream csv;
    csv.precision(17);
    csv << "panel,method,budget,best_k,performance,total_cost,feasible,winner\n";
    for (const auto& panel : scenario.panels) {
        const auto rows = simulate(panel.methods, panel.budget_grid);
        json rows_json = json::array();
        for (const auto& row : rows) {
            json entries = json::array();
            for (const auto& entry : row.entries) {
                json e{{"method", entry.method}, {"feasible", entry.feasible}};
                if (entry.feasible) {
                    e["best_k"] = entry.best_k;
                    e["performance"] = entry.performance;
                    e["total_cost"] = entry.total_cost;
                }
                entries.push_back(std::move(e));
                csv << panel.label << ',' << entry.method << ',' << row.budget << ','
                    << (entry.feasible ? std::to_string(entry.best_k) : "") << ',';
                if (entry.feasible) csv << entry.performance;
                csv << ',';
                if (entry.feasible) csv << entry.total_cost;
                csv << ',' << (entry.feasible ? "1" : "0") << ','
                    << (entry.method == row.winner ? "1" : "0") << '\n';
            }
            rows_json.push_back(json{{"budget", row.budget},
                                     {"winner", row.winner},
                                     {"entries", std::move(entries)}});
        }
        panels.push_back(json{{"label", panel.label}, {"rows", std::move(rows_json)}});
    }

    if (!args.csv_out.empty()) write_text(args.csv_out, csv.str());
    emit(json{{"name", scenario.name}, {"panels", std::move(panels)}}, args.out);
    return 0;
}

struct FitArgs {
    std::string runs_path;
    std::string method;
    std::int64_t dataset_tokens = 0;
    double train_flops_per_token = 0.0;
    double fixed_selection_flops = 0.0;
    double eps = 0.05;
    std::string out;
};

int run_fit(const FitArgs& args) {
    const auto runs = load_runs(args.runs_path);
    std::vector<std::pair<std::int64_t, double>> observations;
    for (const auto& run : runs) {
        if (args.method.empty() || run.method == args.method) {
            observations.emplace_back(run.tokens_trained, run.performance);
        }
    }
    MethodCostModel cost;
    cost.label = args.method;
    cost.dataset_tokens = args.dataset_tokens;
    cost.train_flops_per_token = args.train_flops_per_token;
    cost.fixed_selection_flops = args.fixed_selection_flops;
    const PerfCurveParams params = fit_perf_curve(observations, cost, args.eps);
    emit(json{{"method", args.method},
              {"p0", params.p0},
              {"pbar", params.pbar},
              {"lambda", params.lam},
              {"observations", observations.size()}},
         args.out);
    return 0;
}

struct ParetoArgs {
    std::string runs_path;
    std::string out;
    std::string csv_out;
};

int run_pareto(const ParetoArgs& args) {
    const auto runs = load_runs(args.runs_path);
    const auto frontier = pareto_frontier(runs);

    json frontier_json = json::array();
    std::ostringstream csv;
    csv.precision(17);
    csv << "compute,performance,method,tokens_trained\n";
    for (const auto& run : frontier) {
        frontier_json.push_back(json{{"method", run.method},
                                     {"tokens_trained", run.tokens_trained},
                                     {"compute", run.compute},
                                     {"performance", run.performance}});
        csv << run.compute << ',' << run.performance << ',' << run.method << ','
            << run.tokens_trained << '\n';
    }
    json out{{"frontier", std::move(frontier_json)}};

    // The log-linear fit needs two distinct compute values; omit it for
    // degenerate frontiers rather than failing the whole command.
    std::set<double> computes;
    for (const auto& run : frontier) computes.insert(run.compute);
    if (computes.size() >= 2) {
        const FrontierFit fit = fit_frontier(frontier);
        out["fit"] = json{{"a", fit.a}, {"b", fit.b}};
    }

    if (!args.csv_out.empty()) write_text(args.csv_out, csv.str());
    emit(out, args.out);
    return 0;
}

struct CrossingArgs {
    double p0 = 0.0;
    double pbar = 0.0;
    double lam = 0.0;
    double fixed_selection_flops = 0.0;
    double train_flops_per_token = 0.0;
    std::int64_t dataset_tokens = 0;
    double frontier_a = 0.0;
    double frontier_b = 0.0;
    std::vector<double> ratios;
    std::int64_t max_tasks = 0;
    std::string out;
};

int run_extrapolate(const CrossingArgs& args) {
    const PerfCurveParams curve{args.p0, args.pbar, args.lam};
    MethodCostModel cost;
    cost.fixed_selection_flops = args.fixed_selection_flops;
    cost.train_flops_per_token = args.train_flops_per_token;
    cost.dataset_tokens = args.dataset_tokens;
    const FrontierFit frontier{args.frontier_a, args.frontier_b};
    const auto ratio = extrapolate_optimal_ratio(curve, cost, frontier, args.ratios);
    json out{{"crossing", ratio.has_value()}};
    out["ratio"] = ratio.has_value() ? json(*ratio) : json(nullptr);
    emit(out, args.out);
    return 0;
}

int run_breakeven(const CrossingArgs& args) {
    const PerfCurveParams curve{args.p0, args.pbar, args.lam};
    MethodCostModel cost;
    cost.fixed_selection_flops = args.fixed_selection_flops;
    cost.train_flops_per_token = args.train_flops_per_token;
    cost.dataset_tokens = args.dataset_tokens;
    const FrontierFit frontier{args.frontier_a, args.frontier_b};
    const auto tasks = break_even_tasks(curve, cost, frontier, args.max_tasks);
    json out{{"crossing", tasks.has_value()}};
    out["tasks"] = tasks.has_value() ? json(*tasks) : json(nullptr);
    emit(out, args.out);
    return 0;
}

struct JaccardArgs {
    std::vector<std::string> selection_paths;
    std::string out;
    std::string csv_out;
};

int run_jaccard(const JaccardArgs& args) {
    std::map<std::string, std::set<std::string>> selections;
    for (const auto& path : args.selection_paths) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open file: " + path);
        json parsed;
        try {
            parsed = json::parse(in);
        } catch (const json::exception& e) {
            throw std::runtime_error(path + ": malformed JSON: " + e.what());
        }
        if (!parsed.contains("ids") || !parsed["ids"].is_array()) {
            throw std::runtime_error(path + ": expected a selection object with an 'ids' array");
        }
        std::string label = parsed.value("label", std::string{});
        if (label.empty()) label = std::filesystem::path(path).stem().string();
        if (selections.count(label) != 0) {
            throw std::runtime_error("duplicate selection label '" + label + "'");
        }
        std::set<std::string> ids;
        for (const auto& id : parsed["ids"]) ids.insert(id.get<std::string>());
        selections.emplace(std::move(label), std::move(ids));
    }

    const SimilarityMatrix matrix = jaccard_matrix(selections);
    if (!args.csv_out.empty()) {
        std::ostringstream csv;
        csv.precision(17);
        csv << "label";
        for (const auto& label : matrix.labels) csv << ',' << label;
        csv << '\n';
        for (std::size_t i = 0; i < matrix.labels.size(); ++i) {
            csv << matrix.labels[i];
            for (std::size_t j = 0; j < matrix.labels.size(); ++j) {
                csv << ',' << matrix.values[i][j];
            }
            csv << '\n';
        }
        write_text(args.csv_out, csv.str());
    }
    emit(json{{"labels", matrix.labels}, {"values", matrix.values}}, args.out);
    return 0;
}

struct TheoryArgs {
    std::int64_t dataset_size = 0;
    double budget = 0.0;
    double train_cost = 0.0;
    double concentration = 0.0;
    double rate = 0.0;
    double tol = 0.0;
    std::string out;
};

int run_theory_opt(const TheoryArgs& args) {
    UtilityModelParams params;
    params.dataset_size = args.dataset_size;
    params.budget = args.budget;
    params.train_cost = args.train_cost;
    params.concentration = args.concentration;
    params.rate = args.rate;
    const double tol = args.tol > 0.0 ? args.tol : 1e-9 * args.budget;
    const SelectionOptimum opt = optimal_selection_compute(params, tol);
    emit(json{{"c_ds_star", opt.c_ds_star},
              {"u_star", opt.u_star},
              {"u_rand", expected_utility_random(params)}},
         args.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Compute-budgeted data selection toolkit"};
    app.require_subcommand(1);

    FlopsArgs flops_args;
    auto* flops_cmd = app.add_subcommand("flops", "FLOP accounting for a model and method");
    flops_cmd->add_option("--model", flops_args.model, "Training model name")->required();
    flops_cmd->add_option("--config", flops_args.config_path, "Model config JSON file");
    flops_cmd->add_option("--method", flops_args.method, "bm25|embed|ppl|grad|random");
    flops_cmd->add_option("--selector", flops_args.selector, "Selector model (ppl/grad)");
    flops_cmd->add_option("--embed-params", flops_args.embed_params, "Encoder parameters (embed)");
    flops_cmd->add_option("--tokens", flops_args.tokens, "Corpus tokens");
    flops_cmd->add_option("--validation-tokens", flops_args.validation_tokens,
                          "Validation tokens");
    flops_cmd->add_option("--bm25-flops-per-token", flops_args.bm25_flops_per_token,
                          "BM25 FLOPs per token");
    flops_cmd->add_option("--warmup-fraction", flops_args.warmup_fraction,
                          "Gradient warm-up data fraction");
    flops_cmd->add_option("--warmup-epochs", flops_args.warmup_epochs, "Gradient warm-up epochs");
    flops_cmd->add_option("--grad-feature-ratio", flops_args.grad_feature_ratio,
                          "Feature-to-warm-up cost ratio");
    flops_cmd->add_option("--out", flops_args.out, "Output path (default stdout)");

    ScoreArgs score_args;
    auto* score_cmd = app.add_subcommand("score", "Score a corpus with one method");
    score_cmd->add_option("--method", score_args.method, "bm25|embed|ppl|grad|random")
        ->required();
    score_cmd->add_option("--corpus", score_args.corpus_path, "Training corpus JSONL")
        ->required();
    score_cmd->add_option("--validation", score_args.validation_path, "Validation corpus JSONL");
    score_cmd->add_option("--vectors", score_args.vectors_path, "Training vectors JSONL");
    score_cmd->add_option("--validation-vectors", score_args.validation_vectors_path,
                          "Validation vectors JSONL");
    score_cmd->add_option("--scores", score_args.scores_path, "Precomputed scores JSONL (ppl)");
    score_cmd->add_option("--eta", score_args.eta, "Learning-rate scale (grad, required)");
    score_cmd->add_option("--k1", score_args.k1, "BM25 k1");
    score_cmd->add_option("--b", score_args.b, "BM25 b");
    score_cmd->add_option("--dim", score_args.dim, "Fallback embedder dimensionality");
    score_cmd->add_option("--seed", score_args.seed, "Random seed");
    score_cmd->add_option("--out", score_args.out, "Output JSONL path (default stdout)");

    SelectArgs select_args;
    auto* select_cmd = app.add_subcommand("select", "Select a subset from scores");
    select_cmd->add_option("--corpus", select_args.corpus_path, "Corpus JSONL")->required();
    select_cmd->add_option("--scores", select_args.scores_path, "Score table JSONL")->required();
    select_cmd->add_option("--mode", select_args.mode, "Ranking mode: top|mid");
    select_cmd->add_option("--k", select_args.k, "Select exactly k examples");
    select_cmd->add_option("--budget", select_args.budget, "Total FLOP budget");
    select_cmd->add_option("--selection-flops", select_args.selection_flops,
                           "Selection FLOPs already spent");
    select_cmd->add_option("--train-flops-per-token", select_args.train_flops_per_token,
                           "Training FLOPs per token");
    select_cmd->add_option("--token-budget", select_args.token_budget, "Token budget");
    select_cmd->add_option("--out", select_args.out, "Output path (default stdout)");

    PlanArgs plan_args;
    auto* plan_cmd = app.add_subcommand("plan", "Turn a FLOP budget into a token budget");
    plan_cmd->add_option("--budget", plan_args.budget, "Total FLOP budget")->required();
    plan_cmd->add_option("--selection-flops", plan_args.selection_flops, "Selection FLOPs");
    plan_cmd->add_option("--train-flops-per-token", plan_args.train_flops_per_token,
                         "Training FLOPs per token")
        ->required();
    plan_cmd->add_option("--out", plan_args.out, "Output path (default stdout)");

    SimulateArgs simulate_args;
    auto* simulate_cmd = app.add_subcommand("simulate", "Per-budget winner simulation");
    simulate_cmd->add_option("--config", simulate_args.config_path, "Scenario JSON")->required();
    simulate_cmd->add_option("--out", simulate_args.out, "Output path (default stdout)");
    simulate_cmd->add_option("--csv-out", simulate_args.csv_out, "CSV series output path");

    FitArgs fit_args;
    auto* fit_cmd = app.add_subcommand("fit", "Fit the compute-performance curve");
    fit_cmd->add_option("--runs", fit_args.runs_path, "Runs JSONL")->required();
    fit_cmd->add_option("--method", fit_args.method, "Method label to fit (default: all runs)");
    fit_cmd->add_option("--dataset-tokens", fit_args.dataset_tokens, "Dataset tokens")
        ->required();
    fit_cmd->add_option("--train-flops-per-token", fit_args.train_flops_per_token,
                        "Training FLOPs per token")
        ->required();
    fit_cmd->add_option("--fixed-selection-flops", fit_args.fixed_selection_flops,
                        "Fixed selection FLOPs");
    fit_cmd->add_option("--eps", fit_args.eps, "Upper-bound buffer above max observation");
    fit_cmd->add_option("--out", fit_args.out, "Output path (default stdout)");

    ParetoArgs pareto_args;
    auto* pareto_cmd = app.add_subcommand("pareto", "Pareto frontier of runs");
    pareto_cmd->add_option("--runs", pareto_args.runs_path, "Runs JSONL")->required();
    pareto_cmd->add_option("--out", pareto_args.out, "Output path (default stdout)");
    pareto_cmd->add_option("--csv-out", pareto_args.csv_out, "CSV output path");

    CrossingArgs extrapolate_args;
    auto* extrapolate_cmd =
        app.add_subcommand("extrapolate", "Smallest training-cost ratio crossing the frontier");
    extrapolate_cmd->add_option("--p0", extrapolate_args.p0, "Curve p0")->required();
    extrapolate_cmd->add_option("--pbar", extrapolate_args.pbar, "Curve upper bound")->required();
    extrapolate_cmd->add_option("--lambda", extrapolate_args.lam, "Curve lambda")->required();
    extrapolate_cmd
        ->add_option("--fixed-selection-flops", extrapolate_args.fixed_selection_flops,
                     "Fixed selection FLOPs")
        ->required();
    extrapolate_cmd
        ->add_option("--train-flops-per-token", extrapolate_args.train_flops_per_token,
                     "Training FLOPs per token")
        ->required();
    extrapolate_cmd->add_option("--dataset-tokens", extrapolate_args.dataset_tokens,
                                "Dataset tokens")
        ->required();
    extrapolate_cmd->add_option("--frontier-a", extrapolate_args.frontier_a, "Frontier slope")
        ->required();
    extrapolate_cmd->add_option("--frontier-b", extrapolate_args.frontier_b, "Frontier intercept")
        ->required();
    extrapolate_cmd->add_option("--ratios", extrapolate_args.ratios, "Ascending ratio grid")
        ->required()
        ->delimiter(',');
    extrapolate_cmd->add_option("--out", extrapolate_args.out, "Output path (default stdout)");

    CrossingArgs breakeven_args;
    auto* breakeven_cmd =
        app.add_subcommand("breakeven", "Smallest task count amortizing selection to the frontier");
    breakeven_cmd->add_option("--p0", breakeven_args.p0, "Curve p0")->required();
    breakeven_cmd->add_option("--pbar", breakeven_args.pbar, "Curve upper bound")->required();
    breakeven_cmd->add_option("--lambda", breakeven_args.lam, "Curve lambda")->required();
    breakeven_cmd
        ->add_option("--fixed-selection-flops", breakeven_args.fixed_selection_flops,
                     "Fixed selection FLOPs")
        ->required();
    breakeven_cmd
        ->add_option("--train-flops-per-token", breakeven_args.train_flops_per_token,
                     "Training FLOPs per token")
        ->required();
    breakeven_cmd->add_option("--dataset-tokens", breakeven_args.dataset_tokens, "Dataset tokens")
        ->required();
    breakeven_cmd->add_option("--frontier-a", breakeven_args.frontier_a, "Frontier slope")
        ->required();
    breakeven_cmd->add_option("--frontier-b", breakeven_args.frontier_b, "Frontier intercept")
        ->required();
    breakeven_cmd->add_option("--max-tasks", breakeven_args.max_tasks, "Largest task count")
        ->required();
    breakeven_cmd->add_option("--out", breakeven_args.out, "Output path (default stdout)");

    JaccardArgs jaccard_args;
    auto* jaccard_cmd = app.add_subcommand("jaccard", "Overlap matrix of selection files");
    jaccard_cmd->add_option("selections", jaccard_args.selection_paths, "Selection JSON files")
        ->required()
        ->expected(-2);
    jaccard_cmd->add_option("--out", jaccard_args.out, "Output path (default stdout)");
    jaccard_cmd->add_option("--csv-out", jaccard_args.csv_out, "CSV matrix output path");

    TheoryArgs theory_args;
    auto* theory_cmd = app.add_subcommand("theory-opt", "Optimal selection-compute split");
    theory_cmd->add_option("--dataset-size", theory_args.dataset_size, "Dataset size (points)")
        ->required();
    theory_cmd->add_option("--budget", theory_args.budget, "Compute budget K")->required();
    theory_cmd->add_option("--train-cost", theory_args.train_cost, "Training cost per point")
        ->required();
    theory_cmd->add_option("--concentration", theory_args.concentration, "High-utility fraction P")
        ->required();
    theory_cmd->add_option("--rate", theory_args.rate, "Selection rate beta")->required();
    theory_cmd->add_option("--tol", theory_args.tol, "Argmax tolerance (default 1e-9 * K)");
    theory_cmd->add_option("--out", theory_args.out, "Output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << json{{"error", e.what()}}.dump() << "\n";
        return 1;
    }

    try {
        if (flops_cmd->parsed()) return run_flops(flops_args);
        if (score_cmd->parsed()) return run_score(score_args);
        if (select_cmd->parsed()) return run_select(select_args);
        if (plan_cmd->parsed()) return run_plan(plan_args);
        if (simulate_cmd->parsed()) return run_simulate(simulate_args);
        if (fit_cmd->parsed()) return run_fit(fit_args);
        if (pareto_cmd->parsed()) return run_pareto(pareto_args);
        if (extrapolate_cmd->parsed()) return run_extrapolate(extrapolate_args);
        if (breakeven_cmd->parsed()) return run_breakeven(breakeven_args);
        if (jaccard_cmd->parsed()) return run_jaccard(jaccard_args);
        if (theory_cmd->parsed()) return run_theory_opt(theory_args);
    } catch (const std::exception& e) {
        std::cerr << json{{"error", e.what()}}.dump() << "\n";
        return 1;
    }
    return 0;
}
