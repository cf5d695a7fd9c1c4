#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "datasel/analysis.hpp"
#include "datasel/corpus.hpp"
#include "datasel/flops.hpp"
#include "datasel/perf_model.hpp"
#include "datasel/planner.hpp"
#include "datasel/scenario.hpp"
#include "datasel/selectors.hpp"
#include "datasel/theory.hpp"

namespace py = pybind11;
using namespace datasel;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Compute-budgeted data selection: FLOP accounting, utility scoring, "
              "budget planning, and compute-performance modeling.";

    // ---- FLOP accounting -------------------------------------------------
    py::class_<TransformerConfig>(m, "TransformerConfig")
        .def(py::init([](std::int64_t n_layer, std::int64_t n_ctx, std::int64_t d_model,
                         std::int64_t d_ff, std::int64_t d_attn, std::int64_t n_vocab,
                         std::string name) {
                 TransformerConfig cfg{n_layer, n_ctx, d_model, d_ff, d_attn, n_vocab,
                                       std::move(name)};
                 validate(cfg);
                 return cfg;
             }),
             py::arg("n_layer"), py::arg("n_ctx"), py::arg("d_model"), py::arg("d_ff"),
             py::arg("d_attn"), py::arg("n_vocab"), py::arg("name") = std::string{})
        .def_readwrite("n_layer", &TransformerConfig::n_layer)
        .def_readwrite("n_ctx", &TransformerConfig::n_ctx)
        .def_readwrite("d_model", &TransformerConfig::d_model)
        .def_readwrite("d_ff", &TransformerConfig::d_ff)
        .def_readwrite("d_attn", &TransformerConfig::d_attn)
        .def_readwrite("n_vocab", &TransformerConfig::n_vocab)
        .def_readwrite("name", &TransformerConfig::name);

    m.def("param_count", &param_count, py::arg("config"));
    m.def("forward_flops_per_token", &forward_flops_per_token, py::arg("config"));
    m.def("training_flops_per_token", &training_flops_per_token, py::arg("config"));
    m.def("approx_6nd", &approx_6nd, py::arg("params"), py::arg("tokens"));
    m.def("per_point_gradient_cost", &per_point_gradient_cost, py::arg("selector"),
          py::arg("example_tokens"));
    m.def("builtin_model_configs", [] { return builtin_model_configs(); });

    py::enum_<SelectionMethod>(m, "SelectionMethod")
        .value("BM25", SelectionMethod::Bm25)
        .value("EMBED", SelectionMethod::Embed)
        .value("PPL", SelectionMethod::Ppl)
        .value("GRADIENT", SelectionMethod::Gradient)
        .value("RANDOM", SelectionMethod::Random);

    py::class_<SelectionCostSpec>(m, "SelectionCostSpec")
        .def(py::init<>())
        .def_readwrite("method", &SelectionCostSpec::method)
        .def_readwrite("selector_config", &SelectionCostSpec::selector_config)
        .def_readwrite("embed_param_count", &SelectionCostSpec::embed_param_count)
        .def_readwrite("bm25_flops_per_token", &SelectionCostSpec::bm25_flops_per_token)
        .def_readwrite("warmup_fraction", &SelectionCostSpec::warmup_fraction)
        .def_readwrite("warmup_epochs", &SelectionCostSpec::warmup_epochs)
        .def_readwrite("grad_feature_time_ratio", &SelectionCostSpec::grad_feature_time_ratio);

    py::class_<CostBreakdown>(m, "CostBreakdown")
        .def(py::init<>())
        .def_readwrite("selection_flops", &CostBreakdown::selection_flops)
        .def_readwrite("train_flops_per_token", &CostBreakdown::train_flops_per_token)
        .def_readwrite("notes", &CostBreakdown::notes);

    m.def("selection_cost", &selection_cost, py::arg("spec"), py::arg("corpus_tokens"),
          py::arg("validation_tokens"), py::arg("train_config"));

    // ---- Corpus ------------------------------------------------------------
    py::class_<Example>(m, "Example")
        .def(py::init([](std::string id, std::string text, std::int64_t token_count) {
                 return Example{std::move(id), std::move(text), token_count};
             }),
             py::arg("id"), py::arg("text") = std::string{}, py::arg("token_count") = 1)
        .def_readwrite("id", &Example::id)
        .def_readwrite("text", &Example::text)
        .def_readwrite("token_count", &Example::token_count);

    py::class_<Corpus>(m, "Corpus")
        .def(py::init(&make_corpus), py::arg("examples"))
        .def_readonly("examples", &Corpus::examples)
        .def_readonly("total_tokens", &Corpus::total_tokens)
        .def("__len__", &Corpus::size);

    py::class_<ScoreTable>(m, "ScoreTable")
        .def(py::init<>())
        .def(py::init([](std::string method, std::map<std::string, double> scores) {
                 return ScoreTable{std::move(method), std::move(scores)};
             }),
             py::arg("method"), py::arg("scores"))
        .def_readwrite("method", &ScoreTable::method)
        .def_readwrite("scores", &ScoreTable::scores);

    py::class_<VectorTable>(m, "VectorTable")
        .def(py::init<>())
        .def(py::init([](std::int64_t dim, std::map<std::string, std::vector<double>> vectors) {
                 return VectorTable{dim, std::move(vectors)};
             }),
             py::arg("dim"), py::arg("vectors"))
        .def_readwrite("dim", &VectorTable::dim)
        .def_readwrite("vectors", &VectorTable::vectors);

    m.def("whitespace_token_count", &whitespace_token_count, py::arg("text"));
    m.def("load_corpus", &load_corpus, py::arg("path"));
    m.def("save_corpus", &save_corpus, py::arg("corpus"), py::arg("path"));
    m.def("load_vectors", &load_vectors, py::arg("path"), py::arg("corpus"));
    m.def("load_scores", &load_scores, py::arg("path"), py::arg("corpus"));

    // ---- Selectors -----------------------------------------------------------
    py::class_<Bm25Params>(m, "Bm25Params")
        .def(py::init([](double k1, double b) { return Bm25Params{k1, b}; }),
             py::arg("k1") = 1.2, py::arg("b") = 0.75)
        .def_readwrite("k1", &Bm25Params::k1)
        .def_readwrite("b", &Bm25Params::b);

    py::enum_<PplMode>(m, "PplMode")
        .value("TOP", PplMode::Top)
        .value("MID", PplMode::Mid);

    m.def("bm25_utility", &bm25_utility, py::arg("train"), py::arg("validation"),
          py::arg("params") = Bm25Params{}, py::arg("threads") = 0);
    m.def("embed_utility", &embed_utility, py::arg("train_vecs"), py::arg("val_vecs"),
          py::arg("threads") = 0);
    m.def("hashed_tfidf_embed", &hashed_tfidf_embed, py::arg("corpus"), py::arg("dim"),
          py::arg("seed"));
    m.def("ppl_rank", &ppl_rank, py::arg("scores"), py::arg("mode"));
    m.def("gradient_utility", &gradient_utility, py::arg("train_feats"), py::arg("val_feats"),
          py::arg("eta"), py::arg("threads") = 0);
    m.def("random_utility", &random_utility, py::arg("corpus"), py::arg("seed"));

    // ---- Planner ---------------------------------------------------------------
    py::class_<BudgetPlan>(m, "BudgetPlan")
        .def(py::init<>())
        .def_readwrite("total_budget_flops", &BudgetPlan::total_budget_flops)
        .def_readwrite("selection_flops", &BudgetPlan::selection_flops)
        .def_readwrite("train_flops_per_token", &BudgetPlan::train_flops_per_token)
        .def_readwrite("trainable_tokens", &BudgetPlan::trainable_tokens);

    py::class_<Selection>(m, "Selection")
        .def(py::init<>())
        .def_readonly("ids", &Selection::ids)
        .def_readonly("tokens_used", &Selection::tokens_used)
        .def_readonly("utility_sum", &Selection::utility_sum);

    m.def("select_topk", &select_topk, py::arg("scores"), py::arg("corpus"), py::arg("k"));
    m.def("make_budget_plan", &make_budget_plan, py::arg("total_budget_flops"), py::arg("cost"));
    m.def(
        "select_under_budget",
        [](const std::vector<std::string>& ranking, const Corpus& corpus, const BudgetPlan& plan,
           const std::optional<ScoreTable>& scores) {
            return select_under_budget(ranking, corpus, plan, scores ? &*scores : nullptr);
        },
        py::arg("ranking"), py::arg("corpus"), py::arg("plan"),
        py::arg("scores") = std::nullopt);

    // ---- Theory -------------------------------------------------------------------
    py::class_<UtilityModelParams>(m, "UtilityModelParams")
        .def(py::init([](std::int64_t dataset_size, double budget, double train_cost,
                         double concentration, double rate) {
                 UtilityModelParams p{dataset_size, budget, train_cost, concentration, rate};
                 validate(p);
                 return p;
             }),
             py::arg("dataset_size"), py::arg("budget"), py::arg("train_cost"),
             py::arg("concentration"), py::arg("rate"))
        .def_readwrite("dataset_size", &UtilityModelParams::dataset_size)
        .def_readwrite("budget", &UtilityModelParams::budget)
        .def_readwrite("train_cost", &UtilityModelParams::train_cost)
        .def_readwrite("concentration", &UtilityModelParams::concentration)
        .def_readwrite("rate", &UtilityModelParams::rate);

    py::class_<SelectionOptimum>(m, "SelectionOptimum")
        .def_readonly("c_ds_star", &SelectionOptimum::c_ds_star)
        .def_readonly("u_star", &SelectionOptimum::u_star);

    m.def("p_select", &p_select, py::arg("c_ds"), py::arg("params"));
    m.def("expected_utility_random", &expected_utility_random, py::arg("params"));
    m.def("expected_utility_ds", &expected_utility_ds, py::arg("c_ds"), py::arg("params"));
    m.def("optimal_selection_compute", &optimal_selection_compute, py::arg("params"),
          py::arg("tol"));
    m.def("fit_beta", &fit_beta, py::arg("observations"), py::arg("concentration"));

    // ---- Compute-performance model -----------------------------------------------
    py::class_<PerfCurveParams>(m, "PerfCurveParams")
        .def(py::init([](double p0, double pbar, double lam) {
                 PerfCurveParams p{p0, pbar, lam};
                 validate(p);
                 return p;
             }),
             py::arg("p0"), py::arg("pbar"), py::arg("lam"))
        .def_readwrite("p0", &PerfCurveParams::p0)
        .def_readwrite("pbar", &PerfCurveParams::pbar)
        .def_readwrite("lam", &PerfCurveParams::lam);

    py::class_<MethodCostModel>(m, "MethodCostModel")
        .def(py::init([](std::string label, double fixed_selection_flops,
                         double train_flops_per_token, std::int64_t dataset_tokens) {
                 MethodCostModel c{std::move(label), fixed_selection_flops, train_flops_per_token,
                                   dataset_tokens};
                 validate(c);
                 return c;
             }),
             py::arg("label"), py::arg("fixed_selection_flops"), py::arg("train_flops_per_token"),
             py::arg("dataset_tokens"))
        .def_readwrite("label", &MethodCostModel::label)
        .def_readwrite("fixed_selection_flops", &MethodCostModel::fixed_selection_flops)
        .def_readwrite("train_flops_per_token", &MethodCostModel::train_flops_per_token)
        .def_readwrite("dataset_tokens", &MethodCostModel::dataset_tokens);

    py::class_<Run>(m, "Run")
        .def(py::init([](std::string method, std::int64_t tokens_trained, double compute,
                         double performance) {
                 return Run{std::move(method), tokens_trained, compute, performance};
             }),
             py::arg("method"), py::arg("tokens_trained"), py::arg("compute"),
             py::arg("performance"))
        .def_readwrite("method", &Run::method)
        .def_readwrite("tokens_trained", &Run::tokens_trained)
        .def_readwrite("compute", &Run::compute)
        .def_readwrite("performance", &Run::performance);

    py::class_<FrontierFit>(m, "FrontierFit")
        .def(py::init([](double a, double b) { return FrontierFit{a, b}; }), py::arg("a"),
             py::arg("b"))
        .def_readwrite("a", &FrontierFit::a)
        .def_readwrite("b", &FrontierFit::b);

    py::class_<SimulationEntry>(m, "SimulationEntry")
        .def_readonly("method", &SimulationEntry::method)
        .def_readonly("feasible", &SimulationEntry::feasible)
        .def_readonly("best_k", &SimulationEntry::best_k)
        .def_readonly("performance", &SimulationEntry::performance)
        .def_readonly("total_cost", &SimulationEntry::total_cost);

    py::class_<SimulationRow>(m, "SimulationRow")
        .def_readonly("budget", &SimulationRow::budget)
        .def_readonly("entries", &SimulationRow::entries)
        .def_readonly("winner", &SimulationRow::winner);

    m.def("total_cost", &total_cost, py::arg("k_tokens"), py::arg("cost"));
    m.def("predicted_performance", &predicted_performance, py::arg("k_tokens"), py::arg("params"),
          py::arg("cost"));
    m.def(
        "levenberg_marquardt",
        [](const ResidualFn& residuals, std::vector<double> init, std::vector<double> lower,
           std::vector<double> upper, int max_iter, double ftol) {
            LmOptions options;
            options.max_iter = max_iter;
            options.ftol = ftol;
            return levenberg_marquardt(residuals, std::move(init), lower, upper, options);
        },
        py::arg("residuals"), py::arg("init"), py::arg("lower"), py::arg("upper"),
        py::arg("max_iter") = 200, py::arg("ftol") = 1e-12);
    m.def("fit_perf_curve", &fit_perf_curve, py::arg("observations"), py::arg("cost"),
          py::arg("eps") = 0.05);
    m.def("simulate", &simulate, py::arg("methods"), py::arg("budgets"));
    m.def("pareto_frontier", &pareto_frontier, py::arg("runs"));
    m.def("fit_frontier", &fit_frontier, py::arg("frontier"));
    m.def("crosses_frontier", &crosses_frontier, py::arg("curve"), py::arg("cost"),
          py::arg("frontier"));
    m.def("extrapolate_optimal_ratio", &extrapolate_optimal_ratio, py::arg("curve"),
          py::arg("cost"), py::arg("frontier"), py::arg("ratio_grid"));
    m.def("break_even_tasks", &break_even_tasks, py::arg("curve"), py::arg("cost"),
          py::arg("frontier"), py::arg("max_tasks"));

    // ---- Analysis -------------------------------------------------------------------
    py::class_<SimilarityMatrix>(m, "SimilarityMatrix")
        .def_readonly("labels", &SimilarityMatrix::labels)
        .def_readonly("values", &SimilarityMatrix::values);

    m.def("jaccard", &jaccard, py::arg("a"), py::arg("b"));
    m.def("jaccard_matrix", &jaccard_matrix, py::arg("selections"));

    py::class_<ScenarioPanel>(m, "ScenarioPanel")
        .def_readonly("label", &ScenarioPanel::label)
        .def_readonly("budget_grid", &ScenarioPanel::budget_grid)
        .def_readonly("methods", &ScenarioPanel::methods);

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def_readonly("name", &ScenarioConfig::name)
        .def_readonly("dataset_tokens", &ScenarioConfig::dataset_tokens)
        .def_readonly("validation_tokens", &ScenarioConfig::validation_tokens)
        .def_readonly("seed", &ScenarioConfig::seed)
        .def_readonly("model_configs", &ScenarioConfig::model_configs)
        .def_readonly("panels", &ScenarioConfig::panels);

    m.def("load_scenario", &load_scenario, py::arg("path"));
    m.def("load_model_configs", &load_model_configs, py::arg("path"));
}
