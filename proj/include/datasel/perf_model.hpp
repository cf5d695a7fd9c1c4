#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace datasel {

/// Parameters of the saturating compute-performance curve
///   P(k) = (pbar - p0) * (1 - exp(-lam * C(k) / C(|D|))) + p0.
struct PerfCurveParams {
    double p0 = 0.0;
    double pbar = 0.0;
    double lam = 0.0;
};

void validate(const PerfCurveParams& params);

/// Cost model of one method: a fixed selection spend plus a linear
/// per-token training cost over a dataset of dataset_tokens.
struct MethodCostModel {
    std::string label;
    double fixed_selection_flops = 0.0;
    double train_flops_per_token = 0.0;
    std::int64_t dataset_tokens = 0;
};

void validate(const MethodCostModel& cost);

struct Run {
    std::string method;
    std::int64_t tokens_trained = 0;
    double compute = 0.0;
    double performance = 0.0;
};

/// Log-linear frontier fit P(C) = a * ln(C) + b.
struct FrontierFit {
    double a = 0.0;
    double b = 0.0;
};

/// C(k) = train_flops_per_token * k + fixed_selection_flops, for k up to
/// the dataset size.
double total_cost(std::int64_t k_tokens, const MethodCostModel& cost);

double predicted_performance(std::int64_t k_tokens, const PerfCurveParams& params,
                             const MethodCostModel& cost);

struct LmOptions {
    int max_iter = 200;
    double ftol = 1e-12;
    double initial_damping = 1e-3;
    double jacobian_step = 1e-6;  // relative forward-difference step
};

using ResidualFn = std::function<std::vector<double>(const std::vector<double>&)>;

/// Damped least squares with a numerical forward-difference Jacobian.
/// Damping starts at initial_damping, grows 10x on rejected steps and
/// shrinks 10x on accepted ones; parameters are projected onto
/// [lower, upper] after each step. Terminates when an accepted step
/// changes the cost by less than ftol relatively, or at max_iter.
/// Throws on non-finite residuals.
std::vector<double> levenberg_marquardt(const ResidualFn& residuals,
                                        std::vector<double> init,
                                        const std::vector<double>& lower,
                                        const std::vector<double>& upper,
                                        const LmOptions& options = {});

/// Fits (p0, lam) of the performance curve to (k_tokens, performance)
/// observations. pbar is pinned at max observed performance + eps; p0
/// starts from the first observation and lam from 1.0, with bounds
/// p0 in [0, pbar] and lam >= 0.
PerfCurveParams fit_perf_curve(const std::vector<std::pair<std::int64_t, double>>& observations,
                               const MethodCostModel& cost, double eps = 0.05);

struct SimulationEntry {
    std::string method;
    bool feasible = false;
    std::int64_t best_k = 0;
    double performance = 0.0;
    double total_cost = 0.0;
};

struct SimulationRow {
    double budget = 0.0;
    std::vector<SimulationEntry> entries;
    std::string winner;  // empty when no method is feasible
};

/// For each budget K: a method is infeasible when its fixed cost exceeds
/// K; otherwise it trains k* = min(dataset_tokens, floor((K - fixed)/c))
/// tokens and scores predicted_performance(k*). The per-budget winner is
/// the feasible argmax, ties to the lower-total-cost method and then to
/// input order.
std::vector<SimulationRow> simulate(
    const std::vector<std::pair<PerfCurveParams, MethodCostModel>>& methods,
    const std::vector<double>& budgets);

/// Runs not dominated in (compute, performance): no other run has
/// compute <= r.compute and performance >= r.performance with at least
/// one strict. Sorted by compute ascending.
std::vector<Run> pareto_frontier(const std::vector<Run>& runs);

/// Ordinary least squares of performance against ln(compute). Requires
/// at least two runs with distinct compute.
FrontierFit fit_frontier(const std::vector<Run>& frontier);

inline double frontier_value(const FrontierFit& fit, double compute) {
    return fit.a * std::log(compute) + fit.b;
}

/// Number of k grid points used by the frontier-crossing checks.
inline constexpr int kCrossingGridPoints = 1000;

/// True when some k on a 1000-point grid over (0, dataset_tokens] has
/// predicted_performance(k) strictly above the frontier line at total_cost(k).
bool crosses_frontier(const PerfCurveParams& curve, const MethodCostModel& cost,
                      const FrontierFit& frontier);

/// Scales the training cost by each ratio in ascending order (fixed
/// selection cost unchanged) and returns the smallest ratio whose scaled
/// cost model crosses the frontier, if any.
std::optional<double> extrapolate_optimal_ratio(const PerfCurveParams& curve,
                                                const MethodCostModel& cost,
                                                const FrontierFit& frontier,
                                                const std::vector<double>& ratio_grid);

/// Amortizes the fixed selection cost over T = 1..max_tasks tasks and
/// returns the smallest T whose amortized cost model crosses the frontier.
std::optional<std::int64_t> break_even_tasks(const PerfCurveParams& curve,
                                             const MethodCostModel& cost,
                                             const FrontierFit& frontier,
                                             std::int64_t max_tasks);

}  // namespace datasel
