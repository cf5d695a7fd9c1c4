#include "datasel/perf_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace datasel {

namespace {

double squared_norm(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x * x;
    return sum;
}

void require_finite(const std::vector<double>& r, const char* where) {
    for (double x : r) {
        if (!std::isfinite(x)) {
            throw std::runtime_error(std::string("levenberg_marquardt: non-finite residual ") +
                                     where);
        }
    }
}

/// Solves A x = b for a small dense symmetric system by Gaussian
/// elimination with partial pivoting. A is row-major n x n.
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row) {
            if (std::abs(a[row * n + col]) > std::abs(a[pivot * n + col])) pivot = row;
        }
        if (a[pivot * n + col] == 0.0) {
            throw std::runtime_error("levenberg_marquardt: singular normal equations");
        }
        if (pivot != col) {
            for (std::size_t k = 0; k < n; ++k) std::swap(a[col * n + k], a[pivot * n + k]);
            std::swap(b[col], b[pivot]);
        }
        for (std::size_t row = col + 1; row < n; ++row) {
            const double f = a[row * n + col] / a[col * n + col];
            for (std::size_t k = col; k < n; ++k) a[row * n + k] -= f * a[col * n + k];
            b[row] -= f * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double sum = b[i];
        for (std::size_t k = i + 1; k < n; ++k) sum -= a[i * n + k] * x[k];
        x[i] = sum / a[i * n + i];
    }
    return x;
}

std::vector<double> project(std::vector<double> theta, const std::vector<double>& lower,
                            const std::vector<double>& upper) {
    for (std::size_t i = 0; i < theta.size(); ++i) {
        theta[i] = std::min(std::max(theta[i], lower[i]), upper[i]);
    }
    return theta;
}

}  // namespace

void validate(const PerfCurveParams& params) {
    if (!(params.p0 >= 0.0) || !(params.p0 <= params.pbar)) {
        throw std::invalid_argument("PerfCurveParams: require 0 <= p0 <= pbar");
    }
    if (!(params.lam >= 0.0)) throw std::invalid_argument("PerfCurveParams: lam must be >= 0");
}

void validate(const MethodCostModel& cost) {
    if (cost.fixed_selection_flops < 0.0 || cost.train_flops_per_token < 0.0) {
        throw std::invalid_argument("MethodCostModel: costs must be non-negative");
    }
    if (cost.dataset_tokens <= 0) {
        throw std::invalid_argument("MethodCostModel: dataset_tokens must be positive");
    }
}

double total_cost(std::int64_t k_tokens, const MethodCostModel& cost) {
    validate(cost);
    if (k_tokens < 0) throw std::invalid_argument("total_cost: k_tokens must be non-negative");
    if (k_tokens > cost.dataset_tokens) {
        throw std::invalid_argument("total_cost: k_tokens exceeds dataset_tokens");
    }
    return cost.train_flops_per_token * static_cast<double>(k_tokens) +
           cost.fixed_selection_flops;
}

double predicted_performance(std::int64_t k_tokens, const PerfCurveParams& params,
                             const MethodCostModel& cost) {
    validate(params);
    const double full_cost = total_cost(cost.dataset_tokens, cost);
    const double cost_k = total_cost(k_tokens, cost);
    const double ratio = full_cost > 0.0 ? cost_k / full_cost : 0.0;
    return (params.pbar - params.p0) * -std::expm1(-params.lam * ratio) + params.p0;
}

std::vector<double> levenberg_marquardt(const ResidualFn& residuals, std::vector<double> init,
                                        const std::vector<double>& lower,
                                        const std::vector<double>& upper,
                                        const LmOptions& options) {
    const std::size_t m = init.size();
    if (lower.size() != m || upper.size() != m) {
        throw std::invalid_argument("levenberg_marquardt: bounds must match parameter size");
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (lower[i] > upper[i]) {
            throw std::invalid_argument("levenberg_marquardt: lower bound above upper bound");
        }
    }

    std::vector<double> theta = project(std::move(init), lower, upper);
    std::vector<double> r = residuals(theta);
    require_finite(r, "at the initial parameters");
    double cost = squared_norm(r);
    double damping = options.initial_damping;

    for (int iter = 0; iter < options.max_iter; ++iter) {
        const std::size_t n = r.size();

        // Forward-difference Jacobian, column-major by parameter.
        std::vector<std::vector<double>> jac(m);
        for (std::size_t j = 0; j < m; ++j) {
            const double step = options.jacobian_step * std::max(std::abs(theta[j]), 1.0);
            std::vector<double> theta_step = theta;
            theta_step[j] += step;
            std::vector<double> r_step = residuals(theta_step);
            require_finite(r_step, "while forming the Jacobian");
            if (r_step.size() != n) {
                throw std::runtime_error("levenberg_marquardt: residual size changed");
            }
            jac[j].resize(n);
            for (std::size_t i = 0; i < n; ++i) jac[j][i] = (r_step[i] - r[i]) / step;
        }

        // Normal equations with Marquardt diagonal scaling.
        std::vector<double> jtj(m * m, 0.0);
        std::vector<double> jtr(m, 0.0);
        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t b = a; b < m; ++b) {
                double sum = 0.0;
                for (std::size_t i = 0; i < n; ++i) sum += jac[a][i] * jac[b][i];
                jtj[a * m + b] = sum;
                jtj[b * m + a] = sum;
            }
            for (std::size_t i = 0; i < n; ++i) jtr[a] += jac[a][i] * r[i];
        }
        std::vector<double> damped = jtj;
        for (std::size_t a = 0; a < m; ++a) {
            const double diag = std::max(jtj[a * m + a], 1e-12);
            damped[a * m + a] = jtj[a * m + a] + damping * diag;
        }
        std::vector<double> neg_jtr(m);
        for (std::size_t a = 0; a < m; ++a) neg_jtr[a] = -jtr[a];

        std::vector<double> delta;
        try {
            delta = solve_dense(std::move(damped), std::move(neg_jtr));
        } catch (const std::runtime_error&) {
            damping *= 10.0;
            continue;
        }

        std::vector<double> candidate(m);
        for (std::size_t a = 0; a < m; ++a) candidate[a] = theta[a] + delta[a];
        candidate = project(std::move(candidate), lower, upper);
        if (candidate == theta) break;  // clamped against the bounds, no progress possible

        std::vector<double> r_new = residuals(candidate);
        require_finite(r_new, "at a trial step");
        const double cost_new = squared_norm(r_new);

        if (cost_new < cost) {
            const double rel_change = (cost - cost_new) / std::max(cost, 1e-300);
            theta = std::move(candidate);
            r = std::move(r_new);
            cost = cost_new;
            damping /= 10.0;
            if (rel_change < options.ftol) break;
        } else {
            damping *= 10.0;
        }
    }
    return theta;
}

PerfCurveParams fit_perf_curve(const std::vector<std::pair<std::int64_t, double>>& observations,
                               const MethodCostModel& cost, double eps) {
    if (observations.size() < 3) {
        throw std::invalid_argument("fit_perf_curve: need at least 3 observations");
    }
    double max_perf = -std::numeric_limits<double>::infinity();
    for (const auto& [k, perf] : observations) {
        if (!std::isfinite(perf)) {
            throw std::invalid_argument("fit_perf_curve: non-finite performance");
        }
        max_perf = std::max(max_perf, perf);
    }

    const double pbar = max_perf + eps;
    const auto residuals = [&](const std::vector<double>& theta) {
        PerfCurveParams trial{theta[0], pbar, theta[1]};
        // The fit may probe p0 slightly above pbar while differencing;
        // evaluate the raw formula rather than the validated entry point.
        const double full_cost = total_cost(cost.dataset_tokens, cost);
        std::vector<double> r;
        r.reserve(observations.size());
        for (const auto& [k, perf] : observations) {
            const double ratio = full_cost > 0.0 ? total_cost(k, cost) / full_cost : 0.0;
            const double pred =
                (trial.pbar - trial.p0) * -std::expm1(-trial.lam * ratio) + trial.p0;
            r.push_back(pred - perf);
        }
        return r;
    };

    const std::vector<double> init{observations.front().second, 1.0};
    const std::vector<double> lower{0.0, 0.0};
    const std::vector<double> upper{pbar, std::numeric_limits<double>::infinity()};
    const auto theta = levenberg_marquardt(residuals, init, lower, upper);

    PerfCurveParams out{theta[0], pbar, theta[1]};
    validate(out);
    return out;
}

std::vector<SimulationRow> simulate(
    const std::vector<std::pair<PerfCurveParams, MethodCostModel>>& methods,
    const std::vector<double>& budgets) {
    if (methods.empty()) throw std::invalid_argument("simulate: no methods");
    if (budgets.empty()) throw std::invalid_argument("simulate: no budgets");
    for (const auto& [params, cost] : methods) {
        validate(params);
        validate(cost);
    }

    std::vector<SimulationRow> rows;
    rows.reserve(budgets.size());
    for (const double budget : budgets) {
        SimulationRow row;
        row.budget = budget;
        std::size_t best = methods.size();
        for (std::size_t i = 0; i < methods.size(); ++i) {
            const auto& [params, cost] = methods[i];
            SimulationEntry entry;
            entry.method = cost.label;
            if (cost.fixed_selection_flops > budget) {
                row.entries.push_back(std::move(entry));
                continue;
            }
            entry.feasible = true;
            const double affordable =
                cost.train_flops_per_token > 0.0
                    ? std::floor((budget - cost.fixed_selection_flops) /
                                 cost.train_flops_per_token)
                    : static_cast<double>(cost.dataset_tokens);
            entry.best_k = static_cast<std::int64_t>(
                std::min(static_cast<double>(cost.dataset_tokens), affordable));
            entry.performance = predicted_performance(entry.best_k, params, cost);
            entry.total_cost = total_cost(entry.best_k, cost);
            if (best == methods.size()) {
                best = i;
            } else {
                const auto& incumbent = row.entries[best];
                if (entry.performance > incumbent.performance ||
                    (entry.performance == incumbent.performance &&
                     entry.total_cost < incumbent.total_cost)) {
                    best = i;
                }
            }
            row.entries.push_back(std::move(entry));
        }
        if (best < methods.size()) row.winner = methods[best].second.label;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<Run> pareto_frontier(const std::vector<Run>& runs) {
    if (runs.empty()) throw std::invalid_argument("pareto_frontier: no runs");
    for (const auto& run : runs) {
        if (!(run.compute > 0.0)) {
            throw std::invalid_argument("pareto_frontier: compute must be positive");
        }
        if (!std::isfinite(run.performance)) {
            throw std::invalid_argument("pareto_frontier: non-finite performance");
        }
    }

    std::vector<std::size_t> idx(runs.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (runs[a].compute != runs[b].compute) return runs[a].compute < runs[b].compute;
        if (runs[a].performance != runs[b].performance) {
            return runs[a].performance > runs[b].performance;
        }
        return a < b;
    });

    std::vector<Run> frontier;
    double best_perf_below = -std::numeric_limits<double>::infinity();
    std::size_t i = 0;
    while (i < idx.size()) {
        // Group of equal compute; the first carries the group's max performance.
        std::size_t j = i;
        const double compute = runs[idx[i]].compute;
        const double group_max = runs[idx[i]].performance;
        while (j < idx.size() && runs[idx[j]].compute == compute) {
            const auto& run = runs[idx[j]];
            // Survives iff nothing cheaper matches it and nothing at equal
            // compute strictly beats it.
            if (run.performance > best_perf_below && run.performance == group_max) {
                frontier.push_back(run);
            }
            ++j;
        }
        best_perf_below = std::max(best_perf_below, group_max);
        i = j;
    }
    return frontier;
}

FrontierFit fit_frontier(const std::vector<Run>& frontier) {
    if (frontier.size() < 2) {
        throw std::invalid_argument("fit_frontier: need at least 2 runs");
    }
    double sx = 0.0, sy = 0.0;
    for (const auto& run : frontier) {
        if (!(run.compute > 0.0)) {
            throw std::invalid_argument("fit_frontier: compute must be positive");
        }
        sx += std::log(run.compute);
        sy += run.performance;
    }
    const double n = static_cast<double>(frontier.size());
    const double mean_x = sx / n;
    const double mean_y = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& run : frontier) {
        const double dx = std::log(run.compute) - mean_x;
        sxx += dx * dx;
        sxy += dx * (run.performance - mean_y);
    }
    if (sxx == 0.0) {
        throw std::invalid_argument("fit_frontier: all runs share the same compute");
    }
    FrontierFit fit;
    fit.a = sxy / sxx;
    fit.b = mean_y - fit.a * mean_x;
    return fit;
}

bool crosses_frontier(const PerfCurveParams& curve, const MethodCostModel& cost,
                      const FrontierFit& frontier) {
    validate(curve);
    validate(cost);
    for (int i = 1; i <= kCrossingGridPoints; ++i) {
        std::int64_t k = static_cast<std::int64_t>(
            std::llround(static_cast<double>(i) * static_cast<double>(cost.dataset_tokens) /
                         static_cast<double>(kCrossingGridPoints)));
        k = std::max<std::int64_t>(1, std::min(k, cost.dataset_tokens));
        const double c = total_cost(k, cost);
        if (!(c > 0.0)) continue;  // ln undefined, cannot compare against the line
        if (predicted_performance(k, curve, cost) > frontier_value(frontier, c)) return true;
    }
    return false;
}

std::optional<double> extrapolate_optimal_ratio(const PerfCurveParams& curve,
                                                const MethodCostModel& cost,
                                                const FrontierFit& frontier,
                                                const std::vector<double>& ratio_grid) {
    if (ratio_grid.empty()) throw std::invalid_argument("extrapolate_optimal_ratio: empty grid");
    if (!std::is_sorted(ratio_grid.begin(), ratio_grid.end())) {
        throw std::invalid_argument("extrapolate_optimal_ratio: ratio grid must be ascending");
    }
    for (const double ratio : ratio_grid) {
        if (!(ratio > 0.0)) {
            throw std::invalid_argument("extrapolate_optimal_ratio: ratios must be positive");
        }
        MethodCostModel scaled = cost;
        scaled.train_flops_per_token = ratio * cost.train_flops_per_token;
        if (crosses_frontier(curve, scaled, frontier)) return ratio;
    }
    return std::nullopt;
}

std::optional<std::int64_t> break_even_tasks(const PerfCurveParams& curve,
                                             const MethodCostModel& cost,
                                             const FrontierFit& frontier,
                                             std::int64_t max_tasks) {
    if (max_tasks < 1) throw std::invalid_argument("break_even_tasks: max_tasks must be >= 1");
    for (std::int64_t tasks = 1; tasks <= max_tasks; ++tasks) {
        MethodCostModel amortized = cost;
        amortized.fixed_selection_flops = cost.fixed_selection_flops / static_cast<double>(tasks);
        if (crosses_frontier(curve, amortized, frontier)) return tasks;
    }
    return std::nullopt;
}

}  // namespace datasel
