#include "datasel/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "datasel/perf_model.hpp"

namespace datasel {

namespace {

constexpr int kGridPoints = 10001;

}  // namespace

void validate(const UtilityModelParams& params) {
    if (params.dataset_size <= 0) {
        throw std::invalid_argument("UtilityModelParams: dataset_size must be positive");
    }
    if (!(params.budget > 0.0)) {
        throw std::invalid_argument("UtilityModelParams: budget must be positive");
    }
    if (!(params.train_cost > 0.0)) {
        throw std::invalid_argument("UtilityModelParams: train_cost must be positive");
    }
    if (!(params.concentration >= 0.0) || !(params.concentration <= 1.0)) {
        throw std::invalid_argument("UtilityModelParams: concentration must lie in [0, 1]");
    }
    if (!(params.rate >= 0.0)) throw std::invalid_argument("UtilityModelParams: rate must be >= 0");
}

double p_select(double c_ds, const UtilityModelParams& params) {
    validate(params);
    if (!(c_ds >= 0.0) || c_ds > params.budget) {
        throw std::invalid_argument("p_select: c_ds must lie in [0, budget]");
    }
    // P - (1 - P) * expm1(-rate * c_ds) == 1 - (1 - P) * exp(-rate * c_ds),
    // rearranged so c_ds = 0 returns the concentration bit-exactly.
    return params.concentration -
           (1.0 - params.concentration) * std::expm1(-params.rate * c_ds);
}

double expected_utility_random(const UtilityModelParams& params) {
    validate(params);
    return (params.budget / params.train_cost) * params.concentration;
}

double expected_utility_ds(double c_ds, const UtilityModelParams& params) {
    return ((params.budget - c_ds) / params.train_cost) * p_select(c_ds, params);
}

SelectionOptimum optimal_selection_compute(const UtilityModelParams& params, double tol) {
    validate(params);
    if (!(tol > 0.0)) throw std::invalid_argument("optimal_selection_compute: tol must be > 0");

    const double k = params.budget;
    const auto utility = [&](double x) { return expected_utility_ds(x, params); };

    // Uniform scan; strict improvement keeps ties at the smaller c_ds.
    // The fraction is formed first so the final grid point is exactly k.
    double best_x = 0.0;
    double best_u = utility(0.0);
    std::size_t best_i = 0;
    for (int i = 1; i < kGridPoints; ++i) {
        const double x = k * (static_cast<double>(i) / static_cast<double>(kGridPoints - 1));
        const double u = utility(x);
        if (u > best_u) {
            best_u = u;
            best_x = x;
            best_i = static_cast<std::size_t>(i);
        }
    }

    // Golden-section refinement over the bracketing interval.
    const double step = k / static_cast<double>(kGridPoints - 1);
    double lo = best_i > 0 ? std::max(0.0, best_x - step) : 0.0;
    double hi = std::min(k, best_x + step);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double u1 = utility(x1);
    double u2 = utility(x2);
    for (int iter = 0; iter < 200 && (hi - lo) > tol; ++iter) {
        if (u1 >= u2) {
            hi = x2;
            x2 = x1;
            u2 = u1;
            x1 = hi - inv_phi * (hi - lo);
            u1 = utility(x1);
        } else {
            lo = x1;
            x1 = x2;
            u1 = u2;
            x2 = lo + inv_phi * (hi - lo);
            u2 = utility(x2);
        }
    }

    // Best of the refined probes, the bracket edges, and the grid winner;
    // the smaller c_ds wins ties so boundary optima come back exact.
    SelectionOptimum out{best_x, best_u};
    const auto consider = [&](double x) {
        const double u = utility(x);
        if (u > out.u_star || (u == out.u_star && x < out.c_ds_star)) {
            out.u_star = u;
            out.c_ds_star = x;
        }
    };
    consider(lo);
    consider(x1);
    consider(x2);
    consider(hi);
    return out;
}

double fit_beta(const std::vector<std::pair<double, double>>& observations,
                double concentration) {
    if (observations.empty()) throw std::invalid_argument("fit_beta: no observations");
    if (!(concentration >= 0.0) || !(concentration < 1.0)) {
        throw std::invalid_argument("fit_beta: concentration must lie in [0, 1)");
    }
    double c_sum = 0.0;
    bool any_positive = false;
    for (const auto& [c_ds, p_hat] : observations) {
        if (c_ds < 0.0) throw std::invalid_argument("fit_beta: c_ds must be non-negative");
        if (!std::isfinite(p_hat)) throw std::invalid_argument("fit_beta: non-finite p_hat");
        c_sum += c_ds;
        if (c_ds > 0.0) any_positive = true;
    }
    if (!any_positive) {
        throw std::invalid_argument("fit_beta: all observations at c_ds = 0, "
                                    "beta is unidentifiable");
    }

    const auto residuals = [&](const std::vector<double>& theta) {
        std::vector<double> r;
        r.reserve(observations.size());
        for (const auto& [c_ds, p_hat] : observations) {
            r.push_back(concentration - (1.0 - concentration) * std::expm1(-theta[0] * c_ds) -
                        p_hat);
        }
        return r;
    };

    const double beta0 = 1.0 / (c_sum / static_cast<double>(observations.size()));
    const auto theta = levenberg_marquardt(residuals, {beta0}, {0.0},
                                           {std::numeric_limits<double>::infinity()});
    return theta[0];
}

}  // namespace datasel
