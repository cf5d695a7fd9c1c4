#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace datasel {

/// Parameters of the closed-form expected-utility model: a dataset of
/// dataset_size points, a compute budget, a per-point training cost, the
/// fraction of points that are high-utility (concentration), and the
/// exponential rate at which selection compute raises the hit probability.
struct UtilityModelParams {
    std::int64_t dataset_size = 0;
    double budget = 0.0;        // K
    double train_cost = 0.0;    // c_train, per point
    double concentration = 0.0; // P
    double rate = 0.0;          // beta
};

void validate(const UtilityModelParams& params);

/// p(c_ds) = 1 - (1 - P) * exp(-beta * c_ds); requires 0 <= c_ds <= K.
double p_select(double c_ds, const UtilityModelParams& params);

/// U_rand = (K / c_train) * P.
double expected_utility_random(const UtilityModelParams& params);

/// U_ds(c_ds) = ((K - c_ds) / c_train) * p_select(c_ds).
double expected_utility_ds(double c_ds, const UtilityModelParams& params);

struct SelectionOptimum {
    double c_ds_star = 0.0;
    double u_star = 0.0;
};

/// Maximizes expected_utility_ds over [0, K] by a 10,001-point uniform
/// grid scan followed by golden-section refinement of the bracketing
/// interval, to within tol of the true argmax. Ties resolve toward the
/// smaller c_ds.
SelectionOptimum optimal_selection_compute(const UtilityModelParams& params, double tol);

/// Least-squares beta >= 0 for observations (c_ds, p_hat) at a known
/// concentration P < 1, solved with the shared Levenberg-Marquardt
/// routine from the initial guess 1 / mean(c_ds). At least one
/// observation must have c_ds > 0, otherwise beta is unidentifiable.
double fit_beta(const std::vector<std::pair<double, double>>& observations, double concentration);

}  // namespace datasel
