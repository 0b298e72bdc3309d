#pragma once

#include <optional>
#include <string>
#include <vector>

namespace gv::eval {

/// (1/m) * sum (y_hat - y)^2
double mse(const std::vector<double>& y_hat, const std::vector<double>& y);

/// Population variance.
double variance(const std::vector<double>& y);

/// R^2 = 1 - MSE / Var(y). Returns nullopt when the labels are constant
/// (variance zero), where the ratio is undefined. Requires at least two
/// observations.
std::optional<double> r_squared(const std::vector<double>& y_hat,
                                const std::vector<double>& y);

struct SplitMetrics {
    double mse = 0.0;
    double s = 0.0;  // label variance
    std::optional<double> r2;
    size_t n = 0;
};

SplitMetrics evaluate_split(const std::vector<double>& y_hat,
                            const std::vector<double>& y);

/// Metrics for one model across the three data splits.
struct EvalReport {
    std::string model;
    SplitMetrics train;
    SplitMetrics dev;
    SplitMetrics test;
};

}  // namespace gv::eval
