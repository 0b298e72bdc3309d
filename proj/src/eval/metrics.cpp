#include "gv/eval/metrics.hpp"

#include "gv/core/error.hpp"

namespace gv::eval {

double mse(const std::vector<double>& y_hat, const std::vector<double>& y) {
    if (y_hat.size() != y.size()) throw ContractError("mse: length mismatch");
    if (y.empty()) throw ContractError("mse: empty input");
    double acc = 0.0;
    for (size_t i = 0; i < y.size(); ++i) {
        double d = y_hat[i] - y[i];
        acc += d * d;
    }
    return acc / static_cast<double>(y.size());
}

double variance(const std::vector<double>& y) {
    if (y.empty()) throw ContractError("variance: empty input");
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    double acc = 0.0;
    for (double v : y) {
        double d = v - mean;
        acc += d * d;
    }
    return acc / static_cast<double>(y.size());
}

std::optional<double> r_squared(const std::vector<double>& y_hat,
                                const std::vector<double>& y) {
    if (y.size() < 2) throw ContractError("r_squared: need at least two observations");
    double s = variance(y);
    if (s == 0.0) return std::nullopt;
    return 1.0 - mse(y_hat, y) / s;
}

SplitMetrics evaluate_split(const std::vector<double>& y_hat,
                            const std::vector<double>& y) {
    SplitMetrics m;
    m.n = y.size();
    m.mse = mse(y_hat, y);
    m.s = variance(y);
    m.r2 = m.s == 0.0 ? std::nullopt : std::optional<double>(1.0 - m.mse / m.s);
    return m;
}

}  // namespace gv::eval
