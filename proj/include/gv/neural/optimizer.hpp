#pragma once

#include <cstdint>
#include <vector>

#include "gv/neural/model.hpp"

namespace gv::neural {

/// lr0 / (1 + alpha * t), where t is the cumulative number of processed
/// batches. Strictly decreasing in t, lr(0) = lr0.
double decayed_lr(double lr0, double alpha, uint64_t t);

/// Bias-corrected Adam. m and v mirror the flat parameter layout.
struct AdamState {
    uint64_t t = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::vector<double> m, v;
};

AdamState make_adam_state(const DenseModel& model, double beta1 = 0.9,
                          double beta2 = 0.999, double epsilon = 1e-8);

/// One Adam update over all model parameters. Throws on a non-finite
/// gradient, naming the offending parameter.
void adam_step(AdamState& state, DenseModel& model, const ParamLayout& layout,
               const ModelGrads& grads, double lr);

/// Scalar form used by the optimizer tests and the reference oracle.
struct ScalarAdam {
    double m = 0.0, v = 0.0;
    uint64_t t = 0;
    double beta1 = 0.9, beta2 = 0.999, epsilon = 1e-8;

    double step(double param, double grad, double lr);
};

}  // namespace gv::neural
