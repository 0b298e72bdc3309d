#include "gv/neural/optimizer.hpp"

#include <cmath>

#include "gv/core/error.hpp"

namespace gv::neural {

double decayed_lr(double lr0, double alpha, uint64_t t) {
    return lr0 / (1.0 + alpha * static_cast<double>(t));
}

AdamState make_adam_state(const DenseModel& model, double beta1, double beta2,
                          double epsilon) {
    AdamState s;
    s.beta1 = beta1;
    s.beta2 = beta2;
    s.epsilon = epsilon;
    s.m.assign(model.param_count(), 0.0);
    s.v.assign(model.param_count(), 0.0);
    return s;
}

void adam_step(AdamState& state, DenseModel& model, const ParamLayout& layout,
               const ModelGrads& grads, double lr) {
    if (grads.flat.size() != state.m.size() || layout.total != state.m.size())
        throw ContractError("adam_step: layout mismatch");
    state.t += 1;
    double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));

    for (size_t s = 0; s < 3; ++s) {
        for (size_t li = 0; li < model.segment(s).size(); ++li) {
            DenseLayer& layer = model.segment(s)[li];
            const ParamLayout::Entry& e = layout.segments[s][li];
            double* targets[2] = {layer.W.data(), layer.b.data()};
            size_t offs[2] = {e.w_off, e.b_off};
            size_t counts[2] = {e.in * e.out, e.out};
            for (int part = 0; part < 2; ++part) {
                double* p = targets[part];
                const double* g = grads.flat.data() + offs[part];
                double* m = state.m.data() + offs[part];
                double* v = state.v.data() + offs[part];
                for (size_t k = 0; k < counts[part]; ++k) {
                    if (!std::isfinite(g[k]))
                        throw ContractError("adam_step: non-finite gradient for " +
                                            layout.param_name(offs[part] + k));
                    m[k] = state.beta1 * m[k] + (1.0 - state.beta1) * g[k];
                    v[k] = state.beta2 * v[k] + (1.0 - state.beta2) * g[k] * g[k];
                    double mhat = m[k] / bc1;
                    double vhat = v[k] / bc2;
                    p[k] -= lr * mhat / (std::sqrt(vhat) + state.epsilon);
                }
            }
        }
    }
}

double ScalarAdam::step(double param, double grad, double lr) {
    t += 1;
    m = beta1 * m + (1.0 - beta1) * grad;
    v = beta2 * v + (1.0 - beta2) * grad * grad;
    double mhat = m / (1.0 - std::pow(beta1, static_cast<double>(t)));
    double vhat = v / (1.0 - std::pow(beta2, static_cast<double>(t)));
    return param - lr * mhat / (std::sqrt(vhat) + epsilon);
}

}  // namespace gv::neural
