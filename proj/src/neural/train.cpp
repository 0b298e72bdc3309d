#include "gv/neural/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "gv/core/error.hpp"
#include "gv/core/rng.hpp"
#include "gv/eval/metrics.hpp"

namespace gv::neural {

void TrainConfig::validate() const {
    if (lr0 <= 0.0 || alpha < 0.0) throw ContractError("train: rates must be positive");
    if (beta1 <= 0.0 || beta1 >= 1.0 || beta2 <= 0.0 || beta2 >= 1.0)
        throw ContractError("train: betas must be in (0,1)");
    if (epsilon <= 0.0) throw ContractError("train: epsilon must be positive");
    if (l2 < 0.0) throw ContractError("train: l2 must be non-negative");
    if (dropout_image < 0.0 || dropout_image >= 1.0 || dropout_feature < 0.0 ||
        dropout_feature >= 1.0)
        throw ContractError("train: dropout probabilities must be in [0,1)");
    if (batch_size == 0) throw ContractError("train: batch_size must be >= 1");
}

namespace {

struct BatchBuffers {
    Matrix feat;
    Matrix img;
    std::vector<double> y;
};

void gather_batch(const DataView& data, const std::vector<size_t>& perm, size_t lo,
                  size_t hi, bool need_feat, bool need_img, BatchBuffers& out) {
    size_t m = hi - lo;
    out.y.resize(m);
    for (size_t i = 0; i < m; ++i) out.y[i] = (*data.y)[perm[lo + i]];
    if (need_feat) {
        out.feat = Matrix(m, data.X_feat->cols());
        for (size_t i = 0; i < m; ++i) {
            const double* src = data.X_feat->row(perm[lo + i]);
            std::copy(src, src + data.X_feat->cols(), out.feat.row(i));
        }
    }
    if (need_img) {
        out.img = Matrix(m, data.X_img->cols());
        for (size_t i = 0; i < m; ++i) {
            const double* src = data.X_img->row(perm[lo + i]);
            std::copy(src, src + data.X_img->cols(), out.img.row(i));
        }
    }
}

void check_inputs(const DenseModel& model, const DataView& data, const char* which) {
    if (!data.y || data.y->empty())
        throw ContractError(std::string("train: empty ") + which + " set");
    bool need_feat = model.topology != Topology::I;
    bool need_img = model.topology != Topology::F;
    if (need_feat) {
        if (!data.X_feat || data.X_feat->rows() != data.y->size())
            throw ContractError(std::string("train: ") + which +
                                " feature matrix missing or misaligned");
    }
    if (need_img) {
        if (!data.X_img || data.X_img->rows() != data.y->size())
            throw ContractError(std::string("train: ") + which +
                                " image matrix missing or misaligned");
    }
}

}  // namespace

std::vector<double> predict(const DenseModel& model, const DataView& data,
                            kernels::Exec exec) {
    check_inputs(model, data, "predict");
    constexpr size_t kChunk = 4096;
    size_t n = data.size();
    bool need_feat = model.topology != Topology::I;
    bool need_img = model.topology != Topology::F;
    std::vector<double> out;
    out.reserve(n);
    std::vector<size_t> ident(n);
    for (size_t i = 0; i < n; ++i) ident[i] = i;
    BatchBuffers buf;
    for (size_t lo = 0; lo < n; lo += kChunk) {
        size_t hi = std::min(n, lo + kChunk);
        gather_batch(data, ident, lo, hi, need_feat, need_img, buf);
        auto y_hat = forward(model, need_feat ? &buf.feat : nullptr,
                             need_img ? &buf.img : nullptr, Mode::Eval, 0, nullptr, exec);
        out.insert(out.end(), y_hat.begin(), y_hat.end());
    }
    return out;
}

TrainResult train(const DenseModel& init, const DataView& train_set,
                  const DataView& val_set, const TrainConfig& cfg, kernels::Exec exec) {
    cfg.validate();
    check_inputs(init, train_set, "train");
    check_inputs(init, val_set, "val");

    TrainResult result;
    result.best = init;
    result.final = init;
    if (cfg.epochs == 0) return result;

    DenseModel model = init;
    ParamLayout layout = ParamLayout::of(model);
    AdamState adam = make_adam_state(model, cfg.beta1, cfg.beta2, cfg.epsilon);

    bool need_feat = model.topology != Topology::I;
    bool need_img = model.topology != Topology::F;
    size_t n = train_set.size();
    double train_var = eval::variance(*train_set.y);
    double val_var = eval::variance(*val_set.y);

    double best_val_mse = std::numeric_limits<double>::infinity();
    uint64_t batches_done = 0;  // the decay variable t, cumulative across epochs
    BatchBuffers buf;

    for (size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        SplitMix64 shuffle_rng(mix_seed(cfg.seed, 0x5f0ull, epoch));
        std::vector<size_t> perm = shuffled_indices(n, shuffle_rng);

        double epoch_sse = 0.0;
        double last_lr = 0.0;
        for (size_t lo = 0; lo < n; lo += cfg.batch_size) {
            size_t hi = std::min(n, lo + cfg.batch_size);
            gather_batch(train_set, perm, lo, hi, need_feat, need_img, buf);

            ForwardCache cache;
            uint64_t step_seed = mix_seed(cfg.seed, 0xd0ull, batches_done);
            auto y_hat = forward(model, need_feat ? &buf.feat : nullptr,
                                 need_img ? &buf.img : nullptr, Mode::Train, step_seed,
                                 &cache, exec);
            double batch_mse = mse_loss(y_hat, buf.y);
            double loss = batch_mse + l2_penalty(model, cfg.l2);
            if (!std::isfinite(loss))
                throw ContractError("train: non-finite loss at epoch " +
                                    std::to_string(epoch) + " batch " +
                                    std::to_string(lo / cfg.batch_size));
            epoch_sse += batch_mse * static_cast<double>(hi - lo);

            ModelGrads grads = backward(model, cache, need_feat ? &buf.feat : nullptr,
                                        need_img ? &buf.img : nullptr, buf.y, cfg.l2, exec);
            last_lr = decayed_lr(cfg.lr0, cfg.alpha, batches_done);
            adam_step(adam, model, layout, grads, last_lr);
            ++batches_done;
        }

        std::vector<double> val_pred = predict(model, val_set, exec);
        EpochStats stats;
        stats.epoch = epoch;
        stats.lr = last_lr;
        stats.train_mse = epoch_sse / static_cast<double>(n);
        stats.train_r2 = train_var == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                                          : 1.0 - stats.train_mse / train_var;
        stats.val_mse = eval::mse(val_pred, *val_set.y);
        stats.val_r2 = val_var == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                                      : 1.0 - stats.val_mse / val_var;
        result.history.push_back(stats);

        if (stats.val_mse < best_val_mse) {
            best_val_mse = stats.val_mse;
            result.best = model;
            result.best_epoch = epoch;
        }
    }

    model.train_steps = batches_done;
    result.final = std::move(model);
    result.best.train_steps = batches_done;
    return result;
}

void write_history_csv(const std::string& path, const std::vector<EpochStats>& history) {
    std::ofstream out(path);
    if (!out) throw DataError("train: cannot write history " + path);
    out << "epoch,lr,train_mse,train_r2,val_mse,val_r2\n";
    char line[256];
    for (const auto& h : history) {
        std::snprintf(line, sizeof(line), "%zu,%.17g,%.17g,%.17g,%.17g,%.17g\n", h.epoch,
                      h.lr, h.train_mse, h.train_r2, h.val_mse, h.val_r2);
        out << line;
    }
}

}  // namespace gv::neural
