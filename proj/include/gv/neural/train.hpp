#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gv/neural/model.hpp"
#include "gv/neural/optimizer.hpp"

namespace gv::neural {

struct TrainConfig {
    double lr0 = 0.0005;
    double alpha = 0.0001;  // per-batch learning-rate decay
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double l2 = 0.1;
    double dropout_image = 0.3;
    double dropout_feature = 0.2;
    size_t batch_size = 1024;
    size_t epochs = 200;
    uint64_t seed = 0;

    void validate() const;
};

/// One data split. Unused sides may be null (X_img for F, X_feat for I).
struct DataView {
    const Matrix* X_feat = nullptr;
    const Matrix* X_img = nullptr;
    const std::vector<double>* y = nullptr;

    size_t size() const { return y ? y->size() : 0; }
};

struct EpochStats {
    size_t epoch = 0;  // 1-based
    double lr = 0.0;   // lr used by the last batch of the epoch
    double train_mse = 0.0;
    double train_r2 = 0.0;  // NaN when the label variance is zero
    double val_mse = 0.0;
    double val_r2 = 0.0;
};

struct TrainResult {
    DenseModel best;   // parameters with the lowest validation MSE
    DenseModel final;  // parameters after the last epoch
    std::vector<EpochStats> history;
    size_t best_epoch = 0;  // 1-based; 0 when epochs == 0
};

/// Full training loop: seeded shuffle each epoch, per-batch decayed
/// learning rate, Adam updates, per-epoch train/val MSE and R². Bit-exact
/// reproducible for a fixed config regardless of Exec and thread count.
TrainResult train(const DenseModel& init, const DataView& train_set,
                  const DataView& val_set, const TrainConfig& cfg,
                  kernels::Exec exec = kernels::default_exec());

/// Evaluates predictions in bounded-size chunks.
std::vector<double> predict(const DenseModel& model, const DataView& data,
                            kernels::Exec exec = kernels::default_exec());

void write_history_csv(const std::string& path, const std::vector<EpochStats>& history);

}  // namespace gv::neural
