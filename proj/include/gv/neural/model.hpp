#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gv/core/kernels.hpp"
#include "gv/core/matrix.hpp"

namespace gv::neural {

enum class Activation : uint8_t { Relu = 0, Linear = 1 };
enum class Topology : uint8_t { F = 0, I = 1, FI = 2 };
enum class Mode { Train, Eval };

const char* to_string(Topology t);
Topology topology_from_string(const std::string& s);

struct LayerSpec {
    size_t width = 0;
    Activation act = Activation::Relu;
    double dropout = 0.0;  // drop probability, applied after the activation
};

/// Architecture description. For F and I the corresponding branch holds the
/// whole stack ending in a width-1 linear layer; for FI both branches feed a
/// head whose input is concat(feature_out, image_out).
struct ModelDims {
    size_t feature_in = 40;
    size_t image_in = 2048;
    std::vector<LayerSpec> feature_layers;
    std::vector<LayerSpec> image_layers;
    std::vector<LayerSpec> head_layers;

    /// Default widths: image 2048-512-128, feature 40-128-64, head 192-64-1,
    /// with the dropout pair on the first image layer and the second feature
    /// layer. Standalone F/I get the branch stack plus the output layer.
    static ModelDims defaults(Topology t, double dropout_image = 0.3,
                              double dropout_feature = 0.2);
};

struct DenseLayer {
    Matrix W;  // out x in
    std::vector<double> b;
    Activation act = Activation::Relu;
    double dropout_p = 0.0;

    size_t in_dim() const { return W.cols(); }
    size_t out_dim() const { return W.rows(); }
};

struct DenseModel {
    Topology topology = Topology::F;
    ModelDims dims;
    std::vector<DenseLayer> feature_branch;
    std::vector<DenseLayer> image_branch;
    std::vector<DenseLayer> head;
    uint64_t train_steps = 0;

    size_t param_count() const;
    const std::vector<DenseLayer>& segment(size_t s) const;
    std::vector<DenseLayer>& segment(size_t s);

    void save(const std::string& path) const;
    static DenseModel load(const std::string& path);
};

/// He-uniform weight init (biases zero), deterministic in the seed.
DenseModel build_model(Topology kind, const ModelDims& dims, uint64_t seed);

/// Byte offsets of each layer's parameters inside the flat parameter
/// vector; shared by gradients, Adam state and the checkpoint format.
/// Order: feature, image, head; per layer W row-major then b.
struct ParamLayout {
    struct Entry {
        size_t w_off, b_off;
        size_t in, out;
    };
    std::array<std::vector<Entry>, 3> segments;
    size_t total = 0;

    static ParamLayout of(const DenseModel& model);
    /// Human-readable name ("image[0].W[42]") for the flat index.
    std::string param_name(size_t flat_index) const;
};

void copy_params_to(const DenseModel& model, std::vector<double>& flat);
void copy_params_from(DenseModel& model, const std::vector<double>& flat);

/// Gradients in the flat ParamLayout order.
struct ModelGrads {
    std::vector<double> flat;
};

struct LayerCache {
    Matrix z;     // pre-activation
    Matrix mask;  // dropout scale factors (0 or 1/(1-p)); empty when unused
    Matrix out;   // layer output
};

struct ForwardCache {
    Mode mode = Mode::Eval;
    size_t batch = 0;
    std::array<std::vector<LayerCache>, 3> segments;
    Matrix concat;  // FI head input
};

/// Runs the network. X_feat/X_img must match the topology (unused inputs may
/// be null). Train mode applies inverted dropout with masks derived only
/// from (seed, layer, element), so a fixed seed reproduces the same masks.
/// Pass a cache to enable backward().
std::vector<double> forward(const DenseModel& model, const Matrix* X_feat,
                            const Matrix* X_img, Mode mode, uint64_t seed,
                            ForwardCache* cache = nullptr,
                            kernels::Exec exec = kernels::default_exec());

/// Mean squared error (1/m) * sum (y_hat - y)^2.
double mse_loss(const std::vector<double>& y_hat, const std::vector<double>& y);

/// l2 * sum of squared weights over all weight matrices; biases excluded.
double l2_penalty(const DenseModel& model, double l2);

/// Gradients of mse_loss + l2_penalty for every parameter. The cache must
/// come from a train-mode forward on the same inputs.
ModelGrads backward(const DenseModel& model, const ForwardCache& cache,
                    const Matrix* X_feat, const Matrix* X_img,
                    const std::vector<double>& y, double l2,
                    kernels::Exec exec = kernels::default_exec());

}  // namespace gv::neural
