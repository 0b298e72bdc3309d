#include "gv/neural/model.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "gv/core/binio.hpp"
#include "gv/core/error.hpp"
#include "gv/core/rng.hpp"

namespace gv::neural {

const char* to_string(Topology t) {
    switch (t) {
        case Topology::F: return "F";
        case Topology::I: return "I";
        case Topology::FI: return "FI";
    }
    return "?";
}

Topology topology_from_string(const std::string& s) {
    if (s == "F" || s == "f") return Topology::F;
    if (s == "I" || s == "i") return Topology::I;
    if (s == "FI" || s == "fi" || s == "F+I" || s == "f+i") return Topology::FI;
    throw ContractError("unknown topology: " + s);
}

ModelDims ModelDims::defaults(Topology t, double dropout_image, double dropout_feature) {
    ModelDims d;
    switch (t) {
        case Topology::F:
            d.feature_layers = {{128, Activation::Relu, 0.0},
                                {64, Activation::Relu, dropout_feature},
                                {1, Activation::Linear, 0.0}};
            break;
        case Topology::I:
            d.image_layers = {{512, Activation::Relu, dropout_image},
                              {128, Activation::Relu, 0.0},
                              {1, Activation::Linear, 0.0}};
            break;
        case Topology::FI:
            d.feature_layers = {{128, Activation::Relu, 0.0},
                                {64, Activation::Relu, dropout_feature}};
            d.image_layers = {{512, Activation::Relu, dropout_image},
                              {128, Activation::Relu, 0.0}};
            d.head_layers = {{64, Activation::Relu, 0.0}, {1, Activation::Linear, 0.0}};
            break;
    }
    return d;
}

namespace {

void validate_dims(Topology kind, const ModelDims& dims) {
    auto check_stack = [](const std::vector<LayerSpec>& layers, const char* name) {
        if (layers.empty())
            throw ContractError(std::string("build_model: empty ") + name + " stack");
        for (const auto& l : layers) {
            if (l.width == 0)
                throw ContractError(std::string("build_model: zero width in ") + name);
            if (l.dropout < 0.0 || l.dropout >= 1.0)
                throw ContractError("build_model: dropout must be in [0,1)");
        }
    };
    switch (kind) {
        case Topology::F:
            check_stack(dims.feature_layers, "feature");
            if (!dims.image_layers.empty() || !dims.head_layers.empty())
                throw ContractError("build_model: F topology takes only feature layers");
            if (dims.feature_layers.back().width != 1)
                throw ContractError("build_model: output layer must have width 1");
            break;
        case Topology::I:
            check_stack(dims.image_layers, "image");
            if (!dims.feature_layers.empty() || !dims.head_layers.empty())
                throw ContractError("build_model: I topology takes only image layers");
            if (dims.image_layers.back().width != 1)
                throw ContractError("build_model: output layer must have width 1");
            break;
        case Topology::FI:
            check_stack(dims.feature_layers, "feature");
            check_stack(dims.image_layers, "image");
            check_stack(dims.head_layers, "head");
            if (dims.head_layers.back().width != 1)
                throw ContractError("build_model: output layer must have width 1");
            break;
    }
    if (dims.feature_in == 0 || dims.image_in == 0)
        throw ContractError("build_model: zero input dimension");
}

std::vector<DenseLayer> init_stack(const std::vector<LayerSpec>& specs, size_t in_dim,
                                   uint64_t seed, int segment) {
    std::vector<DenseLayer> layers;
    layers.reserve(specs.size());
    size_t in = in_dim;
    for (size_t l = 0; l < specs.size(); ++l) {
        DenseLayer layer;
        layer.W = Matrix(specs[l].width, in);
        layer.b.assign(specs[l].width, 0.0);
        layer.act = specs[l].act;
        layer.dropout_p = specs[l].dropout;
        SplitMix64 rng(mix_seed(seed, 0x11e0 + segment, l));
        double limit = std::sqrt(6.0 / static_cast<double>(in));
        for (double& w : layer.W.storage()) w = (2.0 * rng.uniform() - 1.0) * limit;
        in = specs[l].width;
        layers.push_back(std::move(layer));
    }
    return layers;
}

}  // namespace

DenseModel build_model(Topology kind, const ModelDims& dims, uint64_t seed) {
    validate_dims(kind, dims);
    DenseModel m;
    m.topology = kind;
    m.dims = dims;
    if (!dims.feature_layers.empty())
        m.feature_branch = init_stack(dims.feature_layers, dims.feature_in, seed, 0);
    if (!dims.image_layers.empty())
        m.image_branch = init_stack(dims.image_layers, dims.image_in, seed, 1);
    if (!dims.head_layers.empty()) {
        size_t concat = m.feature_branch.back().out_dim() + m.image_branch.back().out_dim();
        m.head = init_stack(dims.head_layers, concat, seed, 2);
    }
    return m;
}

const std::vector<DenseLayer>& DenseModel::segment(size_t s) const {
    switch (s) {
        case 0: return feature_branch;
        case 1: return image_branch;
        default: return head;
    }
}

std::vector<DenseLayer>& DenseModel::segment(size_t s) {
    switch (s) {
        case 0: return feature_branch;
        case 1: return image_branch;
        default: return head;
    }
}

size_t DenseModel::param_count() const {
    size_t n = 0;
    for (size_t s = 0; s < 3; ++s)
        for (const auto& l : segment(s)) n += l.W.size() + l.b.size();
    return n;
}

ParamLayout ParamLayout::of(const DenseModel& model) {
    ParamLayout layout;
    size_t off = 0;
    for (size_t s = 0; s < 3; ++s) {
        for (const auto& l : model.segment(s)) {
            Entry e;
            e.w_off = off;
            off += l.W.size();
            e.b_off = off;
            off += l.b.size();
            e.in = l.in_dim();
            e.out = l.out_dim();
            layout.segments[s].push_back(e);
        }
    }
    layout.total = off;
    return layout;
}

std::string ParamLayout::param_name(size_t flat_index) const {
    static const char* seg_names[3] = {"feature", "image", "head"};
    for (size_t s = 0; s < 3; ++s) {
        for (size_t l = 0; l < segments[s].size(); ++l) {
            const Entry& e = segments[s][l];
            if (flat_index >= e.w_off && flat_index < e.w_off + e.in * e.out)
                return std::string(seg_names[s]) + "[" + std::to_string(l) + "].W[" +
                       std::to_string(flat_index - e.w_off) + "]";
            if (flat_index >= e.b_off && flat_index < e.b_off + e.out)
                return std::string(seg_names[s]) + "[" + std::to_string(l) + "].b[" +
                       std::to_string(flat_index - e.b_off) + "]";
        }
    }
    return "param[" + std::to_string(flat_index) + "]";
}

void copy_params_to(const DenseModel& model, std::vector<double>& flat) {
    flat.resize(model.param_count());
    size_t off = 0;
    for (size_t s = 0; s < 3; ++s) {
        for (const auto& l : model.segment(s)) {
            std::memcpy(flat.data() + off, l.W.data(), l.W.size() * sizeof(double));
            off += l.W.size();
            std::memcpy(flat.data() + off, l.b.data(), l.b.size() * sizeof(double));
            off += l.b.size();
        }
    }
}

void copy_params_from(DenseModel& model, const std::vector<double>& flat) {
    if (flat.size() != model.param_count())
        throw ContractError("copy_params_from: size mismatch");
    size_t off = 0;
    for (size_t s = 0; s < 3; ++s) {
        for (auto& l : model.segment(s)) {
            std::memcpy(l.W.data(), flat.data() + off, l.W.size() * sizeof(double));
            off += l.W.size();
            std::memcpy(l.b.data(), flat.data() + off, l.b.size() * sizeof(double));
            off += l.b.size();
        }
    }
}

namespace {

// Dropout masks depend only on (seed, segment, layer, element), never on
// values or evaluation order, so a fixed seed reproduces them exactly.
double mask_value(uint64_t seed, size_t segment, size_t layer, size_t elem, double p) {
    uint64_t h = hash_u64(mix_seed(seed, 0xd70u + segment * 16 + layer) ^
                          (0x9e3779b97f4a7c15ull * (elem + 1)));
    double u = static_cast<double>(h >> 11) * 0x1.0p-53;
    return u >= p ? 1.0 / (1.0 - p) : 0.0;
}

void fill_mask(Matrix& mask, uint64_t seed, size_t segment, size_t layer, double p) {
    double* data = mask.data();
    size_t n = mask.size();
    for (size_t e = 0; e < n; ++e) data[e] = mask_value(seed, segment, layer, e, p);
}

// Runs one stack. `caches` may be null (pure eval).
Matrix run_stack(const std::vector<DenseLayer>& layers, const Matrix& input, Mode mode,
                 uint64_t seed, size_t segment, std::vector<LayerCache>* caches,
                 kernels::Exec exec) {
    const Matrix* cur = &input;
    Matrix scratch;
    for (size_t li = 0; li < layers.size(); ++li) {
        const DenseLayer& layer = layers[li];
        if (cur->cols() != layer.in_dim())
            throw ContractError("forward: input width " + std::to_string(cur->cols()) +
                                " does not match layer input " +
                                std::to_string(layer.in_dim()));
        size_t m = cur->rows();
        Matrix z(m, layer.out_dim());
        kernels::matmul_abt(cur->data(), layer.W.data(), z.data(), m, layer.in_dim(),
                            layer.out_dim(), exec);
        kernels::add_bias_rows(z.data(), layer.b.data(), m, layer.out_dim(), exec);

        Matrix out = z;  // copy keeps pre-activations for backward
        if (layer.act == Activation::Relu) kernels::relu(out.data(), out.size(), exec);

        Matrix mask;
        if (mode == Mode::Train && layer.dropout_p > 0.0) {
            mask = Matrix(m, layer.out_dim());
            fill_mask(mask, seed, segment, li, layer.dropout_p);
            kernels::hadamard(out.data(), mask.data(), out.size(), exec);
        }

        if (caches) {
            LayerCache c;
            c.z = std::move(z);
            c.mask = std::move(mask);
            c.out = std::move(out);
            caches->push_back(std::move(c));
            cur = &caches->back().out;
        } else {
            scratch = std::move(out);
            cur = &scratch;
        }
    }
    return *cur;
}

}  // namespace

std::vector<double> forward(const DenseModel& model, const Matrix* X_feat,
                            const Matrix* X_img, Mode mode, uint64_t seed,
                            ForwardCache* cache, kernels::Exec exec) {
    if (cache) {
        *cache = ForwardCache{};
        cache->mode = mode;
    }
    Matrix out;
    switch (model.topology) {
        case Topology::F: {
            if (!X_feat) throw ContractError("forward: F topology needs feature input");
            out = run_stack(model.feature_branch, *X_feat, mode, seed, 0,
                            cache ? &cache->segments[0] : nullptr, exec);
            if (cache) cache->batch = X_feat->rows();
            break;
        }
        case Topology::I: {
            if (!X_img) throw ContractError("forward: I topology needs image input");
            out = run_stack(model.image_branch, *X_img, mode, seed, 1,
                            cache ? &cache->segments[1] : nullptr, exec);
            if (cache) cache->batch = X_img->rows();
            break;
        }
        case Topology::FI: {
            if (!X_feat || !X_img)
                throw ContractError("forward: FI topology needs both inputs");
            if (X_feat->rows() != X_img->rows())
                throw ContractError("forward: feature/image row count mismatch");
            Matrix hf = run_stack(model.feature_branch, *X_feat, mode, seed, 0,
                                  cache ? &cache->segments[0] : nullptr, exec);
            Matrix hi = run_stack(model.image_branch, *X_img, mode, seed, 1,
                                  cache ? &cache->segments[1] : nullptr, exec);
            size_t m = hf.rows(), f = hf.cols(), g = hi.cols();
            Matrix concat(m, f + g);
            for (size_t i = 0; i < m; ++i) {
                double* dst = concat.row(i);
                std::memcpy(dst, hf.row(i), f * sizeof(double));
                std::memcpy(dst + f, hi.row(i), g * sizeof(double));
            }
            if (cache) {
                cache->batch = m;
                cache->concat = concat;
            }
            out = run_stack(model.head, concat, mode, seed, 2,
                            cache ? &cache->segments[2] : nullptr, exec);
            break;
        }
    }
    if (out.cols() != 1) throw ContractError("forward: output layer width must be 1");
    std::vector<double> y_hat(out.rows());
    for (size_t i = 0; i < out.rows(); ++i) y_hat[i] = out(i, 0);
    return y_hat;
}

double mse_loss(const std::vector<double>& y_hat, const std::vector<double>& y) {
    if (y_hat.size() != y.size()) throw ContractError("mse_loss: length mismatch");
    if (y.empty()) throw ContractError("mse_loss: empty input");
    double acc = 0.0;
    for (size_t i = 0; i < y.size(); ++i) {
        double d = y_hat[i] - y[i];
        acc += d * d;
    }
    return acc / static_cast<double>(y.size());
}

double l2_penalty(const DenseModel& model, double l2) {
    double acc = 0.0;
    for (size_t s = 0; s < 3; ++s)
        for (const auto& l : model.segment(s))
            for (double w : l.W.storage()) acc += w * w;
    return l2 * acc;
}

namespace {

// Backprop through one stack. Writes dW/db into `flat` at the layout
// offsets; returns the input gradient unless `skip_input_grad`.
Matrix stack_backward(const std::vector<DenseLayer>& layers,
                      const std::vector<LayerCache>& caches, const Matrix& input,
                      Matrix d_out, const ParamLayout& layout, size_t segment,
                      std::vector<double>& flat, double l2, bool skip_input_grad,
                      kernels::Exec exec) {
    Matrix d_cur = std::move(d_out);
    for (size_t li = layers.size(); li-- > 0;) {
        const DenseLayer& layer = layers[li];
        const LayerCache& c = caches[li];
        size_t m = d_cur.rows();
        if (d_cur.cols() != layer.out_dim() || c.z.rows() != m)
            throw ContractError("backward: stale or mismatched cache");

        if (!c.mask.empty())
            kernels::hadamard(d_cur.data(), c.mask.data(), d_cur.size(), exec);
        if (layer.act == Activation::Relu)
            kernels::relu_grad_mask(c.z.data(), d_cur.data(), d_cur.size(), exec);

        const Matrix& x = li == 0 ? input : caches[li - 1].out;
        const ParamLayout::Entry& e = layout.segments[segment][li];
        double* dW = flat.data() + e.w_off;
        double* db = flat.data() + e.b_off;
        kernels::matmul_atb(d_cur.data(), x.data(), dW, m, layer.out_dim(),
                            layer.in_dim(), exec);
        if (l2 != 0.0) {
            const double* W = layer.W.data();
            for (size_t k = 0; k < layer.W.size(); ++k) dW[k] += 2.0 * l2 * W[k];
        }
        kernels::column_sums(d_cur.data(), db, m, layer.out_dim(), exec);

        if (li == 0 && skip_input_grad) return Matrix{};
        Matrix d_x(m, layer.in_dim());
        kernels::matmul_ab(d_cur.data(), layer.W.data(), d_x.data(), m, layer.out_dim(),
                           layer.in_dim(), exec);
        d_cur = std::move(d_x);
    }
    return d_cur;
}

}  // namespace

ModelGrads backward(const DenseModel& model, const ForwardCache& cache,
                    const Matrix* X_feat, const Matrix* X_img,
                    const std::vector<double>& y, double l2, kernels::Exec exec) {
    if (cache.mode != Mode::Train)
        throw ContractError("backward: cache must come from a train-mode forward");
    size_t m = cache.batch;
    if (m == 0 || y.size() != m)
        throw ContractError("backward: label count does not match cached batch");

    ParamLayout layout = ParamLayout::of(model);
    ModelGrads grads;
    grads.flat.assign(layout.total, 0.0);

    const std::vector<LayerCache>* out_caches = nullptr;
    switch (model.topology) {
        case Topology::F: out_caches = &cache.segments[0]; break;
        case Topology::I: out_caches = &cache.segments[1]; break;
        case Topology::FI: out_caches = &cache.segments[2]; break;
    }
    if (out_caches->empty()) throw ContractError("backward: empty cache");
    const Matrix& y_hat = out_caches->back().out;
    if (y_hat.rows() != m || y_hat.cols() != 1)
        throw ContractError("backward: stale cache");

    Matrix d_out(m, 1);
    for (size_t i = 0; i < m; ++i)
        d_out(i, 0) = 2.0 * (y_hat(i, 0) - y[i]) / static_cast<double>(m);

    switch (model.topology) {
        case Topology::F:
            if (!X_feat || X_feat->rows() != m)
                throw ContractError("backward: feature input mismatch");
            stack_backward(model.feature_branch, cache.segments[0], *X_feat,
                           std::move(d_out), layout, 0, grads.flat, l2, true, exec);
            break;
        case Topology::I:
            if (!X_img || X_img->rows() != m)
                throw ContractError("backward: image input mismatch");
            stack_backward(model.image_branch, cache.segments[1], *X_img,
                           std::move(d_out), layout, 1, grads.flat, l2, true, exec);
            break;
        case Topology::FI: {
            if (!X_feat || !X_img || X_feat->rows() != m || X_img->rows() != m)
                throw ContractError("backward: input mismatch");
            Matrix d_concat = stack_backward(model.head, cache.segments[2], cache.concat,
                                             std::move(d_out), layout, 2, grads.flat, l2,
                                             false, exec);
            size_t f = model.feature_branch.back().out_dim();
            size_t g = model.image_branch.back().out_dim();
            Matrix d_feat(m, f), d_img(m, g);
            for (size_t i = 0; i < m; ++i) {
                std::memcpy(d_feat.row(i), d_concat.row(i), f * sizeof(double));
                std::memcpy(d_img.row(i), d_concat.row(i) + f, g * sizeof(double));
            }
            stack_backward(model.feature_branch, cache.segments[0], *X_feat,
                           std::move(d_feat), layout, 0, grads.flat, l2, true, exec);
            stack_backward(model.image_branch, cache.segments[1], *X_img,
                           std::move(d_img), layout, 1, grads.flat, l2, true, exec);
            break;
        }
    }
    return grads;
}

namespace {
constexpr char kMagic[4] = {'G', 'V', 'N', 'N'};
constexpr uint16_t kVersion = 1;
}  // namespace

void DenseModel::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("model: cannot write " + path);
    binio::write_magic(out, kMagic);
    binio::write_le<uint16_t>(out, kVersion);
    binio::write_le<uint8_t>(out, static_cast<uint8_t>(topology));
    binio::write_le<uint32_t>(out, static_cast<uint32_t>(dims.feature_in));
    binio::write_le<uint32_t>(out, static_cast<uint32_t>(dims.image_in));
    const std::vector<LayerSpec>* specs[3] = {&dims.feature_layers, &dims.image_layers,
                                              &dims.head_layers};
    for (const auto* stack : specs) {
        binio::write_le<uint32_t>(out, static_cast<uint32_t>(stack->size()));
        for (const auto& l : *stack) {
            binio::write_le<uint32_t>(out, static_cast<uint32_t>(l.width));
            binio::write_le<uint8_t>(out, static_cast<uint8_t>(l.act));
            binio::write_f64(out, l.dropout);
        }
    }
    std::vector<double> flat;
    copy_params_to(*this, flat);
    binio::write_f64_array(out, flat.data(), flat.size());
    binio::write_le<uint64_t>(out, train_steps);
}

DenseModel DenseModel::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("model: cannot open " + path);
    binio::expect_magic(in, kMagic, "model");
    uint16_t version = binio::read_le<uint16_t>(in);
    if (version != kVersion)
        throw FormatError("model: unsupported version " + std::to_string(version));
    auto topo = static_cast<Topology>(binio::read_le<uint8_t>(in));
    ModelDims dims;
    dims.feature_in = binio::read_le<uint32_t>(in);
    dims.image_in = binio::read_le<uint32_t>(in);
    std::vector<LayerSpec>* specs[3] = {&dims.feature_layers, &dims.image_layers,
                                        &dims.head_layers};
    for (auto* stack : specs) {
        uint32_t count = binio::read_le<uint32_t>(in);
        for (uint32_t i = 0; i < count; ++i) {
            LayerSpec spec;
            spec.width = binio::read_le<uint32_t>(in);
            spec.act = static_cast<Activation>(binio::read_le<uint8_t>(in));
            spec.dropout = binio::read_f64(in);
            stack->push_back(spec);
        }
    }
    DenseModel model = build_model(topo, dims, 0);
    std::vector<double> flat(model.param_count());
    binio::read_f64_array(in, flat.data(), flat.size());
    copy_params_from(model, flat);
    model.train_steps = binio::read_le<uint64_t>(in);
    return model;
}

}  // namespace gv::neural
