#include "gv/extratrees/forest.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "gv/core/binio.hpp"
#include "gv/core/error.hpp"
#include "gv/core/rng.hpp"

namespace gv::extratrees {

double Tree::predict(const double* x) const {
    int32_t at = 0;
    while (!nodes[at].is_leaf)
        at = x[nodes[at].feature] < nodes[at].threshold ? nodes[at].left : nodes[at].right;
    return nodes[at].value;
}

namespace {

struct Builder {
    const Matrix& X;
    const std::vector<double>& y;
    const ForestParams& params;
    size_t k;
    SplitMix64 rng;
    Tree tree;
    std::vector<uint32_t> idx;
    std::vector<uint32_t> scratch;
    size_t tree_index;
    std::vector<SplitAudit>* audit;

    Builder(const Matrix& X_, const std::vector<double>& y_, const ForestParams& p,
            size_t k_, size_t tree_idx, std::vector<SplitAudit>* audit_)
        : X(X_), y(y_), params(p), k(k_),
          rng(mix_seed(p.seed, 0xe7ull, tree_idx)), tree_index(tree_idx), audit(audit_) {
        idx.resize(X.rows());
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<uint32_t>(i);
        scratch.resize(idx.size());
    }

    struct WorkItem {
        int32_t node;
        size_t lo, hi;
        int depth;
    };

    // Mean and sum of squared deviations over idx[lo,hi), in index order.
    void node_stats(size_t lo, size_t hi, double& mean, double& sse) const {
        double sum = 0.0;
        for (size_t i = lo; i < hi; ++i) sum += y[idx[i]];
        mean = sum / static_cast<double>(hi - lo);
        double acc = 0.0;
        for (size_t i = lo; i < hi; ++i) {
            double d = y[idx[i]] - mean;
            acc += d * d;
        }
        sse = acc;
    }

    void build() {
        tree.nodes.clear();
        tree.nodes.emplace_back();
        std::vector<WorkItem> stack;
        stack.push_back({0, 0, idx.size(), 0});

        std::vector<uint32_t> varying;
        std::vector<double> fmin(X.cols()), fmax(X.cols());

        while (!stack.empty()) {
            WorkItem item = stack.back();
            stack.pop_back();
            size_t count = item.hi - item.lo;

            double mean, sse;
            node_stats(item.lo, item.hi, mean, sse);

            TreeNode& node = tree.nodes[item.node];
            node.count = static_cast<uint32_t>(count);
            node.value = mean;

            bool can_split = count >= params.min_samples_split && count >= 2 && sse > 0.0 &&
                             (params.max_depth < 0 || item.depth < params.max_depth);
            if (!can_split) continue;

            // Features that still vary inside this node.
            varying.clear();
            for (size_t f = 0; f < X.cols(); ++f) {
                double lo_v = std::numeric_limits<double>::infinity();
                double hi_v = -lo_v;
                for (size_t i = item.lo; i < item.hi; ++i) {
                    double v = X(idx[i], f);
                    lo_v = std::min(lo_v, v);
                    hi_v = std::max(hi_v, v);
                }
                fmin[f] = lo_v;
                fmax[f] = hi_v;
                if (lo_v < hi_v) varying.push_back(static_cast<uint32_t>(f));
            }
            if (varying.empty()) continue;  // all feature values identical: leaf

            // Draw up to k candidate features without replacement.
            size_t draw = std::min(k, varying.size());
            for (size_t i = 0; i < draw; ++i) {
                size_t j = i + static_cast<size_t>(rng.below(varying.size() - i));
                std::swap(varying[i], varying[j]);
            }

            double best_score = -1.0;
            uint32_t best_feature = 0;
            double best_cut = 0.0;
            SplitAudit audit_entry;
            for (size_t c = 0; c < draw; ++c) {
                uint32_t f = varying[c];
                // Cut point uniform in (min, max]; both sides stay non-empty
                // under the x < cut rule.
                double u = rng.uniform_open0();
                double cut = fmin[f] + u * (fmax[f] - fmin[f]);
                double sum_l = 0.0, sq_l = 0.0;
                size_t n_l = 0;
                for (size_t i = item.lo; i < item.hi; ++i) {
                    double d = y[idx[i]] - mean;  // centered for stability
                    if (X(idx[i], f) < cut) {
                        sum_l += d;
                        sq_l += d * d;
                        ++n_l;
                    }
                }
                size_t n_r = count - n_l;
                double sum_r = -sum_l;  // centered sums over the node add to 0
                double sq_r = sse - sq_l;
                double sse_l = sq_l - sum_l * sum_l / static_cast<double>(n_l);
                double sse_r = sq_r - sum_r * sum_r / static_cast<double>(n_r);
                double score = (sse - sse_l - sse_r) / static_cast<double>(count);
                if (audit) audit_entry.candidate_scores.push_back(score);
                bool better = score > best_score ||
                              (score == best_score &&
                               (f < best_feature || (f == best_feature && cut < best_cut)));
                if (best_score < 0.0 || better) {
                    best_score = score;
                    best_feature = f;
                    best_cut = cut;
                }
            }

            if (audit) {
                audit_entry.tree = tree_index;
                audit_entry.chosen_feature = best_feature;
                audit_entry.chosen_threshold = best_cut;
                audit_entry.chosen_score = best_score;
                audit->push_back(std::move(audit_entry));
            }

            // Stable partition: left rows keep their order, then right rows.
            size_t mid = item.lo;
            size_t spill = 0;
            for (size_t i = item.lo; i < item.hi; ++i) {
                if (X(idx[i], best_feature) < best_cut)
                    idx[mid++] = idx[i];
                else
                    scratch[spill++] = idx[i];
            }
            for (size_t i = 0; i < spill; ++i) idx[mid + i] = scratch[i];

            int32_t left = static_cast<int32_t>(tree.nodes.size());
            tree.nodes.emplace_back();
            int32_t right = static_cast<int32_t>(tree.nodes.size());
            tree.nodes.emplace_back();
            TreeNode& parent = tree.nodes[item.node];
            parent.is_leaf = false;
            parent.feature = best_feature;
            parent.threshold = best_cut;
            parent.left = left;
            parent.right = right;
            stack.push_back({right, mid, item.hi, item.depth + 1});
            stack.push_back({left, item.lo, mid, item.depth + 1});
        }
    }
};

}  // namespace

Forest Forest::fit(const Matrix& X, const std::vector<double>& y,
                   const ForestParams& params, kernels::Exec exec,
                   std::vector<SplitAudit>* audit) {
    if (X.rows() == 0) throw ContractError("extratrees: empty training data");
    if (X.rows() != y.size()) throw ContractError("extratrees: X/y row mismatch");
    if (params.n_trees == 0) throw ContractError("extratrees: n_trees must be >= 1");
    size_t d = X.cols();
    size_t k = params.k_features == 0 ? d : params.k_features;
    if (k < 1 || k > d)
        throw ContractError("extratrees: k_features must be in [1, d]");
    for (double v : X.storage())
        if (!std::isfinite(v)) throw ContractError("extratrees: non-finite feature");
    for (double v : y)
        if (!std::isfinite(v)) throw ContractError("extratrees: non-finite target");

    Forest forest;
    forest.dim_ = d;
    forest.trees_.resize(params.n_trees);

    if (audit || exec == kernels::Exec::Serial) {
        for (size_t t = 0; t < params.n_trees; ++t) {
            Builder b(X, y, params, k, t, audit);
            b.build();
            forest.trees_[t] = std::move(b.tree);
        }
    } else {
        // Per-tree seeds are derived from (seed, tree index), so the result
        // is identical to the serial loop regardless of thread count.
#pragma omp parallel for schedule(dynamic)
        for (size_t t = 0; t < params.n_trees; ++t) {
            Builder b(X, y, params, k, t, nullptr);
            b.build();
            forest.trees_[t] = std::move(b.tree);
        }
    }
    return forest;
}

double Forest::predict(const double* x, size_t dim) const {
    if (dim != dim_) throw ContractError("extratrees: feature dimension mismatch");
    double acc = 0.0;
    for (const Tree& t : trees_) acc += t.predict(x);
    return acc / static_cast<double>(trees_.size());
}

std::vector<double> Forest::predict(const Matrix& X, kernels::Exec exec) const {
    if (X.cols() != dim_) throw ContractError("extratrees: feature dimension mismatch");
    std::vector<double> out(X.rows());
    if (exec == kernels::Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (size_t i = 0; i < X.rows(); ++i) out[i] = predict(X.row(i), dim_);
    } else {
        for (size_t i = 0; i < X.rows(); ++i) out[i] = predict(X.row(i), dim_);
    }
    return out;
}

namespace {
constexpr char kMagic[4] = {'G', 'V', 'E', 'T'};
constexpr uint16_t kVersion = 1;

void write_preorder(std::ostream& out, const Tree& tree) {
    std::vector<int32_t> stack{0};
    size_t emitted = 0;
    while (!stack.empty()) {
        int32_t at = stack.back();
        stack.pop_back();
        const TreeNode& n = tree.nodes[at];
        binio::write_le<uint8_t>(out, n.is_leaf ? 1 : 0);
        if (n.is_leaf) {
            binio::write_f64(out, n.value);
            binio::write_le<uint32_t>(out, n.count);
        } else {
            binio::write_le<uint32_t>(out, n.feature);
            binio::write_f64(out, n.threshold);
            stack.push_back(n.right);
            stack.push_back(n.left);
        }
        ++emitted;
    }
    (void)emitted;
}

Tree read_preorder(std::istream& in, uint32_t count) {
    Tree tree;
    tree.nodes.reserve(count);
    // Stack of parent nodes waiting for a child; top bit marks "left next".
    std::vector<std::pair<int32_t, bool>> pending;
    for (uint32_t i = 0; i < count; ++i) {
        TreeNode n;
        n.is_leaf = binio::read_le<uint8_t>(in) != 0;
        if (n.is_leaf) {
            n.value = binio::read_f64(in);
            n.count = binio::read_le<uint32_t>(in);
        } else {
            n.feature = binio::read_le<uint32_t>(in);
            n.threshold = binio::read_f64(in);
        }
        int32_t at = static_cast<int32_t>(tree.nodes.size());
        tree.nodes.push_back(n);
        if (!pending.empty()) {
            auto& [parent, left_next] = pending.back();
            if (left_next) {
                tree.nodes[parent].left = at;
                left_next = false;
            } else {
                tree.nodes[parent].right = at;
                pending.pop_back();
            }
        }
        if (!n.is_leaf) pending.emplace_back(at, true);
    }
    if (!pending.empty()) throw FormatError("forest: truncated tree encoding");
    return tree;
}

}  // namespace

void Forest::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("forest: cannot write " + path);
    binio::write_magic(out, kMagic);
    binio::write_le<uint16_t>(out, kVersion);
    binio::write_le<uint32_t>(out, static_cast<uint32_t>(dim_));
    binio::write_le<uint32_t>(out, static_cast<uint32_t>(trees_.size()));
    for (const Tree& t : trees_) {
        binio::write_le<uint32_t>(out, static_cast<uint32_t>(t.nodes.size()));
        write_preorder(out, t);
    }
}

Forest Forest::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("forest: cannot open " + path);
    binio::expect_magic(in, kMagic, "forest");
    uint16_t version = binio::read_le<uint16_t>(in);
    if (version != kVersion)
        throw FormatError("forest: unsupported version " + std::to_string(version));
    Forest forest;
    forest.dim_ = binio::read_le<uint32_t>(in);
    uint32_t n_trees = binio::read_le<uint32_t>(in);
    forest.trees_.reserve(n_trees);
    for (uint32_t t = 0; t < n_trees; ++t) {
        uint32_t count = binio::read_le<uint32_t>(in);
        forest.trees_.push_back(read_preorder(in, count));
    }
    return forest;
}

}  // namespace gv::extratrees
