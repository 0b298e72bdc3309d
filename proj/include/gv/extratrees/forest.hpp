#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gv/core/kernels.hpp"
#include "gv/core/matrix.hpp"

namespace gv::extratrees {

struct ForestParams {
    size_t n_trees = 100;
    size_t k_features = 0;  // candidate features per split; 0 means all d
    size_t min_samples_split = 2;
    int max_depth = -1;  // negative: unlimited
    uint64_t seed = 0;
};

/// Nodes of one tree, root first. Leaves carry the mean target of the
/// training rows that reached them; split nodes send x[feature] < threshold
/// to the left child.
struct TreeNode {
    bool is_leaf = true;
    uint32_t feature = 0;
    double threshold = 0.0;
    int32_t left = -1;
    int32_t right = -1;
    double value = 0.0;
    uint32_t count = 0;
};

struct Tree {
    std::vector<TreeNode> nodes;
    double predict(const double* x) const;
};

/// Per-node diagnostics captured when ForestParams-driven fits run with an
/// audit sink; used by the tests to verify the split selection rule.
struct SplitAudit {
    size_t tree = 0;
    uint32_t chosen_feature = 0;
    double chosen_threshold = 0.0;
    double chosen_score = 0.0;
    std::vector<double> candidate_scores;
};

/// Extremely randomized trees for regression: every tree sees the full
/// sample (no bootstrap); at each node k features are drawn uniformly
/// without replacement from the features that still vary, one uniform cut
/// point is drawn per feature, and the candidate with the best variance
/// reduction wins (ties: lowest feature index, then lowest threshold).
class Forest {
public:
    static Forest fit(const Matrix& X, const std::vector<double>& y,
                      const ForestParams& params,
                      kernels::Exec exec = kernels::default_exec(),
                      std::vector<SplitAudit>* audit = nullptr);

    double predict(const double* x, size_t dim) const;
    std::vector<double> predict(const Matrix& X,
                                kernels::Exec exec = kernels::default_exec()) const;

    size_t dim() const { return dim_; }
    size_t tree_count() const { return trees_.size(); }
    const Tree& tree(size_t i) const { return trees_[i]; }

    void save(const std::string& path) const;
    static Forest load(const std::string& path);

private:
    size_t dim_ = 0;
    std::vector<Tree> trees_;
};

}  // namespace gv::extratrees
