#include "gv/tabular/split.hpp"

#include <cmath>

#include "gv/core/error.hpp"
#include "gv/core/rng.hpp"

namespace gv::tabular {

namespace {

// ceil(n*f) with a snap to the nearest integer when n*f is within
// floating-point noise of it (0.9*100 must give 90, not 91).
size_t ceil_size(size_t n, double f) {
    double x = static_cast<double>(n) * f;
    double r = std::round(x);
    if (std::abs(x - r) < 1e-6 * std::max(1.0, r)) return static_cast<size_t>(r);
    return static_cast<size_t>(std::ceil(x));
}

}  // namespace

std::array<size_t, 3> split_sizes(size_t n, const SplitFractions& f) {
    double total = f.train + f.val + f.test;
    if (std::abs(total - 1.0) > 1e-9)
        throw ContractError("split: fractions must sum to 1");
    size_t n_val = ceil_size(n, f.val);
    size_t n_test = ceil_size(n, f.test);
    if (n_val + n_test >= n)
        throw ContractError("split: train partition would be empty");
    size_t n_train = n - n_val - n_test;
    if (n_train == 0 || n_val == 0 || n_test == 0)
        throw ContractError("split: a partition would be empty");
    return {n_train, n_val, n_test};
}

std::array<std::vector<size_t>, 3> split_indices(size_t n, uint64_t seed,
                                                 const SplitFractions& f) {
    auto sizes = split_sizes(n, f);
    SplitMix64 rng(mix_seed(seed, 0x5eedull));
    std::vector<size_t> idx = shuffled_indices(n, rng);
    std::array<std::vector<size_t>, 3> out;
    size_t at = 0;
    for (size_t p = 0; p < 3; ++p) {
        out[p].assign(idx.begin() + at, idx.begin() + at + sizes[p]);
        at += sizes[p];
    }
    return out;
}

SplitResult split(const FeatureMatrix& fm, uint64_t seed, const SplitFractions& f) {
    auto parts = split_indices(fm.size(), seed, f);
    return SplitResult{fm.gather(parts[0]), fm.gather(parts[1]), fm.gather(parts[2])};
}

}  // namespace gv::tabular
