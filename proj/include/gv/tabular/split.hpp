#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "gv/tabular/feature_matrix.hpp"

namespace gv::tabular {

struct SplitFractions {
    double train = 0.90;
    double val = 0.05;
    double test = 0.05;
};

/// Partition sizes for n rows: val and test take ceil(n*fraction) (with a
/// snap-to-integer guard against floating-point noise), train takes the
/// remainder. 100 rows at 90/5/5 give 90/5/5; 53,944 rows give
/// 48,548/2,698/2,698. Throws if any partition would be empty.
std::array<size_t, 3> split_sizes(size_t n, const SplitFractions& f);

/// Seeded uniform shuffle followed by contiguous partition (train, val,
/// test). Deterministic in (n, seed); partitions are disjoint and exhaust
/// the input.
std::array<std::vector<size_t>, 3> split_indices(size_t n, uint64_t seed,
                                                 const SplitFractions& f);

struct SplitResult {
    FeatureMatrix train;
    FeatureMatrix val;
    FeatureMatrix test;
};

SplitResult split(const FeatureMatrix& fm, uint64_t seed, const SplitFractions& f);

}  // namespace gv::tabular
