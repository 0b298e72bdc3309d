#pragma once

#include <string>
#include <vector>

#include "gv/core/kernels.hpp"
#include "gv/core/matrix.hpp"

namespace gv::tabular {

/// Per-column zero-mean / unit-standard-deviation transform. Uses the
/// population standard deviation; columns with std == 0 are flagged
/// constant and map to all-zeros (and invert back to their mean).
class Normalizer {
public:
    Normalizer() = default;

    static Normalizer fit(const Matrix& X,
                          kernels::Exec exec = kernels::default_exec());

    Matrix apply(const Matrix& X) const;
    Matrix invert(const Matrix& Z) const;

    /// Single-column convenience for label vectors.
    std::vector<double> apply(const std::vector<double>& y) const;
    std::vector<double> invert(const std::vector<double>& z) const;

    size_t dim() const { return mean_.size(); }
    double mean(size_t j) const { return mean_[j]; }
    double std(size_t j) const { return std_[j]; }
    bool constant(size_t j) const { return constant_[j] != 0; }

    void save_json(const std::string& path) const;
    static Normalizer load_json(const std::string& path);

    bool operator==(const Normalizer&) const = default;

private:
    std::vector<double> mean_;
    std::vector<double> std_;
    std::vector<uint8_t> constant_;
};

}  // namespace gv::tabular
