#pragma once

#include <cstddef>
#include <vector>

#include "gv/core/error.hpp"

namespace gv {

/// Dense row-major matrix of doubles. Deliberately minimal: the numeric
/// heavy lifting lives in gv/core/kernels.hpp.
class Matrix {
public:
    Matrix() = default;
    Matrix(size_t rows, size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& operator()(size_t i, size_t j) { return data_[i * cols_ + j]; }
    double operator()(size_t i, size_t j) const { return data_[i * cols_ + j]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    double* row(size_t i) { return data_.data() + i * cols_; }
    const double* row(size_t i) const { return data_.data() + i * cols_; }

    std::vector<double>& storage() { return data_; }
    const std::vector<double>& storage() const { return data_; }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    /// Copies the given rows (in order) into a new matrix.
    Matrix gather_rows(const size_t* idx, size_t n) const {
        Matrix out(n, cols_);
        for (size_t i = 0; i < n; ++i) {
            const double* src = row(idx[i]);
            double* dst = out.row(i);
            for (size_t j = 0; j < cols_; ++j) dst[j] = src[j];
        }
        return out;
    }

private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    std::vector<double> data_;
};

inline void require_shape(const Matrix& m, size_t rows, size_t cols, const char* what) {
    if (m.rows() != rows || m.cols() != cols)
        throw ContractError(std::string(what) + ": shape mismatch");
}

}  // namespace gv
