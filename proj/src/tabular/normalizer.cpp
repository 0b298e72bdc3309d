#include "gv/tabular/normalizer.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"

#include "gv/core/error.hpp"

namespace gv::tabular {

Normalizer Normalizer::fit(const Matrix& X, kernels::Exec exec) {
    if (X.rows() == 0 || X.cols() == 0)
        throw ContractError("normalizer: cannot fit on an empty matrix");
    Normalizer n;
    n.mean_.resize(X.cols());
    n.std_.resize(X.cols());
    n.constant_.resize(X.cols());
    kernels::column_mean_std(X.data(), X.rows(), X.cols(), n.mean_.data(),
                             n.std_.data(), exec);
    for (size_t j = 0; j < X.cols(); ++j)
        n.constant_[j] = n.std_[j] == 0.0 ? 1 : 0;
    return n;
}

Matrix Normalizer::apply(const Matrix& X) const {
    if (X.cols() != dim())
        throw ContractError("normalizer: dimension mismatch");
    Matrix out(X.rows(), X.cols());
    for (size_t i = 0; i < X.rows(); ++i) {
        const double* src = X.row(i);
        double* dst = out.row(i);
        for (size_t j = 0; j < X.cols(); ++j)
            dst[j] = constant_[j] ? 0.0 : (src[j] - mean_[j]) / std_[j];
    }
    return out;
}

Matrix Normalizer::invert(const Matrix& Z) const {
    if (Z.cols() != dim())
        throw ContractError("normalizer: dimension mismatch");
    Matrix out(Z.rows(), Z.cols());
    for (size_t i = 0; i < Z.rows(); ++i) {
        const double* src = Z.row(i);
        double* dst = out.row(i);
        for (size_t j = 0; j < Z.cols(); ++j)
            dst[j] = constant_[j] ? mean_[j] : src[j] * std_[j] + mean_[j];
    }
    return out;
}

std::vector<double> Normalizer::apply(const std::vector<double>& y) const {
    if (dim() != 1) throw ContractError("normalizer: vector form requires dim 1");
    std::vector<double> out(y.size());
    for (size_t i = 0; i < y.size(); ++i)
        out[i] = constant_[0] ? 0.0 : (y[i] - mean_[0]) / std_[0];
    return out;
}

std::vector<double> Normalizer::invert(const std::vector<double>& z) const {
    if (dim() != 1) throw ContractError("normalizer: vector form requires dim 1");
    std::vector<double> out(z.size());
    for (size_t i = 0; i < z.size(); ++i)
        out[i] = constant_[0] ? mean_[0] : z[i] * std_[0] + mean_[0];
    return out;
}

void Normalizer::save_json(const std::string& path) const {
    nlohmann::json j;
    j["mean"] = mean_;
    j["std"] = std_;
    j["constant"] = constant_;
    std::ofstream out(path);
    if (!out) throw DataError("normalizer: cannot write " + path);
    out << j.dump(2) << "\n";
}

Normalizer Normalizer::load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("normalizer: cannot open " + path);
    nlohmann::json j;
    in >> j;
    Normalizer n;
    n.mean_ = j.at("mean").get<std::vector<double>>();
    n.std_ = j.at("std").get<std::vector<double>>();
    n.constant_ = j.at("constant").get<std::vector<uint8_t>>();
    if (n.mean_.size() != n.std_.size() || n.mean_.size() != n.constant_.size())
        throw FormatError("normalizer: inconsistent arrays in " + path);
    return n;
}

}  // namespace gv::tabular
