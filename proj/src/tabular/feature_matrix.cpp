#include "gv/tabular/feature_matrix.hpp"

#include <cmath>
#include <fstream>
#include <unordered_set>

#include "gv/core/binio.hpp"

namespace gv::tabular {

namespace {
constexpr char kMagic[4] = {'G', 'V', 'F', 'M'};
constexpr uint16_t kVersion = 1;
}  // namespace

void FeatureMatrix::validate() const {
    size_t n = ids.size();
    if (X.rows() != n || y.size() != n || lat.size() != n || lon.size() != n)
        throw ContractError("feature matrix: misaligned lengths");
    std::unordered_set<std::string> seen;
    seen.reserve(n);
    for (const auto& id : ids)
        if (!seen.insert(id).second)
            throw ContractError("feature matrix: duplicate id: " + id);
    for (double v : X.storage())
        if (!std::isfinite(v)) throw ContractError("feature matrix: non-finite feature");
    for (double v : y)
        if (!std::isfinite(v)) throw ContractError("feature matrix: non-finite label");
    for (size_t i = 0; i < n; ++i) {
        if (!(lat[i] >= -90.0 && lat[i] <= 90.0))
            throw ContractError("feature matrix: latitude out of range for id " + ids[i]);
        if (!(lon[i] >= -180.0 && lon[i] <= 180.0))
            throw ContractError("feature matrix: longitude out of range for id " + ids[i]);
    }
}

FeatureMatrix FeatureMatrix::gather(const std::vector<size_t>& idx) const {
    FeatureMatrix out;
    out.ids.reserve(idx.size());
    out.y.reserve(idx.size());
    out.lat.reserve(idx.size());
    out.lon.reserve(idx.size());
    out.X = X.gather_rows(idx.data(), idx.size());
    for (size_t i : idx) {
        out.ids.push_back(ids[i]);
        out.y.push_back(y[i]);
        out.lat.push_back(lat[i]);
        out.lon.push_back(lon[i]);
    }
    return out;
}

void FeatureMatrix::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("feature matrix: cannot write " + path);
    binio::write_magic(out, kMagic);
    binio::write_le<uint16_t>(out, kVersion);
    binio::write_le<uint64_t>(out, ids.size());
    binio::write_le<uint64_t>(out, X.cols());
    for (const auto& id : ids) binio::write_string(out, id);
    binio::write_f64_array(out, X.data(), X.size());
    binio::write_f64_array(out, y.data(), y.size());
    binio::write_f64_array(out, lat.data(), lat.size());
    binio::write_f64_array(out, lon.data(), lon.size());
}

FeatureMatrix FeatureMatrix::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("feature matrix: cannot open " + path);
    binio::expect_magic(in, kMagic, "feature matrix");
    uint16_t version = binio::read_le<uint16_t>(in);
    if (version != kVersion)
        throw FormatError("feature matrix: unsupported version " + std::to_string(version));
    uint64_t n = binio::read_le<uint64_t>(in);
    uint64_t d = binio::read_le<uint64_t>(in);
    FeatureMatrix fm;
    fm.ids.reserve(n);
    for (uint64_t i = 0; i < n; ++i) fm.ids.push_back(binio::read_string(in));
    fm.X = Matrix(n, d);
    binio::read_f64_array(in, fm.X.data(), fm.X.size());
    fm.y.resize(n);
    binio::read_f64_array(in, fm.y.data(), n);
    fm.lat.resize(n);
    binio::read_f64_array(in, fm.lat.data(), n);
    fm.lon.resize(n);
    binio::read_f64_array(in, fm.lon.data(), n);
    return fm;
}

}  // namespace gv::tabular
