#pragma once

#include <string>
#include <vector>

#include "gv/core/matrix.hpp"

namespace gv::tabular {

/// Fully numeric dataset: one row per property, 40 feature columns for the
/// paper schema, normalized label, and WGS84 coordinates for the tile join.
///
/// Binary format (GVFM, little-endian):
///   "GVFM"  u16 version(=1)  u64 n  u64 d
///   n ids          (u32 length + UTF-8 bytes)
///   n*d f64        X, row-major
///   n   f64        y
///   n   f64        lat
///   n   f64        lon
struct FeatureMatrix {
    std::vector<std::string> ids;
    Matrix X;
    std::vector<double> y;
    std::vector<double> lat;
    std::vector<double> lon;

    size_t size() const { return ids.size(); }

    /// Checks the structural invariants: aligned lengths, unique ids,
    /// finite values, coordinates in range.
    void validate() const;

    FeatureMatrix gather(const std::vector<size_t>& idx) const;

    void save(const std::string& path) const;
    static FeatureMatrix load(const std::string& path);
};

}  // namespace gv::tabular
