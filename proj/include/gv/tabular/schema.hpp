#pragma once

#include <string>
#include <vector>

#include "gv/core/error.hpp"

namespace gv::tabular {

enum class ColumnKind {
    Identifier,
    Redundant,
    Categorical,
    Numeric,
    LabelTotalLand,
    LabelPersonal,
    LabelTotal,
    Latitude,
    Longitude,
};

const char* to_string(ColumnKind k);
ColumnKind column_kind_from_string(const std::string& s);

struct ColumnSchema {
    std::string name;
    ColumnKind kind = ColumnKind::Numeric;
    bool drop = false;
};

using Schema = std::vector<ColumnSchema>;

/// Loads a schema config: one `name = kind[, drop|keep]` entry per line,
/// `#` comments. Identifier and redundant columns default to drop.
Schema load_schema(const std::string& path);
Schema parse_schema(std::istream& in);

/// Validates structural invariants: exactly one label_personal column and
/// unique names. Throws DataError on violation.
void validate_schema(const Schema& schema);

struct SchemaSummary {
    size_t categorical_kept = 0;   // categorical columns with drop=false
    size_t feature_columns = 0;    // drop=false, non-label, non-geo
    size_t dropped = 0;
    size_t labels = 0;
    size_t geo = 0;
};
SchemaSummary summarize_schema(const Schema& schema);

const ColumnSchema* find_column(const Schema& schema, const std::string& name);

inline bool is_label(ColumnKind k) {
    return k == ColumnKind::LabelTotalLand || k == ColumnKind::LabelPersonal ||
           k == ColumnKind::LabelTotal;
}
inline bool is_geo(ColumnKind k) {
    return k == ColumnKind::Latitude || k == ColumnKind::Longitude;
}

}  // namespace gv::tabular
