#include "gv/tabular/schema.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

namespace gv::tabular {

const char* to_string(ColumnKind k) {
    switch (k) {
        case ColumnKind::Identifier: return "identifier";
        case ColumnKind::Redundant: return "redundant";
        case ColumnKind::Categorical: return "categorical";
        case ColumnKind::Numeric: return "numeric";
        case ColumnKind::LabelTotalLand: return "label_total_land";
        case ColumnKind::LabelPersonal: return "label_personal";
        case ColumnKind::LabelTotal: return "label_total";
        case ColumnKind::Latitude: return "latitude";
        case ColumnKind::Longitude: return "longitude";
    }
    return "?";
}

ColumnKind column_kind_from_string(const std::string& s) {
    if (s == "identifier") return ColumnKind::Identifier;
    if (s == "redundant") return ColumnKind::Redundant;
    if (s == "categorical") return ColumnKind::Categorical;
    if (s == "numeric") return ColumnKind::Numeric;
    if (s == "label_total_land") return ColumnKind::LabelTotalLand;
    if (s == "label_personal") return ColumnKind::LabelPersonal;
    if (s == "label_total") return ColumnKind::LabelTotal;
    if (s == "latitude") return ColumnKind::Latitude;
    if (s == "longitude") return ColumnKind::Longitude;
    throw DataError("schema: unknown column kind: " + s);
}

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

Schema parse_schema(std::istream& in) {
    Schema schema;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        size_t eq = t.rfind('=');
        if (eq == std::string::npos)
            throw DataError("schema: line " + std::to_string(lineno) +
                            ": expected `name = kind[, drop|keep]`");
        ColumnSchema col;
        col.name = trim(t.substr(0, eq));
        std::string rhs = trim(t.substr(eq + 1));
        std::string kind_str = rhs, flag;
        size_t comma = rhs.find(',');
        if (comma != std::string::npos) {
            kind_str = trim(rhs.substr(0, comma));
            flag = trim(rhs.substr(comma + 1));
        }
        col.kind = column_kind_from_string(kind_str);
        col.drop = (col.kind == ColumnKind::Identifier || col.kind == ColumnKind::Redundant);
        if (flag == "drop")
            col.drop = true;
        else if (flag == "keep")
            col.drop = false;
        else if (!flag.empty())
            throw DataError("schema: line " + std::to_string(lineno) +
                            ": expected drop or keep, got: " + flag);
        if (col.name.empty())
            throw DataError("schema: line " + std::to_string(lineno) + ": empty column name");
        schema.push_back(std::move(col));
    }
    validate_schema(schema);
    return schema;
}

Schema load_schema(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("schema: cannot open " + path);
    return parse_schema(in);
}

void validate_schema(const Schema& schema) {
    std::unordered_set<std::string> names;
    size_t personal = 0;
    for (const auto& col : schema) {
        if (!names.insert(col.name).second)
            throw DataError("schema: duplicate column: " + col.name);
        if (col.kind == ColumnKind::LabelPersonal) ++personal;
    }
    if (personal != 1)
        throw DataError("schema: expected exactly one label_personal column, found " +
                        std::to_string(personal));
}

SchemaSummary summarize_schema(const Schema& schema) {
    SchemaSummary s;
    for (const auto& col : schema) {
        if (col.drop) {
            ++s.dropped;
            continue;
        }
        if (is_label(col.kind)) {
            ++s.labels;
        } else if (is_geo(col.kind)) {
            ++s.geo;
        } else {
            ++s.feature_columns;
            if (col.kind == ColumnKind::Categorical) ++s.categorical_kept;
        }
    }
    return s;
}

const ColumnSchema* find_column(const Schema& schema, const std::string& name) {
    for (const auto& col : schema)
        if (col.name == name) return &col;
    return nullptr;
}

}  // namespace gv::tabular
