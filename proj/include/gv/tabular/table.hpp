#pragma once

#include <string>
#include <vector>

#include "gv/core/error.hpp"

namespace gv::tabular {

/// One cell of a raw table: text payload plus a missing flag. An empty
/// unquoted CSV field is missing; a quoted empty field is present-but-empty.
struct Cell {
    std::string text;
    bool missing = false;

    static Cell absent() { return Cell{"", true}; }
    static Cell of(std::string t) { return Cell{std::move(t), false}; }

    bool operator==(const Cell&) const = default;
};

using Row = std::vector<Cell>;

/// Header plus rows, all cells kept as text. Invariants: unique column
/// names, every row as wide as the header.
struct RawTable {
    std::vector<std::string> column_names;
    std::vector<Row> rows;

    size_t row_count() const { return rows.size(); }
    size_t col_count() const { return column_names.size(); }

    /// Index of a column by name; throws if absent.
    size_t column_index(const std::string& name) const {
        for (size_t i = 0; i < column_names.size(); ++i)
            if (column_names[i] == name) return i;
        throw DataError("table: no such column: " + name);
    }

    bool has_column(const std::string& name) const {
        for (const auto& c : column_names)
            if (c == name) return true;
        return false;
    }

    void validate() const {
        for (size_t i = 0; i < column_names.size(); ++i)
            for (size_t j = i + 1; j < column_names.size(); ++j)
                if (column_names[i] == column_names[j])
                    throw DataError("table: duplicate column name: " + column_names[i]);
        for (size_t r = 0; r < rows.size(); ++r)
            if (rows[r].size() != column_names.size())
                throw DataError("table: ragged row at index " + std::to_string(r));
    }
};

}  // namespace gv::tabular
