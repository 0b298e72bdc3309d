#pragma once

#include <iosfwd>
#include <string>

#include "gv/tabular/table.hpp"

namespace gv::tabular {

struct CsvOptions {
    char delimiter = ',';
};

/// Parses delimiter-separated text with a header row. Quoted fields may
/// contain the delimiter, doubled quotes and newlines. Empty unquoted
/// fields become missing cells. A row whose cell count differs from the
/// header raises DataError naming the row index (0 = first data row).
RawTable load_csv(const std::string& path, const CsvOptions& opts = {});
RawTable parse_csv(std::istream& in, const CsvOptions& opts = {});

}  // namespace gv::tabular
