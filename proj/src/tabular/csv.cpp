#include "gv/tabular/csv.hpp"

#include <fstream>
#include <sstream>

namespace gv::tabular {

namespace {

// One record, honoring quotes. Returns false at end of input.
bool read_record(std::istream& in, char delim, std::vector<Cell>& out) {
    out.clear();
    int c = in.get();
    if (c == EOF) return false;

    std::string field;
    bool quoted = false;      // currently inside quotes
    bool was_quoted = false;  // field contained a quoted section
    bool any = false;

    auto push_field = [&]() {
        if (field.empty() && !was_quoted)
            out.push_back(Cell::absent());
        else
            out.push_back(Cell::of(field));
        field.clear();
        was_quoted = false;
    };

    while (true) {
        if (c == EOF) {
            if (any || !field.empty() || was_quoted || !out.empty()) push_field();
            return !out.empty();
        }
        char ch = static_cast<char>(c);
        if (quoted) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    field.push_back('"');
                    in.get();
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(ch);
            }
        } else if (ch == '"') {
            quoted = true;
            was_quoted = true;
        } else if (ch == delim) {
            push_field();
            any = true;
        } else if (ch == '\n') {
            push_field();
            return true;
        } else if (ch == '\r') {
            if (in.peek() == '\n') in.get();
            push_field();
            return true;
        } else {
            field.push_back(ch);
        }
        c = in.get();
    }
}

}  // namespace

RawTable parse_csv(std::istream& in, const CsvOptions& opts) {
    RawTable table;
    std::vector<Cell> record;
    if (!read_record(in, opts.delimiter, record))
        throw DataError("csv: empty input, header row required");
    table.column_names.reserve(record.size());
    for (auto& cell : record) table.column_names.push_back(cell.text);
    table.validate();  // catches duplicate header names

    size_t row_index = 0;
    while (read_record(in, opts.delimiter, record)) {
        // blank line in a multi-column file
        if (table.column_names.size() > 1 && record.size() == 1 && record[0].missing)
            continue;
        if (record.size() != table.column_names.size())
            throw DataError("csv: ragged row at index " + std::to_string(row_index) +
                            " (got " + std::to_string(record.size()) + " cells, expected " +
                            std::to_string(table.column_names.size()) + ")");
        table.rows.push_back(std::move(record));
        record.clear();
        ++row_index;
    }
    return table;
}

RawTable load_csv(const std::string& path, const CsvOptions& opts) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("csv: cannot open " + path);
    return parse_csv(in, opts);
}

}  // namespace gv::tabular
