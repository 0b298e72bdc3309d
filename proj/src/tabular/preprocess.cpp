#include "gv/tabular/preprocess.hpp"

#include <cstdlib>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

namespace gv::tabular {

namespace {

bool parse_double(const Cell& cell, double& out) {
    if (cell.missing) return false;
    const std::string& s = cell.text;
    size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return false;
    size_t b = s.find_last_not_of(" \t");
    std::string t = s.substr(a, b - a + 1);
    const char* begin = t.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') return false;
    out = v;
    return true;
}

struct CleanOutput {
    RawTable table;
    std::vector<std::string> ids;  // aligned with table.rows
};

CleanOutput clean_impl(const RawTable& raw, const Schema& schema) {
    // Schema must cover every column present.
    std::vector<const ColumnSchema*> cols(raw.col_count());
    for (size_t c = 0; c < raw.col_count(); ++c) {
        cols[c] = find_column(schema, raw.column_names[c]);
        if (!cols[c])
            throw DataError("clean: column not covered by schema: " + raw.column_names[c]);
    }

    size_t label_col = SIZE_MAX;
    size_t id_col = SIZE_MAX;  // first identifier column, the record key source
    std::vector<size_t> keep_cols;
    for (size_t c = 0; c < raw.col_count(); ++c) {
        if (cols[c]->kind == ColumnKind::LabelPersonal) label_col = c;
        if (cols[c]->kind == ColumnKind::Identifier && id_col == SIZE_MAX) id_col = c;
        if (!cols[c]->drop) keep_cols.push_back(c);
    }
    if (label_col == SIZE_MAX)
        throw DataError("clean: table has no label_personal column");

    CleanOutput out;
    out.table.column_names.reserve(keep_cols.size());
    for (size_t c : keep_cols) out.table.column_names.push_back(raw.column_names[c]);

    for (size_t r = 0; r < raw.rows.size(); ++r) {
        const Row& row = raw.rows[r];
        // Zero, missing or unparseable personal value marks non-residential
        // rows and empty lots; those are removed here.
        double label = 0.0;
        if (!parse_double(row[label_col], label) || label == 0.0) continue;
        Row kept;
        kept.reserve(keep_cols.size());
        for (size_t c : keep_cols) kept.push_back(row[c]);
        out.table.rows.push_back(std::move(kept));
        if (id_col != SIZE_MAX && !row[id_col].missing)
            out.ids.push_back(row[id_col].text);
        else
            out.ids.push_back("r" + std::to_string(r));
    }
    return out;
}

}  // namespace

RawTable clean(const RawTable& raw, const Schema& schema) {
    return clean_impl(raw, schema).table;
}

CategoryMap CategoryMap::fit(const RawTable& table, const Schema& schema,
                             const std::vector<size_t>& rows) {
    CategoryMap map;
    std::vector<size_t> cat_cols;
    for (size_t c = 0; c < table.col_count(); ++c) {
        const ColumnSchema* col = find_column(schema, table.column_names[c]);
        if (col && !col->drop && col->kind == ColumnKind::Categorical) {
            cat_cols.push_back(c);
            map.columns_.push_back(col->name);
        }
    }
    map.codes_.resize(cat_cols.size());
    map.by_first_occurrence_.resize(cat_cols.size());

    auto visit_row = [&](const Row& row) {
        for (size_t s = 0; s < cat_cols.size(); ++s) {
            const Cell& cell = row[cat_cols[s]];
            const std::string& level = cell.missing ? std::string() : cell.text;
            auto [it, inserted] =
                map.codes_[s].emplace(level, static_cast<int>(map.codes_[s].size()));
            if (inserted) map.by_first_occurrence_[s].push_back(level);
            (void)it;
        }
    };
    if (rows.empty()) {
        for (const Row& row : table.rows) visit_row(row);
    } else {
        for (size_t r : rows) visit_row(table.rows.at(r));
    }
    return map;
}

int CategoryMap::code(size_t col_slot, const Cell& cell) const {
    const std::string& level = cell.missing ? std::string() : cell.text;
    const auto& m = codes_.at(col_slot);
    auto it = m.find(level);
    return it == m.end() ? -1 : it->second;
}

void CategoryMap::save_json(const std::string& path) const {
    nlohmann::json j;
    for (size_t s = 0; s < columns_.size(); ++s) {
        nlohmann::json levels = nlohmann::json::array();
        for (const auto& level : by_first_occurrence_[s]) levels.push_back(level);
        j[columns_[s]] = levels;
    }
    std::ofstream out(path);
    if (!out) throw DataError("categories: cannot write " + path);
    out << j.dump(2) << "\n";
}

CategoryMap CategoryMap::load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("categories: cannot open " + path);
    nlohmann::json j;
    in >> j;
    CategoryMap map;
    for (auto& [name, levels] : j.items()) {
        map.columns_.push_back(name);
        map.by_first_occurrence_.emplace_back();
        map.codes_.emplace_back();
        auto& order = map.by_first_occurrence_.back();
        auto& codes = map.codes_.back();
        for (const auto& level : levels) {
            order.push_back(level.get<std::string>());
            codes.emplace(order.back(), static_cast<int>(codes.size()));
        }
    }
    return map;
}

EncodeResult apply_categories(const RawTable& table, const Schema& schema,
                              const CategoryMap& map) {
    // Column slots by name so a map fitted on one table applies to another
    // with the same categorical columns.
    std::unordered_map<std::string, size_t> slot_of;
    for (size_t s = 0; s < map.columns().size(); ++s) slot_of[map.columns()[s]] = s;

    EncodeResult out;
    out.table = table;
    for (size_t c = 0; c < table.col_count(); ++c) {
        const ColumnSchema* col = find_column(schema, table.column_names[c]);
        if (!col || col->drop || col->kind != ColumnKind::Categorical) continue;
        auto it = slot_of.find(col->name);
        if (it == slot_of.end())
            throw DataError("encode: no mapping for categorical column " + col->name);
        size_t slot = it->second;
        for (Row& row : out.table.rows) {
            int code = map.code(slot, row[c]);
            if (code < 0) ++out.unseen_count;
            row[c] = Cell::of(std::to_string(code));
        }
    }
    return out;
}

EncodeResult encode_categoricals(const RawTable& table, const Schema& schema) {
    CategoryMap map = CategoryMap::fit(table, schema);
    return apply_categories(table, schema, map);
}

PreprocessResult preprocess(const RawTable& raw, const Schema& schema,
                            const PreprocessOptions& opts) {
    validate_schema(schema);
    PreprocessResult result;
    result.rows_in = raw.row_count();

    CleanOutput cleaned = clean_impl(raw, schema);
    result.rows_after_clean = cleaned.table.row_count();

    const RawTable& t = cleaned.table;
    size_t label_col = SIZE_MAX, lat_col = SIZE_MAX, lon_col = SIZE_MAX;
    std::vector<size_t> feat_cols;
    std::vector<const ColumnSchema*> feat_schema;
    for (size_t c = 0; c < t.col_count(); ++c) {
        const ColumnSchema* col = find_column(schema, t.column_names[c]);
        switch (col->kind) {
            case ColumnKind::LabelPersonal: label_col = c; break;
            case ColumnKind::Latitude: lat_col = c; break;
            case ColumnKind::Longitude: lon_col = c; break;
            case ColumnKind::Categorical:
            case ColumnKind::Numeric:
                feat_cols.push_back(c);
                feat_schema.push_back(col);
                break;
            default: break;  // other labels carried but unused
        }
    }
    if (label_col == SIZE_MAX)
        throw DataError("preprocess: label column was dropped by the schema");

    // Rows with unparseable or missing numerics (including geo) are dropped.
    std::vector<size_t> usable;
    std::vector<double> labels, lats, lons;
    for (size_t r = 0; r < t.rows.size(); ++r) {
        const Row& row = t.rows[r];
        double label, la = 0.0, lo = 0.0, tmp;
        bool ok = parse_double(row[label_col], label);
        if (ok && lat_col != SIZE_MAX)
            ok = parse_double(row[lat_col], la) && la >= -90.0 && la <= 90.0;
        if (ok && lon_col != SIZE_MAX)
            ok = parse_double(row[lon_col], lo) && lo >= -180.0 && lo <= 180.0;
        for (size_t k = 0; ok && k < feat_cols.size(); ++k)
            if (feat_schema[k]->kind == ColumnKind::Numeric)
                ok = parse_double(row[feat_cols[k]], tmp);
        if (!ok) {
            ++result.rows_dropped_bad_numeric;
            continue;
        }
        usable.push_back(r);
        labels.push_back(label);
        lats.push_back(la);
        lons.push_back(lo);
    }

    // Record keys, deduplicated with a #k suffix when the source repeats.
    std::vector<std::string> ids(usable.size());
    std::unordered_map<std::string, size_t> seen;
    for (size_t i = 0; i < usable.size(); ++i) {
        std::string id = cleaned.ids[usable[i]];
        size_t& count = seen[id];
        ++count;
        if (count > 1) {
            ++result.duplicate_ids;
            std::string candidate;
            size_t k = count;
            do {
                candidate = id + "#" + std::to_string(k++);
            } while (seen.contains(candidate));
            ++seen[candidate];
            id = candidate;
        }
        ids[i] = id;
    }

    auto parts = split_indices(usable.size(), opts.seed, opts.fractions);

    // Categorical codes come from the train partition only.
    std::vector<size_t> train_rows;
    train_rows.reserve(parts[0].size());
    for (size_t i : parts[0]) train_rows.push_back(usable[i]);
    result.categories = CategoryMap::fit(t, schema, train_rows);

    std::unordered_map<std::string, size_t> cat_slot;
    for (size_t s = 0; s < result.categories.columns().size(); ++s)
        cat_slot[result.categories.columns()[s]] = s;

    // Raw (un-normalized) matrices per partition.
    auto build_part = [&](const std::vector<size_t>& part, bool count_unseen) {
        FeatureMatrix fm;
        fm.X = Matrix(part.size(), feat_cols.size());
        for (size_t i = 0; i < part.size(); ++i) {
            size_t u = part[i];
            const Row& row = t.rows[usable[u]];
            double* dst = fm.X.row(i);
            for (size_t k = 0; k < feat_cols.size(); ++k) {
                const Cell& cell = row[feat_cols[k]];
                if (feat_schema[k]->kind == ColumnKind::Categorical) {
                    int code = result.categories.code(cat_slot[feat_schema[k]->name], cell);
                    if (code < 0 && count_unseen) ++result.unseen_levels;
                    dst[k] = static_cast<double>(code);
                } else {
                    parse_double(cell, dst[k]);  // already validated
                }
            }
            fm.ids.push_back(ids[u]);
            fm.y.push_back(labels[u]);
            fm.lat.push_back(lats[u]);
            fm.lon.push_back(lons[u]);
        }
        return fm;
    };

    FeatureMatrix train = build_part(parts[0], false);
    FeatureMatrix val = build_part(parts[1], true);
    FeatureMatrix test = build_part(parts[2], true);

    result.feature_norm = Normalizer::fit(train.X);
    Matrix ytrain(train.y.size(), 1);
    for (size_t i = 0; i < train.y.size(); ++i) ytrain(i, 0) = train.y[i];
    result.label_norm = Normalizer::fit(ytrain);

    for (FeatureMatrix* fm : {&train, &val, &test}) {
        fm->X = result.feature_norm.apply(fm->X);
        fm->y = result.label_norm.apply(fm->y);
        fm->validate();
    }

    result.splits = SplitResult{std::move(train), std::move(val), std::move(test)};
    return result;
}

}  // namespace gv::tabular
