#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "gv/tabular/feature_matrix.hpp"
#include "gv/tabular/normalizer.hpp"
#include "gv/tabular/schema.hpp"
#include "gv/tabular/split.hpp"
#include "gv/tabular/table.hpp"

namespace gv::tabular {

/// Drops schema-flagged columns and every row whose personal-value label is
/// missing, unparseable or zero (those are the non-residential rows and
/// empty lots). Idempotent. The schema must cover every column present.
RawTable clean(const RawTable& raw, const Schema& schema);

/// Level -> integer code maps for the categorical columns, assigned by
/// first occurrence over the rows they were fitted on. Missing cells count
/// as the empty-string level.
class CategoryMap {
public:
    /// Fits on the given row subset (all rows when `rows` is empty).
    static CategoryMap fit(const RawTable& table, const Schema& schema,
                           const std::vector<size_t>& rows = {});

    /// Returns the code for a level, or -1 for an unseen level.
    int code(size_t col_slot, const Cell& cell) const;

    const std::vector<std::string>& columns() const { return columns_; }
    size_t levels(size_t col_slot) const { return by_first_occurrence_[col_slot].size(); }

    void save_json(const std::string& path) const;
    static CategoryMap load_json(const std::string& path);

private:
    std::vector<std::string> columns_;  // categorical column names, table order
    std::vector<std::unordered_map<std::string, int>> codes_;
    std::vector<std::vector<std::string>> by_first_occurrence_;
};

struct EncodeResult {
    RawTable table;          // categorical cells replaced by integer codes
    size_t unseen_count = 0; // cells mapped to -1
};

/// Replaces categorical text levels with their integer codes. Unseen
/// levels become -1 and are counted, never a failure.
EncodeResult apply_categories(const RawTable& table, const Schema& schema,
                              const CategoryMap& map);

/// One-shot form: fit on the whole table, then apply.
EncodeResult encode_categoricals(const RawTable& table, const Schema& schema);

/// Output of the full preprocessing pipeline. Encoders and normalizers are
/// fitted on the train partition only and applied to val/test; labels are
/// normalized with the same zero-mean/unit-std scheme.
struct PreprocessResult {
    SplitResult splits;
    Normalizer feature_norm;
    Normalizer label_norm;
    CategoryMap categories;
    size_t rows_in = 0;
    size_t rows_after_clean = 0;
    size_t rows_dropped_bad_numeric = 0;  // unparseable/missing numerics or geo
    size_t duplicate_ids = 0;             // ids disambiguated with a #k suffix
    size_t unseen_levels = 0;             // -1 codes produced on val/test
};

struct PreprocessOptions {
    uint64_t seed = 0;
    SplitFractions fractions{};
};

PreprocessResult preprocess(const RawTable& raw, const Schema& schema,
                            const PreprocessOptions& opts);

}  // namespace gv::tabular
