#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "segexplain/core.hpp"

namespace segexplain {

enum class InputFormat { kDenseCsv, kSparseTriplet };

std::optional<InputFormat> parse_format(std::string_view s);
std::string_view to_string(InputFormat f);

struct IngestSpec {
  std::string path;
  InputFormat format = InputFormat::kDenseCsv;
  std::string prediction_column = "prediction";
  std::optional<std::vector<std::string>> feature_columns;  // allowlist
  std::string missing_token;  // an empty cell is always missing
};

/// Reads a whole table into memory.
///
/// Dense CSV: a header row naming every column; one of them is the
/// prediction. Cells equal to the missing token are missing.
///
/// Sparse triplet: header `row,feature,value`; rows are non-negative
/// integer ids, ordered ascending in the result. Pairs not listed are
/// missing. The prediction is the triplet whose feature equals the
/// prediction column.
///
/// Throws DataError with the offending (1-based) line number on malformed
/// rows, non-numeric or non-finite cells, missing predictions and empty
/// input; ConfigError when the prediction column or an allowlisted column
/// is absent.
Dataset load_dataset(const IngestSpec& spec);

/// Pass 1 of the two-pass mode: predictions only, in row order.
struct LabelScan {
  std::vector<double> predictions;
  LabelRange label_range;
};
LabelScan scan_labels(const IngestSpec& spec);

/// Pass 2 of the two-pass mode: each example is handed to `sink` in row
/// order without retaining the table. Feature indices refer to `catalog`.
/// Dense CSV only; sparse triplet files must be loaded whole.
void stream_examples(const IngestSpec& spec, std::vector<FeatureId>& catalog,
                     const std::function<void(std::size_t row, const ScoredExample&)>& sink);

/// Moments of every feature's non-missing values; n + missing_count equals
/// the row count.
std::vector<SampleStats> profile(const Dataset& dataset);

/// Splits one CSV record. Supports double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(std::string_view line);

/// Locale-independent parse of a finite decimal number.
std::optional<double> parse_real(std::string_view text);

}  // namespace segexplain
