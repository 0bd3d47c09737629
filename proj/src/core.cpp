#include "segexplain/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "segexplain/error.hpp"

namespace segexplain {

std::optional<double> ScoredExample::value(std::size_t feature) const {
  for (const auto& [f, v] : values) {
    if (f == feature) return v;
  }
  return std::nullopt;
}

Dataset::Dataset(std::vector<FeatureId> catalog, std::vector<double> predictions,
                 std::vector<FeatureColumn> columns)
    : catalog_(std::move(catalog)),
      predictions_(std::move(predictions)),
      columns_(std::move(columns)) {
  if (predictions_.empty()) throw DataError("empty dataset");
  if (columns_.size() != catalog_.size()) {
    throw DataError("column count does not match feature catalog");
  }
  std::set<std::string> names;
  for (std::size_t j = 0; j < catalog_.size(); ++j) {
    if (catalog_[j].index != j) throw DataError("feature catalog indices must be 0..n-1");
    if (catalog_[j].name.empty()) throw DataError("feature name must be non-empty");
    if (!names.insert(catalog_[j].name).second) {
      throw DataError("duplicate feature name '" + catalog_[j].name + "'");
    }
  }
  label_range_ = {std::numeric_limits<double>::infinity(),
                  -std::numeric_limits<double>::infinity()};
  for (std::size_t r = 0; r < predictions_.size(); ++r) {
    double p = predictions_[r];
    if (!std::isfinite(p)) {
      throw DataError("non-finite prediction at row " + std::to_string(r));
    }
    label_range_.lo = std::min(label_range_.lo, p);
    label_range_.hi = std::max(label_range_.hi, p);
  }
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    const auto& col = columns_[j];
    if (col.rows.size() != col.values.size()) {
      throw DataError("column '" + catalog_[j].name + "' has mismatched rows/values");
    }
    for (std::size_t e = 0; e < col.rows.size(); ++e) {
      if (col.rows[e] >= predictions_.size() || (e > 0 && col.rows[e] <= col.rows[e - 1])) {
        throw DataError("column '" + catalog_[j].name + "' rows must be sorted, unique and in range");
      }
      if (!std::isfinite(col.values[e])) {
        throw DataError("non-finite value in column '" + catalog_[j].name + "' at row " +
                        std::to_string(col.rows[e]));
      }
    }
  }
}

Dataset Dataset::from_examples(std::vector<FeatureId> catalog,
                               std::span<const ScoredExample> examples) {
  std::vector<double> predictions;
  predictions.reserve(examples.size());
  std::vector<FeatureColumn> columns(catalog.size());
  for (std::size_t r = 0; r < examples.size(); ++r) {
    predictions.push_back(examples[r].prediction);
    auto values = examples[r].values;
    std::sort(values.begin(), values.end());
    for (std::size_t e = 0; e < values.size(); ++e) {
      auto [f, v] = values[e];
      if (f >= columns.size()) {
        throw DataError("row " + std::to_string(r) + " references a feature outside the catalog");
      }
      if (e > 0 && values[e - 1].first == f) {
        throw DataError("row " + std::to_string(r) + " sets feature '" + catalog[f].name + "' twice");
      }
      columns[f].rows.push_back(r);
      columns[f].values.push_back(v);
    }
  }
  return Dataset(std::move(catalog), std::move(predictions), std::move(columns));
}

std::optional<std::size_t> Dataset::find_feature(const std::string& name) const {
  for (const auto& f : catalog_) {
    if (f.name == name) return f.index;
  }
  return std::nullopt;
}

std::optional<double> Dataset::value(std::size_t row, std::size_t feature) const {
  const auto& col = columns_.at(feature);
  auto it = std::lower_bound(col.rows.begin(), col.rows.end(), row);
  if (it == col.rows.end() || *it != row) return std::nullopt;
  return col.values[static_cast<std::size_t>(it - col.rows.begin())];
}

ScoredExample Dataset::example(std::size_t row) const {
  ScoredExample ex;
  ex.prediction = predictions_.at(row);
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    if (auto v = value(row, j)) ex.values.emplace_back(j, *v);
  }
  return ex;
}

bool DissimilarityMatrix::defined(std::size_t feature, std::size_t bin) const {
  return !std::isnan(raw.at(feature).at(bin));
}

}  // namespace segexplain
