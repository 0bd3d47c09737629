#pragma once

// Domain types shared by every stage of the interpretation pipeline.
//
// A Dataset is a table of scored examples: sparse feature values plus the
// model's (scalar) prediction for each row. The label space [a_min, a_max]
// is cut into k bins; a Segment pairs one feature with a contiguous,
// half-open range of bins and carries the in-vs-out dissimilarity score.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace segexplain {

struct FeatureId {
  std::size_t index = 0;
  std::string name;

  friend bool operator==(const FeatureId&, const FeatureId&) = default;
};

/// One row: sparse (feature index, value) pairs and the model prediction.
/// Features absent from `values` are missing, which is distinct from 0.
struct ScoredExample {
  std::vector<std::pair<std::size_t, double>> values;
  double prediction = 0.0;

  std::optional<double> value(std::size_t feature) const;
};

struct LabelRange {
  double lo = 0.0;
  double hi = 0.0;

  friend bool operator==(const LabelRange&, const LabelRange&) = default;
};

/// Non-missing entries of one feature, sorted by row.
struct FeatureColumn {
  std::vector<std::size_t> rows;
  std::vector<double> values;

  std::size_t size() const { return rows.size(); }
};

/// Immutable, column-major table of scored examples.
class Dataset {
 public:
  /// Throws DataError when the pieces are inconsistent: empty table,
  /// non-finite prediction or value, duplicate or unsorted rows in a column,
  /// a column count that differs from the catalog, or a bad catalog.
  Dataset(std::vector<FeatureId> catalog, std::vector<double> predictions,
          std::vector<FeatureColumn> columns);

  static Dataset from_examples(std::vector<FeatureId> catalog,
                               std::span<const ScoredExample> examples);

  std::size_t size() const { return predictions_.size(); }
  std::size_t num_features() const { return catalog_.size(); }

  const std::vector<FeatureId>& catalog() const { return catalog_; }
  const FeatureId& feature(std::size_t j) const { return catalog_.at(j); }
  std::optional<std::size_t> find_feature(const std::string& name) const;

  std::span<const double> predictions() const { return predictions_; }
  const FeatureColumn& column(std::size_t j) const { return columns_.at(j); }
  LabelRange label_range() const { return label_range_; }

  std::optional<double> value(std::size_t row, std::size_t feature) const;
  ScoredExample example(std::size_t row) const;

 private:
  std::vector<FeatureId> catalog_;
  std::vector<double> predictions_;
  std::vector<FeatureColumn> columns_;
  LabelRange label_range_;
};

/// Half-open range of bin indices [lo, hi).
struct BinRange {
  std::size_t lo = 0;
  std::size_t hi = 0;

  std::size_t width() const { return hi - lo; }
  bool contains(std::size_t bin) const { return bin >= lo && bin < hi; }
  bool intersects(const BinRange& other) const {
    return std::max(lo, other.lo) < std::min(hi, other.hi);
  }

  friend bool operator==(const BinRange&, const BinRange&) = default;
};

/// Boundaries b_0..b_k of the label range. Bin i is [b_i, b_{i+1}), except
/// the last which is closed on the right.
struct BinPartition {
  std::vector<double> boundaries;
  std::size_t m = 0;            // target half-bin sample count
  std::size_t requested_k = 0;  // k asked for; k() may be smaller
  std::vector<std::size_t> sample_bin_counts;  // sampled elements per bin

  std::size_t k() const { return boundaries.empty() ? 0 : boundaries.size() - 1; }
  double label_lo(const BinRange& r) const { return boundaries.at(r.lo); }
  double label_hi(const BinRange& r) const { return boundaries.at(r.hi); }
};

/// Moments of one sample. variance uses the n-1 denominator and is 0 when
/// n < 2. missing_count counts rows of the sampled population whose value
/// was missing.
struct SampleStats {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;
  std::size_t missing_count = 0;

  friend bool operator==(const SampleStats&, const SampleStats&) = default;
};

struct Segment {
  FeatureId feature;
  BinRange bins;
  double label_lo = 0.0;
  double label_hi = 0.0;
  double t_value = 0.0;
  SampleStats in_stats;
  SampleStats out_stats;

  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Per-feature rows of per-bin scores. Undefined raw cells are NaN.
struct DissimilarityMatrix {
  std::size_t k = 0;
  std::vector<std::vector<double>> raw;
  std::vector<std::vector<double>> normalized;

  bool defined(std::size_t feature, std::size_t bin) const;
};

/// One feature's non-missing values paired with the bin of their row.
struct BinnedColumn {
  std::size_t feature = 0;
  std::vector<std::uint32_t> bins;
  std::vector<double> values;
};

}  // namespace segexplain
