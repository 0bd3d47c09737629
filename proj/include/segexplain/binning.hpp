#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "segexplain/core.hpp"

namespace segexplain {

/// Equal-count partition of the prediction range into k bins.
///
/// A seeded sample S of up to 2*m*k predictions is drawn with at most m
/// copies of any distinct prediction value. With S sorted ascending, the
/// interior boundary b_i is S[2*m*i]; b_0 and b_k are the label range
/// ends. If fewer than 2*m*k elements can be sampled, k shrinks to
/// floor(|S| / 2m) and `requested_k` records the original value.
///
/// Throws ConfigError for k < 2 or m < 1, DataError when the predictions
/// hold fewer than 2 distinct values or k would shrink below 2.
BinPartition build_partition(std::span<const double> predictions, std::size_t k,
                             std::size_t m, std::uint64_t seed);
BinPartition build_partition(const Dataset& dataset, std::size_t k, std::size_t m,
                             std::uint64_t seed);

/// Bin index holding `prediction`. Throws DataError outside [b_0, b_k].
std::size_t bin_of(const BinPartition& partition, double prediction);

/// Row-to-bin assignment of a dataset under a partition, computed once and
/// shared read-only by all per-feature work.
class BinnedDataset {
 public:
  BinnedDataset(const Dataset& dataset, const BinPartition& partition);

  const Dataset& dataset() const { return *dataset_; }
  const BinPartition& partition() const { return *partition_; }
  std::span<const std::uint32_t> row_bins() const { return row_bins_; }
  std::span<const std::size_t> rows_per_bin() const { return rows_per_bin_; }

  BinnedColumn column(std::size_t feature) const;

 private:
  const Dataset* dataset_;
  const BinPartition* partition_;
  std::vector<std::uint32_t> row_bins_;
  std::vector<std::size_t> rows_per_bin_;
};

/// Per-bin in-vs-out scores for one feature, followed by normalisation.
/// Undefined cells are NaN in the raw row; they take the mean of the
/// defined cells before z-normalisation, hence 0 afterwards.
void score_bins(const BinnedDataset& binned, const BinnedColumn& column,
                std::size_t capacity, std::uint64_t seed, std::vector<double>& raw,
                std::vector<double>& normalized);

DissimilarityMatrix dissimilarity_matrix(const Dataset& dataset, const BinPartition& partition,
                                         std::size_t capacity, std::uint64_t seed,
                                         std::size_t workers = 1);

/// CSV with columns feature,bin,label_lo,label_hi,t,normalized_t. Undefined
/// raw cells are written as empty fields.
void write_matrix_csv(std::ostream& out, const Dataset& dataset, const BinPartition& partition,
                      const DissimilarityMatrix& matrix);

}  // namespace segexplain
