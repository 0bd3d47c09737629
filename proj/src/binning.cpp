#include "segexplain/binning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "segexplain/error.hpp"
#include "segexplain/format.hpp"
#include "segexplain/parallel.hpp"
#include "segexplain/random.hpp"
#include "segexplain/stats.hpp"

namespace segexplain {

BinPartition build_partition(std::span<const double> predictions, std::size_t k,
                             std::size_t m, std::uint64_t seed) {
  if (k < 2) throw ConfigError("k must be >= 2");
  if (m < 1) throw ConfigError("m must be >= 1");
  if (predictions.empty()) throw DataError("empty dataset");

  auto [min_it, max_it] = std::minmax_element(predictions.begin(), predictions.end());
  if (*min_it == *max_it) {
    throw DataError("fewer than 2 distinct prediction values; cannot partition");
  }

  std::vector<std::size_t> order(predictions.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(seed, {0x70a27u}));
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.uniform_index(i)]);
  }

  const std::size_t target = 2 * m * k;
  std::map<double, std::size_t> per_value;
  std::vector<double> sample;
  sample.reserve(std::min(target, predictions.size()));
  for (std::size_t idx : order) {
    if (sample.size() == target) break;
    double p = predictions[idx];
    auto& c = per_value[p];
    if (c >= m) continue;
    ++c;
    sample.push_back(p);
  }
  std::sort(sample.begin(), sample.end());

  BinPartition part;
  part.m = m;
  part.requested_k = k;
  std::size_t bins = k;
  if (sample.size() < target) {
    bins = sample.size() / (2 * m);
    if (bins < 2) {
      throw DataError("only " + std::to_string(sample.size()) +
                      " predictions can be sampled; need at least " +
                      std::to_string(4 * m) + " for 2 bins");
    }
  }
  part.boundaries.resize(bins + 1);
  part.boundaries.front() = *min_it;
  part.boundaries.back() = *max_it;
  for (std::size_t i = 1; i < bins; ++i) part.boundaries[i] = sample[2 * m * i];

  part.sample_bin_counts.assign(bins, 0);
  for (std::size_t i = 0; i < 2 * m * bins; ++i) {
    ++part.sample_bin_counts[bin_of(part, sample[i])];
  }
  return part;
}

BinPartition build_partition(const Dataset& dataset, std::size_t k, std::size_t m,
                             std::uint64_t seed) {
  return build_partition(dataset.predictions(), k, m, seed);
}

std::size_t bin_of(const BinPartition& partition, double prediction) {
  const auto& b = partition.boundaries;
  if (b.size() < 2) throw DataError("partition has no bins");
  if (!(prediction >= b.front() && prediction <= b.back())) {
    throw DataError("prediction " + format_double(prediction) + " outside label range [" +
                    format_double(b.front()) + ", " + format_double(b.back()) + "]");
  }
  // First interior boundary strictly greater than the prediction.
  auto it = std::upper_bound(b.begin() + 1, b.end() - 1, prediction);
  return static_cast<std::size_t>(it - (b.begin() + 1));
}

BinnedDataset::BinnedDataset(const Dataset& dataset, const BinPartition& partition)
    : dataset_(&dataset), partition_(&partition) {
  auto preds = dataset.predictions();
  row_bins_.resize(preds.size());
  rows_per_bin_.assign(partition.k(), 0);
  for (std::size_t r = 0; r < preds.size(); ++r) {
    auto b = bin_of(partition, preds[r]);
    row_bins_[r] = static_cast<std::uint32_t>(b);
    ++rows_per_bin_[b];
  }
}

BinnedColumn BinnedDataset::column(std::size_t feature) const {
  const auto& col = dataset_->column(feature);
  BinnedColumn out;
  out.feature = feature;
  out.values = col.values;
  out.bins.resize(col.rows.size());
  for (std::size_t e = 0; e < col.rows.size(); ++e) out.bins[e] = row_bins_[col.rows[e]];
  return out;
}

void score_bins(const BinnedDataset& binned, const BinnedColumn& column, std::size_t capacity,
                std::uint64_t seed, std::vector<double>& raw, std::vector<double>& normalized) {
  const std::size_t k = binned.partition().k();
  raw.assign(k, std::numeric_limits<double>::quiet_NaN());
  double sum = 0.0;
  std::size_t defined = 0;
  for (std::size_t i = 0; i < k; ++i) {
    auto r = buffered_dis(column, binned.rows_per_bin(), BinRange{i, i + 1}, capacity, seed);
    if (r.ok()) {
      raw[i] = r.t;
      sum += r.t;
      ++defined;
    }
  }
  std::vector<double> filled(raw);
  double fill = defined > 0 ? sum / static_cast<double>(defined) : 0.0;
  for (double& v : filled) {
    if (std::isnan(v)) v = fill;
  }
  normalized = z_normalize(filled);
}

DissimilarityMatrix dissimilarity_matrix(const Dataset& dataset, const BinPartition& partition,
                                         std::size_t capacity, std::uint64_t seed,
                                         std::size_t workers) {
  if (capacity < 2) throw ConfigError("buffer capacity must be >= 2");
  BinnedDataset binned(dataset, partition);
  DissimilarityMatrix mat;
  mat.k = partition.k();
  mat.raw.resize(dataset.num_features());
  mat.normalized.resize(dataset.num_features());
  parallel_for(dataset.num_features(), workers, [&](std::size_t j) {
    score_bins(binned, binned.column(j), capacity, seed, mat.raw[j], mat.normalized[j]);
  });
  return mat;
}

void write_matrix_csv(std::ostream& out, const Dataset& dataset, const BinPartition& partition,
                      const DissimilarityMatrix& matrix) {
  out << "feature,bin,label_lo,label_hi,t,normalized_t\n";
  for (std::size_t j = 0; j < matrix.raw.size(); ++j) {
    for (std::size_t i = 0; i < matrix.k; ++i) {
      out << csv_field(dataset.feature(j).name) << ',' << i << ','
          << format_double(partition.boundaries[i]) << ','
          << format_double(partition.boundaries[i + 1]) << ',';
      if (matrix.defined(j, i)) out << format_double(matrix.raw[j][i]);
      out << ',' << format_double(matrix.normalized[j][i]) << '\n';
    }
  }
}

}  // namespace segexplain
