#include "segexplain/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "segexplain/binning.hpp"
#include "segexplain/error.hpp"

namespace segexplain {

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

SampleStats MomentAccumulator::stats(std::size_t missing_count) const {
  SampleStats s;
  s.n = n_;
  s.mean = n_ > 0 ? mean_ : 0.0;
  s.variance = n_ >= 2 ? std::max(0.0, m2_ / static_cast<double>(n_ - 1)) : 0.0;
  s.missing_count = missing_count;
  return s;
}

SampleStats sample_stats(std::span<const double> values, std::size_t missing_count) {
  MomentAccumulator acc;
  for (double v : values) acc.add(v);
  return acc.stats(missing_count);
}

TTestOutcome try_two_sample_t(const SampleStats& a, const SampleStats& b) noexcept {
  if (a.n < 2 || b.n < 2) return {TTestStatus::kInsufficientSample, 0.0};
  if (a.variance == 0.0 && b.variance == 0.0) return {TTestStatus::kZeroVariance, 0.0};
  double se = std::sqrt(a.variance / static_cast<double>(a.n) +
                        b.variance / static_cast<double>(b.n));
  return {TTestStatus::kOk, (a.mean - b.mean) / se};
}

double two_sample_t(const SampleStats& a, const SampleStats& b) {
  auto r = try_two_sample_t(a, b);
  switch (r.status) {
    case TTestStatus::kOk:
      return r.t;
    case TTestStatus::kInsufficientSample:
      throw StatsError(StatsError::Kind::kInsufficientSample,
                       "t statistic needs at least 2 values per sample (got " +
                           std::to_string(a.n) + " and " + std::to_string(b.n) + ")");
    case TTestStatus::kZeroVariance:
      break;
  }
  throw StatsError(StatsError::Kind::kZeroVariance, "both samples have zero variance");
}

Reservoir::Reservoir(std::size_t capacity, std::uint64_t seed)
    : capacity_(capacity), seed_(seed), rng_(seed) {
  items_.reserve(std::min<std::size_t>(capacity, 1u << 16));
}

void Reservoir::offer(double x) {
  ++seen_;
  if (items_.size() < capacity_) {
    items_.push_back(x);
    return;
  }
  auto j = rng_.uniform_index(seen_);
  if (j < capacity_) items_[j] = x;
}

std::uint64_t reservoir_seed(std::uint64_t seed, std::size_t feature, const BinRange& seg,
                             int side) {
  return derive_seed(seed, {feature, seg.lo, seg.hi, static_cast<std::uint64_t>(side)});
}

DisResult buffered_dis(const BinnedColumn& column, std::span<const std::size_t> rows_per_bin,
                       const BinRange& seg, std::size_t capacity, std::uint64_t seed) {
  Reservoir in(capacity, reservoir_seed(seed, column.feature, seg, 0));
  Reservoir out(capacity, reservoir_seed(seed, column.feature, seg, 1));
  const std::size_t n = column.values.size();
  for (std::size_t e = 0; e < n; ++e) {
    if (seg.contains(column.bins[e])) {
      in.offer(column.values[e]);
    } else {
      out.offer(column.values[e]);
    }
  }
  std::size_t rows_in = 0;
  for (std::size_t b = seg.lo; b < seg.hi; ++b) rows_in += rows_per_bin[b];
  std::size_t rows_total = std::accumulate(rows_per_bin.begin(), rows_per_bin.end(), std::size_t{0});

  DisResult r;
  r.in_stats = sample_stats(in.items(), rows_in - in.seen());
  r.out_stats = sample_stats(out.items(), (rows_total - rows_in) - out.seen());
  auto tt = try_two_sample_t(r.in_stats, r.out_stats);
  r.status = tt.status;
  r.t = tt.t;
  return r;
}

DisResult buffered_dis(const Dataset& dataset, std::size_t feature, const BinRange& seg,
                       const BinPartition& partition, std::size_t capacity,
                       std::uint64_t seed) {
  if (capacity < 2) throw ConfigError("buffer capacity must be >= 2");
  if (seg.lo >= seg.hi || seg.hi > partition.k()) {
    throw ConfigError("segment bin range does not fit the partition");
  }
  BinnedDataset binned(dataset, partition);
  auto r = buffered_dis(binned.column(feature), binned.rows_per_bin(), seg, capacity, seed);
  if (r.status == TTestStatus::kInsufficientSample) {
    throw StatsError(StatsError::Kind::kInsufficientSample,
                     "feature '" + dataset.feature(feature).name +
                         "': fewer than 2 values on one side of the segment");
  }
  if (r.status == TTestStatus::kZeroVariance) {
    throw StatsError(StatsError::Kind::kZeroVariance,
                     "feature '" + dataset.feature(feature).name +
                         "': zero variance inside and outside the segment");
  }
  return r;
}

std::vector<double> z_normalize(std::span<const double> row) {
  std::vector<double> out(row.size(), 0.0);
  if (row.empty()) return out;
  bool constant = std::all_of(row.begin(), row.end(), [&](double x) { return x == row[0]; });
  if (constant) return out;
  const double n = static_cast<double>(row.size());
  double mean = 0.0;
  for (double x : row) mean += x;
  mean /= n;
  // Low-order part of the mean, kept apart so that large offsets do not
  // round it away.
  double mean_lo = 0.0;
  for (double x : row) mean_lo += x - mean;
  mean_lo /= n;
  double ss = 0.0;
  for (double x : row) {
    double d = (x - mean) - mean_lo;
    ss += d * d;
  }
  double sd = std::sqrt(ss / n);
  if (!(sd > 0.0)) return out;
  for (std::size_t i = 0; i < row.size(); ++i) out[i] = ((row[i] - mean) - mean_lo) / sd;
  return out;
}

}  // namespace segexplain
