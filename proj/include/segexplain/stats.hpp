#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "segexplain/core.hpp"
#include "segexplain/random.hpp"

namespace segexplain {

/// Welford streaming moments.
class MomentAccumulator {
 public:
  void add(double x) {
    ++n_;
    double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }

  std::size_t count() const { return n_; }
  SampleStats stats(std::size_t missing_count = 0) const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

SampleStats sample_stats(std::span<const double> values, std::size_t missing_count = 0);

enum class TTestStatus { kOk, kInsufficientSample, kZeroVariance };

struct TTestOutcome {
  TTestStatus status = TTestStatus::kOk;
  double t = 0.0;

  bool ok() const { return status == TTestStatus::kOk; }
};

/// Unpooled two-sample t statistic (mean_a - mean_b) / sqrt(var_a/n_a + var_b/n_b).
/// Never throws: failures are reported through the status.
TTestOutcome try_two_sample_t(const SampleStats& a, const SampleStats& b) noexcept;

/// Throwing variant of try_two_sample_t; raises StatsError.
double two_sample_t(const SampleStats& a, const SampleStats& b);

/// Fixed-capacity uniform sample of a stream (Vitter's Algorithm R).
///
/// After `seen` offers each item is retained with probability
/// min(1, capacity / seen). Items below capacity are kept in offer order.
class Reservoir {
 public:
  Reservoir(std::size_t capacity, std::uint64_t seed);

  void offer(double x);

  std::size_t capacity() const { return capacity_; }
  std::size_t seen() const { return seen_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<double>& items() const { return items_; }

 private:
  std::size_t capacity_;
  std::uint64_t seed_;
  std::size_t seen_ = 0;
  std::vector<double> items_;
  Rng rng_;
};

/// Seed of one reservoir: side 0 is the segment, side 1 its complement.
std::uint64_t reservoir_seed(std::uint64_t seed, std::size_t feature, const BinRange& seg,
                             int side);

struct DisResult {
  TTestStatus status = TTestStatus::kOk;
  double t = 0.0;
  SampleStats in_stats;
  SampleStats out_stats;

  bool ok() const { return status == TTestStatus::kOk; }
};

/// Scores a segment against its complement using one reservoir per side.
/// rows_per_bin holds the total row count of each bin (missing included).
DisResult buffered_dis(const BinnedColumn& column, std::span<const std::size_t> rows_per_bin,
                       const BinRange& seg, std::size_t capacity, std::uint64_t seed);

/// Convenience overload that bins the feature first. Throws StatsError on
/// insufficient sample or zero variance on both sides, ConfigError when
/// capacity < 2 or the range does not fit the partition.
DisResult buffered_dis(const Dataset& dataset, std::size_t feature, const BinRange& seg,
                       const BinPartition& partition, std::size_t capacity,
                       std::uint64_t seed);

/// Standard-score normalisation with the population deviation. A constant
/// row maps to all zeros.
std::vector<double> z_normalize(std::span<const double> row);

}  // namespace segexplain
