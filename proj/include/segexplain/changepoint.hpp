#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace segexplain {

/// Two-sided Page CUSUM settings, in z-units of the input row.
struct CusumParams {
  double drift = 0.5;      // slack: mean changes smaller than this are ignored
  double threshold = 7.0;  // alarm level for either cumulative sum
  bool two_sided = true;

  /// Throws ConfigError unless drift >= 0 and threshold > 0.
  void validate() const;
};

/// Change points of a row, sorted ascending, each in (0, row.size()).
///
/// Upper and lower sums run against a reference mean: the first sample of
/// the row, then the running mean of every sample since the last
/// re-anchor. When a sum crosses the threshold, the change is placed at
/// the first index of the excursion that triggered it (the argmax of the
/// partial sums), both sums reset, and the reference re-anchors to the
/// mean of the samples from the change to the alarm.
std::vector<std::size_t> cusum(std::span<const double> row, const CusumParams& params);

}  // namespace segexplain
