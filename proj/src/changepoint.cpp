#include "segexplain/changepoint.hpp"

#include <cmath>

#include "segexplain/error.hpp"

namespace segexplain {

void CusumParams::validate() const {
  if (!(drift >= 0.0) || !std::isfinite(drift)) throw ConfigError("cusum drift must be >= 0");
  if (!(threshold > 0.0) || !std::isfinite(threshold)) {
    throw ConfigError("cusum threshold must be > 0");
  }
}

std::vector<std::size_t> cusum(std::span<const double> row, const CusumParams& params) {
  params.validate();
  std::vector<std::size_t> changes;
  double high = 0.0, low = 0.0;
  std::size_t high_start = 0, low_start = 0;
  double ref_sum = 0.0;
  std::size_t ref_count = 0;

  for (std::size_t t = 0; t < row.size(); ++t) {
    const double x = row[t];
    const double ref = ref_count == 0 ? x : ref_sum / static_cast<double>(ref_count);
    ref_sum += x;
    ++ref_count;
    const double dev = x - ref;

    double h = high + dev - params.drift;
    if (h > 0.0) {
      if (high == 0.0) high_start = t;
      high = h;
    } else {
      high = 0.0;
    }
    if (params.two_sided) {
      double l = low - dev - params.drift;
      if (l > 0.0) {
        if (low == 0.0) low_start = t;
        low = l;
      } else {
        low = 0.0;
      }
    }

    const bool high_alarm = high > params.threshold;
    const bool low_alarm = low > params.threshold;
    if (!high_alarm && !low_alarm) continue;

    std::size_t start;
    if (high_alarm && low_alarm) {
      if (high != low) {
        start = high > low ? high_start : low_start;
      } else {
        start = std::min(high_start, low_start);
      }
    } else {
      start = high_alarm ? high_start : low_start;
    }
    if (start > 0 && (changes.empty() || changes.back() < start)) changes.push_back(start);

    high = low = 0.0;
    ref_sum = 0.0;
    for (std::size_t i = start; i <= t; ++i) ref_sum += row[i];
    ref_count = t + 1 - start;
  }
  return changes;
}

}  // namespace segexplain
