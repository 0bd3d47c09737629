#include "segexplain/segmentation.hpp"

#include <algorithm>
#include <cmath>

#include "segexplain/stats.hpp"

namespace segexplain {

std::optional<Ordering> parse_ordering(std::string_view s) {
  if (s == "abs") return Ordering::kAbs;
  if (s == "signed") return Ordering::kSigned;
  return std::nullopt;
}

std::string_view to_string(Ordering o) { return o == Ordering::kAbs ? "abs" : "signed"; }

bool ranks_before(const Segment& a, const Segment& b, Ordering ordering) {
  const double ka = ordering == Ordering::kAbs ? std::abs(a.t_value) : a.t_value;
  const double kb = ordering == Ordering::kAbs ? std::abs(b.t_value) : b.t_value;
  if (ka != kb) return ka > kb;
  if (a.bins.width() != b.bins.width()) return a.bins.width() > b.bins.width();
  if (a.bins.lo != b.bins.lo) return a.bins.lo < b.bins.lo;
  return a.feature.index < b.feature.index;
}

std::vector<BinRange> candidates(std::span<const std::size_t> change_points, std::size_t k) {
  std::vector<BinRange> out;
  for (std::size_t i = 0; i < change_points.size(); ++i) {
    for (std::size_t j = i + 1; j < change_points.size(); ++j) {
      BinRange r{change_points[i], change_points[j]};
      if (r.lo == 0 && r.hi == k) continue;
      out.push_back(r);
    }
  }
  return out;
}

std::vector<std::size_t> with_endpoints(std::span<const std::size_t> change_points,
                                        std::size_t k) {
  std::vector<std::size_t> c(change_points.begin(), change_points.end());
  c.push_back(0);
  c.push_back(k);
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  c.erase(std::remove_if(c.begin(), c.end(), [k](std::size_t v) { return v > k; }), c.end());
  return c;
}

std::vector<Segment> score_candidates(const BinnedDataset& binned, const BinnedColumn& column,
                                      std::span<const BinRange> cands, std::size_t capacity,
                                      std::uint64_t seed) {
  const auto& part = binned.partition();
  const auto& feature = binned.dataset().feature(column.feature);
  std::vector<Segment> scored;
  scored.reserve(cands.size());
  for (const auto& range : cands) {
    auto r = buffered_dis(column, binned.rows_per_bin(), range, capacity, seed);
    if (!r.ok()) continue;
    Segment s;
    s.feature = feature;
    s.bins = range;
    s.label_lo = part.label_lo(range);
    s.label_hi = part.label_hi(range);
    s.t_value = r.t;
    s.in_stats = r.in_stats;
    s.out_stats = r.out_stats;
    scored.push_back(std::move(s));
  }
  return scored;
}

std::vector<Segment> select_non_overlapping(std::vector<Segment> scored, Ordering ordering) {
  std::sort(scored.begin(), scored.end(),
            [ordering](const Segment& a, const Segment& b) { return ranks_before(a, b, ordering); });
  std::vector<Segment> picked;
  for (auto& s : scored) {
    bool clash = std::any_of(picked.begin(), picked.end(),
                             [&](const Segment& p) { return p.bins.intersects(s.bins); });
    if (!clash) picked.push_back(std::move(s));
  }
  return picked;
}

std::vector<Segment> score_and_select(const BinnedDataset& binned, std::size_t feature,
                                      std::span<const BinRange> cands, std::size_t capacity,
                                      std::uint64_t seed, Ordering ordering) {
  return select_non_overlapping(
      score_candidates(binned, binned.column(feature), cands, capacity, seed), ordering);
}

std::vector<Segment> top_segments(const std::vector<std::vector<Segment>>& per_feature,
                                  std::size_t t,
                                  const std::optional<std::set<std::size_t>>& feature_filter,
                                  Ordering ordering) {
  std::vector<Segment> all;
  for (const auto& segs : per_feature) {
    for (const auto& s : segs) {
      if (feature_filter && !feature_filter->contains(s.feature.index)) continue;
      all.push_back(s);
    }
  }
  std::sort(all.begin(), all.end(),
            [ordering](const Segment& a, const Segment& b) { return ranks_before(a, b, ordering); });
  if (all.size() > t) all.resize(t);
  return all;
}

}  // namespace segexplain
