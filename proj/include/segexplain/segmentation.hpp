#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <vector>

#include "segexplain/binning.hpp"
#include "segexplain/core.hpp"

namespace segexplain {

enum class Ordering { kAbs, kSigned };

std::optional<Ordering> parse_ordering(std::string_view s);
std::string_view to_string(Ordering o);

/// Strict ranking used everywhere segments are ordered: larger |t| (or
/// larger signed t), then the wider bin range, then the smaller bin_lo,
/// then the smaller feature index.
bool ranks_before(const Segment& a, const Segment& b, Ordering ordering);

/// All ranges [c_i, c_j) with c_i < c_j from the change points, minus the
/// full range [0, k), whose complement is empty. `change_points` must be
/// sorted and unique.
std::vector<BinRange> candidates(std::span<const std::size_t> change_points, std::size_t k);

/// Change points with the endpoints 0 and k added.
std::vector<std::size_t> with_endpoints(std::span<const std::size_t> change_points,
                                        std::size_t k);

/// Scores each candidate on the whole segment. Candidates whose score is
/// undefined (too few values, zero variance) are dropped.
std::vector<Segment> score_candidates(const BinnedDataset& binned, const BinnedColumn& column,
                                      std::span<const BinRange> cands, std::size_t capacity,
                                      std::uint64_t seed);

/// Greedy scan in rank order, admitting a segment iff it intersects none
/// admitted before it.
std::vector<Segment> select_non_overlapping(std::vector<Segment> scored, Ordering ordering);

/// Int(I_j): score_candidates followed by select_non_overlapping.
std::vector<Segment> score_and_select(const BinnedDataset& binned, std::size_t feature,
                                      std::span<const BinRange> cands, std::size_t capacity,
                                      std::uint64_t seed, Ordering ordering);

/// Union of the per-feature lists restricted to `feature_filter` (feature
/// indices), ranked, truncated to `t`.
std::vector<Segment> top_segments(const std::vector<std::vector<Segment>>& per_feature,
                                  std::size_t t,
                                  const std::optional<std::set<std::size_t>>& feature_filter,
                                  Ordering ordering);

}  // namespace segexplain
