#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "segexplain/core.hpp"
#include "segexplain/segmentation.hpp"

namespace segexplain {

inline constexpr std::size_t kNameHashDim = 64;

/// Splits a feature name into lower-case tokens at non-alphanumeric
/// characters, lower-to-upper case changes, the end of an upper-case run
/// followed by a capitalised word, and letter/digit boundaries.
/// "PageLoad_maxTime_HTTP_RTT" -> page load max time http rtt.
std::vector<std::string> name_tokens(std::string_view name);

/// Clustering coordinates of one segment.
struct SegmentVector {
  double begin = 0.0;  // bin_lo / k
  double end = 0.0;    // bin_hi / k
  double sign = 1.0;   // sign of t, +1 for t >= 0
  std::array<double, kNameHashDim> name{};  // hashed token counts, L2 = weight

  std::vector<double> coordinates() const;

  friend bool operator==(const SegmentVector&, const SegmentVector&) = default;
};

SegmentVector vectorize(const Segment& segment, std::size_t k_bins, double name_weight);

using Point = std::vector<double>;

struct KMeansResult {
  std::size_t k = 0;
  std::vector<std::size_t> assignments;
  std::vector<Point> centroids;
  std::vector<double> distortion_history;  // sum of squared distances per assignment step
  std::size_t iterations = 0;

  double distortion() const { return distortion_history.empty() ? 0.0 : distortion_history.back(); }
};

/// Lloyd's algorithm from k-means++ seeds. Stops at an assignment fixpoint
/// or after 100 update steps. Throws ConfigError when k is 0 or exceeds
/// the number of points.
KMeansResult kmeans_pp(std::span<const Point> points, std::size_t k, std::uint64_t seed);

/// Model cost plus data cost:
///   sum over centroids of log2(1 + |c|) + sum over points of log2(1 + dist to nearest c).
double mdl_cost(std::span<const Point> points, const KMeansResult& clustering);

struct MdlCost {
  std::size_t k = 0;
  double cost = 0.0;
};

struct ModelSelection {
  KMeansResult best;
  std::vector<MdlCost> costs;
};

/// Runs kmeans_pp for each k in [k_lo, k_hi] and keeps the cheapest (ties
/// go to the smaller k). Requires 1 <= k_lo <= k_hi <= |points|.
ModelSelection select_k_mdl(std::span<const Point> points, std::size_t k_lo, std::size_t k_hi,
                            std::uint64_t seed, std::size_t workers = 1);

struct SegmentClustering {
  std::size_t k = 0;
  std::vector<std::size_t> assignments;      // per segment
  std::vector<Point> centroids;
  std::vector<std::size_t> representatives;  // per non-empty cluster: index into segments
  std::vector<MdlCost> mdl_costs;
};

struct ClusterParams {
  std::size_t k_lo = 1;
  std::size_t k_hi = 10;  // clamped to the number of segments
  double name_weight = 0.5;
  Ordering ordering = Ordering::kAbs;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};

/// Vectorises, selects k by MDL and picks the best-ranked member of every
/// cluster. `segments` must be non-empty.
SegmentClustering cluster_segments(std::span<const Segment> segments, std::size_t k_bins,
                                   const ClusterParams& params);

/// Best-ranked member of each cluster, ranked, truncated to t.
std::vector<Segment> representatives(const SegmentClustering& clustering,
                                     std::span<const Segment> segments, std::size_t t,
                                     Ordering ordering);

}  // namespace segexplain
