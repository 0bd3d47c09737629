#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "segexplain/changepoint.hpp"
#include "segexplain/clustering.hpp"
#include "segexplain/core.hpp"
#include "segexplain/segmentation.hpp"

namespace segexplain {

struct PipelineParams {
  std::size_t bins = 1000;
  std::size_t min_bin_samples = 10;  // m
  std::size_t top = 10;              // t
  std::size_t buffer = 10000;
  CusumParams cusum;
  bool exhaustive = false;  // every bin boundary is a change point
  Ordering ordering = Ordering::kAbs;
  std::optional<std::set<std::string>> feature_filter;  // names, top selection only
  bool cluster = true;
  std::size_t k_lo = 1;
  std::size_t k_hi = 10;
  double name_weight = 0.5;
  std::uint64_t partition_seed = 0;
  std::uint64_t buffer_seed = 0;
  std::uint64_t cluster_seed = 0;
  std::size_t workers = 1;
};

struct FeatureResult {
  std::vector<std::size_t> change_points;  // interior CUSUM change points
  std::vector<Segment> segments;           // Int(I_j) in selection order
};

struct PipelineResult {
  BinPartition partition;
  DissimilarityMatrix matrix;
  std::vector<FeatureResult> features;
  std::vector<Segment> ranked;  // union of every feature's segments, ranked
  std::vector<Segment> top;
  std::optional<SegmentClustering> clustering;  // over `ranked`
  std::vector<Segment> top_cluster;
  std::vector<std::string> warnings;
};

/// Runs the whole interpretation: partition, per-bin matrix, change
/// points, per-feature segment selection, global top-t and clustering.
/// The result is independent of `workers`.
PipelineResult interpret(const Dataset& dataset, const PipelineParams& params);

}  // namespace segexplain
