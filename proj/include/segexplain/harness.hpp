#pragma once

// Synthetic data with known ground truth, exhaustive oracles, and the
// buffer-size stability protocol.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <set>
#include <vector>

#include "segexplain/core.hpp"
#include "segexplain/pipeline.hpp"

namespace segexplain::harness {

struct PlantedEffect {
  double quantile_lo = 0.0;
  double quantile_hi = 1.0;
  double mean_shift = 0.0;
  double noise_sd = 1.0;
};

struct PlantSpec {
  std::size_t n_rows = 0;
  std::size_t n_features = 0;
  std::vector<std::optional<PlantedEffect>> effects;  // per feature; missing entries = none
  double missing_rate = 0.0;
  std::uint64_t seed = 0;

  /// Throws ConfigError on an invalid spec.
  void validate() const;
};

/// A planted effect expressed in prediction quantiles.
struct PlantedTruth {
  std::size_t feature = 0;
  double quantile_lo = 0.0;
  double quantile_hi = 0.0;

  /// Bin range of the effect under k equal-count bins of uniform predictions.
  BinRange bins(std::size_t k) const;
};

struct SyntheticData {
  Dataset dataset;
  std::vector<PlantedTruth> truth;
};

/// Predictions are uniform on [0, 1). Feature j is N(0, sd^2) noise (sd 1
/// for non-planted features) plus the shift when the prediction lies in
/// [quantile_lo, quantile_hi). Each cell is missing with probability
/// missing_rate. Features are named f0, f1, ...
SyntheticData generate(const PlantSpec& spec);

/// Exact in-vs-out t over every bin range [lo, hi) except the full range;
/// returns the best by |t| with the segmentation tie rules. Bins examples
/// by direct comparison with the boundaries and computes two-pass
/// moments, independently of the pipeline's streaming path. Throws
/// ConfigError for k > 200 and StatsError when no range is scorable.
Segment brute_force_best_segment(const Dataset& dataset, const BinPartition& partition,
                                 std::size_t feature);

double jaccard(const std::set<std::size_t>& a, const std::set<std::size_t>& b);

/// First `top_features` distinct features in rank order of the result's
/// segments.
std::set<std::size_t> explanatory_features(const PipelineResult& result,
                                           std::size_t top_features);

struct StabilityResult {
  double mean_jaccard = 0.0;
  std::vector<std::set<std::size_t>> feature_sets;
};

/// Runs the pipeline `runs` times with buffer seeds derived from
/// params.buffer_seed (the partition seed stays fixed) and returns the
/// mean pairwise Jaccard of the explanatory feature sets.
StabilityResult jaccard_stability(const Dataset& dataset, const PipelineParams& params,
                                  std::size_t runs, std::size_t top_features);

/// Dense CSV with columns f0..f{n-1},prediction; missing cells empty.
void write_dense_csv(std::ostream& out, const Dataset& dataset);

}  // namespace segexplain::harness
