#include "segexplain/pipeline.hpp"

#include <algorithm>
#include <numeric>

#include "segexplain/binning.hpp"
#include "segexplain/error.hpp"
#include "segexplain/parallel.hpp"

namespace segexplain {

PipelineResult interpret(const Dataset& dataset, const PipelineParams& params) {
  if (params.buffer < 2) throw ConfigError("buffer capacity must be >= 2");
  if (params.top < 1) throw ConfigError("top must be >= 1");
  params.cusum.validate();

  PipelineResult res;
  res.partition = build_partition(dataset, params.bins, params.min_bin_samples,
                                  params.partition_seed);
  const std::size_t k = res.partition.k();
  if (k < res.partition.requested_k) {
    res.warnings.push_back("too few examples for " + std::to_string(res.partition.requested_k) +
                           " bins of " + std::to_string(2 * params.min_bin_samples) +
                           " samples; using k = " + std::to_string(k));
  }

  std::optional<std::set<std::size_t>> filter;
  if (params.feature_filter) {
    filter.emplace();
    for (const auto& name : *params.feature_filter) {
      auto j = dataset.find_feature(name);
      if (!j) throw DataError("feature filter names unknown feature '" + name + "'");
      filter->insert(*j);
    }
  }

  BinnedDataset binned(dataset, res.partition);
  const std::size_t nf = dataset.num_features();
  res.matrix.k = k;
  res.matrix.raw.resize(nf);
  res.matrix.normalized.resize(nf);
  res.features.resize(nf);

  std::vector<std::size_t> all_bins(k + 1);
  std::iota(all_bins.begin(), all_bins.end(), std::size_t{0});

  parallel_for(nf, params.workers, [&](std::size_t j) {
    auto column = binned.column(j);
    score_bins(binned, column, params.buffer, params.buffer_seed, res.matrix.raw[j],
               res.matrix.normalized[j]);
    auto& fr = res.features[j];
    std::vector<std::size_t> points;
    if (params.exhaustive) {
      points = all_bins;
      fr.change_points.assign(all_bins.begin() + 1, all_bins.end() - 1);
    } else {
      fr.change_points = cusum(res.matrix.normalized[j], params.cusum);
      points = with_endpoints(fr.change_points, k);
    }
    auto cands = candidates(points, k);
    fr.segments = select_non_overlapping(
        score_candidates(binned, column, cands, params.buffer, params.buffer_seed),
        params.ordering);
  });

  std::vector<std::vector<Segment>> per_feature;
  per_feature.reserve(nf);
  std::size_t total = 0;
  for (const auto& fr : res.features) {
    per_feature.push_back(fr.segments);
    total += fr.segments.size();
  }
  res.ranked = top_segments(per_feature, total, std::nullopt, params.ordering);
  res.top = top_segments(per_feature, params.top, filter, params.ordering);

  if (params.cluster && !res.ranked.empty()) {
    ClusterParams cp;
    cp.k_lo = params.k_lo;
    cp.k_hi = params.k_hi;
    cp.name_weight = params.name_weight;
    cp.ordering = params.ordering;
    cp.seed = params.cluster_seed;
    cp.workers = params.workers;
    res.clustering = cluster_segments(res.ranked, k, cp);
    res.top_cluster = representatives(*res.clustering, res.ranked, params.top, params.ordering);
  }
  return res;
}

}  // namespace segexplain
