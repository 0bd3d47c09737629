#include "segexplain/report.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "segexplain/binning.hpp"
#include "segexplain/format.hpp"
#include "segexplain/stats.hpp"

namespace segexplain {
namespace {

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json segment_json(const Segment& s) {
  Json j;
  j["feature"] = s.feature.name;
  j["feature_index"] = s.feature.index;
  j["bin_lo"] = s.bins.lo;
  j["bin_hi"] = s.bins.hi;
  j["label_lo"] = s.label_lo;
  j["label_hi"] = s.label_hi;
  j["t"] = s.t_value;
  j["n_in"] = s.in_stats.n;
  j["n_out"] = s.out_stats.n;
  j["mean_in"] = s.in_stats.mean;
  j["mean_out"] = s.out_stats.mean;
  j["var_in"] = s.in_stats.variance;
  j["var_out"] = s.out_stats.variance;
  j["missing_in"] = s.in_stats.missing_count;
  j["missing_out"] = s.out_stats.missing_count;
  return j;
}

Json report_json(const Dataset& dataset, const PipelineResult& result, const Json& config,
                 bool include_clusters) {
  Json j;
  j["schema"] = kReportSchema;
  j["config"] = config;
  j["dataset"] = {{"rows", dataset.size()},
                  {"features", dataset.num_features()},
                  {"label_range", Json::array({dataset.label_range().lo, dataset.label_range().hi})}};
  j["partition"] = {{"k", result.partition.k()},
                    {"requested_k", result.partition.requested_k},
                    {"m", result.partition.m},
                    {"boundaries", result.partition.boundaries}};
  j["warnings"] = result.warnings;

  Json features = Json::array();
  for (std::size_t f = 0; f < result.features.size(); ++f) {
    Json fj;
    fj["name"] = dataset.feature(f).name;
    fj["index"] = f;
    Json raw = Json::array();
    for (double t : result.matrix.raw[f]) raw.push_back(number_or_null(t));
    fj["bin_t"] = std::move(raw);
    fj["bin_t_normalized"] = result.matrix.normalized[f];
    fj["change_points"] = result.features[f].change_points;
    Json segs = Json::array();
    for (const auto& s : result.features[f].segments) segs.push_back(segment_json(s));
    fj["segments"] = std::move(segs);
    features.push_back(std::move(fj));
  }
  j["features"] = std::move(features);

  Json top = Json::array();
  for (const auto& s : result.top) top.push_back(segment_json(s));
  j["top"] = std::move(top);

  if (include_clusters && result.clustering) {
    const auto& c = *result.clustering;
    Json cj;
    cj["k"] = c.k;
    Json costs = Json::array();
    for (const auto& mc : c.mdl_costs) costs.push_back({{"k", mc.k}, {"cost", number_or_null(mc.cost)}});
    cj["mdl_costs"] = std::move(costs);
    Json clusters = Json::array();
    for (std::size_t id = 0; id < c.k; ++id) {
      Json members = Json::array();
      std::optional<std::size_t> rep;
      for (std::size_t i = 0; i < c.assignments.size(); ++i) {
        if (c.assignments[i] != id) continue;
        Json m = segment_json(result.ranked[i]);
        bool is_rep = std::find(c.representatives.begin(), c.representatives.end(), i) !=
                      c.representatives.end();
        if (is_rep) rep = i;
        m["representative"] = is_rep;
        members.push_back(std::move(m));
      }
      if (members.empty()) continue;
      Json cl;
      cl["id"] = id;
      cl["size"] = members.size();
      cl["centroid"] = {{"begin", c.centroids[id][0]}, {"end", c.centroids[id][1]}, {"sign", c.centroids[id][2]}};
      cl["representative"] = segment_json(result.ranked[*rep]);
      cl["members"] = std::move(members);
      clusters.push_back(std::move(cl));
    }
    cj["clusters"] = std::move(clusters);
    Json tc = Json::array();
    for (const auto& s : result.top_cluster) tc.push_back(segment_json(s));
    cj["top_cluster"] = std::move(tc);
    j["clustering"] = std::move(cj);
  }
  return j;
}

void write_segments_csv(std::ostream& out, const PipelineResult& result) {
  out << "feature,bin_lo,bin_hi,label_lo,label_hi,t,n_in,n_out,mean_in,mean_out,cluster,representative\n";
  for (std::size_t i = 0; i < result.ranked.size(); ++i) {
    const auto& s = result.ranked[i];
    out << csv_field(s.feature.name) << ',' << s.bins.lo << ',' << s.bins.hi << ','
        << format_double(s.label_lo) << ',' << format_double(s.label_hi) << ','
        << format_double(s.t_value) << ',' << s.in_stats.n << ',' << s.out_stats.n << ','
        << format_double(s.in_stats.mean) << ',' << format_double(s.out_stats.mean) << ',';
    if (result.clustering) {
      const auto& c = *result.clustering;
      bool rep = std::find(c.representatives.begin(), c.representatives.end(), i) !=
                 c.representatives.end();
      out << c.assignments[i] << ',' << (rep ? 1 : 0);
    } else {
      out << ",0";
    }
    out << '\n';
  }
}

void write_clusters_csv(std::ostream& out, const PipelineResult& result) {
  out << "cluster,size,representative_feature,bin_lo,bin_hi,t,centroid_begin,centroid_end,centroid_sign\n";
  if (!result.clustering) return;
  const auto& c = *result.clustering;
  for (auto rep : c.representatives) {
    std::size_t id = c.assignments[rep];
    std::size_t size = static_cast<std::size_t>(
        std::count(c.assignments.begin(), c.assignments.end(), id));
    const auto& s = result.ranked[rep];
    out << id << ',' << size << ',' << csv_field(s.feature.name) << ',' << s.bins.lo << ','
        << s.bins.hi << ',' << format_double(s.t_value) << ','
        << format_double(c.centroids[id][0]) << ',' << format_double(c.centroids[id][1]) << ','
        << format_double(c.centroids[id][2]) << '\n';
  }
}

void write_bin_series_csv(std::ostream& out, const Dataset& dataset, const PipelineResult& result) {
  const auto& part = result.partition;
  BinnedDataset binned(dataset, part);
  out << "feature,bin,label_lo,label_hi,n,mean_value,t,normalized_t\n";
  for (std::size_t j = 0; j < dataset.num_features(); ++j) {
    auto col = binned.column(j);
    std::vector<MomentAccumulator> acc(part.k());
    for (std::size_t e = 0; e < col.values.size(); ++e) acc[col.bins[e]].add(col.values[e]);
    for (std::size_t i = 0; i < part.k(); ++i) {
      auto st = acc[i].stats();
      out << csv_field(dataset.feature(j).name) << ',' << i << ','
          << format_double(part.boundaries[i]) << ',' << format_double(part.boundaries[i + 1])
          << ',' << st.n << ',';
      if (st.n > 0) out << format_double(st.mean);
      out << ',';
      if (result.matrix.defined(j, i)) out << format_double(result.matrix.raw[j][i]);
      out << ',' << format_double(result.matrix.normalized[j][i]) << '\n';
    }
  }
}

void write_segment_ratio_csv(std::ostream& out, const Dataset& dataset,
                             const PipelineResult& result) {
  out << "rank,feature,bin_lo,bin_hi,label_lo,label_hi,t,mean_in,mean_out,mean_all,ratio_in_out\n";
  for (std::size_t r = 0; r < result.top.size(); ++r) {
    const auto& s = result.top[r];
    auto all = sample_stats(dataset.column(s.feature.index).values);
    out << r << ',' << csv_field(s.feature.name) << ',' << s.bins.lo << ',' << s.bins.hi << ','
        << format_double(s.label_lo) << ',' << format_double(s.label_hi) << ','
        << format_double(s.t_value) << ',' << format_double(s.in_stats.mean) << ','
        << format_double(s.out_stats.mean) << ',' << format_double(all.mean) << ',';
    if (s.out_stats.mean != 0.0) out << format_double(s.in_stats.mean / s.out_stats.mean);
    out << '\n';
  }
}

}  // namespace segexplain
