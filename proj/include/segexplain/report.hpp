#pragma once

#include <ostream>

#include <json.hpp>

#include "segexplain/core.hpp"
#include "segexplain/pipeline.hpp"

namespace segexplain {

inline constexpr const char* kReportSchema = "segexplain.report/1";
inline constexpr const char* kSegmentsSchema = "segexplain.segments/1";
inline constexpr const char* kMatrixSchema = "segexplain.matrix/1";
inline constexpr const char* kClustersSchema = "segexplain.clusters/1";
inline constexpr const char* kBinSeriesSchema = "segexplain.plot.bins/1";
inline constexpr const char* kSegmentRatioSchema = "segexplain.plot.segments/1";

using Json = nlohmann::ordered_json;

Json segment_json(const Segment& s);

/// report.json body. `config` is echoed verbatim.
Json report_json(const Dataset& dataset, const PipelineResult& result, const Json& config,
                 bool include_clusters);

/// Columns: feature,bin_lo,bin_hi,label_lo,label_hi,t,n_in,n_out,mean_in,
/// mean_out,cluster,representative. One row per ranked segment; cluster is
/// empty when clustering did not run.
void write_segments_csv(std::ostream& out, const PipelineResult& result);

/// Columns: cluster,size,representative_feature,bin_lo,bin_hi,t,
/// centroid_begin,centroid_end,centroid_sign.
void write_clusters_csv(std::ostream& out, const PipelineResult& result);

/// Per feature and bin: row count with a value, mean value, raw and
/// normalised t.
void write_bin_series_csv(std::ostream& out, const Dataset& dataset, const PipelineResult& result);

/// Top segments with in/out/overall means and the in-to-out mean ratio.
void write_segment_ratio_csv(std::ostream& out, const Dataset& dataset,
                             const PipelineResult& result);

}  // namespace segexplain
