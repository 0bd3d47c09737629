#include "segexplain/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>

#include "segexplain/binning.hpp"
#include "segexplain/error.hpp"
#include "segexplain/random.hpp"

namespace segexplain {
namespace fs = std::filesystem;
namespace {

const std::set<std::string> kEmitFlags = {"matrix", "report", "clusters", "plotdata"};

bool emits(const RunConfig& c, const std::string& flag) {
  return std::find(c.emit.begin(), c.emit.end(), flag) != c.emit.end();
}

bool parse_size(std::string_view s, std::size_t& v) {
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  return r.ec == std::errc{} && r.ptr == s.data() + s.size();
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  body(out);
  out.flush();
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

}  // namespace

bool parse_k_range(const std::string& text, std::size_t& lo, std::size_t& hi) {
  std::string_view s = text;
  auto dots = s.find("..");
  if (dots != std::string_view::npos) {
    return parse_size(s.substr(0, dots), lo) && parse_size(s.substr(dots + 2), hi);
  }
  auto dash = s.find('-');
  if (dash != std::string_view::npos) {
    return parse_size(s.substr(0, dash), lo) && parse_size(s.substr(dash + 1), hi);
  }
  if (!parse_size(s, lo)) return false;
  hi = lo;
  return true;
}

std::vector<std::string> validate(const RunConfig& c) {
  std::vector<std::string> errs;
  if (c.input.empty()) errs.push_back("input path is required");
  if (!parse_format(c.format)) errs.push_back("format must be one of: dense-csv, sparse-triplet");
  if (c.prediction_col.empty()) errs.push_back("prediction column name must be non-empty");
  if (c.bins < 2) errs.push_back("k must be ≥ 2");
  if (c.min_bin_samples < 1) errs.push_back("m must be ≥ 1");
  if (c.top < 1) errs.push_back("top must be ≥ 1");
  if (c.buffer < 2) errs.push_back("buffer must be ≥ 2");
  if (!(c.cusum_drift >= 0.0) || !std::isfinite(c.cusum_drift)) {
    errs.push_back("cusum drift must be ≥ 0");
  }
  if (!(c.cusum_threshold > 0.0) || !std::isfinite(c.cusum_threshold)) {
    errs.push_back("cusum threshold must be > 0");
  }
  if (!parse_ordering(c.ordering)) {
    errs.push_back("ordering must be one of: abs, signed (got '" + c.ordering + "')");
  }
  std::size_t lo = 0, hi = 0;
  if (!parse_k_range(c.k_range, lo, hi) || lo < 1 || lo > hi) {
    errs.push_back("k-range must be lo..hi with 1 ≤ lo ≤ hi (got '" + c.k_range + "')");
  }
  if (!(c.name_weight >= 0.0) || !std::isfinite(c.name_weight)) {
    errs.push_back("name weight must be ≥ 0");
  }
  if (c.workers < 1) errs.push_back("workers must be ≥ 1");
  if (c.out.empty()) errs.push_back("output directory is required");
  for (const auto& e : c.emit) {
    if (!kEmitFlags.contains(e)) {
      errs.push_back("emit flag '" + e + "' must be one of: matrix, report, clusters, plotdata");
    }
  }
  if (std::find(c.columns.begin(), c.columns.end(), c.prediction_col) != c.columns.end()) {
    errs.push_back("prediction column cannot also be a feature column");
  }
  return errs;
}

IngestSpec ingest_spec(const RunConfig& c) {
  IngestSpec spec;
  spec.path = c.input;
  spec.format = parse_format(c.format).value_or(InputFormat::kDenseCsv);
  spec.prediction_column = c.prediction_col;
  if (!c.columns.empty()) spec.feature_columns = c.columns;
  spec.missing_token = c.missing_token;
  return spec;
}

PipelineParams pipeline_params(const RunConfig& c) {
  PipelineParams p;
  p.bins = static_cast<std::size_t>(c.bins);
  p.min_bin_samples = static_cast<std::size_t>(c.min_bin_samples);
  p.top = static_cast<std::size_t>(c.top);
  p.buffer = static_cast<std::size_t>(c.buffer);
  p.cusum.drift = c.cusum_drift;
  p.cusum.threshold = c.cusum_threshold;
  p.exhaustive = c.exhaustive;
  p.ordering = parse_ordering(c.ordering).value_or(Ordering::kAbs);
  if (!c.features.empty()) p.feature_filter.emplace(c.features.begin(), c.features.end());
  p.cluster = c.cluster;
  parse_k_range(c.k_range, p.k_lo, p.k_hi);
  p.name_weight = c.name_weight;
  p.partition_seed = derive_seed(c.seed, {1});
  p.buffer_seed = derive_seed(c.seed, {2});
  p.cluster_seed = derive_seed(c.seed, {3});
  p.workers = static_cast<std::size_t>(c.workers);
  return p;
}

Json config_json(const RunConfig& c) {
  Json j;
  j["input"] = c.input;
  j["format"] = c.format;
  j["prediction_col"] = c.prediction_col;
  j["columns"] = c.columns;
  j["missing_token"] = c.missing_token;
  j["k"] = c.bins;
  j["m"] = c.min_bin_samples;
  j["t"] = c.top;
  j["capacity"] = c.buffer;
  j["cusum"] = {{"drift", c.cusum_drift}, {"threshold", c.cusum_threshold}, {"exhaustive", c.exhaustive}};
  j["features"] = c.features;
  j["ordering"] = c.ordering;
  j["cluster"] = c.cluster;
  j["k_range"] = c.k_range;
  j["name_weight"] = c.name_weight;
  j["seed"] = c.seed;
  j["emit"] = c.emit;
  return j;
}

std::string error_record(int code, const std::string& kind,
                         const std::vector<std::string>& messages) {
  Json j;
  j["error"] = {{"code", code}, {"kind", kind}, {"messages", messages}};
  return j.dump();
}

int run(const RunConfig& config, std::ostream& err) {
  auto problems = validate(config);
  if (!problems.empty()) {
    err << error_record(kExitConfig, "config", problems) << '\n';
    return kExitConfig;
  }

  const fs::path out_dir = config.out;
  const fs::path staging = out_dir / ".segexplain-staging";
  const bool out_existed = fs::exists(out_dir);
  std::vector<fs::path> copied;
  auto fail = [&](int code, const char* kind, const char* what) {
    std::error_code ec;
    fs::remove_all(staging, ec);
    if (out_existed) {
      for (const auto& p : copied) fs::remove(p, ec);
    } else {
      fs::remove_all(out_dir, ec);
    }
    err << error_record(code, kind, {what}) << '\n';
    return code;
  };
  try {
    auto dataset = load_dataset(ingest_spec(config));
    auto params = pipeline_params(config);
    auto result = interpret(dataset, params);

    fs::create_directories(out_dir);
    fs::remove_all(staging);
    fs::create_directories(staging);

    Json manifest;
    manifest["schema"] = "segexplain.manifest/1";
    Json files = Json::object();

    if (emits(config, "report")) {
      auto report = report_json(dataset, result, config_json(config), emits(config, "clusters"));
      write_file(staging / "report.json", [&](std::ostream& o) { o << report.dump(2) << '\n'; });
      files["report.json"] = kReportSchema;
      write_file(staging / "segments.csv", [&](std::ostream& o) { write_segments_csv(o, result); });
      files["segments.csv"] = kSegmentsSchema;
    }
    if (emits(config, "clusters") && result.clustering) {
      write_file(staging / "clusters.csv", [&](std::ostream& o) { write_clusters_csv(o, result); });
      files["clusters.csv"] = kClustersSchema;
    }
    if (emits(config, "matrix")) {
      write_file(staging / "matrix.csv", [&](std::ostream& o) {
        write_matrix_csv(o, dataset, result.partition, result.matrix);
      });
      files["matrix.csv"] = kMatrixSchema;
    }
    if (emits(config, "plotdata")) {
      fs::create_directories(staging / "plotdata");
      write_file(staging / "plotdata" / "bin_series.csv",
                 [&](std::ostream& o) { write_bin_series_csv(o, dataset, result); });
      files["plotdata/bin_series.csv"] = kBinSeriesSchema;
      write_file(staging / "plotdata" / "segment_ratios.csv",
                 [&](std::ostream& o) { write_segment_ratio_csv(o, dataset, result); });
      files["plotdata/segment_ratios.csv"] = kSegmentRatioSchema;
    }
    manifest["files"] = std::move(files);
    write_file(staging / "manifest.json", [&](std::ostream& o) { o << manifest.dump(2) << '\n'; });

    for (const auto& entry : fs::recursive_directory_iterator(staging)) {
      auto rel = fs::relative(entry.path(), staging);
      auto dest = out_dir / rel;
      if (entry.is_directory()) {
        fs::create_directories(dest);
      } else {
        fs::copy_file(entry.path(), dest, fs::copy_options::overwrite_existing);
        copied.push_back(dest);
      }
    }
    fs::remove_all(staging);
    for (const auto& w : result.warnings) err << "warning: " << w << '\n';
    return kExitOk;
  } catch (const ConfigError& e) {
    return fail(kExitConfig, "config", e.what());
  } catch (const DataError& e) {
    return fail(kExitData, "data", e.what());
  } catch (const StatsError& e) {
    return fail(kExitData, "data", e.what());
  } catch (const std::exception& e) {
    return fail(kExitInternal, "internal", e.what());
  }
}

}  // namespace segexplain
