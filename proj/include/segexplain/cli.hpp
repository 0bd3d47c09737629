#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "segexplain/ingest.hpp"
#include "segexplain/pipeline.hpp"
#include "segexplain/report.hpp"

namespace segexplain {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitData = 3,
  kExitInternal = 4,
};

/// Raw run configuration as given on the command line. Counts are signed
/// so that validate() can report negative input instead of wrapping.
struct RunConfig {
  std::string input;
  std::string format = "dense-csv";
  std::string prediction_col = "prediction";
  std::vector<std::string> columns;  // ingestion allowlist; empty means all
  std::string missing_token;
  std::int64_t bins = 1000;
  std::int64_t min_bin_samples = 10;
  std::int64_t top = 10;
  std::int64_t buffer = 10000;
  double cusum_drift = 0.5;
  double cusum_threshold = 7.0;
  bool exhaustive = false;
  std::vector<std::string> features;  // top-selection filter
  std::string ordering = "abs";
  bool cluster = true;
  std::string k_range = "1..10";
  double name_weight = 0.5;
  std::uint64_t seed = 0;
  std::string out = "segexplain-out";
  std::vector<std::string> emit = {"report", "clusters", "plotdata"};
  std::int64_t workers = 1;
};

/// Problems with the configuration itself; empty iff it is runnable. Never
/// reads the input file.
std::vector<std::string> validate(const RunConfig& config);

/// Parses "lo..hi", "lo-hi" or "n".
bool parse_k_range(const std::string& text, std::size_t& lo, std::size_t& hi);

IngestSpec ingest_spec(const RunConfig& config);
PipelineParams pipeline_params(const RunConfig& config);

/// Configuration echo stored in report.json. Excludes the output directory
/// and the worker count, which do not affect results.
Json config_json(const RunConfig& config);

/// Executes a run and writes the artefacts into config.out. Errors are
/// reported on `err` as one JSON record; no partial output is left behind.
int run(const RunConfig& config, std::ostream& err);

/// One-line machine-readable error record.
std::string error_record(int code, const std::string& kind,
                         const std::vector<std::string>& messages);

}  // namespace segexplain
