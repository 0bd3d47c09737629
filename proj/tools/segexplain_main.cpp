// segexplain: interpret a regression model from a table of its predictions.

#include <iostream>

#include <CLI11.hpp>

#include "segexplain/cli.hpp"

int main(int argc, char** argv) {
  segexplain::RunConfig cfg;
  CLI::App app{"Find label-range segments where a feature's distribution departs from the rest"};
  app.add_option("--input", cfg.input, "Input table")->required();
  app.add_option("--format", cfg.format, "dense-csv | sparse-triplet")->capture_default_str();
  app.add_option("--prediction-col", cfg.prediction_col, "Prediction column name")->capture_default_str();
  app.add_option("--columns", cfg.columns, "Feature column allowlist")->delimiter(',');
  app.add_option("--missing-token", cfg.missing_token, "Cell text meaning missing (default: empty)");
  app.add_option("--bins", cfg.bins, "Initial bin count k")->capture_default_str();
  app.add_option("--min-bin-samples", cfg.min_bin_samples, "Half-bin sample count m")->capture_default_str();
  app.add_option("--top", cfg.top, "Number of top segments t")->capture_default_str();
  app.add_option("--buffer", cfg.buffer, "Reservoir capacity per side")->capture_default_str();
  app.add_option("--cusum-drift", cfg.cusum_drift, "CUSUM slack (z-units)")->capture_default_str();
  app.add_option("--cusum-threshold", cfg.cusum_threshold, "CUSUM alarm level (z-units)")->capture_default_str();
  app.add_flag("--exhaustive", cfg.exhaustive, "Use every bin boundary as a change point");
  app.add_option("--features", cfg.features, "Restrict top selection to these features")->delimiter(',');
  app.add_option("--ordering", cfg.ordering, "abs | signed")->capture_default_str();
  app.add_flag("--cluster,!--no-cluster", cfg.cluster, "Cluster segments (default on)");
  app.add_option("--k-range", cfg.k_range, "Cluster counts to try, lo..hi")->capture_default_str();
  app.add_option("--name-weight", cfg.name_weight, "Weight of the feature-name block")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Global seed")->capture_default_str();
  app.add_option("--out", cfg.out, "Output directory")->capture_default_str();
  app.add_option("--emit", cfg.emit, "matrix,report,clusters,plotdata")->delimiter(',');
  app.add_option("--workers", cfg.workers, "Worker threads")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << segexplain::error_record(segexplain::kExitConfig, "config", {e.what()}) << '\n';
    return segexplain::kExitConfig;
  }
  return segexplain::run(cfg, std::cerr);
}
