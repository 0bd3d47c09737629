// segexplain-harness: synthetic data, exhaustive oracle, stability protocol.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "segexplain/binning.hpp"
#include "segexplain/cli.hpp"
#include "segexplain/error.hpp"
#include "segexplain/format.hpp"
#include "segexplain/harness.hpp"
#include "segexplain/ingest.hpp"
#include "segexplain/random.hpp"

namespace sx = segexplain;
namespace hx = segexplain::harness;

namespace {

// "feature:qlo:qhi:shift[:sd]"
std::pair<std::size_t, hx::PlantedEffect> parse_plant(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() < 4 || parts.size() > 5) {
    throw sx::ConfigError("--plant expects feature:qlo:qhi:shift[:sd], got '" + text + "'");
  }
  auto num = [&](const std::string& s) {
    auto v = sx::parse_real(s);
    if (!v) throw sx::ConfigError("bad number '" + s + "' in --plant");
    return *v;
  };
  hx::PlantedEffect e;
  e.quantile_lo = num(parts[1]);
  e.quantile_hi = num(parts[2]);
  e.mean_shift = num(parts[3]);
  if (parts.size() == 5) e.noise_sd = num(parts[4]);
  return {static_cast<std::size_t>(num(parts[0])), e};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ground-truth generator, exhaustive oracle and stability harness"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "Generate a planted-segment dataset as dense CSV");
  std::size_t rows = 10000, features = 5;
  std::vector<std::string> plants;
  double missing_rate = 0.0;
  std::uint64_t gen_seed = 0;
  std::string gen_out, truth_out;
  gen->add_option("--rows", rows)->capture_default_str();
  gen->add_option("--features", features)->capture_default_str();
  gen->add_option("--plant", plants, "feature:qlo:qhi:shift[:sd], repeatable");
  gen->add_option("--missing-rate", missing_rate)->capture_default_str();
  gen->add_option("--seed", gen_seed)->capture_default_str();
  gen->add_option("--out", gen_out, "Output CSV")->required();
  gen->add_option("--truth", truth_out, "Ground-truth CSV (default: stdout)");

  auto* oracle = app.add_subcommand("oracle", "Exhaustive best segment per feature");
  std::string o_input, o_pred = "prediction";
  std::size_t o_bins = 20, o_m = 10;
  std::uint64_t o_seed = 0;
  oracle->add_option("--input", o_input)->required();
  oracle->add_option("--prediction-col", o_pred)->capture_default_str();
  oracle->add_option("--bins", o_bins)->capture_default_str();
  oracle->add_option("--min-bin-samples", o_m)->capture_default_str();
  oracle->add_option("--seed", o_seed)->capture_default_str();

  auto* stab = app.add_subcommand("stability", "Jaccard stability of top features per buffer size");
  sx::RunConfig s_cfg;
  s_cfg.cluster = false;
  std::vector<std::size_t> buffers = {100, 1000, 10000};
  std::size_t runs = 10, top_features = 30;
  stab->add_option("--input", s_cfg.input)->required();
  stab->add_option("--prediction-col", s_cfg.prediction_col)->capture_default_str();
  stab->add_option("--bins", s_cfg.bins)->capture_default_str();
  stab->add_option("--min-bin-samples", s_cfg.min_bin_samples)->capture_default_str();
  stab->add_option("--cusum-drift", s_cfg.cusum_drift)->capture_default_str();
  stab->add_option("--cusum-threshold", s_cfg.cusum_threshold)->capture_default_str();
  stab->add_option("--seed", s_cfg.seed)->capture_default_str();
  stab->add_option("--workers", s_cfg.workers)->capture_default_str();
  stab->add_option("--buffers", buffers)->delimiter(',')->capture_default_str();
  stab->add_option("--runs", runs)->capture_default_str();
  stab->add_option("--top-features", top_features)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      hx::PlantSpec spec;
      spec.n_rows = rows;
      spec.n_features = features;
      spec.missing_rate = missing_rate;
      spec.seed = gen_seed;
      spec.effects.resize(features);
      for (const auto& p : plants) {
        auto [j, e] = parse_plant(p);
        if (j >= features) throw sx::ConfigError("--plant feature index out of range");
        spec.effects[j] = e;
      }
      auto data = hx::generate(spec);
      std::ofstream out(gen_out);
      if (!out) throw sx::DataError("cannot write '" + gen_out + "'");
      hx::write_dense_csv(out, data.dataset);
      std::ofstream truth_file;
      if (!truth_out.empty()) truth_file.open(truth_out);
      std::ostream& t = truth_out.empty() ? std::cout : truth_file;
      t << "feature,quantile_lo,quantile_hi\n";
      for (const auto& tr : data.truth) {
        t << data.dataset.feature(tr.feature).name << ',' << sx::format_double(tr.quantile_lo) << ','
          << sx::format_double(tr.quantile_hi) << '\n';
      }
    } else if (*oracle) {
      sx::IngestSpec spec;
      spec.path = o_input;
      spec.prediction_column = o_pred;
      auto ds = sx::load_dataset(spec);
      auto part = sx::build_partition(ds, o_bins, o_m, sx::derive_seed(o_seed, {1}));
      std::cout << "feature,bin_lo,bin_hi,label_lo,label_hi,t\n";
      for (std::size_t j = 0; j < ds.num_features(); ++j) {
        try {
          auto s = hx::brute_force_best_segment(ds, part, j);
          std::cout << sx::csv_field(s.feature.name) << ',' << s.bins.lo << ',' << s.bins.hi << ','
                    << sx::format_double(s.label_lo) << ',' << sx::format_double(s.label_hi) << ','
                    << sx::format_double(s.t_value) << '\n';
        } catch (const sx::StatsError&) {
          std::cout << sx::csv_field(ds.feature(j).name) << ",,,,,\n";
        }
      }
    } else if (*stab) {
      auto problems = sx::validate(s_cfg);
      if (!problems.empty()) {
        std::cerr << sx::error_record(sx::kExitConfig, "config", problems) << '\n';
        return sx::kExitConfig;
      }
      auto ds = sx::load_dataset(sx::ingest_spec(s_cfg));
      std::cout << "buffer,runs,top_features,mean_jaccard\n";
      for (auto b : buffers) {
        auto params = sx::pipeline_params(s_cfg);
        params.buffer = b;
        auto res = hx::jaccard_stability(ds, params, runs, top_features);
        std::cout << b << ',' << runs << ',' << top_features << ','
                  << sx::format_double(res.mean_jaccard) << '\n';
      }
    }
  } catch (const sx::ConfigError& e) {
    std::cerr << sx::error_record(sx::kExitConfig, "config", {e.what()}) << '\n';
    return sx::kExitConfig;
  } catch (const sx::Error& e) {
    std::cerr << sx::error_record(sx::kExitData, "data", {e.what()}) << '\n';
    return sx::kExitData;
  } catch (const std::exception& e) {
    std::cerr << sx::error_record(sx::kExitInternal, "internal", {e.what()}) << '\n';
    return sx::kExitInternal;
  }
  return 0;
}
