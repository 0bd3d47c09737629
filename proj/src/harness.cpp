#include "segexplain/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "segexplain/error.hpp"
#include "segexplain/format.hpp"
#include "segexplain/parallel.hpp"
#include "segexplain/random.hpp"
#include "segexplain/segmentation.hpp"
#include "segexplain/stats.hpp"

namespace segexplain::harness {
namespace {

/// Two-pass moments of a bin: count, mean and sum of squared deviations.
struct Moments {
  double n = 0.0;
  double mean = 0.0;
  double m2 = 0.0;
};

Moments two_pass(const std::vector<double>& xs) {
  Moments m;
  m.n = static_cast<double>(xs.size());
  if (xs.empty()) return m;
  double s = 0.0;
  for (double x : xs) s += x;
  m.mean = s / m.n;
  for (double x : xs) m.m2 += (x - m.mean) * (x - m.mean);
  return m;
}

// Chan et al. pairwise combination.
Moments merge(const Moments& a, const Moments& b) {
  if (a.n == 0.0) return b;
  if (b.n == 0.0) return a;
  Moments m;
  m.n = a.n + b.n;
  double delta = b.mean - a.mean;
  m.mean = a.mean + delta * b.n / m.n;
  m.m2 = a.m2 + b.m2 + delta * delta * a.n * b.n / m.n;
  return m;
}

}  // namespace

void PlantSpec::validate() const {
  if (n_rows == 0) throw ConfigError("n_rows must be positive");
  if (effects.size() > n_features) throw ConfigError("more effects than features");
  if (!(missing_rate >= 0.0 && missing_rate < 1.0)) throw ConfigError("missing_rate must be in [0,1)");
  for (const auto& e : effects) {
    if (!e) continue;
    if (!(e->quantile_lo >= 0.0 && e->quantile_lo < e->quantile_hi && e->quantile_hi <= 1.0)) {
      throw ConfigError("planted effect needs 0 <= quantile_lo < quantile_hi <= 1");
    }
    if (!(e->noise_sd > 0.0)) throw ConfigError("planted effect needs noise_sd > 0");
  }
}

BinRange PlantedTruth::bins(std::size_t k) const {
  auto lo = static_cast<std::size_t>(std::llround(quantile_lo * static_cast<double>(k)));
  auto hi = static_cast<std::size_t>(std::llround(quantile_hi * static_cast<double>(k)));
  return {lo, std::max(hi, lo + 1)};
}

SyntheticData generate(const PlantSpec& spec) {
  spec.validate();
  Rng pred_rng(derive_seed(spec.seed, {0}));
  std::vector<double> predictions(spec.n_rows);
  for (double& p : predictions) p = pred_rng.uniform01();

  std::vector<FeatureId> catalog;
  std::vector<FeatureColumn> columns(spec.n_features);
  std::vector<PlantedTruth> truth;
  for (std::size_t j = 0; j < spec.n_features; ++j) {
    catalog.push_back({j, "f" + std::to_string(j)});
    std::optional<PlantedEffect> eff;
    if (j < spec.effects.size()) eff = spec.effects[j];
    double sd = eff ? eff->noise_sd : 1.0;
    Rng rng(derive_seed(spec.seed, {1, j}));
    for (std::size_t r = 0; r < spec.n_rows; ++r) {
      double v = sd * rng.normal();
      bool missing = spec.missing_rate > 0.0 && rng.uniform01() < spec.missing_rate;
      if (missing) continue;
      if (eff && predictions[r] >= eff->quantile_lo && predictions[r] < eff->quantile_hi) {
        v += eff->mean_shift;
      }
      columns[j].rows.push_back(r);
      columns[j].values.push_back(v);
    }
    if (eff && eff->mean_shift != 0.0) truth.push_back({j, eff->quantile_lo, eff->quantile_hi});
  }
  return {Dataset(std::move(catalog), std::move(predictions), std::move(columns)), std::move(truth)};
}

Segment brute_force_best_segment(const Dataset& dataset, const BinPartition& partition,
                                 std::size_t feature) {
  const std::size_t k = partition.k();
  if (k > 200) throw ConfigError("brute force oracle is limited to k <= 200");
  const auto& b = partition.boundaries;
  auto preds = dataset.predictions();
  const auto& col = dataset.column(feature);

  // Linear scan over boundaries, bins closed on the right only at the end.
  std::vector<std::vector<double>> per_bin(k);
  std::vector<std::size_t> rows_per_bin(k, 0);
  auto bin_index = [&](double p) {
    for (std::size_t i = 0; i < k; ++i) {
      bool last = i + 1 == k;
      if (p >= b[i] && (p < b[i + 1] || (last && p <= b[i + 1]))) return i;
    }
    throw DataError("prediction outside partition");
  };
  for (double p : preds) ++rows_per_bin[bin_index(p)];
  for (std::size_t e = 0; e < col.size(); ++e) {
    per_bin[bin_index(preds[col.rows[e]])].push_back(col.values[e]);
  }
  std::vector<Moments> bins(k);
  for (std::size_t i = 0; i < k; ++i) bins[i] = two_pass(per_bin[i]);

  std::optional<Segment> best;
  for (std::size_t lo = 0; lo < k; ++lo) {
    for (std::size_t hi = lo + 1; hi <= k; ++hi) {
      if (lo == 0 && hi == k) continue;
      Moments in, out;
      std::size_t rows_in = 0, rows_out = 0;
      for (std::size_t i = 0; i < k; ++i) {
        if (i >= lo && i < hi) {
          in = merge(in, bins[i]);
          rows_in += rows_per_bin[i];
        } else {
          out = merge(out, bins[i]);
          rows_out += rows_per_bin[i];
        }
      }
      if (in.n < 2 || out.n < 2) continue;
      double var_in = in.m2 / (in.n - 1);
      double var_out = out.m2 / (out.n - 1);
      if (var_in == 0.0 && var_out == 0.0) continue;
      double t = (in.mean - out.mean) / std::sqrt(var_in / in.n + var_out / out.n);

      Segment s;
      s.feature = dataset.feature(feature);
      s.bins = {lo, hi};
      s.label_lo = b[lo];
      s.label_hi = b[hi];
      s.t_value = t;
      auto n_in = static_cast<std::size_t>(in.n);
      auto n_out = static_cast<std::size_t>(out.n);
      s.in_stats = {n_in, in.mean, var_in, rows_in - n_in};
      s.out_stats = {n_out, out.mean, var_out, rows_out - n_out};
      if (!best || ranks_before(s, *best, Ordering::kAbs)) best = std::move(s);
    }
  }
  if (!best) {
    throw StatsError(StatsError::Kind::kInsufficientSample,
                     "no scorable bin range for feature '" + dataset.feature(feature).name + "'");
  }
  return *best;
}

double jaccard(const std::set<std::size_t>& a, const std::set<std::size_t>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0;
  for (auto x : a) inter += b.count(x);
  return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

std::set<std::size_t> explanatory_features(const PipelineResult& result,
                                           std::size_t top_features) {
  std::set<std::size_t> out;
  for (const auto& s : result.ranked) {
    if (out.size() == top_features) break;
    out.insert(s.feature.index);
  }
  return out;
}

StabilityResult jaccard_stability(const Dataset& dataset, const PipelineParams& params,
                                  std::size_t runs, std::size_t top_features) {
  if (runs < 2) throw ConfigError("stability needs at least 2 runs");
  StabilityResult res;
  res.feature_sets.resize(runs);
  // Runs are parallel; each pipeline runs single-threaded inside.
  parallel_for(runs, params.workers, [&](std::size_t r) {
    PipelineParams p = params;
    p.buffer_seed = derive_seed(params.buffer_seed, {r});
    p.cluster = false;
    p.workers = 1;
    res.feature_sets[r] = explanatory_features(interpret(dataset, p), top_features);
  });
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < runs; ++a) {
    for (std::size_t b = a + 1; b < runs; ++b) {
      sum += jaccard(res.feature_sets[a], res.feature_sets[b]);
      ++pairs;
    }
  }
  res.mean_jaccard = sum / static_cast<double>(pairs);
  return res;
}

void write_dense_csv(std::ostream& out, const Dataset& dataset) {
  for (const auto& f : dataset.catalog()) out << csv_field(f.name) << ',';
  out << "prediction\n";
  for (std::size_t r = 0; r < dataset.size(); ++r) {
    for (std::size_t j = 0; j < dataset.num_features(); ++j) {
      if (auto v = dataset.value(r, j)) out << format_double(*v);
      out << ',';
    }
    out << format_double(dataset.predictions()[r]) << '\n';
  }
}

}  // namespace segexplain::harness
