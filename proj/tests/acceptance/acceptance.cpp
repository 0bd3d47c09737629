// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "segexplain/binning.hpp"
#include "segexplain/changepoint.hpp"
#include "segexplain/cli.hpp"
#include "segexplain/clustering.hpp"
#include "segexplain/harness.hpp"
#include "segexplain/pipeline.hpp"
#include "segexplain/random.hpp"
#include "segexplain/stats.hpp"

using namespace segexplain;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;  // 0 = none
  std::function<Outcome()> body;
};

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::set<std::size_t> bin_set(const BinRange& r) {
  std::set<std::size_t> out;
  for (std::size_t b = r.lo; b < r.hi; ++b) out.insert(b);
  return out;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Outcome t_statistic() {
  Rng rng(1);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> a(2 + rng.uniform_index(30)), b(2 + rng.uniform_index(30));
    const double scale = std::exp(4.0 * rng.normal());
    for (double& x : a) x = scale * (rng.normal() + 0.5);
    for (double& x : b) x = scale * rng.normal();
    auto brute = [](const std::vector<double>& v, double& mean, double& var) {
      mean = 0.0;
      for (double x : v) mean += x;
      mean /= static_cast<double>(v.size());
      var = 0.0;
      for (double x : v) var += (x - mean) * (x - mean);
      var /= static_cast<double>(v.size() - 1);
    };
    double ma, va, mb, vb;
    brute(a, ma, va);
    brute(b, mb, vb);
    const double want = (ma - mb) / std::sqrt(va / a.size() + vb / b.size());
    worst = std::max(worst, rel_err(two_sample_t(sample_stats(a), sample_stats(b)), want));
  }
  return {worst <= 1e-9, fmt("max relative error %.3g over 1000 pairs (tolerance 1e-9)", worst)};
}

Outcome example_one() {
  std::vector<ScoredExample> rows = {
      {{{0, 1.0}, {1, 2.0}}, 1.0},
      {{{0, 3.0}, {1, 4.0}}, 2.0},
      {{{0, 1.0}, {1, 3.0}}, 3.0},
      {{{0, 5.0}, {1, 6.0}}, 4.0},
  };
  auto ds = Dataset::from_examples({{0, "f1"}, {1, "f2"}}, rows);
  auto part = build_partition(ds, 2, 1, 0);
  auto mat = dissimilarity_matrix(ds, part, 10, 0);
  const double want = 1.0 / std::sqrt(5.0);
  double e0 = std::abs(mat.raw[0][0] + want), e1 = std::abs(mat.raw[0][1] - want);
  bool ok = part.boundaries == std::vector<double>{1, 3, 4} && e0 <= 1e-12 && e1 <= 1e-12;
  return {ok, fmt("B(0)=%.15f B(1)=%.15f, max deviation %.2g (tolerance 1e-12)", mat.raw[0][0],
                  mat.raw[0][1], std::max(e0, e1))};
}

Outcome oracle_equivalence() {
  std::size_t checked = 0, matched = 0;
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    harness::PlantSpec spec;
    spec.n_rows = 4000;
    spec.n_features = 3;
    spec.seed = 100 + s;
    Rng rng(derive_seed(s, {3}));
    spec.effects.resize(3);
    for (std::size_t j = 0; j < 2; ++j) {
      double lo = 0.8 * rng.uniform01();
      spec.effects[j] = harness::PlantedEffect{lo, lo + 0.05 + 0.15 * rng.uniform01(), 0.2 + rng.uniform01(), 1.0};
    }
    spec.missing_rate = 0.1;
    auto data = harness::generate(spec);
    PipelineParams p;
    p.bins = 30;
    p.exhaustive = true;
    p.buffer = data.dataset.size();
    p.cluster = false;
    p.partition_seed = s;
    auto res = interpret(data.dataset, p);
    for (std::size_t f = 0; f < spec.n_features; ++f) {
      ++checked;
      auto oracle = harness::brute_force_best_segment(data.dataset, res.partition, f);
      const auto& segs = res.features[f].segments;
      if (segs.empty()) continue;
      double e = rel_err(segs[0].t_value, oracle.t_value);
      worst = std::max(worst, e);
      if (segs[0].bins == oracle.bins && e <= 1e-9) ++matched;
    }
  }
  return {matched == checked, fmt("%g/%g features match (bins exact, max t relative error %.2g)",
                                  static_cast<double>(matched), static_cast<double>(checked), worst)};
}

Outcome planted_recovery() {
  std::size_t hits = 0;
  double min_j = 1.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    harness::PlantSpec spec;
    spec.n_rows = 100000;
    spec.n_features = 3;
    spec.effects.resize(3);
    spec.effects[0] = harness::PlantedEffect{0.3, 0.6, 3.0, 1.0};
    spec.seed = 2000 + s;
    auto data = harness::generate(spec);
    PipelineParams p;
    p.bins = 100;
    p.min_bin_samples = 10;
    p.buffer = 10000;
    p.cluster = false;
    p.partition_seed = s;
    p.buffer_seed = s + 1;
    auto res = interpret(data.dataset, p);
    double j = 0.0;
    if (!res.top.empty() && res.top[0].feature.index == 0) {
      j = harness::jaccard(bin_set(res.top[0].bins), bin_set(data.truth[0].bins(res.partition.k())));
    }
    min_j = std::min(min_j, j);
    hits += j >= 0.8;
  }
  return {hits >= 19, fmt("%g/20 runs with Jaccard >= 0.8 (need 19), min Jaccard %.3f",
                          static_cast<double>(hits), min_j)};
}

Outcome cusum_localization() {
  CusumParams params;
  std::size_t located = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    Rng rng(3000 + s);
    std::vector<double> row(100);
    for (std::size_t i = 0; i < row.size(); ++i) row[i] = rng.normal() + (i >= 50 ? 3.0 : 0.0);
    auto cps = cusum(z_normalize(row), params);
    located += std::any_of(cps.begin(), cps.end(), [](std::size_t c) { return c >= 47 && c <= 53; });
  }
  std::size_t alarms = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    Rng rng(4000 + s);
    std::vector<double> row(1000);
    for (double& v : row) v = rng.normal();
    alarms += cusum(z_normalize(row), params).size();
  }
  const double mean_alarms = static_cast<double>(alarms) / 100.0;
  return {located >= 95 && mean_alarms <= 1.0,
          fmt("%g/100 located within +-3 (need 95); %.2f false alarms per noise row (limit 1)",
              static_cast<double>(located), mean_alarms)};
}

Outcome mdl_selection() {
  std::size_t hits = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    Rng rng(5000 + s);
    std::vector<Point> pts;
    for (std::size_t c = 0; c < 3; ++c) {
      for (std::size_t i = 0; i < 12; ++i) {
        Point p(3, 0.0);
        p[c] = 1.0;
        for (double& x : p) x += 0.01 * rng.normal();
        pts.push_back(p);
      }
    }
    hits += select_k_mdl(pts, 1, 6, s).best.k == 3;
  }
  std::size_t ones = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    Rng rng(6000 + s);
    Point v{rng.normal(), rng.normal(), rng.normal()};
    std::vector<Point> same(2 + s % 10, v);
    ones += select_k_mdl(same, 1, same.size(), s).best.k == 1;
  }
  return {hits >= 45 && ones == 50, fmt("blobs: k=3 in %g/50 (need 45); identical: k=1 in %g/50",
                                        static_cast<double>(hits), static_cast<double>(ones))};
}

Outcome stability() {
  harness::PlantSpec spec;
  spec.n_rows = 30000;
  spec.n_features = 60;
  spec.effects.resize(60);
  for (std::size_t j = 0; j < 60; ++j) {
    spec.effects[j] = harness::PlantedEffect{0.25, 0.55, 0.02 * static_cast<double>(j + 1), 1.0};
  }
  spec.seed = 7;
  auto data = harness::generate(spec);
  PipelineParams p;
  p.bins = 50;
  p.cluster = false;
  p.top = 60;
  std::vector<double> scores;
  std::string detail;
  for (std::size_t cap : {100, 1000, 10000}) {
    p.buffer = cap;
    auto st = harness::jaccard_stability(data.dataset, p, 10, 30);
    scores.push_back(st.mean_jaccard);
    detail += fmt("%g:%.3f ", static_cast<double>(cap), st.mean_jaccard);
  }
  bool ok = scores[0] <= scores[1] && scores[1] <= scores[2] && scores[2] >= 0.85;
  return {ok, "buffer:stability " + detail + "(non-decreasing, >= 0.85 at 10000)"};
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "segexplain_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);
  harness::PlantSpec spec;
  spec.n_rows = 20000;
  spec.n_features = 8;
  spec.effects.resize(8);
  spec.effects[2] = harness::PlantedEffect{0.1, 0.4, 1.0, 1.0};
  spec.effects[5] = harness::PlantedEffect{0.6, 0.9, -0.7, 1.0};
  spec.missing_rate = 0.05;
  spec.seed = 8;
  auto data = harness::generate(spec);
  {
    std::ofstream out(root / "data.csv");
    harness::write_dense_csv(out, data.dataset);
  }
  RunConfig c;
  c.input = (root / "data.csv").string();
  c.bins = 200;
  c.buffer = 2000;
  c.seed = 42;
  std::vector<std::string> reports;
  std::ostringstream err;
  for (std::int64_t workers : {1, 1, 2, 4}) {
    c.workers = workers;
    c.out = (root / ("out" + std::to_string(reports.size()))).string();
    if (run(c, err) != kExitOk) return {false, "run failed: " + err.str()};
    std::ifstream in(fs::path(c.out) / "report.json", std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    reports.push_back(ss.str());
  }
  fs::remove_all(root);
  bool same = std::all_of(reports.begin(), reports.end(), [&](const auto& r) { return r == reports[0]; });
  return {same, fmt("4 runs (workers 1,1,2,4), report.json %g bytes, byte-identical: ",
                    static_cast<double>(reports[0].size())) +
                    (same ? "yes" : "no")};
}

Outcome invariants() {
  Rng rng(9);
  double worst_mean = 0.0, worst_var = 0.0;
  for (int i = 0; i < 200; ++i) {
    std::vector<double> row(2 + rng.uniform_index(1000));
    const double scale = std::exp(3.0 * rng.normal()), shift = 100.0 * rng.normal();
    for (double& v : row) v = shift + scale * rng.normal();
    auto z = z_normalize(row);
    double mean = 0.0, var = 0.0;
    for (double v : z) mean += v;
    mean /= static_cast<double>(z.size());
    for (double v : z) var += (v - mean) * (v - mean);
    var /= static_cast<double>(z.size());
    worst_mean = std::max(worst_mean, std::abs(mean));
    worst_var = std::max(worst_var, std::abs(var - 1.0));
  }
  std::size_t bad_partitions = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    std::size_t k = 2 + rng.uniform_index(100), m = 1 + rng.uniform_index(10);
    std::vector<double> preds(2 * m * k + rng.uniform_index(5000));
    for (double& v : preds) v = rng.uniform01();
    auto part = build_partition(preds, k, m, s);
    bool ok = part.k() == k && std::all_of(part.sample_bin_counts.begin(), part.sample_bin_counts.end(),
                                           [&](std::size_t c) { return c == 2 * m; });
    bad_partitions += !ok;
  }
  bool ok = worst_mean <= 1e-12 && worst_var <= 1e-12 && bad_partitions == 0;
  return {ok, fmt("max |mean| %.2g, max |var-1| %.2g (tolerance 1e-12); %g/50 partitions off 2m", worst_mean,
                  worst_var, static_cast<double>(bad_partitions))};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "t-statistic correctness", 1.0, t_statistic},
      {2, "worked example reproduction", 0.0, example_one},
      {3, "oracle equivalence", 30.0, oracle_equivalence},
      {4, "planted-segment recovery", 60.0, planted_recovery},
      {5, "change-point localization", 0.0, cusum_localization},
      {6, "MDL k-selection", 0.0, mdl_selection},
      {7, "buffer-size stability", 300.0, stability},
      {8, "determinism", 0.0, determinism},
      {9, "normalization and binning invariants", 0.0, invariants},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0 && secs >= c.time_limit_s) {
      o.pass = false;
      o.detail += fmt(" [over time limit %.0f s]", c.time_limit_s);
    }
    std::printf("%s criterion %d (%s): %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
