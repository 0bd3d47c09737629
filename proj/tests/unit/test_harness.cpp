#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "segexplain/binning.hpp"
#include "segexplain/error.hpp"
#include "segexplain/harness.hpp"
#include "segexplain/ingest.hpp"
#include "segexplain/stats.hpp"

using namespace segexplain;
using namespace segexplain::harness;

namespace {

PlantSpec one_feature(std::size_t rows, double shift, std::uint64_t seed) {
  PlantSpec spec;
  spec.n_rows = rows;
  spec.n_features = 1;
  spec.effects = {PlantedEffect{0.3, 0.6, shift, 1.0}};
  spec.seed = seed;
  return spec;
}

std::set<std::size_t> bin_set(const BinRange& r) {
  std::set<std::size_t> out;
  for (std::size_t b = r.lo; b < r.hi; ++b) out.insert(b);
  return out;
}

// Exact t of a bin range, from scratch.
double exact_t(const Dataset& ds, const BinPartition& part, std::size_t f, BinRange r) {
  std::vector<double> in, out;
  const auto& col = ds.column(f);
  for (std::size_t e = 0; e < col.size(); ++e) {
    (r.contains(bin_of(part, ds.predictions()[col.rows[e]])) ? in : out).push_back(col.values[e]);
  }
  return two_sample_t(sample_stats(in), sample_stats(out));
}

}  // namespace

TEST_CASE("generator is deterministic and records truth") {
  auto a = generate(one_feature(500, 2.0, 3));
  auto b = generate(one_feature(500, 2.0, 3));
  auto c = generate(one_feature(500, 2.0, 4));
  CHECK(std::vector<double>(a.dataset.predictions().begin(), a.dataset.predictions().end()) ==
        std::vector<double>(b.dataset.predictions().begin(), b.dataset.predictions().end()));
  CHECK(a.dataset.column(0).values == b.dataset.column(0).values);
  CHECK(a.dataset.column(0).values != c.dataset.column(0).values);
  REQUIRE(a.truth.size() == 1);
  CHECK(a.truth[0].bins(100) == BinRange{30, 60});
  CHECK(a.dataset.feature(0).name == "f0");
  for (double p : a.dataset.predictions()) CHECK((p >= 0.0 && p < 1.0));

  CHECK(generate(one_feature(500, 0.0, 3)).truth.empty());
}

TEST_CASE("spec validation") {
  auto s = one_feature(100, 1.0, 0);
  s.effects[0]->quantile_lo = 0.7;
  CHECK_THROWS_AS(generate(s), ConfigError);
  s = one_feature(100, 1.0, 0);
  s.missing_rate = 1.0;
  CHECK_THROWS_AS(generate(s), ConfigError);
  s = one_feature(100, 1.0, 0);
  s.effects[0]->noise_sd = 0.0;
  CHECK_THROWS_AS(generate(s), ConfigError);
}

TEST_CASE("planted range beats every disjoint range of the same width") {
  auto data = generate(one_feature(100000, 3.0, 1));
  auto part = build_partition(data.dataset, 100, 10, 0);
  auto truth = data.truth[0].bins(100);
  const double planted = exact_t(data.dataset, part, 0, truth);
  const std::size_t w = truth.width();
  for (std::size_t lo = 0; lo + w <= 100; ++lo) {
    BinRange r{lo, lo + w};
    if (r.intersects(truth)) continue;
    CHECK(std::abs(exact_t(data.dataset, part, 0, r)) < std::abs(planted));
  }
  auto best = brute_force_best_segment(data.dataset, part, 0);
  CHECK(jaccard(bin_set(best.bins), bin_set(truth)) >= 0.9);
  CHECK(best.t_value == doctest::Approx(exact_t(data.dataset, part, 0, best.bins)).epsilon(1e-9));
}

TEST_CASE("oracle limits and tie-break") {
  auto data = generate(one_feature(5000, 1.0, 2));
  auto big = build_partition(data.dataset, 201, 10, 0);
  CHECK_THROWS_AS(brute_force_best_segment(data.dataset, big, 0), ConfigError);
  auto two = build_partition(data.dataset, 2, 10, 0);
  auto best = brute_force_best_segment(data.dataset, two, 0);
  CHECK(best.bins == BinRange{0, 1});
}

TEST_CASE("pure-noise maxima stay below 6") {
  std::size_t below = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    PlantSpec spec;
    spec.n_rows = 10000;
    spec.n_features = 1;
    spec.seed = 700 + s;
    auto data = generate(spec);
    auto part = build_partition(data.dataset, 20, 10, s);
    below += std::abs(brute_force_best_segment(data.dataset, part, 0).t_value) < 6.0;
  }
  CHECK(below >= 95);
}

TEST_CASE("heavy missingness degrades without failing") {
  auto s = one_feature(3000, 3.0, 5);
  s.missing_rate = 0.99;
  auto data = generate(s);
  PipelineParams p;
  p.bins = 100;
  p.min_bin_samples = 5;
  p.buffer = 1000;
  auto res = interpret(data.dataset, p);
  CHECK(res.features.size() == 1);
  for (const auto& seg : res.top) {
    CHECK(seg.in_stats.n >= 2);
    CHECK(seg.out_stats.n >= 2);
  }
}

TEST_CASE("jaccard and explanatory features") {
  CHECK(jaccard({1, 2, 3}, {2, 3, 4}) == doctest::Approx(0.5));
  CHECK(jaccard({}, {}) == 1.0);
  CHECK(jaccard({1}, {}) == 0.0);

  PipelineResult r;
  for (std::size_t f : {4, 2, 4, 7, 1}) {
    Segment s;
    s.feature.index = f;
    r.ranked.push_back(s);
  }
  CHECK(explanatory_features(r, 3) == std::set<std::size_t>{4, 2, 7});
}

TEST_CASE("stability is exact without sampling") {
  PlantSpec spec;
  spec.n_rows = 2000;
  spec.n_features = 8;
  spec.effects.resize(8);
  for (std::size_t j = 0; j < 8; ++j) spec.effects[j] = PlantedEffect{0.2, 0.5, 0.1 * static_cast<double>(j), 1.0};
  auto data = generate(spec);
  PipelineParams p;
  p.bins = 20;
  p.buffer = data.dataset.size();
  auto st = jaccard_stability(data.dataset, p, 4, 3);
  CHECK(st.mean_jaccard == 1.0);
  CHECK(st.feature_sets.size() == 4);
  CHECK_THROWS_AS(jaccard_stability(data.dataset, p, 1, 3), ConfigError);
}

TEST_CASE("dense csv round trip") {
  auto s = one_feature(50, 1.0, 9);
  s.missing_rate = 0.3;
  auto data = generate(s);
  auto path = std::filesystem::temp_directory_path() / "segexplain_harness_roundtrip.csv";
  {
    std::ofstream out(path);
    write_dense_csv(out, data.dataset);
  }
  IngestSpec spec;
  spec.path = path.string();
  auto back = load_dataset(spec);
  CHECK(back.size() == data.dataset.size());
  for (std::size_t r = 0; r < back.size(); ++r) {
    CHECK(back.predictions()[r] == data.dataset.predictions()[r]);
    CHECK(back.value(r, 0) == data.dataset.value(r, 0));
  }
  std::filesystem::remove(path);
}
