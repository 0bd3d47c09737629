#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "segexplain/binning.hpp"
#include "segexplain/error.hpp"
#include "segexplain/random.hpp"
#include "segexplain/stats.hpp"

using namespace segexplain;

namespace {

// Sort + index arithmetic, for inputs where the sample is the whole set.
std::vector<double> oracle_boundaries(std::vector<double> preds, std::size_t k, std::size_t m) {
  std::sort(preds.begin(), preds.end());
  std::vector<double> b{preds.front()};
  for (std::size_t i = 1; i < k; ++i) b.push_back(preds[2 * m * i]);
  b.push_back(preds.back());
  return b;
}

Dataset example_one() {
  std::vector<ScoredExample> rows = {
      {{{0, 1.0}, {1, 2.0}}, 1.0},
      {{{0, 3.0}, {1, 4.0}}, 2.0},
      {{{0, 1.0}, {1, 3.0}}, 3.0},
      {{{0, 5.0}, {1, 6.0}}, 4.0},
  };
  return Dataset::from_examples({{0, "f1"}, {1, "f2"}}, rows);
}

}  // namespace

TEST_CASE("partition examples") {
  std::vector<double> p = {10, 20, 30, 40, 50, 60};
  auto part = build_partition(p, 3, 1, 0);
  CHECK(part.boundaries == std::vector<double>{10, 30, 50, 60});
  CHECK(part.boundaries == oracle_boundaries(p, 3, 1));
  CHECK(part.sample_bin_counts == std::vector<std::size_t>{2, 2, 2});

  auto two = build_partition(std::vector<double>{1, 2, 3, 4}, 2, 1, 0);
  CHECK(two.boundaries == std::vector<double>{1, 3, 4});

  CHECK_THROWS_AS(build_partition(std::vector<double>{5, 5, 5, 5}, 2, 1, 0), DataError);
  CHECK_THROWS_AS(build_partition(p, 1, 1, 0), ConfigError);
  CHECK_THROWS_AS(build_partition(p, 3, 0, 0), ConfigError);
}

TEST_CASE("bin_of") {
  BinPartition part;
  part.boundaries = {10, 30, 50, 60};
  CHECK(bin_of(part, 10) == 0);
  CHECK(bin_of(part, 29.999) == 0);
  CHECK(bin_of(part, 30) == 1);
  CHECK(bin_of(part, 50) == 2);
  CHECK(bin_of(part, 60) == 2);
  CHECK_THROWS_AS(bin_of(part, 9), DataError);
  CHECK_THROWS_AS(bin_of(part, 60.5), DataError);
}

TEST_CASE("equal-count bins hold exactly 2m sampled elements without ties") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t k = 2 + rng.uniform_index(30), m = 1 + rng.uniform_index(8);
    std::vector<double> preds(2 * m * k + rng.uniform_index(500));
    for (double& v : preds) v = rng.normal();
    auto part = build_partition(preds, k, m, static_cast<std::uint64_t>(trial));
    REQUIRE(part.k() == k);
    for (auto c : part.sample_bin_counts) CHECK(c == 2 * m);
    CHECK(std::is_sorted(part.boundaries.begin(), part.boundaries.end()));
    CHECK(part.boundaries.front() == *std::min_element(preds.begin(), preds.end()));
    CHECK(part.boundaries.back() == *std::max_element(preds.begin(), preds.end()));
  }
}

TEST_CASE("per-value cap keeps boundaries strictly increasing under ties") {
  std::vector<double> preds;
  for (int v = 0; v < 10; ++v) {
    for (int rep = 0; rep < 50; ++rep) preds.push_back(v);
  }
  auto part = build_partition(preds, 4, 2, 9);
  REQUIRE(part.k() == 4);
  for (std::size_t i = 0; i + 1 < part.boundaries.size(); ++i) {
    CHECK(part.boundaries[i] < part.boundaries[i + 1]);
  }
  std::size_t total = 0;
  for (auto c : part.sample_bin_counts) total += c;
  CHECK(total == 2 * 2 * 4);
}

TEST_CASE("whole-dataset sampling is order independent") {
  // Ten values, six copies each: the cap admits exactly 2mk = 30.
  std::vector<double> preds(60);
  for (std::size_t i = 0; i < preds.size(); ++i) preds[i] = static_cast<double>(i % 10);
  auto a = build_partition(preds, 5, 3, 1);
  REQUIRE(a.k() == 5);
  std::reverse(preds.begin(), preds.end());
  auto b = build_partition(preds, 5, 3, 2);
  CHECK(a.boundaries == b.boundaries);
}

TEST_CASE("k shrinks when the sample is too small") {
  std::vector<double> preds;
  for (int i = 0; i < 45; ++i) preds.push_back(i);
  auto part = build_partition(preds, 20, 2, 0);
  CHECK(part.requested_k == 20);
  CHECK(part.k() == 11);  // floor(45 / 4)
  CHECK(part.boundaries == oracle_boundaries(preds, 11, 2));
  CHECK_THROWS_AS(build_partition(std::vector<double>{1, 2, 3}, 2, 1, 0), DataError);
}

TEST_CASE("dissimilarity matrix on the worked example") {
  auto ds = example_one();
  auto part = build_partition(ds, 2, 1, 0);
  REQUIRE(part.boundaries == std::vector<double>{1, 3, 4});
  auto mat = dissimilarity_matrix(ds, part, 10, 0);
  CHECK(mat.raw[0][0] == doctest::Approx(-1.0 / std::sqrt(5.0)).epsilon(1e-12));
  CHECK(mat.raw[0][1] == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-12));
  CHECK(mat.raw[0][0] == -mat.raw[0][1]);
  CHECK(mat.raw[1][0] == -mat.raw[1][1]);
  CHECK(mat.normalized[0][0] == doctest::Approx(-1.0));
  CHECK(mat.normalized[0][1] == doctest::Approx(1.0));
}

TEST_CASE("two-bin rows are antisymmetric") {
  Rng rng(8);
  std::vector<double> preds(400);
  FeatureColumn col;
  for (std::size_t r = 0; r < preds.size(); ++r) {
    preds[r] = rng.uniform01();
    col.rows.push_back(r);
    col.values.push_back(rng.normal() + preds[r]);
  }
  Dataset ds({{0, "x"}}, preds, {col});
  auto part = build_partition(ds, 2, 50, 1);
  auto mat = dissimilarity_matrix(ds, part, 1000, 4);
  CHECK(mat.raw[0][0] == -mat.raw[0][1]);
}

TEST_CASE("binary indicator of one bin peaks at that bin") {
  const std::size_t k = 100, per_bin = 200, star = 37;
  std::vector<double> preds(k * per_bin);
  for (std::size_t r = 0; r < preds.size(); ++r) preds[r] = static_cast<double>(r);
  Rng rng(21);
  FeatureColumn noisy;
  FeatureColumn exact;
  for (std::size_t r = 0; r < preds.size(); ++r) {
    bool in_star = r / per_bin == star;
    noisy.rows.push_back(r);
    noisy.values.push_back(rng.uniform01() < (in_star ? 0.9 : 0.1) ? 1.0 : 0.0);
    exact.rows.push_back(r);
    exact.values.push_back(in_star ? 1.0 : 0.0);
  }
  Dataset ds({{0, "noisy"}, {1, "exact"}}, preds, {noisy, exact});
  auto part = build_partition(ds, k, per_bin / 2, 0);
  REQUIRE(part.k() == k);
  auto mat = dissimilarity_matrix(ds, part, preds.size(), 0);

  // Brute-force exact t per bin.
  std::vector<double> oracle(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<double> in, out;
    for (std::size_t r = 0; r < preds.size(); ++r) (r / per_bin == i ? in : out).push_back(noisy.values[r]);
    oracle[i] = two_sample_t(sample_stats(in), sample_stats(out));
  }
  auto best = std::max_element(oracle.begin(), oracle.end()) - oracle.begin();
  REQUIRE(static_cast<std::size_t>(best) == star);
  for (std::size_t i = 0; i < k; ++i) {
    CHECK(mat.raw[0][i] == doctest::Approx(oracle[i]).epsilon(1e-9));
    if (i != star) CHECK(mat.raw[0][i] < mat.raw[0][star]);
  }
  // The literal 0/1 construction has zero variance on both sides of i*.
  CHECK_FALSE(mat.defined(1, star));
}

TEST_CASE("constant and sparse features") {
  std::vector<double> preds(200);
  FeatureColumn flat, sparse;
  for (std::size_t r = 0; r < preds.size(); ++r) {
    preds[r] = static_cast<double>(r);
    flat.rows.push_back(r);
    flat.values.push_back(2.0);
    if (r >= 100) {
      sparse.rows.push_back(r);
      sparse.values.push_back(static_cast<double>(r % 7));
    }
  }
  Dataset ds({{0, "flat"}, {1, "sparse"}}, preds, {flat, sparse});
  auto part = build_partition(ds, 4, 25, 0);
  auto mat = dissimilarity_matrix(ds, part, 1000, 0);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK_FALSE(mat.defined(0, i));
    CHECK(mat.normalized[0][i] == 0.0);
  }
  // Bins 0 and 1 have no sparse values: undefined, and 0 once normalised.
  CHECK_FALSE(mat.defined(1, 0));
  CHECK_FALSE(mat.defined(1, 1));
  CHECK(mat.normalized[1][0] == 0.0);
  CHECK(mat.defined(1, 2));

  std::ostringstream csv;
  write_matrix_csv(csv, ds, part, mat);
  CHECK(csv.str().rfind("feature,bin,label_lo,label_hi,t,normalized_t\nflat,0,0,50,,0\n", 0) == 0);
}

TEST_CASE("matrix rows do not depend on the worker count") {
  Rng rng(2);
  std::vector<double> preds(3000);
  std::vector<FeatureColumn> cols(4);
  std::vector<FeatureId> cat;
  for (std::size_t j = 0; j < 4; ++j) cat.push_back({j, "f" + std::to_string(j)});
  for (std::size_t r = 0; r < preds.size(); ++r) {
    preds[r] = rng.uniform01();
    for (auto& c : cols) {
      c.rows.push_back(r);
      c.values.push_back(rng.normal());
    }
  }
  Dataset ds(cat, preds, cols);
  auto part = build_partition(ds, 20, 10, 0);
  auto a = dissimilarity_matrix(ds, part, 100, 7, 1);
  auto b = dissimilarity_matrix(ds, part, 100, 7, 4);
  CHECK(a.normalized == b.normalized);
}
