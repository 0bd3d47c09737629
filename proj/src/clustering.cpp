#include "segexplain/clustering.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "segexplain/error.hpp"
#include "segexplain/parallel.hpp"
#include "segexplain/random.hpp"

namespace segexplain {
namespace {

bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
bool is_lower(char c) { return std::islower(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

double squared_distance(const Point& a, const Point& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double x = a[i] - b[i];
    d += x * x;
  }
  return d;
}

double norm(const Point& a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return std::sqrt(s);
}

std::size_t nearest(const Point& p, const std::vector<Point>& centroids, double* d2_out) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    double d = squared_distance(p, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  if (d2_out) *d2_out = best_d;
  return best;
}

std::vector<Point> seed_centroids(std::span<const Point> points, std::size_t k, Rng& rng) {
  const std::size_t n = points.size();
  std::vector<Point> centers;
  std::vector<bool> chosen(n, false);
  std::size_t first = rng.uniform_index(n);
  centers.push_back(points[first]);
  chosen[first] = true;
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(points[i], centers[0]);

  while (centers.size() < k) {
    double total = 0.0;
    for (double d : d2) total += d;
    std::size_t pick = n;
    if (total > 0.0) {
      double u = rng.uniform01() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (d2[i] > 0.0 && u < acc) {
          pick = i;
          break;
        }
      }
      if (pick == n) {
        for (std::size_t i = n; i-- > 0;) {
          if (d2[i] > 0.0) {
            pick = i;
            break;
          }
        }
      }
    } else {
      // Every point coincides with a centre: fall back to an unchosen index.
      std::vector<std::size_t> free;
      for (std::size_t i = 0; i < n; ++i) {
        if (!chosen[i]) free.push_back(i);
      }
      pick = free[rng.uniform_index(free.size())];
    }
    chosen[pick] = true;
    centers.push_back(points[pick]);
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(points[i], centers.back()));
    }
  }
  return centers;
}

}  // namespace

std::vector<std::string> name_tokens(std::string_view name) {
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) tokens.push_back(std::move(cur));
    cur.clear();
  };
  for (std::size_t i = 0; i < name.size(); ++i) {
    char c = name[i];
    if (!is_alnum(c)) {
      flush();
      continue;
    }
    if (!cur.empty()) {
      char prev = name[i - 1];
      bool next_lower = i + 1 < name.size() && is_lower(name[i + 1]);
      bool boundary = (is_lower(prev) && is_upper(c)) ||
                      (is_upper(prev) && is_upper(c) && next_lower) ||
                      (is_digit(prev) != is_digit(c));
      if (boundary) flush();
    }
    cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  flush();
  return tokens;
}

std::vector<double> SegmentVector::coordinates() const {
  std::vector<double> c;
  c.reserve(3 + kNameHashDim);
  c.push_back(begin);
  c.push_back(end);
  c.push_back(sign);
  c.insert(c.end(), name.begin(), name.end());
  return c;
}

SegmentVector vectorize(const Segment& segment, std::size_t k_bins, double name_weight) {
  SegmentVector v;
  const double k = static_cast<double>(k_bins);
  v.begin = static_cast<double>(segment.bins.lo) / k;
  v.end = static_cast<double>(segment.bins.hi) / k;
  v.sign = segment.t_value < 0.0 ? -1.0 : 1.0;
  for (const auto& tok : name_tokens(segment.feature.name)) {
    v.name[fnv1a(tok) % kNameHashDim] += 1.0;
  }
  double n = 0.0;
  for (double x : v.name) n += x * x;
  n = std::sqrt(n);
  if (n > 0.0) {
    for (double& x : v.name) x = x / n * name_weight;
  }
  return v;
}

KMeansResult kmeans_pp(std::span<const Point> points, std::size_t k, std::uint64_t seed) {
  if (k == 0) throw ConfigError("k-means needs k >= 1");
  if (k > points.size()) {
    throw ConfigError("k-means k = " + std::to_string(k) + " exceeds " +
                      std::to_string(points.size()) + " points");
  }
  const std::size_t n = points.size();
  const std::size_t dim = points[0].size();
  Rng rng(seed);

  KMeansResult res;
  res.k = k;
  res.centroids = seed_centroids(points, k, rng);
  res.assignments.assign(n, 0);

  auto assign = [&] {
    bool changed = false;
    double distortion = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double d2;
      std::size_t c = nearest(points[i], res.centroids, &d2);
      if (c != res.assignments[i]) changed = true;
      res.assignments[i] = c;
      distortion += d2;
    }
    res.distortion_history.push_back(distortion);
    return changed;
  };

  assign();
  for (res.iterations = 0; res.iterations < 100;) {
    std::vector<Point> sums(k, Point(dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      auto c = res.assignments[i];
      ++counts[c];
      for (std::size_t d = 0; d < dim; ++d) sums[c][d] += points[i][d];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;  // empty cluster keeps its centre
      for (std::size_t d = 0; d < dim; ++d) {
        res.centroids[c][d] = sums[c][d] / static_cast<double>(counts[c]);
      }
    }
    ++res.iterations;
    if (!assign()) break;
  }
  return res;
}

double mdl_cost(std::span<const Point> points, const KMeansResult& clustering) {
  double cost = 0.0;
  for (const auto& c : clustering.centroids) cost += std::log2(1.0 + norm(c));
  for (const auto& p : points) {
    double d2;
    nearest(p, clustering.centroids, &d2);
    cost += std::log2(1.0 + std::sqrt(d2));
  }
  return cost;
}

ModelSelection select_k_mdl(std::span<const Point> points, std::size_t k_lo, std::size_t k_hi,
                            std::uint64_t seed, std::size_t workers) {
  if (k_lo < 1 || k_lo > k_hi) throw ConfigError("empty k range");
  if (k_hi > points.size()) {
    throw ConfigError("k range upper bound " + std::to_string(k_hi) + " exceeds " +
                      std::to_string(points.size()) + " points");
  }
  const std::size_t count = k_hi - k_lo + 1;
  std::vector<KMeansResult> runs(count);
  std::vector<MdlCost> costs(count);
  parallel_for(count, workers, [&](std::size_t i) {
    std::size_t k = k_lo + i;
    runs[i] = kmeans_pp(points, k, derive_seed(seed, {k}));
    costs[i] = {k, mdl_cost(points, runs[i])};
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < count; ++i) {
    if (costs[i].cost < costs[best].cost) best = i;
  }
  return {std::move(runs[best]), std::move(costs)};
}

SegmentClustering cluster_segments(std::span<const Segment> segments, std::size_t k_bins,
                                   const ClusterParams& params) {
  if (segments.empty()) throw ConfigError("no segments to cluster");
  std::vector<Point> points;
  points.reserve(segments.size());
  for (const auto& s : segments) points.push_back(vectorize(s, k_bins, params.name_weight).coordinates());

  std::size_t k_hi = std::min(params.k_hi, segments.size());
  std::size_t k_lo = std::min(params.k_lo, k_hi);
  auto sel = select_k_mdl(points, k_lo, k_hi, params.seed, params.workers);

  SegmentClustering out;
  out.k = sel.best.k;
  out.assignments = std::move(sel.best.assignments);
  out.centroids = std::move(sel.best.centroids);
  out.mdl_costs = std::move(sel.costs);

  const std::size_t none = segments.size();
  std::vector<std::size_t> best(out.k, none);
  for (std::size_t i = 0; i < segments.size(); ++i) {
    auto& b = best[out.assignments[i]];
    if (b == none || ranks_before(segments[i], segments[b], params.ordering)) b = i;
  }
  for (auto b : best) {
    if (b != none) out.representatives.push_back(b);
  }
  return out;
}

std::vector<Segment> representatives(const SegmentClustering& clustering,
                                     std::span<const Segment> segments, std::size_t t,
                                     Ordering ordering) {
  std::vector<Segment> reps;
  for (auto idx : clustering.representatives) reps.push_back(segments[idx]);
  std::sort(reps.begin(), reps.end(),
            [ordering](const Segment& a, const Segment& b) { return ranks_before(a, b, ordering); });
  if (reps.size() > t) reps.resize(t);
  return reps;
}

}  // namespace segexplain
