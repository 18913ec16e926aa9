#include "dpkm/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dpkm/rng.hpp"

namespace dpkm {

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

double sq_dist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

WeightedPointSet::WeightedPointSet(size_t dim) : dim_(dim) {}

void WeightedPointSet::add(Vec p, double w) {
  if (p.size() != dim_) throw std::invalid_argument("point dimension mismatch");
  for (double c : p)
    if (!std::isfinite(c)) throw std::invalid_argument("non-finite coordinate");
  if (!(w >= 0.0) || !std::isfinite(w))
    throw std::invalid_argument("weight must be finite and nonnegative");
  total_ += w;
  auto it = index_.find(p);
  if (it != index_.end()) {
    entries_[it->second].second += w;
    return;
  }
  index_.emplace(p, entries_.size());
  entries_.emplace_back(std::move(p), w);
}

double WeightedPointSet::weight_of(const Vec& p) const {
  auto it = index_.find(p);
  return it == index_.end() ? 0.0 : entries_[it->second].second;
}

bool WeightedPointSet::contains(const Vec& p) const {
  return index_.find(p) != index_.end();
}

static double min_sq_dist(const Vec& p, const CenterSet& centers) {
  double best = std::numeric_limits<double>::infinity();
  for (const Vec& c : centers) best = std::min(best, sq_dist(p, c));
  return best;
}

double cost(const WeightedPointSet& s, const CenterSet& centers) {
  if (s.support_size() == 0) return 0.0;
  if (centers.empty()) throw std::invalid_argument("empty center set");
  for (const Vec& c : centers)
    if (c.size() != s.dim()) throw std::invalid_argument("center dimension mismatch");
  double total = 0.0;
  for (const auto& [p, w] : s.entries()) total += w * min_sq_dist(p, centers);
  return total;
}

double partition_cost(const WeightedPointSet& s, const Partition& assign,
                      const CenterSet& centers) {
  if (assign.size() != s.support_size())
    throw std::invalid_argument("partition size mismatch");
  double total = 0.0;
  const auto& entries = s.entries();
  for (size_t i = 0; i < entries.size(); ++i) {
    const int j = assign[i];
    if (j < 0 || j >= static_cast<int>(centers.size()))
      throw std::invalid_argument("partition index out of range");
    total += entries[i].second * sq_dist(entries[i].first, centers[j]);
  }
  return total;
}

std::pair<double, CenterSet> partition_opt_cost(const WeightedPointSet& s,
                                                const Partition& assign, int k) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  if (assign.size() != s.support_size())
    throw std::invalid_argument("partition size mismatch");
  CenterSet centers(k, Vec(s.dim(), 0.0));
  std::vector<double> mass(k, 0.0);
  const auto& entries = s.entries();
  for (size_t i = 0; i < entries.size(); ++i) {
    const int j = assign[i];
    if (j < 0 || j >= k) throw std::invalid_argument("partition index out of range");
    mass[j] += entries[i].second;
    for (size_t c = 0; c < s.dim(); ++c)
      centers[j][c] += entries[i].second * entries[i].first[c];
  }
  for (int j = 0; j < k; ++j) {
    if (mass[j] > 0.0)
      for (double& c : centers[j]) c /= mass[j];
    else
      std::fill(centers[j].begin(), centers[j].end(), 0.0);
  }
  return {partition_cost(s, assign, centers), centers};
}

Vec centroid(const WeightedPointSet& s) {
  Vec c(s.dim(), 0.0);
  if (s.total_weight() <= 0.0)
    throw std::invalid_argument("centroid of a zero-weight set");
  for (const auto& [p, w] : s.entries())
    for (size_t i = 0; i < s.dim(); ++i) c[i] += w * p[i];
  for (double& x : c) x /= s.total_weight();
  return c;
}

double bottom_m(std::vector<double> values, size_t m) {
  if (m > values.size()) throw std::invalid_argument("bottom_m: m exceeds size");
  if (m == 0) return 0.0;
  std::nth_element(values.begin(), values.begin() + (m - 1), values.end());
  double s = 0.0;
  for (size_t i = 0; i < m; ++i) s += values[i];
  return s;
}

Partition nearest_assignment(const WeightedPointSet& s, const CenterSet& centers) {
  if (centers.empty()) throw std::invalid_argument("empty center set");
  Partition out(s.support_size(), 0);
  const auto& entries = s.entries();
  for (size_t i = 0; i < entries.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (size_t j = 0; j < centers.size(); ++j) {
      const double d = sq_dist(entries[i].first, centers[j]);
      if (d < best) {
        best = d;
        arg = static_cast<int>(j);
      }
    }
    out[i] = arg;
  }
  return out;
}

// Weighted sampling by cumulative scan; deterministic in the rng stream.
static size_t sample_index(const std::vector<double>& weights, double total,
                           Rng& rng) {
  const double u = rng.uniform() * total;
  double acc = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return i;
  }
  for (size_t i = weights.size(); i-- > 0;)
    if (weights[i] > 0.0) return i;
  return 0;
}

CenterSet kmeans_pp(const WeightedPointSet& s, int k, uint64_t seed,
                    int lloyd_iters) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  if (s.support_size() == 0 || s.total_weight() <= 0.0)
    throw std::invalid_argument("k-means++ needs positive total weight");
  Rng rng(seed, "kmeans++");
  const auto& entries = s.entries();
  const size_t n = entries.size();

  std::vector<double> w(n);
  for (size_t i = 0; i < n; ++i) w[i] = entries[i].second;

  CenterSet centers;
  centers.push_back(entries[sample_index(w, s.total_weight(), rng)].first);
  std::vector<double> d2(n);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
      d2[i] = w[i] * min_sq_dist(entries[i].first, centers);
      total += d2[i];
    }
    if (total > 0.0)
      centers.push_back(entries[sample_index(d2, total, rng)].first);
    else
      centers.push_back(entries[sample_index(w, s.total_weight(), rng)].first);
  }

  for (int it = 0; it < lloyd_iters; ++it) {
    const Partition assign = nearest_assignment(s, centers);
    CenterSet next(centers.size(), Vec(s.dim(), 0.0));
    std::vector<double> mass(centers.size(), 0.0);
    for (size_t i = 0; i < n; ++i) {
      mass[assign[i]] += w[i];
      for (size_t c = 0; c < s.dim(); ++c)
        next[assign[i]][c] += w[i] * entries[i].first[c];
    }
    for (size_t j = 0; j < centers.size(); ++j) {
      if (mass[j] > 0.0) {
        for (double& x : next[j]) x /= mass[j];
        centers[j] = next[j];
      }
      // empty clusters keep their previous center
    }
  }
  return centers;
}

void for_each_subset(size_t n, int k, uint64_t cap,
                     const std::function<void(const std::vector<size_t>&)>& fn) {
  if (k < 0 || static_cast<size_t>(k) > n)
    throw std::invalid_argument("subset size out of range");
  double count = 1.0;
  for (int i = 0; i < k; ++i) count = count * double(n - i) / double(i + 1);
  if (count > static_cast<double>(cap))
    throw std::runtime_error("subset enumeration over budget");

  std::vector<size_t> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  if (k == 0) {
    fn(idx);
    return;
  }
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

double opt_bruteforce(const WeightedPointSet& s, int k,
                      const std::vector<Vec>& candidates, uint64_t max_subsets) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  if (candidates.size() < static_cast<size_t>(k))
    throw std::invalid_argument("not enough candidates");
  const auto& entries = s.entries();
  const size_t n = entries.size();
  // Precompute point-candidate distances once.
  std::vector<std::vector<double>> d2(n, std::vector<double>(candidates.size()));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < candidates.size(); ++j)
      d2[i][j] = sq_dist(entries[i].first, candidates[j]);

  double best = std::numeric_limits<double>::infinity();
  for_each_subset(candidates.size(), k, max_subsets,
                  [&](const std::vector<size_t>& subset) {
                    double total = 0.0;
                    for (size_t i = 0; i < n && total < best; ++i) {
                      double m = d2[i][subset[0]];
                      for (int j = 1; j < k; ++j) m = std::min(m, d2[i][subset[j]]);
                      total += entries[i].second * m;
                    }
                    best = std::min(best, total);
                  });
  return best;
}

}  // namespace dpkm
