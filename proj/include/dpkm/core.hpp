#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <utility>
#include <vector>

namespace dpkm {

using Vec = std::vector<double>;

constexpr double kNormTol = 1e-9;

double dot(const Vec& a, const Vec& b);
double norm(const Vec& a);
double sq_dist(const Vec& a, const Vec& b);

// Finite weighted point set with nonnegative weights; repeated adds of the
// same point accumulate weight. Entry order is first-insertion order and is
// what every weighted operation iterates in, so results are deterministic.
class WeightedPointSet {
 public:
  explicit WeightedPointSet(size_t dim);

  void add(Vec p, double w);
  size_t dim() const { return dim_; }
  size_t support_size() const { return entries_.size(); }
  double total_weight() const { return total_; }
  const std::vector<std::pair<Vec, double>>& entries() const { return entries_; }
  double weight_of(const Vec& p) const;
  bool contains(const Vec& p) const;

 private:
  size_t dim_;
  std::vector<std::pair<Vec, double>> entries_;
  std::map<Vec, size_t> index_;
  double total_ = 0.0;
};

using CenterSet = std::vector<Vec>;
// Cluster index in [0,k) per support entry of the set it partitions.
using Partition = std::vector<int>;

// Sum of w(x) * min_{c in C} ||x - c||^2.
double cost(const WeightedPointSet& s, const CenterSet& centers);

// Cost when each point pays its assigned center instead of the nearest.
double partition_cost(const WeightedPointSet& s, const Partition& assign,
                      const CenterSet& centers);

// Best centers for a fixed partition: per-cluster weighted centroids
// (origin for clusters of zero total weight). Returns {cost, centers}.
std::pair<double, CenterSet> partition_opt_cost(const WeightedPointSet& s,
                                                const Partition& assign, int k);

Vec centroid(const WeightedPointSet& s);

// Sum of the m smallest values (m == 0 -> 0; m > size throws).
double bottom_m(std::vector<double> values, size_t m);

// Nearest-center assignment, ties to the lowest center index.
Partition nearest_assignment(const WeightedPointSet& s, const CenterSet& centers);

// Weighted k-means++ seeding followed by `lloyd_iters` Lloyd steps.
// Deterministic in (s, k, seed). k may exceed the support size, in which
// case duplicate centers are returned.
CenterSet kmeans_pp(const WeightedPointSet& s, int k, uint64_t seed,
                    int lloyd_iters = 5);

// Exact k-means over all size-k subsets of `candidates`.
// Throws if C(|candidates|, k) exceeds `max_subsets`.
double opt_bruteforce(const WeightedPointSet& s, int k,
                      const std::vector<Vec>& candidates,
                      uint64_t max_subsets = 1000000);

// Enumeration helper shared by the brute-force searches: calls fn(subset)
// for every size-k index subset of [0, n). Throws if the count exceeds cap.
void for_each_subset(size_t n, int k, uint64_t cap,
                     const std::function<void(const std::vector<size_t>&)>& fn);

}  // namespace dpkm
