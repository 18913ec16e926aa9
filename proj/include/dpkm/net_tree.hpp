#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dpkm/core.hpp"
#include "dpkm/nets.hpp"

namespace dpkm {

// Answers approximate frequencies for net points (number of users whose
// representative chain passes through the point).
class FrequencyOracle {
 public:
  virtual ~FrequencyOracle() = default;
  virtual double frequency(const NetPoint& p) const = 0;
};

// Parameters of the tree construction. theta and a follow the analysis
// exactly; `a` in particular is exponential in the dimension, so an
// override is available for practical runs (recorded in the result echo).
struct TreeParams {
  int k = 1;
  double xi = 0.5;
  int dim = 1;
  uint64_t n = 1;
  double gamma = 1.0;   // realized packing ratio of the net family
  double theta = 0.0;   // 8 * sqrt((1 + 2/xi) / xi)
  double a = 1.0;       // ceil((1 + (2 + theta)/gamma)^dim) unless overridden
  int big_gamma = 1;    // ceil(log2 n)
  int depth = 1;        // ceil(0.5 * log2 n)
  double node_budget = 0.0;  // branching_bound * depth * big_gamma * k * a + 1

  static TreeParams derive(int k, double xi, int dim, uint64_t n,
                           std::optional<double> a_override = std::nullopt);
};

struct TreeNode {
  NetPoint point;
  double freq = 0.0;  // clamped >= 0
  int parent = -1;
  bool leaf = true;
};

class NetTree {
 public:
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const std::vector<int>& level_nodes(int level) const;
  int depth() const { return static_cast<int>(by_level_.size()) - 1; }
  int find(const NetPoint& p) const;  // -1 if absent
  size_t size() const { return nodes_.size(); }
  size_t leaf_count() const;

  std::string to_json() const;

 private:
  friend NetTree build_tree(const NetFamily&, const TreeParams&,
                            const FrequencyOracle&);
  int add_node(const NetPoint& p, double freq, int parent);

  std::vector<TreeNode> nodes_;
  std::vector<std::vector<int>> by_level_;
  std::map<NetPoint, int> index_;
};

// Number of level nodes to expand, given the node frequencies sorted in
// ascending order. Implements the doubling scan: for j in
// [min(big_gamma, floor(m/(k*a)))], return (j-1)*k*a at the first j with
// sum_{i <= m-(j-1)ka} f <= 2 * sum_{i <= m-jka} f; otherwise
// min(m, big_gamma*k*a).
size_t compute_threshold(const std::vector<double>& sorted_freqs, int k,
                         double a, int big_gamma);

// Level-by-level construction: at each level sort nodes by frequency and
// expand the top compute_threshold() of them; all children of an expanded
// node enter the next level. Total node count is asserted against
// params.node_budget.
NetTree build_tree(const NetFamily& f, const TreeParams& params,
                   const FrequencyOracle& oracle);

// Deepest element of x's representative chain that is a leaf of the tree.
NetPoint representative_map(const NetTree& tree, const NetFamily& f, const Vec& x);

// Leaves with their clamped frequencies as a weighted set in net space
// (exact-zero-weight leaves are dropped; identical as a weighted measure).
WeightedPointSet representative_set(const NetTree& tree, const NetFamily& f);

// Movement-cost bound of the representative map: sum over users of
// 4 * rho(leaf level)^2, computed from the tree's clamped frequencies.
double quantization_bound(const NetTree& tree, const NetFamily& f);

// Lower bound on the optimal k-means cost from one tree level: with at
// least k*a + b nodes carrying exact frequencies, opt >= r^2 * bottom_b(f),
// r = theta * 2^-level.
double opt_lower_bound(int level, const std::vector<double>& freqs, int k,
                       double a, int b, double theta);

}  // namespace dpkm
