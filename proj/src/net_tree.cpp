#include "dpkm/net_tree.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace dpkm {

TreeParams TreeParams::derive(int k, double xi, int dim, uint64_t n,
                              std::optional<double> a_override) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  if (!(xi > 0.0)) throw std::invalid_argument("xi must be positive");
  if (dim < 1) throw std::invalid_argument("dimension must be positive");
  if (n < 1) throw std::invalid_argument("n must be positive");
  TreeParams p;
  p.k = k;
  p.xi = xi;
  p.dim = dim;
  p.n = n;
  p.gamma = 1.0 / std::sqrt(static_cast<double>(dim));
  p.theta = 8.0 * std::sqrt((1.0 + 2.0 / xi) / xi);
  p.a = std::ceil(std::pow(1.0 + (2.0 + p.theta) / p.gamma, dim));
  if (a_override) {
    if (*a_override < 1.0) throw std::invalid_argument("a override must be >= 1");
    p.a = std::ceil(*a_override);
  }
  const double log2n = std::log2(static_cast<double>(n));
  p.big_gamma = std::max(1, static_cast<int>(std::ceil(log2n - 1e-12)));
  p.depth = std::max(1, static_cast<int>(std::ceil(0.5 * log2n - 1e-12)));
  const double branching =
      std::ceil(std::pow(1.0 + 2.0 / p.gamma, dim));
  // The root fans out to all level-1 members (a region of radius 1 + 2*rho(1)
  // = 4 * rho(1) around the origin), so its packing bound is wider than the
  // per-node branching bound used for every other expansion.
  const double root_fanout = std::ceil(std::pow(1.0 + 4.0 / p.gamma, dim));
  p.node_budget =
      branching * p.depth * p.big_gamma * k * p.a + root_fanout + 1.0;
  return p;
}

size_t compute_threshold(const std::vector<double>& sorted_freqs, int k,
                         double a, int big_gamma) {
  const size_t m = sorted_freqs.size();
  std::vector<double> prefix(m + 1, 0.0);
  for (size_t i = 0; i < m; ++i) {
    if (sorted_freqs[i] < 0.0)
      throw std::invalid_argument("frequencies must be nonnegative");
    if (i > 0 && sorted_freqs[i] < sorted_freqs[i - 1])
      throw std::invalid_argument("frequencies must be sorted ascending");
    prefix[i + 1] = prefix[i] + sorted_freqs[i];
  }
  const double ka = static_cast<double>(k) * a;
  const auto jmax = static_cast<uint64_t>(
      std::min(static_cast<double>(big_gamma),
               std::floor(static_cast<double>(m) / ka)));
  for (uint64_t j = 1; j <= jmax; ++j) {
    // Indices are in range: j <= m/(k*a) implies j*k*a <= m.
    const auto keep = static_cast<size_t>(static_cast<double>(m) - (j - 1) * ka);
    const auto keep_next = static_cast<size_t>(static_cast<double>(m) - j * ka);
    if (prefix[keep] <= 2.0 * prefix[keep_next])
      return static_cast<size_t>((j - 1) * ka);
  }
  return static_cast<size_t>(
      std::min(static_cast<double>(m), static_cast<double>(big_gamma) * ka));
}

const std::vector<int>& NetTree::level_nodes(int level) const {
  if (level < 0 || level >= static_cast<int>(by_level_.size()))
    throw std::invalid_argument("level out of range");
  return by_level_[level];
}

int NetTree::find(const NetPoint& p) const {
  auto it = index_.find(p);
  return it == index_.end() ? -1 : it->second;
}

size_t NetTree::leaf_count() const {
  size_t c = 0;
  for (const auto& n : nodes_) c += n.leaf ? 1 : 0;
  return c;
}

int NetTree::add_node(const NetPoint& p, double freq, int parent) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back(TreeNode{p, std::max(freq, 0.0), parent, true});
  if (static_cast<size_t>(p.level) >= by_level_.size())
    by_level_.resize(p.level + 1);
  by_level_[p.level].push_back(id);
  index_.emplace(p, id);
  return id;
}

NetTree build_tree(const NetFamily& f, const TreeParams& params,
                   const FrequencyOracle& oracle) {
  NetTree tree;
  const NetPoint root{0, std::vector<int64_t>(f.dim(), 0)};
  tree.add_node(root, oracle.frequency(root), -1);

  for (int level = 0; level < f.levels(); ++level) {
    if (level >= static_cast<int>(tree.by_level_.size())) break;
    std::vector<int> ids = tree.by_level_[level];
    // Ascending by clamped frequency, grid order breaking ties.
    std::sort(ids.begin(), ids.end(), [&](int a, int b) {
      if (tree.nodes_[a].freq != tree.nodes_[b].freq)
        return tree.nodes_[a].freq < tree.nodes_[b].freq;
      return tree.nodes_[a].point < tree.nodes_[b].point;
    });
    std::vector<double> freqs(ids.size());
    for (size_t i = 0; i < ids.size(); ++i) freqs[i] = tree.nodes_[ids[i]].freq;
    const size_t tau =
        compute_threshold(freqs, params.k, params.a, params.big_gamma);
    for (size_t j = 0; j < tau; ++j) {
      const int id = ids[ids.size() - 1 - j];
      tree.nodes_[id].leaf = false;
      const NetPoint point = tree.nodes_[id].point;
      for (const NetPoint& c : f.children(point))
        tree.add_node(c, oracle.frequency(c), id);
      if (static_cast<double>(tree.size()) > params.node_budget)
        throw std::runtime_error("net tree exceeded its node budget");
    }
  }
  return tree;
}

NetPoint representative_map(const NetTree& tree, const NetFamily& f, const Vec& x) {
  const std::vector<NetPoint> chain = representative_chain(f, x);
  int id = tree.find(chain[0]);
  if (id < 0) throw std::runtime_error("tree has no root");
  int level = 0;
  while (!tree.nodes()[id].leaf) {
    ++level;
    id = tree.find(chain[level]);
    if (id < 0) throw std::runtime_error("chain leaves the tree below an internal node");
  }
  return tree.nodes()[id].point;
}

WeightedPointSet representative_set(const NetTree& tree, const NetFamily& f) {
  WeightedPointSet out(f.dim());
  for (const auto& n : tree.nodes())
    if (n.leaf && n.freq > 0.0) out.add(f.coords(n.point), n.freq);
  return out;
}

double quantization_bound(const NetTree& tree, const NetFamily& f) {
  double total = 0.0;
  for (const auto& n : tree.nodes()) {
    if (!n.leaf) continue;
    const double r = f.rho(n.point.level);
    total += n.freq * 4.0 * r * r;
  }
  return total;
}

double opt_lower_bound(int level, const std::vector<double>& freqs, int k,
                       double a, int b, double theta) {
  if (b < 1) throw std::invalid_argument("b must be positive");
  if (static_cast<double>(freqs.size()) <
      static_cast<double>(k) * a + static_cast<double>(b))
    throw std::invalid_argument("need at least k*a + b frequencies");
  const double r = theta * std::ldexp(1.0, -level);
  return r * r * bottom_m(freqs, static_cast<size_t>(b));
}

std::string NetTree::to_json() const {
  nlohmann::json j;
  j["node_count"] = nodes_.size();
  j["leaf_count"] = leaf_count();
  j["depth"] = depth();
  j["nodes"] = nlohmann::json::array();
  for (const auto& n : nodes_) {
    nlohmann::json jn;
    jn["level"] = n.point.level;
    jn["grid"] = n.point.grid;
    jn["freq"] = n.freq;
    jn["parent"] = n.parent;
    jn["leaf"] = n.leaf;
    j["nodes"].push_back(jn);
  }
  return j.dump();
}

}  // namespace dpkm
