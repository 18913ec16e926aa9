#include "dpkm/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "dpkm/shuffle.hpp"

namespace dpkm {

void Dataset::validate() const {
  if (dim < 1) throw std::invalid_argument("dataset dimension must be positive");
  for (const Vec& r : rows) {
    if (r.size() != static_cast<size_t>(dim))
      throw std::invalid_argument("row dimension mismatch");
    for (double c : r)
      if (!std::isfinite(c)) throw std::invalid_argument("non-finite coordinate");
    if (norm(r) > 1.0 + kNormTol)
      throw std::invalid_argument("row outside the unit ball");
  }
}

WeightedPointSet Dataset::to_weighted() const {
  WeightedPointSet s(dim);
  for (const Vec& r : rows) s.add(r, 1.0);
  return s;
}

static std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Dataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Dataset d;
  std::string line;
  bool first = true;
  bool weighted = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (first) {
      first = false;
      // Header detection: any cell that does not parse as a number.
      bool header = false;
      for (const auto& c : cells) {
        size_t pos = 0;
        try {
          std::stod(c, &pos);
        } catch (...) {
          header = true;
        }
        if (pos != c.size()) header = true;
      }
      if (header) {
        weighted = !cells.empty() && cells.back() == "weight";
        d.dim = static_cast<int>(cells.size()) - (weighted ? 1 : 0);
        continue;
      }
      d.dim = static_cast<int>(cells.size());
    }
    const size_t expect = static_cast<size_t>(d.dim) + (weighted ? 1 : 0);
    if (cells.size() != expect) throw std::runtime_error("ragged CSV row");
    Vec row(d.dim);
    for (int i = 0; i < d.dim; ++i) row[i] = std::stod(cells[i]);
    // A weight column repeats the row that many times (integer weights).
    long long copies = 1;
    if (weighted) copies = std::llround(std::stod(cells[d.dim]));
    if (copies < 0) throw std::runtime_error("negative weight in CSV");
    for (long long i = 0; i < copies; ++i) d.rows.push_back(row);
  }
  if (d.rows.empty()) throw std::runtime_error("empty dataset: " + path);
  d.validate();
  return d;
}

void save_csv(const Dataset& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (int i = 0; i < d.dim; ++i) out << (i ? ",x" : "x") << i;
  out << "\n";
  for (const Vec& r : d.rows) {
    for (int i = 0; i < d.dim; ++i) {
      if (i) out << ',';
      out << format_double(r[i]);
    }
    out << "\n";
  }
}

PipelineConfig PipelineConfig::derive(uint64_t n, int dim, int k, double eps,
                                      double delta, double alpha, double beta,
                                      uint64_t seed,
                                      std::optional<int> dprime_override,
                                      std::optional<double> a_override) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (dim < 1) throw std::invalid_argument("dimension must be positive");
  if (k < 1) throw std::invalid_argument("k must be positive");
  if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(delta > 0.0) || delta >= 1.0)
    throw std::invalid_argument("delta must be in (0,1)");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(beta > 0.0) || beta >= 1.0)
    throw std::invalid_argument("beta must be in (0,1)");

  PipelineConfig c;
  c.n = n;
  c.dim = dim;
  c.k = k;
  c.epsilon = eps;
  c.delta = delta;
  c.alpha = alpha;
  c.beta = beta;
  c.seed = seed;
  c.dprime_override = dprime_override;
  c.a_override = a_override;
  c.xi = 0.1 * alpha;
  c.alpha_t = 0.1 * alpha;
  c.beta_t = 0.1 * beta;

  if (dprime_override) {
    if (*dprime_override < 1 || *dprime_override > dim)
      throw std::invalid_argument("projection dimension override out of range");
    c.dprime = *dprime_override;
  } else {
    const double formula =
        std::ceil(8.0 * std::log2(static_cast<double>(k) / c.beta_t) /
                  (c.alpha_t * c.alpha_t));
    int derived = std::min<double>(dim, std::max(4.0, formula));
    c.dprime = std::min(derived, std::max(1, c.dprime_cap));
    c.dprime = std::min(c.dprime, dim);
  }
  const double ln_ratio = std::log(static_cast<double>(n) / beta);
  if (!(ln_ratio > 0.0)) throw std::invalid_argument("n/beta must exceed 1");
  c.lambda = std::sqrt(0.01 / ln_ratio * static_cast<double>(dim) /
                       static_cast<double>(c.dprime));
  c.eps_hist = eps / 2.0;
  c.eps_vec = eps / 2.0;
  c.tree = TreeParams::derive(k, c.xi, c.dprime, n, a_override);
  return c;
}

Projection Projection::make(int dim, int dprime, Rng& rng) {
  if (dprime < 1 || dprime > dim)
    throw std::invalid_argument("projection dimension out of range");
  Projection p;
  p.rows.resize(dprime);
  for (int r = 0; r < dprime; ++r) {
    while (true) {
      Vec v(dim);
      for (double& c : v) c = rng.normal();
      // Gram-Schmidt against previous rows, twice for stability.
      for (int pass = 0; pass < 2; ++pass)
        for (int j = 0; j < r; ++j) {
          const double d = dot(v, p.rows[j]);
          for (int i = 0; i < dim; ++i) v[i] -= d * p.rows[j][i];
        }
      const double nv = norm(v);
      if (nv > 1e-8) {
        for (double& c : v) c /= nv;
        p.rows[r] = std::move(v);
        break;
      }
    }
  }
  return p;
}

Vec Projection::apply(const Vec& x) const {
  Vec out(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) out[i] = dot(rows[i], x);
  return out;
}

Vec rescale(const Projection& proj, double lambda, const Vec& x) {
  Vec y = proj.apply(x);
  if (norm(y) > 1.0 / lambda) return Vec(y.size(), 0.0);
  for (double& c : y) c *= lambda;
  return y;
}

static std::vector<std::string> chain_buckets(const NetFamily& family,
                                              const Vec& xprime) {
  const auto chain = representative_chain(family, xprime);
  std::vector<std::string> keys;
  keys.reserve(family.levels());
  for (int t = 1; t <= family.levels(); ++t) keys.push_back(net_point_key(chain[t]));
  return keys;
}

EncodedUser encode_user(const Vec& x, uint64_t user, const PipelineConfig& cfg,
                        const Projection& proj, const NetFamily& family,
                        const SharedRandomness& z, Rng& rng) {
  const Vec xprime = rescale(proj, cfg.lambda, x);
  const auto buckets = chain_buckets(family, xprime);
  EncodedUser e;
  e.hist = multi_hist_encode(buckets, user, cfg.eps_hist, z, rng);
  // The vector payload is the original point; clipped users still report it.
  e.vec = multi_vector_encode(buckets, x, user, cfg.eps_vec, z, rng);
  return e;
}

ExactOracles::ExactOracles(const std::vector<Vec>& originals,
                           const std::vector<std::vector<NetPoint>>& chains) {
  if (originals.size() != chains.size())
    throw std::invalid_argument("chains/originals size mismatch");
  dim_ = originals.empty() ? 0 : static_cast<int>(originals[0].size());
  for (size_t i = 0; i < chains.size(); ++i) {
    for (const NetPoint& p : chains[i]) {
      freq_[p] += 1.0;
      auto [it, fresh] = sums_.try_emplace(p, Vec(dim_, 0.0));
      for (int c = 0; c < dim_; ++c) it->second[c] += originals[i][c];
    }
  }
}

double ExactOracles::frequency(const NetPoint& p) const {
  auto it = freq_.find(p);
  return it == freq_.end() ? 0.0 : it->second;
}

Vec ExactOracles::vector_sum(const NetPoint& p) const {
  auto it = sums_.find(p);
  return it == sums_.end() ? Vec(dim_, 0.0) : it->second;
}

namespace {

class LocalHistOracle : public FrequencyOracle {
 public:
  LocalHistOracle(const std::vector<std::vector<int8_t>>& reports, size_t slots,
                  double eps, const SharedRandomness& z)
      : reports_(reports), slots_(slots), eps_(eps), z_(z) {}
  double frequency(const NetPoint& p) const override {
    return multi_hist_decode(net_point_key(p), reports_, slots_, eps_, z_);
  }

 private:
  const std::vector<std::vector<int8_t>>& reports_;
  size_t slots_;
  double eps_;
  const SharedRandomness& z_;
};

class LocalVecOracle : public VectorSumOracle {
 public:
  LocalVecOracle(const std::vector<std::vector<Vec>>& reports, size_t slots,
                 const SharedRandomness& z)
      : reports_(reports), slots_(slots), z_(z) {}
  Vec vector_sum(const NetPoint& p) const override {
    return multi_vector_decode(net_point_key(p), reports_, slots_, z_);
  }

 private:
  const std::vector<std::vector<Vec>>& reports_;
  size_t slots_;
  const SharedRandomness& z_;
};

// Stand-in for a shuffle-model frequency oracle: exact counts plus seeded
// per-bucket discrete Gaussian noise at the central-model rate.
class NoisyHistOracle : public FrequencyOracle {
 public:
  NoisyHistOracle(const ExactOracles& exact, double sigma, uint64_t seed)
      : exact_(exact), sigma_(sigma), seed_(seed) {}
  double frequency(const NetPoint& p) const override {
    Rng rng(seed_, "hist-noise:" + net_point_key(p));
    return exact_.frequency(p) +
           static_cast<double>(discrete_gaussian(sigma_, rng));
  }

 private:
  const ExactOracles& exact_;
  double sigma_;
  uint64_t seed_;
};

class ShuffleVecOracle : public VectorSumOracle {
 public:
  ShuffleVecOracle(std::vector<ShuffleAccumulator> acc, const SharedRandomness& z,
                   int dim)
      : acc_(std::move(acc)), z_(z), dim_(dim) {}
  Vec vector_sum(const NetPoint& p) const override {
    if (p.level < 1 || static_cast<size_t>(p.level) > acc_.size())
      return Vec(dim_, 0.0);
    return acc_[p.level - 1].decode(net_point_key(p), z_);
  }

 private:
  std::vector<ShuffleAccumulator> acc_;
  const SharedRandomness& z_;
  int dim_;
};

}  // namespace

ClusteringResult decode_pipeline(const PipelineConfig& cfg, const NetFamily& family,
                                 const FrequencyOracle& freq,
                                 const VectorSumOracle& vec, const Dataset& data) {
  const NetTree tree = build_tree(family, cfg.tree, freq);

  // Leaves with positive estimated frequency form the representative set.
  std::vector<const TreeNode*> leaves;
  WeightedPointSet rep(cfg.dprime);
  for (const auto& n : tree.nodes())
    if (n.leaf && n.freq > 0.0) {
      leaves.push_back(&n);
      rep.add(family.coords(n.point), n.freq);
    }

  CenterSet centers(cfg.k, Vec(cfg.dim, 0.0));
  std::vector<double> counts(cfg.k, 0.0);
  if (!leaves.empty()) {
    const CenterSet net_centers =
        kmeans_pp(rep, cfg.k, hash64(cfg.seed ^ 0x636c7573ull), 5);
    std::vector<Vec> sums(cfg.k, Vec(cfg.dim, 0.0));
    for (const TreeNode* leaf : leaves) {
      const Vec z = family.coords(leaf->point);
      double best = std::numeric_limits<double>::infinity();
      int arg = 0;
      for (int j = 0; j < cfg.k; ++j) {
        const double d = sq_dist(z, net_centers[j]);
        if (d < best) {
          best = d;
          arg = j;
        }
      }
      counts[arg] += leaf->freq;
      const Vec v = vec.vector_sum(leaf->point);
      for (int c = 0; c < cfg.dim; ++c) sums[arg][c] += v[c];
    }
    for (int j = 0; j < cfg.k; ++j) {
      const double denom = std::max(1.0, counts[j]);
      for (int c = 0; c < cfg.dim; ++c) centers[j][c] = sums[j][c] / denom;
      const double nc = norm(centers[j]);
      if (nc > 1.0)
        for (double& c : centers[j]) c /= nc;
    }
  }

  ClusteringResult res;
  res.centers = centers;
  res.objective = cost(data.to_weighted(), centers);
  res.normalized_objective = res.objective / static_cast<double>(data.rows.size());

  nlohmann::json diag;
  diag["tree_nodes"] = tree.size();
  diag["tree_leaves"] = tree.leaf_count();
  diag["tree_depth"] = tree.depth();
  diag["positive_leaves"] = leaves.size();
  diag["cluster_counts"] = counts;
  diag["quantization_bound"] = quantization_bound(tree, family);
  diag["dprime"] = cfg.dprime;
  diag["lambda"] = cfg.lambda;
  diag["tree_a"] = cfg.tree.a;
  diag["node_budget"] = cfg.tree.node_budget;
  res.diagnostics_json = diag.dump();
  return res;
}

ClusteringResult run_pipeline(const Dataset& data, const PipelineConfig& cfg,
                              Model model) {
  data.validate();
  if (data.rows.size() != cfg.n)
    throw std::invalid_argument("config n does not match the dataset");
  if (data.dim != cfg.dim)
    throw std::invalid_argument("config dimension does not match the dataset");

  const SharedRandomness z(hash64(cfg.seed ^ 0x7368617265ull));
  Rng proj_rng(cfg.seed, "projection");
  const Projection proj = Projection::make(cfg.dim, cfg.dprime, proj_rng);
  const NetFamily family(cfg.dprime, cfg.tree.depth);
  const size_t slots = family.levels();
  const uint64_t n = data.rows.size();

  // Chains are needed by the exact oracles and the shuffle encoders.
  auto make_chains = [&]() {
    std::vector<std::vector<NetPoint>> chains(n);
    for (uint64_t i = 0; i < n; ++i)
      chains[i] = representative_chain(
          family, rescale(proj, cfg.lambda, data.rows[i]));
    return chains;
  };

  switch (model) {
    case Model::kExact: {
      const ExactOracles oracles(data.rows, make_chains());
      return decode_pipeline(cfg, family, oracles, oracles, data);
    }
    case Model::kLocal: {
      std::vector<std::vector<int8_t>> hist(n);
      std::vector<std::vector<Vec>> vecs(n);
      for (uint64_t i = 0; i < n; ++i) {
        Rng rng(hash64(cfg.seed ^ (0x75736572ull + i)), "user");
        EncodedUser e = encode_user(data.rows[i], i, cfg, proj, family, z, rng);
        hist[i] = std::move(e.hist);
        vecs[i] = std::move(e.vec);
      }
      const LocalHistOracle freq(hist, slots, cfg.eps_hist, z);
      const LocalVecOracle vec(vecs, slots, z);
      return decode_pipeline(cfg, family, freq, vec, data);
    }
    case Model::kShuffle: {
      const auto chains = make_chains();
      const ExactOracles exact(data.rows, chains);
      const double slot_eps = cfg.eps_hist / static_cast<double>(slots);
      const double slot_delta = 0.5 * cfg.delta / static_cast<double>(slots);
      const double sigma_h = 20.0 * std::log(2.0 / slot_delta) / slot_eps;
      const NoisyHistOracle freq(exact, sigma_h, hash64(cfg.seed ^ 0x686973ull));

      const ShuffleConfig scfg = ShuffleConfig::derive(
          n, cfg.dim, cfg.eps_vec / static_cast<double>(slots), slot_delta,
          cfg.beta);
      std::vector<ShuffleAccumulator> acc(slots, ShuffleAccumulator(scfg));
      for (uint64_t i = 0; i < n; ++i) {
        Rng rng(hash64(cfg.seed ^ (0x73687566ull + i)), "shuffle-user");
        for (size_t t = 0; t < slots; ++t)
          acc[t].add(shuffle_vector_encode(data.rows[i],
                                           net_point_key(chains[i][t + 1]), i,
                                           scfg, z, rng));
      }
      const ShuffleVecOracle vec(std::move(acc), z, cfg.dim);
      return decode_pipeline(cfg, family, freq, vec, data);
    }
  }
  throw std::logic_error("unknown model");
}

}  // namespace dpkm
