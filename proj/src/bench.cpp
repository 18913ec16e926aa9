#include "dpkm/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "dpkm/oracles.hpp"
#include "dpkm/rng.hpp"

namespace dpkm {

Dataset generate_mixture(const MixtureConfig& cfg) {
  if (cfg.n < 1 || cfg.dim < 1 || cfg.k < 1)
    throw std::invalid_argument("bad mixture parameters");
  if (!(cfg.r > 2.0)) throw std::invalid_argument("separation r must exceed 2");
  Rng rng(cfg.seed, "mixture");
  const double radius = 1.0 - 2.0 / cfg.r;
  const double noise = (1.0 / cfg.r) / std::sqrt(static_cast<double>(cfg.dim));

  std::vector<Vec> centers(cfg.k);
  for (Vec& c : centers) {
    c.resize(cfg.dim);
    double nc;
    do {
      for (double& v : c) v = rng.normal();
      nc = norm(c);
    } while (nc == 0.0);
    for (double& v : c) v *= radius / nc;
  }

  Dataset d;
  d.dim = cfg.dim;
  d.rows.resize(cfg.n);
  for (uint64_t i = 0; i < cfg.n; ++i) {
    const Vec& c = centers[rng.below(cfg.k)];
    Vec row(cfg.dim);
    for (int j = 0; j < cfg.dim; ++j) row[j] = c[j] + noise * rng.normal();
    const double nr = norm(row);
    if (nr > 1.0)
      for (double& v : row) v /= nr;
    d.rows[i] = std::move(row);
  }
  return d;
}

double trivial_baseline(const Dataset& d) {
  double s = 0.0;
  for (const Vec& r : d.rows) s += dot(r, r);
  return s / static_cast<double>(d.rows.size());
}

double naive_baseline(const Dataset& d, int k, double eps, double delta,
                      uint64_t seed) {
  if (!(delta > 0.0) || delta >= 1.0)
    throw std::invalid_argument("naive baseline needs delta in (0,1)");
  Rng rng(seed, "naive-baseline");
  const double sigma = 2.0 * std::sqrt(2.0 * std::log(1.25 / delta)) / eps;
  WeightedPointSet noisy(d.dim);
  for (const Vec& r : d.rows) {
    Vec p(d.dim);
    for (int i = 0; i < d.dim; ++i) p[i] = r[i] + sigma * rng.normal();
    noisy.add(std::move(p), 1.0);
  }
  CenterSet centers = kmeans_pp(noisy, k, hash64(seed ^ 0x6e61697665ull), 5);
  // Data lives in the unit ball, so projecting centers into it only helps.
  for (Vec& c : centers) {
    const double nc = norm(c);
    if (nc > 1.0)
      for (double& v : c) v /= nc;
  }
  return cost(d.to_weighted(), centers) / static_cast<double>(d.rows.size());
}

int lsh_depth(int k) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  int bits = 0;
  while ((1 << bits) < k) ++bits;
  return bits + 3;
}

std::vector<std::vector<int8_t>> simhash_signatures(const Dataset& d, int depth,
                                                    uint64_t seed) {
  if (depth < 1) throw std::invalid_argument("depth must be positive");
  Rng rng(seed, "simhash");
  std::vector<Vec> normals(depth, Vec(d.dim));
  for (Vec& h : normals)
    for (double& c : h) c = rng.normal();
  std::vector<std::vector<int8_t>> sigs(d.rows.size(),
                                        std::vector<int8_t>(depth));
  for (size_t i = 0; i < d.rows.size(); ++i)
    for (int t = 0; t < depth; ++t)
      sigs[i][t] = dot(d.rows[i], normals[t]) >= 0.0 ? 1 : 0;
  return sigs;
}

static std::string sig_key(const std::vector<int8_t>& sig, int level) {
  std::string key = "H" + std::to_string(level) + ":";
  for (int t = 0; t < level; ++t) key.push_back(sig[t] ? '1' : '0');
  return key;
}

ClusteringResult lsh_private_kmeans(const Dataset& d, const LshConfig& cfg) {
  d.validate();
  const auto n = static_cast<uint64_t>(d.rows.size());
  const int T = cfg.depth > 0 ? cfg.depth : lsh_depth(cfg.k);
  if (!(cfg.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const double eps_hist = cfg.hist_frac * cfg.epsilon;
  const double eps_vec = (1.0 - cfg.hist_frac) * cfg.epsilon;
  const auto sigs = simhash_signatures(d, T, hash64(cfg.seed ^ 0x73696dull));
  const SharedRandomness z(hash64(cfg.seed ^ 0x6c7368ull));

  // With level splitting each user reports at exactly one level with the
  // whole budget; estimates are rescaled by T. Otherwise every user reports
  // every level at budget/T through the multi-slot encoders.
  std::vector<std::vector<uint64_t>> groups(T + 1);
  std::vector<std::vector<int8_t>> hist_reports(n);
  std::vector<std::vector<Vec>> vec_reports(n);
  Rng split_rng(cfg.seed, "level-split");
  if (!cfg.exact) {
    if (cfg.split_levels) {
      for (uint64_t i = 0; i < n; ++i)
        groups[1 + split_rng.below(T)].push_back(i);
      for (int t = 1; t <= T; ++t)
        for (uint64_t i : groups[t]) {
          Rng rng(hash64(cfg.seed ^ (0x6c75ull + i)), "lsh-user");
          const std::string key = sig_key(sigs[i], t);
          hist_reports[i] = {hist_encode(key, i, eps_hist, z, rng)};
          vec_reports[i] = {vector_sum_encode(key, d.rows[i], i, eps_vec, z, rng)};
        }
    } else {
      for (uint64_t i = 0; i < n; ++i) {
        Rng rng(hash64(cfg.seed ^ (0x6c75ull + i)), "lsh-user");
        std::vector<std::string> keys(T);
        for (int t = 1; t <= T; ++t) keys[t - 1] = sig_key(sigs[i], t);
        hist_reports[i] = multi_hist_encode(keys, i, eps_hist, z, rng);
        vec_reports[i] = multi_vector_encode(keys, d.rows[i], i, eps_vec, z, rng);
      }
    }
  }

  const double scale_h =
      (std::exp(eps_hist) + 1.0) / (std::exp(eps_hist) - 1.0);
  auto estimate = [&](const std::string& key, int level) -> std::pair<double, Vec> {
    if (cfg.exact) {
      double f = 0.0;
      Vec v(d.dim, 0.0);
      for (uint64_t i = 0; i < n; ++i)
        if (sig_key(sigs[i], level) == key) {
          f += 1.0;
          for (int c = 0; c < d.dim; ++c) v[c] += d.rows[i][c];
        }
      return {f, v};
    }
    if (cfg.split_levels) {
      long long s = 0;
      Vec v(d.dim, 0.0);
      for (uint64_t i : groups[level]) {
        const int sign = z.sign(key, i);
        s += static_cast<long long>(hist_reports[i][0]) * sign;
        for (int c = 0; c < d.dim; ++c) v[c] += vec_reports[i][0][c] * sign;
      }
      const double t = static_cast<double>(T);
      for (double& c : v) c *= t;
      return {t * scale_h * static_cast<double>(s), v};
    }
    const double f = multi_hist_decode(key, hist_reports, T, eps_hist, z);
    Vec v = multi_vector_decode(key, vec_reports, T, z);
    return {f, v};
  };

  // Grow the signature tree, branching while the estimated count stays
  // above 1.5 * floor(n/k).
  const double threshold =
      1.5 * std::floor(static_cast<double>(n) / static_cast<double>(cfg.k));
  struct Node {
    std::vector<int8_t> bits;
    double freq;
    Vec mean;
  };
  std::vector<Node> nodes;
  std::vector<std::vector<int8_t>> frontier = {{}};  // root prefix
  for (int level = 1; level <= T && !frontier.empty(); ++level) {
    std::vector<std::vector<int8_t>> next;
    for (const auto& prefix : frontier) {
      for (int8_t bit : {int8_t{0}, int8_t{1}}) {
        std::vector<int8_t> bits = prefix;
        bits.push_back(bit);
        std::vector<int8_t> padded = bits;
        padded.resize(T, 0);
        auto [freq, sum] = estimate(sig_key(padded, level), level);
        Vec mean(d.dim, 0.0);
        const double denom = std::max(1.0, freq);
        for (int c = 0; c < d.dim; ++c) mean[c] = sum[c] / denom;
        const double nm = norm(mean);
        if (nm > 1.0)
          for (double& c : mean) c /= nm;
        nodes.push_back(Node{bits, freq, std::move(mean)});
        if (level < T && freq >= threshold) next.push_back(std::move(bits));
      }
    }
    frontier = std::move(next);
  }

  WeightedPointSet privatized(d.dim);
  for (const Node& node : nodes)
    if (node.freq > 0.0) privatized.add(node.mean, node.freq);

  CenterSet centers;
  if (privatized.support_size() == 0 || privatized.total_weight() <= 0.0)
    centers.assign(cfg.k, Vec(d.dim, 0.0));
  else
    centers = kmeans_pp(privatized, cfg.k, hash64(cfg.seed ^ 0x6b6d7070ull), 5);

  ClusteringResult res;
  res.centers = centers;
  res.objective = cost(d.to_weighted(), centers);
  res.normalized_objective = res.objective / static_cast<double>(n);
  std::ostringstream diag;
  diag << "{\"tree_nodes\":" << nodes.size() << ",\"depth\":" << T
       << ",\"split_levels\":" << (cfg.split_levels ? "true" : "false") << "}";
  res.diagnostics_json = diag.str();
  return res;
}

// ---- Sweeps ----

static std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) out.push_back(tok);
  return out;
}

std::vector<SweepSetting> parse_sweep_plan(const std::string& text) {
  std::map<std::string, std::vector<std::string>> plan;
  std::vector<std::string> order;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\r'))
      line.pop_back();
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("bad sweep plan line: " + line);
    const std::string key = line.substr(0, eq);
    if (plan.count(key)) throw std::runtime_error("duplicate sweep key: " + key);
    plan[key] = split_list(line.substr(eq + 1));
    if (plan[key].empty()) throw std::runtime_error("empty sweep key: " + key);
    order.push_back(key);
  }
  static const std::vector<std::string> known = {
      "n", "d", "k_true", "k", "r",     "eps",     "delta",
      "alpha", "beta", "model", "variant", "repeats", "seed"};
  for (const auto& [key, _] : plan)
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw std::runtime_error("unknown sweep key: " + key);

  std::vector<SweepSetting> out = {SweepSetting{}};
  for (const std::string& key : order) {
    std::vector<SweepSetting> next;
    for (const SweepSetting& base : out)
      for (const std::string& value : plan[key]) {
        SweepSetting s = base;
        if (key == "n") s.mixture.n = std::stoull(value);
        else if (key == "d") s.mixture.dim = std::stoi(value);
        else if (key == "k_true") s.mixture.k = std::stoi(value);
        else if (key == "r") s.mixture.r = std::stod(value);
        else if (key == "k") s.k = std::stoi(value);
        else if (key == "eps") s.epsilon = std::stod(value);
        else if (key == "delta") s.delta = std::stod(value);
        else if (key == "alpha") s.alpha = std::stod(value);
        else if (key == "beta") s.beta = std::stod(value);
        else if (key == "model") s.model = value;
        else if (key == "variant") s.variant = value;
        else if (key == "repeats") s.repeats = std::stoi(value);
        else if (key == "seed") s.seed = std::stoull(value);
        next.push_back(std::move(s));
      }
    out = std::move(next);
  }
  for (SweepSetting& s : out) {
    if (s.k < 1 || s.repeats < 1) throw std::runtime_error("bad sweep setting");
    s.mixture.seed = s.seed;
  }
  return out;
}

std::vector<SweepRow> run_sweep(const std::vector<SweepSetting>& settings) {
  std::vector<SweepRow> rows;
  for (const SweepSetting& s : settings) {
    for (int rep = 0; rep < s.repeats; ++rep) {
      const uint64_t run_seed = hash64(s.seed ^ (0x72657065ull + rep));
      MixtureConfig mix = s.mixture;
      mix.seed = run_seed;
      const Dataset data = generate_mixture(mix);
      ClusteringResult res;
      if (s.variant == "lsh") {
        LshConfig lc;
        lc.k = s.k;
        lc.epsilon = s.epsilon;
        lc.seed = run_seed;
        lc.exact = s.model == "exact";
        res = lsh_private_kmeans(data, lc);
      } else if (s.variant == "net-tree") {
        const PipelineConfig pc = PipelineConfig::derive(
            data.rows.size(), data.dim, s.k, s.epsilon, s.delta, s.alpha,
            s.beta, run_seed);
        const Model model = s.model == "local"     ? Model::kLocal
                            : s.model == "shuffle" ? Model::kShuffle
                                                   : Model::kExact;
        res = run_pipeline(data, pc, model);
      } else {
        throw std::runtime_error("unknown sweep variant: " + s.variant);
      }
      rows.push_back(SweepRow{s, rep, res.normalized_objective,
                              trivial_baseline(data)});
    }
  }
  return rows;
}

static std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

static std::string setting_prefix(const SweepSetting& s) {
  std::ostringstream os;
  os << s.mixture.n << ',' << s.mixture.dim << ',' << s.mixture.k << ','
     << fmt(s.mixture.r) << ',' << s.k << ',' << fmt(s.epsilon) << ','
     << s.model << ',' << s.variant << ',' << s.seed;
  return os.str();
}

std::string sweep_rows_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "n,d,k_true,r,k,eps,model,variant,seed,repeat,objective,trivial\n";
  for (const SweepRow& r : rows)
    os << setting_prefix(r.setting) << ',' << r.repeat << ','
       << fmt(r.objective) << ',' << fmt(r.trivial) << "\n";
  return os.str();
}

std::string sweep_aggregate_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "n,d,k_true,r,k,eps,model,variant,seed,runs,objective_mean,objective_std,"
        "trivial_mean\n";
  std::vector<std::string> seen;
  std::map<std::string, std::vector<const SweepRow*>> by_setting;
  for (const SweepRow& r : rows) {
    const std::string key = setting_prefix(r.setting);
    if (!by_setting.count(key)) seen.push_back(key);
    by_setting[key].push_back(&r);
  }
  for (const std::string& key : seen) {
    const auto& group = by_setting[key];
    const auto count = static_cast<double>(group.size());
    double mean = 0.0, trivial = 0.0;
    for (const SweepRow* r : group) {
      mean += r->objective;
      trivial += r->trivial;
    }
    mean /= count;
    trivial /= count;
    double var = 0.0;
    for (const SweepRow* r : group)
      var += (r->objective - mean) * (r->objective - mean);
    const double stddev = group.size() > 1 ? std::sqrt(var / (count - 1.0)) : 0.0;
    os << key << ',' << group.size() << ',' << fmt(mean) << ',' << fmt(stddev)
       << ',' << fmt(trivial) << "\n";
  }
  return os.str();
}

}  // namespace dpkm
