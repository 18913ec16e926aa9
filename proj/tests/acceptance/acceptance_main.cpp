// Acceptance suite: runs the nine agreed acceptance criteria end to end and
// prints one [PASS]/[FAIL] line per criterion. Exits nonzero if any
// criterion fails. argv[1] must be the path to the command-line tool (used
// by the determinism criterion).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dpkm/bench.hpp"
#include "dpkm/core.hpp"
#include "dpkm/net_tree.hpp"
#include "dpkm/nets.hpp"
#include "dpkm/oracles.hpp"
#include "dpkm/pipeline.hpp"
#include "dpkm/rng.hpp"
#include "dpkm/shuffle.hpp"
#include "dpkm/transport.hpp"

using namespace dpkm;

namespace {

int g_failures = 0;
std::vector<std::string> g_detail;

void note(const std::string& line) { g_detail.push_back(line); }

void report(int criterion, const std::string& what, bool ok) {
  std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion,
              what.c_str());
  for (const auto& d : g_detail) std::printf("        %s\n", d.c_str());
  g_detail.clear();
  if (!ok) ++g_failures;
  std::fflush(stdout);
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

Vec random_ball_point(Rng& rng, int dim, double radius = 1.0) {
  Vec x(dim);
  while (true) {
    double n2 = 0.0;
    for (auto& c : x) {
      c = rng.uniform(-radius, radius);
      n2 += c * c;
    }
    if (n2 <= radius * radius) return x;
  }
}

// ---------------------------------------------------------------------------
// Criterion 1: transport / movement-cost oracle suite.
// ---------------------------------------------------------------------------

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(1001, "acc1");
  int mt_violations = 0;
  int ineq_violations = 0;
  const double xis[] = {0.1, 0.5, 1.0};

  for (int inst = 0; inst < 200; ++inst) {
    const int dim = 1 + static_cast<int>(rng.below(3));
    auto make_set = [&](int max_support) {
      const int m = 1 + static_cast<int>(rng.below(max_support));
      WeightedPointSet s(dim);
      for (int i = 0; i < m; ++i)
        s.add(random_ball_point(rng, dim, 0.98), rng.uniform(0.0, 3.0));
      return s;
    };
    const WeightedPointSet s = make_set(6);
    const WeightedPointSet sp = make_set(6);
    const double best = mt_bruteforce(s, sp).first;

    for (int trial = 0; trial < 50; ++trial) {
      // Random map into support(S') so that partitions of S' compose with it.
      TransportMap psi;
      std::vector<size_t> target_index(s.support_size());
      for (size_t i = 0; i < s.support_size(); ++i) {
        target_index[i] = rng.below(sp.support_size());
        psi.target.push_back(sp.entries()[target_index[i]].first);
      }
      const double mt = mt_with_map(psi, s, sp);
      if (best > mt + 1e-9 * (1.0 + mt)) ++mt_violations;

      // Movement-cost inequalities for a random center set and partition.
      const double xi = xis[rng.below(3)];
      const int k = 1 + static_cast<int>(rng.below(2));
      CenterSet centers;
      for (int j = 0; j < k; ++j)
        centers.push_back(random_ball_point(rng, dim, 0.98));
      Partition phi(sp.support_size());
      for (auto& a : phi) a = static_cast<int>(rng.below(k));
      Partition composed(s.support_size());
      for (size_t i = 0; i < s.support_size(); ++i)
        composed[i] = phi[target_index[i]];

      const double penalty = 4.0 * (1.0 + 1.0 / xi) * mt;
      const double lhs1 = partition_cost(s, composed, centers);
      const double rhs1 = (1.0 + xi) * partition_cost(sp, phi, centers) + penalty;
      if (lhs1 > rhs1 + 1e-9 * (1.0 + rhs1)) ++ineq_violations;

      const double lhs2 = cost(sp, centers);
      const double rhs2 = (1.0 + xi) * cost(s, centers) + penalty;
      if (lhs2 > rhs2 + 1e-9 * (1.0 + rhs2)) ++ineq_violations;
    }
  }
  const double elapsed = seconds_since(t0);
  note("200 instances x 50 maps: optimality violations = " +
       std::to_string(mt_violations) +
       ", movement-inequality violations = " + std::to_string(ineq_violations));
  note("elapsed " + std::to_string(elapsed) + " s (budget 60 s)");
  report(1, "transport cost oracle and movement inequalities",
         mt_violations == 0 && ineq_violations == 0 && elapsed < 60.0);
}

// ---------------------------------------------------------------------------
// Criterion 2: net geometry (covering, packing, chain distance).
// ---------------------------------------------------------------------------

void criterion2() {
  Rng rng(1002, "acc2");
  int cover_violations = 0, pack_violations = 0, chain_violations = 0;
  for (int dim : {2, 3, 4}) {
    const NetFamily f(dim, 6);
    for (int level = 0; level <= 6; ++level) {
      // Covering radius: every sampled ball point decodes within rho.
      for (int i = 0; i < 10000; ++i) {
        const Vec x = random_ball_point(rng, dim);
        const NetPoint z = f.decode(level, x);
        if (std::sqrt(sq_dist(x, f.coords(z))) > f.rho(level) + 1e-12)
          ++cover_violations;
      }
      // Packing: enumerate a neighbourhood and check pairwise separation.
      if (level >= 1) {
        const Vec center = random_ball_point(rng, dim, 0.5);
        const auto pts = f.enumerate_ball(level, center, 2.0 * f.rho(level));
        const double min_gap = 2.0 * f.gamma() * f.rho(level);
        for (size_t a = 0; a < pts.size(); ++a)
          for (size_t b = a + 1; b < pts.size(); ++b)
            if (std::sqrt(sq_dist(f.coords(pts[a]), f.coords(pts[b]))) <
                min_gap - 1e-12)
              ++pack_violations;
      }
    }
    // Chain distance property over the full family depth.
    for (int i = 0; i < 10000; ++i) {
      const Vec x = random_ball_point(rng, dim);
      const auto chain = representative_chain(f, x);
      for (int lvl = 0; lvl <= 6; ++lvl)
        if (std::sqrt(sq_dist(x, f.coords(chain[lvl]))) >
            std::ldexp(2.0, -lvl) + 1e-12)
          ++chain_violations;
    }
  }
  note("covering violations = " + std::to_string(cover_violations) +
       ", packing violations = " + std::to_string(pack_violations) +
       ", chain-distance violations = " + std::to_string(chain_violations));
  report(2, "net covering/packing radii and chain distance bound",
         cover_violations == 0 && pack_violations == 0 && chain_violations == 0);
}

// ---------------------------------------------------------------------------
// Criterion 3: threshold selection obeys its doubling guarantee.
// ---------------------------------------------------------------------------

void criterion3() {
  // Hand-traced examples.
  bool hand = compute_threshold({0, 0, 0}, 1, 1.0, 10) == 0 &&
              compute_threshold({1, 2}, 1, 5.0, 10) == 2 &&
              compute_threshold({1, 1, 1, 8}, 1, 1.0, 10) == 1;

  Rng rng(1003, "acc3");
  int violations = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const size_t m = 1 + rng.below(60);
    std::vector<double> f(m);
    for (auto& v : f)
      v = rng.bernoulli(0.3) ? 0.0
                             : std::floor(rng.uniform(0.0, 200.0)) *
                                   (rng.bernoulli(0.5) ? 1.0 : 0.01);
    std::sort(f.begin(), f.end());
    const int k = 1 + static_cast<int>(rng.below(3));
    const double a = 1.0 + static_cast<double>(rng.below(5));
    const int big_gamma = 1 + static_cast<int>(rng.below(10));
    const size_t tau = compute_threshold(f, k, a, big_gamma);
    if (tau > m) {
      ++violations;
      continue;
    }
    if (tau == m) continue;  // full expansion: guarantee is vacuous
    double total = 0.0;
    for (double v : f) total += v;
    const auto ka = static_cast<size_t>(k * a);
    double head = 0.0, head_next = 0.0;
    for (size_t i = 0; i < m - tau; ++i) head += f[i];
    if (m >= tau + ka)
      for (size_t i = 0; i < m - tau - ka; ++i) head_next += f[i];
    const double slack = total / std::ldexp(1.0, big_gamma);
    if (head > 2.0 * head_next + slack + 1e-9 * (1.0 + total)) ++violations;
  }
  note("hand-traced examples " + std::string(hand ? "match" : "MISMATCH") +
       "; fuzz violations = " + std::to_string(violations) + " / 10000");
  report(3, "threshold selection doubling guarantee", hand && violations == 0);
}

// ---------------------------------------------------------------------------
// Criterion 4: tree construction with an exact oracle yields a coreset.
// ---------------------------------------------------------------------------

class ExactChainOracle : public FrequencyOracle {
 public:
  ExactChainOracle(const NetFamily& f, const WeightedPointSet& s) {
    for (const auto& [p, w] : s.entries())
      for (const NetPoint& np : representative_chain(f, p)) freq_[np] += w;
  }
  double frequency(const NetPoint& p) const override {
    auto it = freq_.find(p);
    return it == freq_.end() ? 0.0 : it->second;
  }

 private:
  std::map<NetPoint, double> freq_;
};

void criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(1004, "acc4");
  int budget_violations = 0, coreset_violations = 0;
  const double xi = 0.5;
  const std::vector<Vec> grid = axis_grid(2, 0.25);

  for (int inst = 0; inst < 100; ++inst) {
    // Integer weights so the user count n is exact; n <= 100.
    const int support = 3 + static_cast<int>(rng.below(10));
    WeightedPointSet s(2);
    uint64_t n = 0;
    for (int i = 0; i < support && n < 100; ++i) {
      const auto w = 1 + rng.below(std::min<uint64_t>(8, 100 - n));
      s.add(random_ball_point(rng, 2), static_cast<double>(w));
      n += w;
    }
    const int k = 1 + static_cast<int>(rng.below(3));
    const TreeParams params = TreeParams::derive(k, xi, 2, n, 2.0);
    const NetFamily family(2, params.depth);
    const ExactChainOracle oracle(family, s);
    const NetTree tree = build_tree(family, params, oracle);
    if (static_cast<double>(tree.size()) > params.node_budget)
      ++budget_violations;

    const WeightedPointSet rep = representative_set(tree, family);
    const double t_bound =
        4.0 * (1.0 + 2.0 / xi) * quantization_bound(tree, family);

    std::vector<Vec> pool;
    for (const auto& [p, w] : s.entries()) pool.push_back(p);
    for (const auto& [p, w] : rep.entries()) pool.push_back(p);
    pool.insert(pool.end(), grid.begin(), grid.end());
    const auto candidates = subset_center_sets(pool, k, 2000000);
    const CoresetReport cr = coreset_check(s, rep, xi, t_bound, candidates);
    if (!cr.ok()) {
      ++coreset_violations;
      if (coreset_violations == 1)
        note("first violating instance: t_required = " +
             std::to_string(cr.t_required) + " vs allowed " +
             std::to_string(t_bound));
    }
  }
  const double elapsed = seconds_since(t0);
  note("100 instances: node-budget violations = " +
       std::to_string(budget_violations) +
       ", coreset violations = " + std::to_string(coreset_violations));
  note("elapsed " + std::to_string(elapsed) + " s (budget 300 s)");
  report(4, "exact-oracle tree is a certified coreset within its node budget",
         budget_violations == 0 && coreset_violations == 0 && elapsed < 300.0);
}

// ---------------------------------------------------------------------------
// Criterion 5: local oracle statistics.
// ---------------------------------------------------------------------------

void criterion5() {
  // Per-message likelihood ratio in closed form: the encoder emits one of
  // two values with probabilities p and 1-p, p = e^eps/(e^eps+1), so the
  // ratio is exactly e^eps.
  bool ratio_ok = true;
  for (double eps : {0.5, 1.0, 2.0}) {
    const double p = std::exp(eps) / (std::exp(eps) + 1.0);
    if (std::abs(p / (1.0 - p) - std::exp(eps)) > 1e-12 * std::exp(eps))
      ratio_ok = false;
  }

  // Frequency-estimate error grows like sqrt(n).
  const double eps = 1.0;
  std::vector<double> rms;
  for (const size_t n : {1000u, 10000u, 100000u}) {
    double sq = 0.0;
    for (int trial = 0; trial < 30; ++trial) {
      const SharedRandomness z(2000 + trial);
      Rng rng(3000 + trial, "acc5-hist");
      const size_t holders = n / 10;
      std::vector<int8_t> reports(n);
      for (size_t i = 0; i < n; ++i)
        reports[i] = hist_encode(i < holders ? "v" : "w", i, eps, z, rng);
      const double err =
          hist_decode("v", reports, eps, z) - static_cast<double>(holders);
      sq += err * err;
    }
    rms.push_back(std::sqrt(sq / 30.0));
  }
  const double slope = (std::log10(rms[2]) - std::log10(rms[0])) / 2.0;
  const bool slope_ok = slope >= 0.4 && slope <= 0.6;

  // Vector privatizer: norm exactly B; empirical mean in 3-sigma bands.
  const int dim = 4;
  const double b = vector_privatizer_norm(dim, eps);
  Rng vrng(1005, "acc5-vec");
  const Vec x = {0.5, 0.0, 0.0, 0.0};
  const int draws = 1000000;
  Vec mean(dim, 0.0);
  int norm_violations = 0;
  for (int i = 0; i < draws; ++i) {
    const Vec v = vector_privatize(x, eps, vrng);
    if (std::abs(norm(v) - b) > 1e-6 * b) ++norm_violations;
    for (int c = 0; c < dim; ++c) mean[c] += v[c];
  }
  // Per-coordinate second moment of the output is B^2/d.
  const double band = 3.0 * b / std::sqrt(static_cast<double>(dim) * draws);
  bool mean_ok = true;
  for (int c = 0; c < dim; ++c) {
    mean[c] /= draws;
    if (std::abs(mean[c] - x[c]) > band) mean_ok = false;
  }

  note("likelihood ratio e^eps exact: " + std::string(ratio_ok ? "yes" : "NO"));
  note("frequency RMS error at n = 1e3/1e4/1e5: " + std::to_string(rms[0]) +
       " / " + std::to_string(rms[1]) + " / " + std::to_string(rms[2]) +
       "; log-log slope = " + std::to_string(slope) + " (need [0.4, 0.6])");
  note("vector norm violations = " + std::to_string(norm_violations) +
       " / 1e6; mean error band " + std::to_string(band) +
       " respected: " + std::string(mean_ok ? "yes" : "NO"));
  report(5, "local oracle likelihood ratio, error scaling, vector calibration",
         ratio_ok && slope_ok && norm_violations == 0 && mean_ok);
}

// ---------------------------------------------------------------------------
// Criterion 6: shuffle protocol building blocks and end-to-end error.
// ---------------------------------------------------------------------------

void criterion6() {
  Rng rng(1006, "acc6");
  // Secret-sharing reconstruction fuzz.
  int share_failures = 0;
  const uint64_t p = 1000003;
  for (int trial = 0; trial < 100000; ++trial) {
    const uint64_t x = rng.below(p);
    const int m = 1 + static_cast<int>(rng.below(8));
    uint64_t sum = 0;
    for (uint64_t sh : split_and_mix(x, p, m, rng)) sum = (sum + sh) % p;
    if (sum != x) ++share_failures;
  }

  // Discrete Gaussian: strict variance bound at sigma = 0.5 (the gap there
  // is ~0.018, far above sampling noise at 1e6 draws) and the mode ratio at
  // sigma = 2 within 2%.
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < 1000000; ++i) {
    const auto v = static_cast<double>(discrete_gaussian(0.5, rng));
    sum += v;
    sq += v * v;
  }
  const double var = sq / 1e6 - (sum / 1e6) * (sum / 1e6);
  const bool var_ok = var < 0.25;

  std::map<int64_t, int> counts;
  for (int i = 0; i < 1000000; ++i) counts[discrete_gaussian(2.0, rng)]++;
  const double ratio =
      static_cast<double>(counts[0]) / static_cast<double>(counts[1]);
  const double target = std::exp(1.0 / 8.0);
  const bool ratio_ok = std::abs(ratio / target - 1.0) < 0.02;
  // Tail bound at m = ceil(3 sigma).
  int64_t tail_count = 0;
  for (const auto& [v, c] : counts)
    if (v >= 6) tail_count += c;
  const bool tail_ok =
      static_cast<double>(tail_count) / 1e6 <= std::exp(-25.0 / 8.0);

  // End-to-end bucketized vector summation at the pinned parameters.
  const uint64_t n = 200;
  const int d = 4;
  const auto cfg = ShuffleConfig::derive(n, d, 1.0, 1e-5, 0.05);
  const double bound =
      10.0 * cfg.quant *
      (cfg.sigma * std::sqrt(static_cast<double>(d)) *
           std::log(static_cast<double>(cfg.buckets) * d / 0.05) +
       static_cast<double>(n) * std::sqrt(static_cast<double>(d)));
  int trial_failures = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const SharedRandomness z(4000 + trial);
    ShuffleAccumulator acc(cfg);
    Vec truth(d, 0.0);
    Rng data_rng(5000 + trial, "acc6-data");
    for (uint64_t u = 0; u < n; ++u) {
      const Vec x = random_ball_point(data_rng, d);
      for (int c = 0; c < d; ++c) truth[c] += x[c];
      Rng user_rng(hash64(6000 + trial) ^ u, "acc6-user");
      acc.add(shuffle_vector_encode(x, "bucket", u, cfg, z, user_rng));
    }
    const Vec est = acc.decode("bucket", z);
    if (std::sqrt(sq_dist(est, truth)) > bound) ++trial_failures;
  }

  note("share reconstruction failures = " + std::to_string(share_failures) +
       " / 1e5");
  note("discrete Gaussian: variance at sigma=0.5 is " + std::to_string(var) +
       " (< 0.25: " + (var_ok ? "yes" : "NO") + "); mode ratio at sigma=2 is " +
       std::to_string(ratio) + " vs " + std::to_string(target) +
       "; tail bound " + (tail_ok ? "holds" : "VIOLATED"));
  note("end-to-end trials outside the error bound " + std::to_string(bound) +
       ": " + std::to_string(trial_failures) + " / 100 (need <= 5)");
  report(6, "shuffle protocol reconstruction, noise moments, end-to-end error",
         share_failures == 0 && var_ok && ratio_ok && tail_ok &&
             trial_failures <= 5);
}

// ---------------------------------------------------------------------------
// Criterion 7: exact-mode pipeline against the clustering bound.
// ---------------------------------------------------------------------------

void criterion7() {
  int violations = 0;
  const double alpha = 1.0;
  for (uint64_t seed = 0; seed < 10; ++seed) {
    MixtureConfig mc;
    mc.n = 2000;
    mc.dim = 20;
    mc.k = 4;
    mc.r = 20.0;
    mc.seed = 7000 + seed;
    const Dataset data = generate_mixture(mc);
    const auto cfg =
        PipelineConfig::derive(2000, 20, 4, 1.0, 1e-6, alpha, 0.1, seed);
    const ClusteringResult res = run_pipeline(data, cfg, Model::kExact);

    const WeightedPointSet s = data.to_weighted();
    const double kmpp = cost(s, kmeans_pp(s, 4, 7100 + seed, 5));
    const auto diag = nlohmann::json::parse(res.diagnostics_json);
    const double qb = diag["quantization_bound"].get<double>();
    // The tree lives in the projected, rescaled space: undo the rescaling
    // (1/lambda^2) and the projection contraction (d/d') and apply the
    // movement-to-coreset inflation 4(1 + 2/xi) with the derived xi.
    const double term = (1.0 + cfg.alpha_t) *
                        (static_cast<double>(cfg.dim) /
                         (cfg.dprime * cfg.lambda * cfg.lambda)) *
                        4.0 * (1.0 + 2.0 / cfg.xi) * qb;
    if (res.objective > (1.0 + alpha) * kmpp + term) {
      ++violations;
      note("seed " + std::to_string(seed) + ": objective " +
           std::to_string(res.objective) + " > bound " +
           std::to_string((1.0 + alpha) * kmpp + term));
    } else if (seed == 0) {
      note("seed 0: objective " + std::to_string(res.objective) +
           ", reference objective " + std::to_string(kmpp) +
           ", quantization term " + std::to_string(term));
    }
  }
  note("violations = " + std::to_string(violations) + " / 10 seeds");
  report(7, "exact-mode pipeline within the clustering bound", violations == 0);
}

// ---------------------------------------------------------------------------
// Criterion 8: benchmark trend reproduction at desk scale.
// ---------------------------------------------------------------------------

struct AggRow {
  double mean = 0.0;
  double sd = 0.0;
  double trivial = 0.0;
};

AggRow aggregate(const std::vector<SweepRow>& rows, size_t begin, size_t count) {
  AggRow a;
  for (size_t i = begin; i < begin + count; ++i) {
    a.mean += rows[i].objective;
    a.trivial += rows[i].trivial;
  }
  a.mean /= count;
  a.trivial /= count;
  for (size_t i = begin; i < begin + count; ++i)
    a.sd += (rows[i].objective - a.mean) * (rows[i].objective - a.mean);
  a.sd = count > 1 ? std::sqrt(a.sd / (count - 1)) : 0.0;
  return a;
}

SweepSetting lsh_setting(uint64_t n, int k_true, int k, double eps) {
  SweepSetting s;
  s.mixture.n = n;
  s.mixture.dim = 100;
  s.mixture.k = k_true;
  s.mixture.r = 100.0;
  s.mixture.seed = 42;
  s.model = "local";
  s.variant = "lsh";
  s.k = k;
  s.epsilon = eps;
  s.repeats = 10;
  s.seed = 42;
  return s;
}

void criterion8() {
  const auto t0 = std::chrono::steady_clock::now();

  // (a) + (b): n-trend at the pinned parameters.
  const auto n_rows =
      run_sweep({lsh_setting(10000, 8, 8, 1.0), lsh_setting(100000, 8, 8, 1.0)});
  const AggRow n4 = aggregate(n_rows, 0, 10);
  const AggRow n5 = aggregate(n_rows, 10, 10);
  const bool trivial_ok = n5.trivial >= 0.8 && n5.trivial <= 1.1;
  const bool n_order_ok = n5.mean < n4.mean;
  const bool n4_beats_trivial = n4.mean < n4.trivial;
  note("(a) trivial baseline = " + std::to_string(n5.trivial) +
       " (need [0.8, 1.1]): " + (trivial_ok ? "pass" : "FAIL"));
  note("(b) mean objective: n=1e4 -> " + std::to_string(n4.mean) + " +- " +
       std::to_string(n4.sd) + ", n=1e5 -> " + std::to_string(n5.mean) +
       " +- " + std::to_string(n5.sd));
  note("(b) n=1e5 < n=1e4: " + std::string(n_order_ok ? "pass" : "FAIL") +
       "; n=1e4 < trivial: " + (n4_beats_trivial ? "pass" : "FAIL"));
  if (!n4_beats_trivial)
    note("    at n=1e4 the private vector-sum noise (norm ~ B*sqrt(n*T) ~ 7e3)"
         " exceeds the largest bucket signal (n/k ~ 1.2e3), so node means are"
         " directionally random; the trend toward the n=1e5 pass is the"
         " reproducible part at desk scale");

  // (c) epsilon-trend at n = 1e5.
  std::vector<SweepSetting> eps_settings;
  for (double e : {0.5, 1.0, 2.0, 4.0}) eps_settings.push_back(lsh_setting(100000, 8, 8, e));
  const auto eps_rows = run_sweep(eps_settings);
  std::vector<AggRow> eps_agg;
  for (size_t i = 0; i < 4; ++i) eps_agg.push_back(aggregate(eps_rows, 10 * i, 10));
  bool eps_ok = true;
  {
    std::string line = "(c) mean objective over eps {0.5, 1, 2, 4}:";
    for (const auto& a : eps_agg) line += " " + std::to_string(a.mean);
    note(line);
  }
  for (size_t i = 1; i < 4; ++i)
    if (eps_agg[i].mean >
        eps_agg[i - 1].mean + std::max(eps_agg[i].sd, eps_agg[i - 1].sd))
      eps_ok = false;
  note("(c) non-increasing in eps up to 1 sigma: " +
       std::string(eps_ok ? "pass" : "FAIL"));

  // (d) k-trend at n = 1e5 (the mixture and the clustering k vary together).
  std::vector<SweepSetting> k_settings;
  for (int k : {4, 8, 16}) k_settings.push_back(lsh_setting(100000, k, k, 1.0));
  const auto k_rows = run_sweep(k_settings);
  std::vector<AggRow> k_agg;
  for (size_t i = 0; i < 3; ++i) k_agg.push_back(aggregate(k_rows, 10 * i, 10));
  bool k_ok = true;
  {
    std::string line = "(d) mean objective over k {4, 8, 16}:";
    for (const auto& a : k_agg) line += " " + std::to_string(a.mean);
    note(line);
  }
  for (size_t i = 1; i < 3; ++i)
    if (k_agg[i].mean <
        k_agg[i - 1].mean - std::max(k_agg[i].sd, k_agg[i - 1].sd))
      k_ok = false;
  note("(d) non-decreasing in k up to 1 sigma: " +
       std::string(k_ok ? "pass" : "FAIL"));

  const double elapsed = seconds_since(t0);
  note("elapsed " + std::to_string(elapsed) + " s (budget 1800 s)");
  report(8, "benchmark trend reproduction (LSH variant, d=100, r=100)",
         trivial_ok && n_order_ok && n4_beats_trivial && eps_ok && k_ok &&
             elapsed < 1800.0);
}

// ---------------------------------------------------------------------------
// Criterion 9: byte-identical outputs from the command-line tool.
// ---------------------------------------------------------------------------

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool run_twice_and_compare(const std::string& base_cmd,
                           const std::vector<std::string>& outputs,
                           const std::string& label) {
  std::vector<std::string> first;
  for (int round = 0; round < 2; ++round) {
    const std::string cmd = base_cmd + " 2>/dev/null";
    if (std::system(cmd.c_str()) != 0) {
      note(label + ": command failed: " + base_cmd);
      return false;
    }
    if (round == 0) {
      for (const auto& f : outputs) first.push_back(read_file(f));
    } else {
      for (size_t i = 0; i < outputs.size(); ++i)
        if (read_file(outputs[i]) != first[i]) {
          note(label + ": outputs differ between runs (" + outputs[i] + ")");
          return false;
        }
    }
  }
  note(label + ": byte-identical across two runs");
  return true;
}

void criterion9(const std::string& cli) {
  if (cli.empty()) {
    note("no CLI path supplied (argv[1])");
    report(9, "determinism of the command-line tool", false);
    return;
  }
  const std::string tmp = "/tmp/dpkm_acceptance";
  if (std::system(("mkdir -p " + tmp).c_str()) != 0) {
    note("could not create " + tmp);
    report(9, "determinism of the command-line tool", false);
    return;
  }
  bool ok = true;

  const std::string data = tmp + "/data.csv";
  ok &= run_twice_and_compare(
      cli + " gen --n 500 --d 10 --k 4 --r 10 --seed 3 --out " + data, {data},
      "gen");

  const std::string run_out = tmp + "/run.json";
  ok &= run_twice_and_compare(cli + " run --input " + data +
                                  " --model local --variant net-tree --k 3"
                                  " --epsilon 1 --seed 5 --out " +
                                  run_out,
                              {run_out}, "run (net-tree)");

  const std::string lsh_out = tmp + "/lsh.json";
  ok &= run_twice_and_compare(cli + " run --input " + data +
                                  " --model local --variant lsh --k 4"
                                  " --epsilon 1 --seed 5 --out " +
                                  lsh_out,
                              {lsh_out}, "run (lsh)");

  // The shuffle protocol's message count grows with n * buckets * dim, so
  // determinism is checked on a small dataset.
  const std::string small = tmp + "/small.csv";
  ok &= run_twice_and_compare(
      cli + " gen --n 40 --d 4 --k 2 --r 10 --seed 8 --out " + small, {small},
      "gen (small)");
  const std::string shuffle_out = tmp + "/shuffle.json";
  ok &= run_twice_and_compare(cli + " run --input " + small +
                                  " --model shuffle --variant net-tree --k 2"
                                  " --epsilon 1 --delta 1e-4 --seed 6 --out " +
                                  shuffle_out,
                              {shuffle_out}, "run (shuffle)");

  const std::string plan = tmp + "/plan.txt";
  {
    std::ofstream p(plan);
    p << "n=200\nd=8\nk=2\nr=10\neps=1\nmodel=local\nvariant=lsh\n"
         "repeats=2\nseed=4\n";
  }
  const std::string rows = tmp + "/rows.csv", agg = tmp + "/agg.csv";
  ok &= run_twice_and_compare(cli + " sweep --plan " + plan + " --out-rows " +
                                  rows + " --out-agg " + agg,
                              {rows, agg}, "sweep");

  const std::string base_out = tmp + "/baseline.json";
  ok &= run_twice_and_compare(cli + " baseline --input " + data +
                                  " --k 3 --epsilon 1 --seed 2 --out " +
                                  base_out,
                              {base_out}, "baseline");

  report(9, "determinism of the command-line tool", ok);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9(cli);
  if (g_failures == 0) {
    std::printf("all 9 acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criterion(s) failed\n", g_failures);
  return 1;
}
