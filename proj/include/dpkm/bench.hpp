#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dpkm/core.hpp"
#include "dpkm/pipeline.hpp"

namespace dpkm {

// Spherical Gaussian mixture in the unit ball: centers uniform on the
// sphere of radius 1 - 2/r, per-coordinate noise std (1/r)/sqrt(d), samples
// falling outside the ball are radially projected back.
struct MixtureConfig {
  uint64_t n = 1000;
  int dim = 10;
  int k = 4;        // number of true centers
  double r = 10.0;  // separation scale
  uint64_t seed = 0;
};

Dataset generate_mixture(const MixtureConfig& cfg);

// Average squared norm: the objective of the single center at the origin.
double trivial_baseline(const Dataset& d);

// Per-user Gaussian perturbation (sigma = 2*sqrt(2*ln(1.25/delta))/eps per
// coordinate, sensitivity 2) followed by non-private k-means++; normalized
// objective on the true data.
double naive_baseline(const Dataset& d, int k, double eps, double delta,
                      uint64_t seed);

// Practical one-round variant: SimHash prefixes replace the metric nets.
struct LshConfig {
  int k = 8;
  double epsilon = 1.0;
  uint64_t seed = 0;
  double hist_frac = 0.1;  // epsilon share of the frequency oracle
  bool split_levels = true;  // users split across levels (one slot each)
  bool exact = false;        // exact counts/sums instead of private oracles
  int depth = 0;             // 0 -> ceil(log2 k) + 3
};

// Signature depth used for a given k.
int lsh_depth(int k);

// Bit signatures g_1..g_T from T random hyperplanes; level-i bucket is the
// length-i prefix.
std::vector<std::vector<int8_t>> simhash_signatures(const Dataset& d, int depth,
                                                    uint64_t seed);

// Builds the signature tree (branch while the estimated node frequency is
// at least 1.5 * floor(n/k)), privatizes every node's count and mean, and
// runs weighted k-means++ on the node means.
ClusteringResult lsh_private_kmeans(const Dataset& d, const LshConfig& cfg);

// ---- Sweeps ----

struct SweepSetting {
  MixtureConfig mixture;
  std::string model = "local";    // local | shuffle | exact
  std::string variant = "lsh";    // net-tree | lsh
  int k = 8;                      // clustering k
  double epsilon = 1.0;
  double delta = 1e-6;
  double alpha = 1.0;
  double beta = 0.1;
  int repeats = 1;
  uint64_t seed = 0;
};

struct SweepRow {
  SweepSetting setting;
  int repeat = 0;
  double objective = 0.0;
  double trivial = 0.0;
};

// Plan format: one "key=v1,v2,..." per line (#-comments allowed); keys:
// n, d, k_true, k, r, eps, delta, alpha, beta, model, variant, repeats,
// seed. Runs the cross product with `repeats` seeds each.
std::vector<SweepSetting> parse_sweep_plan(const std::string& text);
std::vector<SweepRow> run_sweep(const std::vector<SweepSetting>& settings);

std::string sweep_rows_csv(const std::vector<SweepRow>& rows);
std::string sweep_aggregate_csv(const std::vector<SweepRow>& rows);

}  // namespace dpkm
