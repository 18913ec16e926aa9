#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dpkm/core.hpp"
#include "dpkm/net_tree.hpp"
#include "dpkm/nets.hpp"
#include "dpkm/oracles.hpp"
#include "dpkm/rng.hpp"

namespace dpkm {

// Unit-ball dataset, one row per user.
struct Dataset {
  int dim = 0;
  std::vector<Vec> rows;

  void validate() const;  // dims match, finite, norms <= 1 + tolerance
  WeightedPointSet to_weighted() const;
};

Dataset load_csv(const std::string& path);
void save_csv(const Dataset& d, const std::string& path);

enum class Model { kLocal, kShuffle, kExact };

struct PipelineConfig {
  uint64_t n = 0;
  int dim = 0;
  int k = 1;
  double epsilon = 1.0;
  double delta = 1e-6;
  double alpha = 1.0;
  double beta = 0.1;
  uint64_t seed = 0;

  // Optional practical overrides (echoed in results when set).
  std::optional<int> dprime_override;
  std::optional<double> a_override;
  // Practical cap applied on top of the derived projection dimension; the
  // derived value is exponential in 1/alpha^2 and only feasible when small.
  int dprime_cap = 3;

  // Derived:
  double xi = 0.0;        // 0.1 * alpha
  double alpha_t = 0.0;   // 0.1 * alpha
  double beta_t = 0.0;    // 0.1 * beta
  int dprime = 1;
  double lambda = 1.0;    // rescaling factor
  double eps_hist = 0.0;  // epsilon / 2
  double eps_vec = 0.0;   // epsilon / 2
  TreeParams tree;

  static PipelineConfig derive(uint64_t n, int dim, int k, double eps,
                               double delta, double alpha, double beta,
                               uint64_t seed,
                               std::optional<int> dprime_override = std::nullopt,
                               std::optional<double> a_override = std::nullopt);
};

// Random orthonormal d' x d projection (Gaussian rows + Gram-Schmidt).
struct Projection {
  std::vector<Vec> rows;
  static Projection make(int dim, int dprime, Rng& rng);
  Vec apply(const Vec& x) const;
};

// Projection + rescaling applied to one user vector; vectors whose
// projection exceeds 1/lambda are sent to the origin.
Vec rescale(const Projection& proj, double lambda, const Vec& x);

// What one user sends in the local model: a one-bit frequency report and a
// privatized vector per tree level.
struct EncodedUser {
  std::vector<int8_t> hist;
  std::vector<Vec> vec;
};

EncodedUser encode_user(const Vec& x, uint64_t user, const PipelineConfig& cfg,
                        const Projection& proj, const NetFamily& family,
                        const SharedRandomness& z, Rng& rng);

struct ClusteringResult {
  CenterSet centers;
  double objective = 0.0;             // cost over the input set
  double normalized_objective = 0.0;  // objective / n
  std::string diagnostics_json;
};

// One-round private k-means in the chosen model. "exact" replaces both
// oracles with exact ones (same tree machinery, no noise); "shuffle" uses
// the split-and-mix vector protocol and a central-noise emulation of the
// frequency oracle.
ClusteringResult run_pipeline(const Dataset& data, const PipelineConfig& cfg,
                              Model model);

// Interface used by the decoder half; exposed for tests.
class VectorSumOracle {
 public:
  virtual ~VectorSumOracle() = default;
  virtual Vec vector_sum(const NetPoint& p) const = 0;
};

// Exact oracles over the users' representative chains.
class ExactOracles : public FrequencyOracle, public VectorSumOracle {
 public:
  ExactOracles(const std::vector<Vec>& originals,
               const std::vector<std::vector<NetPoint>>& chains);
  double frequency(const NetPoint& p) const override;
  Vec vector_sum(const NetPoint& p) const override;

 private:
  int dim_;
  std::map<NetPoint, double> freq_;
  std::map<NetPoint, Vec> sums_;
};

// Decoder half shared by all models: build the tree from the frequency
// oracle, cluster the representative set, aggregate per-cluster vector sums
// and counts into centers clipped to the unit ball.
ClusteringResult decode_pipeline(const PipelineConfig& cfg, const NetFamily& family,
                                 const FrequencyOracle& freq,
                                 const VectorSumOracle& vec, const Dataset& data);

}  // namespace dpkm
