#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "dpkm/core.hpp"
#include "dpkm/oracles.hpp"
#include "dpkm/rng.hpp"

namespace dpkm {

// ---- Building blocks ----

// Additive secret sharing over F_p: m-1 uniform shares plus a balancing
// share so the shares sum to x mod p.
std::vector<uint64_t> split_and_mix(uint64_t x, uint64_t p, int m, Rng& rng);

// Exact Bernoulli(exp(-gamma)) for gamma >= 0.
bool bernoulli_exp(double gamma, Rng& rng);

// Exact discrete Laplace with scale t >= 1: P[X=x] proportional to e^{-|x|/t}.
int64_t discrete_laplace(uint64_t t, Rng& rng);

// Exact discrete Gaussian N_Z(0, sigma^2) by rejection from discrete Laplace.
int64_t discrete_gaussian(double sigma, Rng& rng);

// Smallest prime strictly greater than x (deterministic Miller-Rabin).
uint64_t next_prime_above(uint64_t x);

// ---- Shuffle-model bucketed vector summation ----

struct ShuffleConfig {
  uint64_t n = 1;       // number of users
  int dim = 1;
  double epsilon = 1.0;
  double delta = 1e-6;
  double beta = 0.05;   // accuracy failure probability
  bool noise = true;    // first user adds discrete Gaussian noise

  // Derived:
  uint64_t buckets = 1;   // s = ceil(2n/beta)
  double quant = 1.0;     // eta = 1/n
  double sigma = 0.0;     // 20 * ln(s*d/delta) / eps
  uint64_t prime = 2;     // smallest prime > 2n/eta + 20*sigma*ln(s*d/beta)
  int shares = 1;         // m = ceil(3 * (1 + ln(2*d*p/delta)/ln(n)))

  static ShuffleConfig derive(uint64_t n, int dim, double eps, double delta,
                              double beta, bool noise = true);

  uint64_t messages_per_user() const {
    return buckets * static_cast<uint64_t>(dim) * static_cast<uint64_t>(shares);
  }
};

// One anonymous message: which (bucket, coordinate) cell the share belongs
// to and the field element. Wire format: 4-byte bucket, 4-byte coordinate,
// 8-byte field element, all little-endian.
struct ShuffleMessage {
  uint32_t bucket = 0;
  uint32_t coord = 0;
  uint64_t value = 0;
  bool operator==(const ShuffleMessage&) const = default;
};

void write_messages(std::ostream& os, std::span<const ShuffleMessage> msgs);
std::vector<ShuffleMessage> read_messages(std::istream& is);

// Encoder for user `user` holding vector x (unit ball) and bucket key y.
// Quantizes x, secret-shares each coordinate into the user's shared bucket
// cell and zero into every other cell; user 0 additionally shares discrete
// Gaussian noise into every cell when cfg.noise is set.
std::vector<ShuffleMessage> shuffle_vector_encode(const Vec& x,
                                                  std::string_view bucket,
                                                  uint64_t user,
                                                  const ShuffleConfig& cfg,
                                                  const SharedRandomness& z,
                                                  Rng& rng);

// Order-invariant accumulator over the anonymized multiset (decode is a sum
// per cell, so messages can be folded in as they are produced).
class ShuffleAccumulator {
 public:
  explicit ShuffleAccumulator(const ShuffleConfig& cfg);
  void add(const ShuffleMessage& m);
  void add(std::span<const ShuffleMessage> msgs);

  // Estimated vector sum for bucket key y: field sums of y's cell,
  // recentered from [0,p) to signed values and dequantized.
  Vec decode(std::string_view bucket, const SharedRandomness& z) const;

 private:
  ShuffleConfig cfg_;
  std::vector<uint64_t> cells_;  // buckets x dim, mod p
};

// Convenience non-streaming decoder.
Vec shuffle_vector_decode(std::span<const ShuffleMessage> msgs,
                          std::string_view bucket, const ShuffleConfig& cfg,
                          const SharedRandomness& z);

}  // namespace dpkm
