#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dpkm/core.hpp"
#include "dpkm/rng.hpp"

namespace dpkm {

struct PrivacyParams {
  double epsilon = 1.0;
  double delta = 0.0;
  void validate() const;
};

// Public randomness shared by encoders and decoder: a keyed family of
// signs Z_{bucket,user} in {-1,+1} and of bucket indices for the shuffle
// protocol. Deterministic in (seed, bucket, user).
class SharedRandomness {
 public:
  explicit SharedRandomness(uint64_t seed) : seed_(seed) {}

  int sign(std::string_view bucket, uint64_t user) const {
    const uint64_t h = hash_str(bucket, seed_ ^ 0x5369676eull);
    return (hash64(h ^ (user * 0x9e3779b97f4a7c15ull)) & 1) ? 1 : -1;
  }

  // Z_{1,y}: the shared bucket index in [0, s) used by the shuffle protocol.
  uint64_t bucket_index(std::string_view bucket, uint64_t s) const {
    const uint64_t h = hash_str(bucket, seed_ ^ 0x42756b74ull);
    return h % s;
  }

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
};

// ---- Scalar frequency oracle (randomized response over shared signs) ----

// One-bit report for a user holding bucket x: Z_{x,user} kept with
// probability e^eps/(e^eps+1), negated otherwise.
int8_t hist_encode(std::string_view bucket, uint64_t user, double eps,
                   const SharedRandomness& z, Rng& rng);

// Unbiased frequency estimate for bucket v from all reports
// (user index = position): ((e^eps+1)/(e^eps-1)) * sum_i y_i * Z_{v,i}.
double hist_decode(std::string_view bucket, std::span<const int8_t> reports,
                   double eps, const SharedRandomness& z);

// ---- Vector privatizer ----

// Norm of every privatized vector; calibrated so the output is unbiased.
double vector_privatizer_norm(int dim, double eps);

// eps-private unit-ball vector release: flip to +-x/||x|| with probability
// (1+||x||)/2, then sample the aligned hemisphere of radius B with
// probability e^eps/(e^eps+1), the opposite one otherwise.
Vec vector_privatize(const Vec& x, double eps, Rng& rng);

// ---- Bucketed vector-sum oracle ----

Vec vector_sum_encode(std::string_view bucket, const Vec& x, uint64_t user,
                      double eps, const SharedRandomness& z, Rng& rng);

// Unbiased estimate of the sum of vectors held by users of bucket v:
// sum_i Z_{v,i} * z_i, accumulated in a fixed pairwise order.
Vec vector_sum_decode(std::string_view bucket, std::span<const Vec> reports,
                      const SharedRandomness& z);

// ---- Generalized (multi-bucket) forms ----
//
// Each user holds one bucket per slot (e.g. one tree level per slot) and
// runs an independent encoder per slot at eps/num_slots. The decoder treats
// the transcript as n*num_slots virtual users; slot t of user i is virtual
// user i*num_slots + t.

std::vector<int8_t> multi_hist_encode(const std::vector<std::string>& buckets,
                                      uint64_t user, double eps,
                                      const SharedRandomness& z, Rng& rng);

double multi_hist_decode(std::string_view bucket,
                         std::span<const std::vector<int8_t>> reports,
                         size_t num_slots, double eps, const SharedRandomness& z);

std::vector<Vec> multi_vector_encode(const std::vector<std::string>& buckets,
                                     const Vec& x, uint64_t user, double eps,
                                     const SharedRandomness& z, Rng& rng);

Vec multi_vector_decode(std::string_view bucket,
                        std::span<const std::vector<Vec>> reports,
                        size_t num_slots, const SharedRandomness& z);

// Deterministic pairwise summation (recursive halving).
double pairwise_sum(std::span<const double> values);

}  // namespace dpkm
