#include "dpkm/oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace dpkm {

void PrivacyParams::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw std::invalid_argument("epsilon must be positive");
  if (delta < 0.0 || delta >= 1.0)
    throw std::invalid_argument("delta must be in [0,1)");
}

static double keep_probability(double eps) {
  return std::exp(eps) / (std::exp(eps) + 1.0);
}

static double decode_scale(double eps) {
  return (std::exp(eps) + 1.0) / (std::exp(eps) - 1.0);
}

int8_t hist_encode(std::string_view bucket, uint64_t user, double eps,
                   const SharedRandomness& z, Rng& rng) {
  if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const int s = z.sign(bucket, user);
  return static_cast<int8_t>(rng.bernoulli(keep_probability(eps)) ? s : -s);
}

double hist_decode(std::string_view bucket, std::span<const int8_t> reports,
                   double eps, const SharedRandomness& z) {
  if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
  long long sum = 0;  // exact: every term is +-1
  for (size_t i = 0; i < reports.size(); ++i)
    sum += static_cast<long long>(reports[i]) * z.sign(bucket, i);
  return decode_scale(eps) * static_cast<double>(sum);
}

double vector_privatizer_norm(int dim, double eps) {
  if (dim < 1) throw std::invalid_argument("dimension must be positive");
  if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
  // B = scale / E|u_1| for u uniform on the unit sphere; E|u_1| = 1 in d=1,
  // otherwise (2/(d-1)) * Gamma(d/2) / (sqrt(pi) * Gamma((d-1)/2)).
  double mean_abs = 1.0;
  if (dim > 1) {
    const double d = static_cast<double>(dim);
    mean_abs = 2.0 / (d - 1.0) *
               std::exp(std::lgamma(d / 2.0) - std::lgamma((d - 1.0) / 2.0)) /
               std::sqrt(M_PI);
  }
  return decode_scale(eps) / mean_abs;
}

Vec vector_privatize(const Vec& x, double eps, Rng& rng) {
  const int dim = static_cast<int>(x.size());
  const double nx = norm(x);
  if (nx > 1.0 + kNormTol) throw std::invalid_argument("input outside unit ball");
  // Direction with mean x: +-x/||x|| with probability (1 +- ||x||)/2.
  Vec dir(dim, 0.0);
  if (nx > 0.0)
    for (int i = 0; i < dim; ++i) dir[i] = x[i] / nx;
  else
    dir[0] = 1.0;
  const double flip = rng.bernoulli(0.5 * (1.0 + std::min(nx, 1.0))) ? 1.0 : -1.0;
  for (double& c : dir) c *= flip;

  // Uniform sphere sample, reflected into the chosen hemisphere.
  Vec u(dim);
  double nu;
  do {
    for (double& c : u) c = rng.normal();
    nu = norm(u);
  } while (nu == 0.0);
  for (double& c : u) c /= nu;
  const bool aligned = rng.bernoulli(keep_probability(eps));
  double side = dot(u, dir);
  if ((side < 0.0) == aligned)
    for (double& c : u) c = -c;

  const double b = vector_privatizer_norm(dim, eps);
  for (double& c : u) c *= b;
  return u;
}

Vec vector_sum_encode(std::string_view bucket, const Vec& x, uint64_t user,
                      double eps, const SharedRandomness& z, Rng& rng) {
  Vec signed_x = x;
  const double s = z.sign(bucket, user);
  for (double& c : signed_x) c *= s;
  return vector_privatize(signed_x, eps, rng);
}

double pairwise_sum(std::span<const double> values) {
  if (values.empty()) return 0.0;
  if (values.size() == 1) return values[0];
  const size_t half = values.size() / 2;
  return pairwise_sum(values.subspan(0, half)) + pairwise_sum(values.subspan(half));
}

static Vec signed_vector_sum(std::string_view bucket,
                             const std::function<const Vec&(size_t)>& report,
                             const std::function<uint64_t(size_t)>& vuser,
                             size_t count, int dim, const SharedRandomness& z) {
  Vec out(dim, 0.0);
  if (count == 0) return out;
  std::vector<double> column(count);
  for (int c = 0; c < dim; ++c) {
    for (size_t i = 0; i < count; ++i)
      column[i] = report(i)[c] * z.sign(bucket, vuser(i));
    out[c] = pairwise_sum(column);
  }
  return out;
}

Vec vector_sum_decode(std::string_view bucket, std::span<const Vec> reports,
                      const SharedRandomness& z) {
  const int dim = reports.empty() ? 0 : static_cast<int>(reports[0].size());
  return signed_vector_sum(
      bucket, [&](size_t i) -> const Vec& { return reports[i]; },
      [](size_t i) { return static_cast<uint64_t>(i); }, reports.size(), dim, z);
}

std::vector<int8_t> multi_hist_encode(const std::vector<std::string>& buckets,
                                      uint64_t user, double eps,
                                      const SharedRandomness& z, Rng& rng) {
  if (buckets.empty()) throw std::invalid_argument("no buckets");
  const double slot_eps = eps / static_cast<double>(buckets.size());
  std::vector<int8_t> out(buckets.size());
  for (size_t t = 0; t < buckets.size(); ++t)
    out[t] = hist_encode(buckets[t], user * buckets.size() + t, slot_eps, z, rng);
  return out;
}

double multi_hist_decode(std::string_view bucket,
                         std::span<const std::vector<int8_t>> reports,
                         size_t num_slots, double eps, const SharedRandomness& z) {
  if (num_slots == 0) throw std::invalid_argument("no slots");
  const double slot_eps = eps / static_cast<double>(num_slots);
  long long sum = 0;
  for (size_t i = 0; i < reports.size(); ++i) {
    if (reports[i].size() != num_slots)
      throw std::invalid_argument("report slot count mismatch");
    for (size_t t = 0; t < num_slots; ++t)
      sum += static_cast<long long>(reports[i][t]) *
             z.sign(bucket, i * num_slots + t);
  }
  return decode_scale(slot_eps) * static_cast<double>(sum);
}

std::vector<Vec> multi_vector_encode(const std::vector<std::string>& buckets,
                                     const Vec& x, uint64_t user, double eps,
                                     const SharedRandomness& z, Rng& rng) {
  if (buckets.empty()) throw std::invalid_argument("no buckets");
  const double slot_eps = eps / static_cast<double>(buckets.size());
  std::vector<Vec> out(buckets.size());
  for (size_t t = 0; t < buckets.size(); ++t)
    out[t] = vector_sum_encode(buckets[t], x, user * buckets.size() + t,
                               slot_eps, z, rng);
  return out;
}

Vec multi_vector_decode(std::string_view bucket,
                        std::span<const std::vector<Vec>> reports,
                        size_t num_slots, const SharedRandomness& z) {
  if (num_slots == 0) throw std::invalid_argument("no slots");
  const size_t count = reports.size() * num_slots;
  const int dim =
      reports.empty() ? 0 : static_cast<int>(reports[0][0].size());
  return signed_vector_sum(
      bucket,
      [&](size_t i) -> const Vec& { return reports[i / num_slots][i % num_slots]; },
      [](size_t i) { return static_cast<uint64_t>(i); }, count, dim, z);
}

}  // namespace dpkm
