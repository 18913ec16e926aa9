#include "dpkm/shuffle.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace dpkm {

std::vector<uint64_t> split_and_mix(uint64_t x, uint64_t p, int m, Rng& rng) {
  if (p < 2) throw std::invalid_argument("modulus must be >= 2");
  if (m < 1) throw std::invalid_argument("need at least one share");
  if (x >= p) throw std::invalid_argument("value not reduced mod p");
  std::vector<uint64_t> shares(m);
  uint64_t acc = 0;
  for (int i = 0; i + 1 < m; ++i) {
    shares[i] = rng.below(p);
    acc = (acc + shares[i]) % p;
  }
  shares[m - 1] = (x + p - acc) % p;
  return shares;
}

bool bernoulli_exp(double gamma, Rng& rng) {
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be nonnegative");
  if (gamma <= 1.0) {
    // Accept with probability exp(-gamma) via the alternating-series trick.
    uint64_t k = 1;
    while (rng.bernoulli(gamma / static_cast<double>(k))) ++k;
    return (k % 2) == 1;
  }
  const double whole = std::floor(gamma);
  for (double i = 0.0; i < whole; i += 1.0)
    if (!bernoulli_exp(1.0, rng)) return false;
  return bernoulli_exp(gamma - whole, rng);
}

int64_t discrete_laplace(uint64_t t, Rng& rng) {
  if (t < 1) throw std::invalid_argument("scale must be >= 1");
  while (true) {
    const uint64_t u = rng.below(t);
    if (!bernoulli_exp(static_cast<double>(u) / static_cast<double>(t), rng))
      continue;
    uint64_t v = 0;
    while (bernoulli_exp(1.0, rng)) ++v;
    const auto x = static_cast<int64_t>(u + t * v);
    const bool negative = rng.bernoulli(0.5);
    if (negative && x == 0) continue;
    return negative ? -x : x;
  }
}

int64_t discrete_gaussian(double sigma, Rng& rng) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  const auto t = static_cast<uint64_t>(std::floor(sigma)) + 1;
  const double s2 = sigma * sigma;
  while (true) {
    const int64_t y = discrete_laplace(t, rng);
    const double dev =
        std::abs(static_cast<double>(y)) - s2 / static_cast<double>(t);
    if (bernoulli_exp(dev * dev / (2.0 * s2), rng)) return y;
  }
}

static uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>(
      static_cast<unsigned __int128>(a) * b % m);
}

static uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
  uint64_t r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

static bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                     23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  // Deterministic for all 64-bit integers with this base set.
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                     23ull, 29ull, 31ull, 37ull}) {
    uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 0; i < r - 1; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

uint64_t next_prime_above(uint64_t x) {
  uint64_t n = x + 1;
  if (n <= 2) return 2;
  if ((n & 1) == 0) ++n;
  while (!is_prime(n)) n += 2;
  return n;
}

ShuffleConfig ShuffleConfig::derive(uint64_t n, int dim, double eps,
                                    double delta, double beta, bool noise) {
  if (n < 1 || dim < 1) throw std::invalid_argument("bad protocol size");
  if (!(eps > 0.0) || !(delta > 0.0) || delta >= 1.0)
    throw std::invalid_argument("bad privacy parameters");
  if (!(beta > 0.0) || beta >= 1.0)
    throw std::invalid_argument("beta must be in (0,1)");
  ShuffleConfig c;
  c.n = n;
  c.dim = dim;
  c.epsilon = eps;
  c.delta = delta;
  c.beta = beta;
  c.noise = noise;
  c.buckets = static_cast<uint64_t>(std::ceil(2.0 * n / beta));
  c.quant = 1.0 / static_cast<double>(n);
  const double sd = static_cast<double>(c.buckets) * dim;
  c.sigma = 20.0 * std::log(sd / delta) / eps;
  const double reach =
      2.0 * static_cast<double>(n) / c.quant + 20.0 * c.sigma * std::log(sd / beta);
  c.prime = next_prime_above(static_cast<uint64_t>(std::ceil(reach)));
  const double logn = std::log(static_cast<double>(std::max<uint64_t>(n, 2)));
  c.shares = static_cast<int>(std::ceil(
      3.0 * (1.0 + std::log(2.0 * dim * static_cast<double>(c.prime) / delta) /
                       logn)));
  return c;
}

static uint64_t to_field(int64_t v, uint64_t p) {
  const auto sp = static_cast<int64_t>(p);
  int64_t r = v % sp;
  if (r < 0) r += sp;
  return static_cast<uint64_t>(r);
}

std::vector<ShuffleMessage> shuffle_vector_encode(const Vec& x,
                                                  std::string_view bucket,
                                                  uint64_t user,
                                                  const ShuffleConfig& cfg,
                                                  const SharedRandomness& z,
                                                  Rng& rng) {
  if (x.size() != static_cast<size_t>(cfg.dim))
    throw std::invalid_argument("vector dimension mismatch");
  if (norm(x) > 1.0 + kNormTol)
    throw std::invalid_argument("input outside unit ball");
  std::vector<int64_t> quantized(cfg.dim);
  for (int k = 0; k < cfg.dim; ++k)
    quantized[k] = static_cast<int64_t>(std::floor(x[k] / cfg.quant));
  const uint64_t own = z.bucket_index(bucket, cfg.buckets);

  std::vector<ShuffleMessage> out;
  out.reserve(cfg.messages_per_user());
  for (uint64_t l = 0; l < cfg.buckets; ++l) {
    for (int k = 0; k < cfg.dim; ++k) {
      int64_t u = (l == own) ? quantized[k] : 0;
      if (user == 0 && cfg.noise) u += discrete_gaussian(cfg.sigma, rng);
      for (uint64_t share : split_and_mix(to_field(u, cfg.prime), cfg.prime,
                                          cfg.shares, rng))
        out.push_back(ShuffleMessage{static_cast<uint32_t>(l),
                                     static_cast<uint32_t>(k), share});
    }
  }
  return out;
}

ShuffleAccumulator::ShuffleAccumulator(const ShuffleConfig& cfg)
    : cfg_(cfg), cells_(cfg.buckets * static_cast<uint64_t>(cfg.dim), 0) {}

void ShuffleAccumulator::add(const ShuffleMessage& m) {
  if (m.bucket >= cfg_.buckets || m.coord >= static_cast<uint32_t>(cfg_.dim))
    throw std::invalid_argument("message cell out of range");
  if (m.value >= cfg_.prime) throw std::invalid_argument("share not in field");
  uint64_t& cell = cells_[static_cast<uint64_t>(m.bucket) * cfg_.dim + m.coord];
  cell = (cell + m.value) % cfg_.prime;
}

void ShuffleAccumulator::add(std::span<const ShuffleMessage> msgs) {
  for (const auto& m : msgs) add(m);
}

Vec ShuffleAccumulator::decode(std::string_view bucket,
                               const SharedRandomness& z) const {
  const uint64_t own = z.bucket_index(bucket, cfg_.buckets);
  Vec out(cfg_.dim, 0.0);
  for (int k = 0; k < cfg_.dim; ++k) {
    const uint64_t v = cells_[own * cfg_.dim + k];
    const double centered =
        v > cfg_.prime / 2
            ? static_cast<double>(v) - static_cast<double>(cfg_.prime)
            : static_cast<double>(v);
    out[k] = centered * cfg_.quant;
  }
  return out;
}

Vec shuffle_vector_decode(std::span<const ShuffleMessage> msgs,
                          std::string_view bucket, const ShuffleConfig& cfg,
                          const SharedRandomness& z) {
  ShuffleAccumulator acc(cfg);
  acc.add(msgs);
  return acc.decode(bucket, z);
}

static void put_le(std::ostream& os, uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

static uint64_t get_le(std::istream& is, int bytes) {
  uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    const int c = is.get();
    if (c == std::char_traits<char>::eof())
      throw std::runtime_error("truncated message stream");
    v |= static_cast<uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return v;
}

void write_messages(std::ostream& os, std::span<const ShuffleMessage> msgs) {
  for (const auto& m : msgs) {
    put_le(os, m.bucket, 4);
    put_le(os, m.coord, 4);
    put_le(os, m.value, 8);
  }
}

std::vector<ShuffleMessage> read_messages(std::istream& is) {
  std::vector<ShuffleMessage> out;
  while (is.peek() != std::char_traits<char>::eof()) {
    ShuffleMessage m;
    m.bucket = static_cast<uint32_t>(get_le(is, 4));
    m.coord = static_cast<uint32_t>(get_le(is, 4));
    m.value = get_le(is, 8);
    out.push_back(m);
  }
  return out;
}

}  // namespace dpkm
