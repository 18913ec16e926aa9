#include "dpkm/nets.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dpkm {

std::string net_point_key(const NetPoint& p) {
  std::ostringstream os;
  os << 'L' << p.level;
  for (int64_t g : p.grid) os << ':' << g;
  return os.str();
}

NetPoint net_point_from_key(const std::string& key) {
  if (key.empty() || key[0] != 'L') throw std::invalid_argument("bad net point key");
  NetPoint p;
  std::istringstream is(key.substr(1));
  std::string tok;
  if (!std::getline(is, tok, ':')) throw std::invalid_argument("bad net point key");
  p.level = std::stoi(tok);
  while (std::getline(is, tok, ':')) p.grid.push_back(std::stoll(tok));
  return p;
}

NetFamily::NetFamily(int dim, int levels) : dim_(dim), levels_(levels) {
  if (dim < 1) throw std::invalid_argument("dimension must be positive");
  if (levels < 0) throw std::invalid_argument("levels must be nonnegative");
  gamma_ = 1.0 / std::sqrt(static_cast<double>(dim));
}

void NetFamily::check_level(int level) const {
  if (level < 0 || level > levels_) throw std::invalid_argument("level out of range");
}

double NetFamily::rho(int level) const {
  check_level(level);
  return std::ldexp(1.0, -level);
}

double NetFamily::cell(int level) const {
  check_level(level);
  if (level == 0) throw std::invalid_argument("level 0 has a single point");
  return 2.0 * rho(level) * gamma_;
}

double NetFamily::offset(int level) const {
  check_level(level);
  if (level == 0) return 0.0;
  return 1e-7 * rho(level);
}

Vec NetFamily::coords(const NetPoint& p) const {
  check_level(p.level);
  if (p.grid.size() != static_cast<size_t>(dim_))
    throw std::invalid_argument("net point dimension mismatch");
  Vec out(dim_);
  if (p.level == 0) {
    for (int64_t g : p.grid)
      if (g != 0) throw std::invalid_argument("level 0 point must be the origin");
    return out;
  }
  const double s = cell(p.level);
  const double o = offset(p.level);
  for (int i = 0; i < dim_; ++i) out[i] = o + s * static_cast<double>(p.grid[i]);
  return out;
}

bool NetFamily::in_level(int level, const Vec& z) const {
  check_level(level);
  return norm(z) <= 1.0 + 2.0 * rho(level) + 1e-9;
}

NetPoint NetFamily::decode(int level, const Vec& x) const {
  check_level(level);
  if (x.size() != static_cast<size_t>(dim_))
    throw std::invalid_argument("decode dimension mismatch");
  NetPoint p;
  p.level = level;
  p.grid.assign(dim_, 0);
  if (level == 0) return p;
  const double s = cell(level);
  const double o = offset(level);
  for (int i = 0; i < dim_; ++i) {
    // Nearest grid index, exact halves rounding down (lexicographically
    // smaller coordinate wins the tie).
    const double t = (x[i] - o) / s;
    p.grid[i] = static_cast<int64_t>(std::ceil(t - 0.5));
  }
  if (!in_level(level, coords(p)))
    throw std::invalid_argument("decode input too far outside the ball");
  return p;
}

std::vector<NetPoint> NetFamily::enumerate_ball(int level, const Vec& x,
                                                double r) const {
  check_level(level);
  if (x.size() != static_cast<size_t>(dim_))
    throw std::invalid_argument("enumerate dimension mismatch");
  if (r < rho(level)) throw std::invalid_argument("radius below covering radius");
  std::vector<NetPoint> out;
  if (level == 0) {
    if (norm(x) <= r + 1e-12) out.push_back(NetPoint{0, std::vector<int64_t>(dim_, 0)});
    return out;
  }
  const double s = cell(level);
  const double o = offset(level);
  const double r2 = r * r + 1e-12;
  std::vector<int64_t> g(dim_);
  Vec z(dim_);
  // Depth-first over coordinates with partial-distance pruning; ascending
  // loops yield grid-lexicographic order.
  std::function<void(int, double)> rec = [&](int i, double acc) {
    if (i == dim_) {
      NetPoint p{level, g};
      if (in_level(level, z)) out.push_back(std::move(p));
      return;
    }
    const int64_t lo = static_cast<int64_t>(std::ceil((x[i] - r - o) / s - 1e-12));
    const int64_t hi = static_cast<int64_t>(std::floor((x[i] + r - o) / s + 1e-12));
    for (int64_t v = lo; v <= hi; ++v) {
      const double c = o + s * static_cast<double>(v);
      const double d = c - x[i];
      if (acc + d * d > r2) continue;
      g[i] = v;
      z[i] = c;
      rec(i + 1, acc + d * d);
    }
  };
  rec(0, 0.0);
  return out;
}

std::vector<NetPoint> NetFamily::children(const NetPoint& p) const {
  check_level(p.level);
  if (p.level >= levels_) throw std::invalid_argument("no level below the deepest");
  const Vec z = coords(p);
  // A chain step from level i+1 to level i moves at most rho(i) for i >= 1
  // (per-coordinate rounding), so enumerating that radius is exact. Level 0
  // decodes everything to the origin, so the root's children are all level-1
  // members (whose norms may reach 1 + 2*rho(1)).
  const double r = p.level == 0 ? 1.0 + 2.0 * rho(1) + 1e-9 : rho(p.level) + 1e-12;
  std::vector<NetPoint> out;
  for (NetPoint& c : enumerate_ball(p.level + 1, z, r)) {
    if (decode(p.level, coords(c)) == p) out.push_back(std::move(c));
  }
  return out;
}

double NetFamily::branching_bound() const {
  return std::ceil(std::pow(1.0 + 2.0 / gamma_, dim_));
}

std::vector<NetPoint> representative_chain(const NetFamily& f, const Vec& x) {
  if (norm(x) > 1.0 + kNormTol)
    throw std::invalid_argument("chain input outside the unit ball");
  const int T = f.levels();
  std::vector<NetPoint> chain(T + 1);
  chain[T] = f.decode(T, x);
  for (int i = T - 1; i >= 0; --i) chain[i] = f.decode(i, f.coords(chain[i + 1]));
  return chain;
}

}  // namespace dpkm
