#include "dpkm/transport.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace dpkm {

double mt_with_map(const TransportMap& map, const WeightedPointSet& from,
                   const WeightedPointSet& to) {
  if (map.target.size() != from.support_size())
    throw std::invalid_argument("transport map size mismatch");
  double move = 0.0;
  std::map<Vec, double> pushed;
  const auto& entries = from.entries();
  for (size_t i = 0; i < entries.size(); ++i) {
    if (map.target[i].size() != from.dim())
      throw std::invalid_argument("transport target dimension mismatch");
    move += entries[i].second * sq_dist(map.target[i], entries[i].first);
    pushed[map.target[i]] += entries[i].second;
  }
  double mismatch = 0.0;
  for (const auto& [x, w] : to.entries()) {
    auto it = pushed.find(x);
    const double pw = it == pushed.end() ? 0.0 : it->second;
    mismatch += std::abs(pw - w);
    if (it != pushed.end()) pushed.erase(it);
  }
  for (const auto& [x, w] : pushed) mismatch += w;  // mass pushed off-support
  return move + mismatch;
}

std::pair<double, TransportMap> mt_bruteforce(const WeightedPointSet& from,
                                              const WeightedPointSet& to,
                                              uint64_t max_maps) {
  if (from.dim() != to.dim()) throw std::invalid_argument("dimension mismatch");
  const size_t n = from.support_size();
  const size_t choices = to.support_size() + 1;  // to-support or stay put
  double count = 1.0;
  for (size_t i = 0; i < n; ++i) {
    count *= static_cast<double>(choices);
    if (count > static_cast<double>(max_maps))
      throw std::runtime_error("transport enumeration over budget");
  }

  TransportMap current;
  current.target.resize(n);
  std::vector<size_t> digit(n, 0);
  auto apply = [&]() {
    for (size_t i = 0; i < n; ++i)
      current.target[i] = digit[i] < to.support_size()
                              ? to.entries()[digit[i]].first
                              : from.entries()[i].first;
  };

  double best = std::numeric_limits<double>::infinity();
  TransportMap best_map;
  while (true) {
    apply();
    const double v = mt_with_map(current, from, to);
    if (v < best) {
      best = v;
      best_map = current;
    }
    size_t i = 0;
    while (i < n && ++digit[i] == choices) digit[i++] = 0;
    if (i == n) break;
  }
  if (n == 0) {
    // Empty source still pays the target's mass.
    best = 0.0;
    for (const auto& [x, w] : to.entries()) best += w;
    best_map.target.clear();
  }
  return {best, best_map};
}

CoresetReport coreset_check(const WeightedPointSet& s, const WeightedPointSet& sp,
                            double gamma, double t,
                            const std::vector<CenterSet>& candidates) {
  CoresetReport report;
  report.gamma = gamma;
  report.t = t;
  for (size_t i = 0; i < candidates.size(); ++i) {
    const double cs = cost(s, candidates[i]);
    const double csp = cost(sp, candidates[i]);
    const double need = std::max({csp - (1.0 + gamma) * cs,
                                  (1.0 - gamma) * cs - csp, 0.0});
    report.t_required = std::max(report.t_required, need);
    const double tol = 1e-9 * (1.0 + cs + csp);
    if (csp > (1.0 + gamma) * cs + t + tol || csp < (1.0 - gamma) * cs - t - tol)
      report.violations.push_back({i, cs, csp, candidates[i]});
  }
  return report;
}

bool movement_coreset_check(const WeightedPointSet& from, const WeightedPointSet& to,
                            int k, double xi, double t,
                            const std::vector<Vec>& opt_candidates,
                            const std::vector<CenterSet>& candidates) {
  const double mt = mt_bruteforce(from, to).first;
  const double opt = opt_bruteforce(from, k, opt_candidates);
  const double factor = 1.0 + 2.0 / xi;
  if (mt > xi / (8.0 * factor) * opt + t + 1e-12) return true;  // premise fails
  return coreset_check(from, to, xi, 4.0 * factor * t, candidates).ok();
}

std::vector<CenterSet> subset_center_sets(const std::vector<Vec>& pool, int k,
                                          uint64_t cap) {
  std::vector<CenterSet> out;
  for_each_subset(pool.size(), k, cap, [&](const std::vector<size_t>& idx) {
    CenterSet c;
    c.reserve(idx.size());
    for (size_t i : idx) c.push_back(pool[i]);
    out.push_back(std::move(c));
  });
  return out;
}

std::vector<Vec> axis_grid(int dim, double pitch) {
  if (dim < 1 || pitch <= 0.0) throw std::invalid_argument("bad grid request");
  const int64_t half = static_cast<int64_t>(std::floor(1.0 / pitch));
  std::vector<Vec> out;
  Vec point(dim, 0.0);
  std::vector<int64_t> g(dim, -half);
  while (true) {
    double sq = 0.0;
    for (int i = 0; i < dim; ++i) {
      point[i] = g[i] * pitch;
      sq += point[i] * point[i];
    }
    if (sq <= 1.0 + 1e-12) out.push_back(point);
    int i = 0;
    while (i < dim && ++g[i] > half) g[i++] = -half;
    if (i == dim) break;
  }
  return out;
}

std::string CoresetReport::to_json() const {
  nlohmann::json j;
  j["gamma"] = gamma;
  j["t"] = t;
  j["t_required"] = t_required;
  j["ok"] = ok();
  j["violations"] = nlohmann::json::array();
  for (const auto& v : violations) {
    nlohmann::json jv;
    jv["candidate_index"] = v.candidate_index;
    jv["cost_s"] = v.cost_s;
    jv["cost_sp"] = v.cost_sp;
    jv["centers"] = v.centers;
    j["violations"].push_back(jv);
  }
  return j.dump();
}

}  // namespace dpkm
