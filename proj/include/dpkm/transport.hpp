#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dpkm/core.hpp"

namespace dpkm {

// A transport map assigns a target point to every support entry of the
// source set, aligned with source.entries().
struct TransportMap {
  std::vector<Vec> target;
};

// Generalized movement cost of a given map: squared movement of source mass
// plus the L1 mismatch between the pushed-forward weights and the target
// set's weights (over the union of both supports).
double mt_with_map(const TransportMap& map, const WeightedPointSet& from,
                   const WeightedPointSet& to);

// Minimum movement cost over all maps sending each source point either to a
// support point of `to` or to itself (staying put and paying the weight
// mismatch). Throws if (|to|+1)^|from| exceeds `max_maps`.
std::pair<double, TransportMap> mt_bruteforce(const WeightedPointSet& from,
                                              const WeightedPointSet& to,
                                              uint64_t max_maps = 1000000);

struct CoresetViolation {
  size_t candidate_index;
  double cost_s;
  double cost_sp;
  CenterSet centers;
};

struct CoresetReport {
  double gamma = 0.0;
  double t = 0.0;
  // Smallest additive slack that would make every candidate pass at gamma.
  double t_required = 0.0;
  std::vector<CoresetViolation> violations;
  bool ok() const { return violations.empty(); }
  std::string to_json() const;
};

// Checks (1-gamma)*cost_S(C) - t <= cost_S'(C) <= (1+gamma)*cost_S(C) + t
// for every candidate center set.
CoresetReport coreset_check(const WeightedPointSet& s, const WeightedPointSet& sp,
                            double gamma, double t,
                            const std::vector<CenterSet>& candidates);

// Movement-cost-to-coreset implication: if mt(from,to) <= xi/(8(1+2/xi)) * opt + t
// (opt = brute force over `opt_candidates`), then `to` must pass
// coreset_check(from, to, xi, 4(1+2/xi)t) over `candidates`. Returns true
// when the premise fails (vacuous) or the conclusion holds.
bool movement_coreset_check(const WeightedPointSet& from, const WeightedPointSet& to,
                            int k, double xi, double t,
                            const std::vector<Vec>& opt_candidates,
                            const std::vector<CenterSet>& candidates);

// All size-k subsets of `pool` as center sets (helper for the checks above).
std::vector<CenterSet> subset_center_sets(const std::vector<Vec>& pool, int k,
                                          uint64_t cap = 1000000);

// Axis-aligned grid of the given pitch covering [-1,1]^d, intersected with
// the unit ball (plus tolerance).
std::vector<Vec> axis_grid(int dim, double pitch);

}  // namespace dpkm
