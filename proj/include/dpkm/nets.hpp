#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dpkm/core.hpp"

namespace dpkm {

// A point of the level-i net, stored as integer grid coordinates. Level 0 is
// the single point at the origin (all-zero coords).
struct NetPoint {
  int level = 0;
  std::vector<int64_t> grid;

  bool operator==(const NetPoint& o) const = default;
  bool operator<(const NetPoint& o) const {
    if (level != o.level) return level < o.level;
    return grid < o.grid;
  }
};

std::string net_point_key(const NetPoint& p);
NetPoint net_point_from_key(const std::string& key);

// Hierarchy of axis-aligned grid nets over the unit ball.
//
// Level i has covering radius rho_i = 2^-i and realized packing radius
// gamma * rho_i with gamma = 1/sqrt(d); the grid pitch is 2*rho_i/sqrt(d).
// Levels i >= 1 are offset by 1e-7 * rho_i in every coordinate so points of
// different levels never coincide. A grid point belongs to the level when
// its norm is at most 1 + 2*rho_i (the slack keeps per-coordinate rounding
// an exact nearest-member decode along representative chains).
class NetFamily {
 public:
  NetFamily(int dim, int levels);

  int dim() const { return dim_; }
  int levels() const { return levels_; }  // deepest level index T
  double gamma() const { return gamma_; }
  double rho(int level) const;
  double packing_radius(int level) const { return gamma_ * rho(level); }
  double cell(int level) const;    // grid pitch at level >= 1
  double offset(int level) const;  // per-coordinate offset at level >= 1

  Vec coords(const NetPoint& p) const;
  bool in_level(int level, const Vec& z) const;

  // Nearest level member to x (per-coordinate rounding, exact ties broken
  // toward the lexicographically smaller grid point). Requires
  // ||x|| <= 1 + 2*rho(level) so the result is a member.
  NetPoint decode(int level, const Vec& x) const;

  // All level members within distance r of x, r >= rho(level), sorted by
  // grid coordinates, duplicate-free.
  std::vector<NetPoint> enumerate_ball(int level, const Vec& x, double r) const;

  // Members of the next level whose nearest level-p point is p itself.
  std::vector<NetPoint> children(const NetPoint& p) const;

  // Upper bound on |children| from the packing/covering volume argument.
  double branching_bound() const;

 private:
  void check_level(int level) const;

  int dim_;
  int levels_;
  double gamma_;
};

// Representative chain of x: chain[i] lives at level i; chain[T] decodes x
// and chain[i] decodes chain[i+1]. Requires ||x|| <= 1 + tolerance.
std::vector<NetPoint> representative_chain(const NetFamily& f, const Vec& x);

}  // namespace dpkm
