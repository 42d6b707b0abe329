#pragma once

#include <variant>
#include <vector>

#include "hmono/heis.hpp"

// Closed convex subsets of V1 with exact support functions.  Every set the
// operator catalogue produces is a singleton, a closed ball, or the convex
// hull of finitely many vertices, so the support function (and hence any
// worst-case inner product) is evaluated exactly; there is no general
// convex-body representation.  Empty sets are a construction error, not a
// representable state.

namespace hmono {

class ValueSet {
 public:
  enum class Kind { Singleton, Ball, Polytope };

  static ValueSet singleton(HVec v);
  static ValueSet ball(HVec center, double radius);          // radius >= 0
  static ValueSet polytope(std::vector<HVec> vertices);      // nonempty

  Kind kind() const;
  int n() const;

  // sup_{v in S} <v, d>.
  double support(const HVec& d) const;

  // A maximizer of <v, d> over S (any vertex attaining the max for polytopes,
  // the first in storage order on ties; the center when d = 0 for balls).
  HVec support_point(const HVec& d) const;

  // Euclidean distance from p to the set (0 when p is a member).
  double distance_to(const HVec& p) const;

  bool contains(const HVec& p, double tol = 1e-12) const;

  // The set  shift + scale * S  (scale > 0); all three kinds are closed
  // under this map.
  ValueSet translate_scale(const HVec& shift, double scale) const;

  // Accessors for the underlying representation.
  const HVec& singleton_value() const;
  const HVec& ball_center() const;
  double ball_radius() const;
  const std::vector<HVec>& vertices() const;

 private:
  struct Singleton {
    HVec v;
  };
  struct Ball {
    HVec center;
    double radius;
  };
  struct Polytope {
    std::vector<HVec> vertices;
  };

  explicit ValueSet(std::variant<Singleton, Ball, Polytope> rep);

  std::variant<Singleton, Ball, Polytope> rep_;
};

// max_{u in A, v in B} |u - v|; exact by case analysis (the maximum of a
// convex function is attained at extreme points, and balls contribute their
// radius along the line of centers).
double farthest_distance(const ValueSet& a, const ValueSet& b);

// Diameter of the union of finitely many sets.
double union_diameter(const std::vector<ValueSet>& sets);

// Nearest point of conv{vertices} to p (Wolfe's minimum-norm-point scheme;
// exact up to floating point, terminates on these tiny instances).
HVec nearest_point_in_hull(const std::vector<HVec>& vertices, const HVec& p);

}  // namespace hmono
