#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

#include "hmono/operator_spec.hpp"

// H-monotonicity checkers.
//
// T is H-monotone when <v - v', xi1(a) - xi1(b)> >= 0 for every horizontal
// pair (b in the plane of a) and every selection v in T(a), v' in T(b); the
// cyclic variant sums <xi1(eta_i) - xi1(eta_{i+1}), v_i> over closed
// H-chains.  Checks minimize over the set selections through the support
// functions, which is exact for the three set kinds (and termwise exact for
// chains, since the cyclic sum is separable in the v_i).

namespace hmono {

// Absolute slack tolerance below which a check fails.
inline constexpr double kSlackTol = 1e-9;
// Violations must clear this threshold before a witness is reported, so float
// noise on a genuinely monotone operator never produces a spurious witness.
inline constexpr double kWitnessThreshold = 1e-6;

struct ChainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ChainMode { Validate, Adjust };
class ClosedHChain;
ClosedHChain close_chain(const std::vector<HVec>& xy, double t0, ChainMode mode,
                         double tol);

// Cyclic sequence eta_0, ..., eta_m (m >= 1) with eta_{i+1} in the horizontal
// plane of eta_i (indices mod m+1).  Closure of the t-lift is equivalent to
// the symplectic sum  sum_i <y_i, x_{i+1}> - <x_i, y_{i+1}>  vanishing: the
// twirling of consecutive horizontal planes must cancel around the loop.
class ClosedHChain {
 public:
  // Validates consecutive horizontality and closure within tol.
  static ClosedHChain from_points(std::vector<Point> points,
                                  double tol = 1e-10);

  const std::vector<Point>& points() const { return points_; }
  // Number of points, m + 1.
  int size() const { return static_cast<int>(points_.size()); }
  double closure_sum() const;

 private:
  explicit ClosedHChain(std::vector<Point> points)
      : points_(std::move(points)) {}
  std::vector<Point> points_;

  friend ClosedHChain close_chain(const std::vector<HVec>&, double, ChainMode,
                                  double);
};

// Builds a closed H-chain over the first-layer polygon `xy` with t-lift
// started at t0.
//   Validate: requires the symplectic closure sum to vanish within tol.
//   Adjust:   moves the last vertex along the closure gradient to zero the
//             sum exactly (one-dimensional affine solve; needs >= 3 vertices
//             and a nondegenerate polygon).
ClosedHChain close_chain(const std::vector<HVec>& xy, double t0, ChainMode mode,
                         double tol = 1e-10);

struct PairWitness {
  Point a, b;
  HVec va, vb;  // worst-case selections
  double slack = 0.0;
};

struct ChainWitness {
  std::vector<Point> points;
  std::vector<HVec> values;  // worst-case selection per chain point
  double slack = 0.0;
};

struct MonotoneVerdict {
  bool ok = true;
  double worst_slack = std::numeric_limits<double>::infinity();
  std::optional<std::variant<PairWitness, ChainWitness>> witness;
};

// Worst-case monotonicity slack of the horizontal pair (a, b):
//   min_{v in T(a), v' in T(b)} <v - v', d>,  d = xi1(a) - xi1(b),
// evaluated as -support(T(a), -d) - support(T(b), d).  Requires b in the
// plane of a (within tol).
MonotoneVerdict check_h_pair(const OperatorSpec& T, const Point& a,
                             const Point& b, double tol = kSlackTol);

struct Box {
  double lo = -5.0;
  double hi = 5.0;
};

// Samples `count` horizontal pairs: a uniform in the box, b = exp_h(a, w)
// with a uniform direction and log-uniform magnitude |w| in [1e-3, 10].
// Deterministic for a fixed seed (per-trial derived seeds, so the verdict is
// independent of worker sharding); the reported witness is the one with the
// smallest trial index.
MonotoneVerdict sample_h_pairs(const OperatorSpec& T, const Box& box, int count,
                               std::uint64_t seed, double tol = kSlackTol);

// Worst-case cyclic slack  sum_i min_{v_i in T(eta_i)} <xi1(eta_i) -
// xi1(eta_{i+1}), v_i>  of a valid closed H-chain.
MonotoneVerdict check_cyclic(const OperatorSpec& T, const ClosedHChain& chain,
                             double tol = kSlackTol);

// Bulk cyclic property run over `trials` random valid closed H-chains of
// 3..max_len vertices (vertices in [-3,3]^{2n}, t0 in [-3,3], closed by
// adjustment): aggregates the worst slack and the earliest witness.
MonotoneVerdict sample_cyclic_chains(const OperatorSpec& T, int max_len,
                                     int trials, std::uint64_t seed,
                                     double tol = kSlackTol);

// Randomized hunt for a cyclic-monotonicity violation: same chain generator
// as sample_cyclic_chains; returns the first chain (in trial order) whose
// slack falls below the witness threshold, or nullopt.
std::optional<ChainWitness> search_cyclic_violation(const OperatorSpec& T,
                                                    int max_len, int trials,
                                                    std::uint64_t seed,
                                                    double tol = kSlackTol);

}  // namespace hmono
