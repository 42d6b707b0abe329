#pragma once

#include <optional>
#include <vector>

#include "hmono/operator_spec.hpp"

// Minty resolvent equation on a horizontal plane: given a base point, lam > 0
// and a target p in V1, find zeta in H_base with  p in xi1(zeta) + lam
// T(zeta).  Solutions are parameterized as zeta(w) = exp_h(base, w), which
// keeps every iterate exactly on the plane, and the residual
//   F(w) = xi1(base) + w + lam * T(zeta(w)) - p
// is driven to zero by a safeguarded damped fixed-point iteration
//   w <- w - alpha F(w),
// with alpha backtracking halved whenever |F| fails to decrease.  The xi1 + w
// term contributes strong monotonicity with modulus 1 along horizontal pairs,
// which makes -F a descent direction for |F| wherever the operator part is
// monotone in w; the backtracking guard covers the rest.

namespace hmono {

struct SolveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when an iterate lands on a point where the operator is set-valued
// (for the gauge subdifferential this can only be the group identity, which
// the solver handles up front via the ball membership branch).
struct SetValuedIterateError : SolveError {
  using SolveError::SolveError;
};

struct MintyOptions {
  double tol = 1e-11;          // residual target |F(w)| <= tol
  int max_iter = 20000;        // accepted-step budget
  std::optional<HVec> start;   // initial w (default 0)
  bool record_history = false; // keep the accepted-step residuals
};

struct MintySolution {
  Point zeta;
  double residual = 0.0;
  int iterations = 0;
  std::vector<double> history;  // residuals at accepted steps, if recorded
};

MintySolution minty_solve(const OperatorSpec& T, const Point& base, double lam,
                          const HVec& p, const MintyOptions& opts = {});

// One resolvent fiber sample: the plane H_{(0,...,0,h)} meets Q_lam(v) for
// every height h (the fibers are unbounded), and `points` holds one solution
// per requested height.
struct FiberSample {
  HVec v;
  double lam = 0.0;
  std::vector<Point> points;
};

FiberSample fiber_sample(const OperatorSpec& T, const HVec& v, double lam,
                         const std::vector<double>& heights,
                         const MintyOptions& opts = {});

// Pairwise 1-Lipschitz bound for the resolvent in the Hausdorff sense,
// verified through the constructive pairing: for each eta solving for v on
// H_{(0,..,0,h)}, solve for v2 on H_eta and require
//   d_H(eta, eta') = |xi1(eta) - xi1(eta')| <= |v - v2| + tol.
struct LipschitzEntry {
  double height = 0.0;
  Point eta, eta2;
  double xi1_distance = 0.0;
  double bound = 0.0;
  bool ok = false;
};

struct LipschitzReport {
  HVec v, v2;
  double lam = 0.0;
  double tol = 0.0;
  std::vector<LipschitzEntry> entries;
  bool all_ok = true;
};

LipschitzReport lipschitz_check(const OperatorSpec& T, double lam,
                                const HVec& v, const HVec& v2,
                                const std::vector<double>& heights,
                                double tol = kDefaultTol,
                                const MintyOptions& opts = {});

}  // namespace hmono
