#include "hmono/resolvent.hpp"

#include <cmath>
#include <sstream>

namespace hmono {

namespace {

struct Objective {
  const OperatorSpec& T;
  const Point& base;
  double lam;
  const HVec& p;
  HVec xi_base;

  // F(w); throws SetValuedIterateError if T is set-valued at the iterate.
  HVec eval(const HVec& w) const {
    const Point zeta = exp_h(base, w);
    const ValueSet s = T.eval(zeta);
    if (s.kind() != ValueSet::Kind::Singleton) {
      throw SetValuedIterateError(
          "minty_solve: set-valued iterate encountered off the handled "
          "branch");
    }
    return xi_base + w + s.singleton_value() * lam - p;
  }

  bool single_valued(const HVec& w) const {
    return T.single_valued_at(exp_h(base, w));
  }
};

// Local Lipschitz estimate of w -> T(zeta(w)) by probing axis offsets around
// the start; feeds the initial damping 1/(1 + lam L).
double estimate_lipschitz(const OperatorSpec& T, const Point& base,
                          const HVec& w0) {
  const int n = base.n();
  const double h = 0.5;
  double worst = 0.0;
  for (int j = 0; j < 2 * n; ++j) {
    Vec d = Vec::Zero(2 * n);
    d[j] = h;
    const HVec wp = w0 + HVec::from_flat(d);
    const HVec wm = w0 - HVec::from_flat(d);
    const Point zp = exp_h(base, wp);
    const Point zm = exp_h(base, wm);
    if (!T.single_valued_at(zp) || !T.single_valued_at(zm)) continue;
    const HVec vp = T.eval(zp).singleton_value();
    const HVec vm = T.eval(zm).singleton_value();
    worst = std::max(worst, (vp - vm).norm() / (2.0 * h));
  }
  return worst;
}

}  // namespace

MintySolution minty_solve(const OperatorSpec& T, const Point& base, double lam,
                          const HVec& p, const MintyOptions& opts) {
  detail::require_same_n(T.n(), base.n(), "minty_solve");
  detail::require_same_n(base.n(), p.n(), "minty_solve");
  if (!(lam > 0.0)) {
    throw std::invalid_argument("minty_solve: lam must be positive");
  }

  const int n = base.n();

  // Set-valued branch: the only candidate is the plane's t-axis point
  // (0, 0, base.t).  If the operator has a ball value there and p - xi1(q)
  // lands in lam times that ball, q solves the inclusion exactly.
  {
    const Point q(Vec::Zero(n), Vec::Zero(n), base.t);
    const ValueSet sq = T.eval(q);
    if (sq.kind() == ValueSet::Kind::Ball) {
      const ValueSet target = sq.translate_scale(xi1(q), lam);
      const double d = target.distance_to(p);
      if (d <= opts.tol) {
        MintySolution sol;
        sol.zeta = q;
        sol.residual = d;
        sol.iterations = 0;
        if (opts.record_history) sol.history.push_back(d);
        return sol;
      }
    }
  }

  Objective obj{T, base, lam, p, xi1(base)};

  // Starting point; nudge off any set-valued point deterministically.
  HVec w = opts.start.value_or(HVec::zero(n));
  if (!obj.single_valued(w)) {
    w = p - obj.xi_base;
    if (!obj.single_valued(w)) {
      Vec nudge = Vec::Zero(2 * n);
      nudge[0] = 0.25;
      w = w + HVec::from_flat(nudge);
    }
  }

  const double lhat = estimate_lipschitz(T, base, w);
  const double alpha0 = 1.0 / (1.0 + lam * std::max(lhat, 1e-6));
  const double alpha_max = 1.0;

  HVec f = obj.eval(w);
  double res = f.norm();
  double alpha = alpha0;

  MintySolution sol;
  if (opts.record_history) sol.history.push_back(res);

  int accepted = 0;
  while (res > opts.tol && accepted < opts.max_iter) {
    bool moved = false;
    double a = alpha;
    while (a >= 1e-18) {
      HVec w_try = w - f * a;
      // A trial landing exactly on a set-valued point is sidestepped by a
      // slightly shorter step.
      if (!obj.single_valued(w_try)) {
        a *= 0.9375;
        continue;
      }
      const HVec f_try = obj.eval(w_try);
      const double res_try = f_try.norm();
      if (res_try < res) {
        w = std::move(w_try);
        f = f_try;
        res = res_try;
        alpha = std::min(2.0 * a, alpha_max);
        moved = true;
        break;
      }
      a *= 0.5;
    }
    if (!moved) {
      std::ostringstream msg;
      msg << "minty_solve: stalled at residual " << res << " after "
          << accepted << " accepted steps (lam=" << lam << ")";
      throw SolveError(msg.str());
    }
    ++accepted;
    if (opts.record_history) sol.history.push_back(res);
  }

  if (res > opts.tol) {
    std::ostringstream msg;
    msg << "minty_solve: no convergence within " << opts.max_iter
        << " steps, residual " << res;
    throw SolveError(msg.str());
  }

  sol.zeta = exp_h(base, w);
  sol.residual = res;
  sol.iterations = accepted;
  return sol;
}

FiberSample fiber_sample(const OperatorSpec& T, const HVec& v, double lam,
                         const std::vector<double>& heights,
                         const MintyOptions& opts) {
  if (heights.empty()) {
    throw std::invalid_argument("fiber_sample: heights must be nonempty");
  }
  const int n = T.n();
  FiberSample out;
  out.v = v;
  out.lam = lam;
  out.points.reserve(heights.size());
  for (double h : heights) {
    const Point base(Vec::Zero(n), Vec::Zero(n), h);
    try {
      out.points.push_back(minty_solve(T, base, lam, v, opts).zeta);
    } catch (const SolveError& e) {
      std::ostringstream msg;
      msg << "fiber_sample: solve failed at height " << h << ": " << e.what();
      throw SolveError(msg.str());
    }
  }
  return out;
}

LipschitzReport lipschitz_check(const OperatorSpec& T, double lam,
                                const HVec& v, const HVec& v2,
                                const std::vector<double>& heights, double tol,
                                const MintyOptions& opts) {
  LipschitzReport rep;
  rep.v = v;
  rep.v2 = v2;
  rep.lam = lam;
  rep.tol = tol;
  const double bound = (v - v2).norm();

  const FiberSample fiber = fiber_sample(T, v, lam, heights, opts);
  for (std::size_t i = 0; i < fiber.points.size(); ++i) {
    const Point& eta = fiber.points[i];
    MintySolution sol2;
    try {
      sol2 = minty_solve(T, eta, lam, v2, opts);
    } catch (const SolveError& e) {
      std::ostringstream msg;
      msg << "lipschitz_check: pairing solve failed at height " << heights[i]
          << ": " << e.what();
      throw SolveError(msg.str());
    }
    LipschitzEntry entry;
    entry.height = heights[i];
    entry.eta = eta;
    entry.eta2 = sol2.zeta;
    entry.xi1_distance = (xi1(eta) - xi1(sol2.zeta)).norm();
    entry.bound = bound;
    entry.ok = entry.xi1_distance <= bound + tol;
    rep.all_ok = rep.all_ok && entry.ok;
    rep.entries.push_back(std::move(entry));
  }
  return rep;
}

}  // namespace hmono
