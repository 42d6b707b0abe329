#include "hmono/value_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hmono {

ValueSet::ValueSet(std::variant<Singleton, Ball, Polytope> rep)
    : rep_(std::move(rep)) {}

ValueSet ValueSet::singleton(HVec v) { return ValueSet(Singleton{std::move(v)}); }

ValueSet ValueSet::ball(HVec center, double radius) {
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("ValueSet::ball: radius must be finite >= 0");
  }
  return ValueSet(Ball{std::move(center), radius});
}

ValueSet ValueSet::polytope(std::vector<HVec> vertices) {
  if (vertices.empty()) {
    throw std::invalid_argument("ValueSet::polytope: vertex list is empty");
  }
  const int n = vertices.front().n();
  for (const HVec& v : vertices) {
    detail::require_same_n(v.n(), n, "ValueSet::polytope");
  }
  return ValueSet(Polytope{std::move(vertices)});
}

ValueSet::Kind ValueSet::kind() const {
  if (std::holds_alternative<Singleton>(rep_)) return Kind::Singleton;
  if (std::holds_alternative<Ball>(rep_)) return Kind::Ball;
  return Kind::Polytope;
}

int ValueSet::n() const {
  if (const auto* s = std::get_if<Singleton>(&rep_)) return s->v.n();
  if (const auto* b = std::get_if<Ball>(&rep_)) return b->center.n();
  return std::get<Polytope>(rep_).vertices.front().n();
}

double ValueSet::support(const HVec& d) const {
  detail::require_same_n(n(), d.n(), "ValueSet::support");
  if (const auto* s = std::get_if<Singleton>(&rep_)) return s->v.dot(d);
  if (const auto* b = std::get_if<Ball>(&rep_)) {
    return b->center.dot(d) + b->radius * d.norm();
  }
  const auto& verts = std::get<Polytope>(rep_).vertices;
  double best = -std::numeric_limits<double>::infinity();
  for (const HVec& v : verts) best = std::max(best, v.dot(d));
  return best;
}

HVec ValueSet::support_point(const HVec& d) const {
  detail::require_same_n(n(), d.n(), "ValueSet::support_point");
  if (const auto* s = std::get_if<Singleton>(&rep_)) return s->v;
  if (const auto* b = std::get_if<Ball>(&rep_)) {
    const double nd = d.norm();
    if (nd == 0.0) return b->center;
    return b->center + d * (b->radius / nd);
  }
  const auto& verts = std::get<Polytope>(rep_).vertices;
  std::size_t best = 0;
  double best_val = verts[0].dot(d);
  for (std::size_t i = 1; i < verts.size(); ++i) {
    const double val = verts[i].dot(d);
    if (val > best_val) {
      best_val = val;
      best = i;
    }
  }
  return verts[best];
}

double ValueSet::distance_to(const HVec& p) const {
  detail::require_same_n(n(), p.n(), "ValueSet::distance_to");
  if (const auto* s = std::get_if<Singleton>(&rep_)) return (p - s->v).norm();
  if (const auto* b = std::get_if<Ball>(&rep_)) {
    return std::max(0.0, (p - b->center).norm() - b->radius);
  }
  const HVec q = nearest_point_in_hull(std::get<Polytope>(rep_).vertices, p);
  return (p - q).norm();
}

bool ValueSet::contains(const HVec& p, double tol) const {
  return distance_to(p) <= tol;
}

ValueSet ValueSet::translate_scale(const HVec& shift, double scale) const {
  if (!(scale > 0.0)) {
    throw std::invalid_argument("ValueSet::translate_scale: scale must be > 0");
  }
  detail::require_same_n(n(), shift.n(), "ValueSet::translate_scale");
  if (const auto* s = std::get_if<Singleton>(&rep_)) {
    return singleton(shift + s->v * scale);
  }
  if (const auto* b = std::get_if<Ball>(&rep_)) {
    return ball(shift + b->center * scale, scale * b->radius);
  }
  std::vector<HVec> verts;
  verts.reserve(std::get<Polytope>(rep_).vertices.size());
  for (const HVec& v : std::get<Polytope>(rep_).vertices) {
    verts.push_back(shift + v * scale);
  }
  return polytope(std::move(verts));
}

const HVec& ValueSet::singleton_value() const {
  if (const auto* s = std::get_if<Singleton>(&rep_)) return s->v;
  throw std::logic_error("ValueSet: not a singleton");
}

const HVec& ValueSet::ball_center() const {
  if (const auto* b = std::get_if<Ball>(&rep_)) return b->center;
  throw std::logic_error("ValueSet: not a ball");
}

double ValueSet::ball_radius() const {
  if (const auto* b = std::get_if<Ball>(&rep_)) return b->radius;
  throw std::logic_error("ValueSet: not a ball");
}

const std::vector<HVec>& ValueSet::vertices() const {
  if (const auto* p = std::get_if<Polytope>(&rep_)) return p->vertices;
  throw std::logic_error("ValueSet: not a polytope");
}

namespace {

// Farthest point of one set from a fixed point.
double farthest_from_point(const ValueSet& s, const HVec& p) {
  switch (s.kind()) {
    case ValueSet::Kind::Singleton:
      return (s.singleton_value() - p).norm();
    case ValueSet::Kind::Ball:
      return (s.ball_center() - p).norm() + s.ball_radius();
    case ValueSet::Kind::Polytope: {
      double best = 0.0;
      for (const HVec& v : s.vertices()) best = std::max(best, (v - p).norm());
      return best;
    }
  }
  return 0.0;
}

}  // namespace

double farthest_distance(const ValueSet& a, const ValueSet& b) {
  detail::require_same_n(a.n(), b.n(), "farthest_distance");
  // Reduce on the extreme structure of `a`.
  switch (a.kind()) {
    case ValueSet::Kind::Singleton:
      return farthest_from_point(b, a.singleton_value());
    case ValueSet::Kind::Ball:
      return farthest_from_point(b, a.ball_center()) + a.ball_radius();
    case ValueSet::Kind::Polytope: {
      double best = 0.0;
      for (const HVec& v : a.vertices()) {
        best = std::max(best, farthest_from_point(b, v));
      }
      return best;
    }
  }
  return 0.0;
}

double union_diameter(const std::vector<ValueSet>& sets) {
  double best = 0.0;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i; j < sets.size(); ++j) {
      best = std::max(best, farthest_distance(sets[i], sets[j]));
    }
  }
  return best;
}

HVec nearest_point_in_hull(const std::vector<HVec>& vertices, const HVec& p) {
  if (vertices.empty()) {
    throw std::invalid_argument("nearest_point_in_hull: empty vertex list");
  }
  const int dim = 2 * vertices.front().n();
  const std::size_t m = vertices.size();

  // Work with q_i = v_i - p; we seek the minimum-norm point of conv{q_i}.
  Eigen::MatrixXd Q(dim, m);
  for (std::size_t i = 0; i < m; ++i) Q.col(i) = (vertices[i] - p).flat();

  // Wolfe's algorithm: maintain a corral S with convex weights mu.
  std::vector<int> corral;
  {
    int best = 0;
    double best_norm = Q.col(0).squaredNorm();
    for (std::size_t i = 1; i < m; ++i) {
      const double nn = Q.col(i).squaredNorm();
      if (nn < best_norm) {
        best_norm = nn;
        best = static_cast<int>(i);
      }
    }
    corral.push_back(best);
  }
  Eigen::VectorXd mu = Eigen::VectorXd::Ones(1);
  Eigen::VectorXd x = Q.col(corral[0]);

  const double scale = std::max(1.0, Q.cwiseAbs().maxCoeff());
  const double opt_tol = 1e-14 * scale * scale;

  for (int outer = 0; outer < 200; ++outer) {
    // Most violating vertex for the optimality condition <q_i, x> >= |x|^2.
    int enter = -1;
    double best_gap = -opt_tol;
    const double xx = x.squaredNorm();
    for (std::size_t i = 0; i < m; ++i) {
      const double gap = Q.col(static_cast<int>(i)).dot(x) - xx;
      if (gap < best_gap) {
        best_gap = gap;
        enter = static_cast<int>(i);
      }
    }
    if (enter < 0) break;
    if (std::find(corral.begin(), corral.end(), enter) == corral.end()) {
      corral.push_back(enter);
      mu.conservativeResize(mu.size() + 1);
      mu[mu.size() - 1] = 0.0;
    }

    // Minor cycle: affine minimizer over the corral, clipped to the simplex.
    for (int minor = 0; minor < 200; ++minor) {
      const int k = static_cast<int>(corral.size());
      Eigen::MatrixXd Qs(dim, k);
      for (int i = 0; i < k; ++i) Qs.col(i) = Q.col(corral[i]);
      // Solve min |Qs w|^2 s.t. sum w = 1 via the KKT system.
      Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(k + 1, k + 1);
      kkt.topLeftCorner(k, k) = Qs.transpose() * Qs;
      kkt.topRightCorner(k, 1).setOnes();
      kkt.bottomLeftCorner(1, k).setOnes();
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
      rhs[k] = 1.0;
      const Eigen::VectorXd sol =
          kkt.completeOrthogonalDecomposition().solve(rhs);
      Eigen::VectorXd w = sol.head(k);

      if ((w.array() > 1e-12).all()) {
        mu = w;
        x = Qs * mu;
        break;
      }
      // Step from mu toward w until the first weight hits zero; drop it.
      double theta = 1.0;
      for (int i = 0; i < k; ++i) {
        if (w[i] <= 1e-12 && mu[i] > w[i]) {
          theta = std::min(theta, mu[i] / (mu[i] - w[i]));
        }
      }
      mu = mu + theta * (w - mu);
      std::vector<int> next_corral;
      std::vector<double> next_mu;
      for (int i = 0; i < k; ++i) {
        if (mu[i] > 1e-12) {
          next_corral.push_back(corral[i]);
          next_mu.push_back(mu[i]);
        }
      }
      if (next_corral.empty()) {
        // Numerical corner: keep the entering vertex alone.
        next_corral.push_back(enter);
        next_mu.push_back(1.0);
      }
      corral = std::move(next_corral);
      mu = Eigen::Map<Eigen::VectorXd>(next_mu.data(),
                                       static_cast<int>(next_mu.size()));
      double s = mu.sum();
      mu /= s;
      Eigen::MatrixXd Qs2(dim, corral.size());
      for (std::size_t i = 0; i < corral.size(); ++i) {
        Qs2.col(static_cast<int>(i)) = Q.col(corral[i]);
      }
      x = Qs2 * mu;
    }
  }

  Vec nearest = x + p.flat();
  return HVec::from_flat(nearest);
}

}  // namespace hmono
