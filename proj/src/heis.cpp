#include "hmono/heis.hpp"

#include <cmath>

namespace hmono {

namespace detail {

void require_same_n(int na, int nb, const char* where) {
  if (na != nb) {
    throw DimensionMismatch(std::string(where) + ": dimension mismatch (n=" +
                            std::to_string(na) + " vs n=" + std::to_string(nb) +
                            ")");
  }
}

void require_finite(const Vec& v, const char* where) {
  if (!v.allFinite()) {
    throw std::invalid_argument(std::string(where) +
                                ": non-finite coordinate");
  }
}

void require_finite(double s, const char* where) {
  if (!std::isfinite(s)) {
    throw std::invalid_argument(std::string(where) +
                                ": non-finite coordinate");
  }
}

}  // namespace detail

HVec::HVec(Vec a_in, Vec b_in) : a(std::move(a_in)), b(std::move(b_in)) {
  detail::require_same_n(static_cast<int>(a.size()),
                         static_cast<int>(b.size()), "HVec");
  if (a.size() < 1) throw std::invalid_argument("HVec: n must be >= 1");
  detail::require_finite(a, "HVec");
  detail::require_finite(b, "HVec");
}

HVec::HVec(double a0, double b0) {
  a = Vec::Constant(1, a0);
  b = Vec::Constant(1, b0);
  detail::require_finite(a, "HVec");
  detail::require_finite(b, "HVec");
}

HVec HVec::zero(int n) { return HVec(Vec::Zero(n), Vec::Zero(n)); }

double HVec::dot(const HVec& o) const {
  detail::require_same_n(n(), o.n(), "HVec::dot");
  return a.dot(o.a) + b.dot(o.b);
}

double HVec::norm() const { return std::sqrt(squared_norm()); }

double HVec::squared_norm() const { return a.squaredNorm() + b.squaredNorm(); }

Vec HVec::flat() const {
  Vec f(2 * n());
  f << a, b;
  return f;
}

HVec HVec::from_flat(const Vec& f) {
  if (f.size() < 2 || f.size() % 2 != 0) {
    throw std::invalid_argument("HVec::from_flat: length must be even >= 2");
  }
  const int n = static_cast<int>(f.size()) / 2;
  return HVec(f.head(n), f.tail(n));
}

HVec HVec::operator+(const HVec& o) const {
  detail::require_same_n(n(), o.n(), "HVec::operator+");
  return HVec(a + o.a, b + o.b);
}

HVec HVec::operator-(const HVec& o) const {
  detail::require_same_n(n(), o.n(), "HVec::operator-");
  return HVec(a - o.a, b - o.b);
}

HVec HVec::operator*(double s) const { return HVec(a * s, b * s); }

HVec HVec::operator-() const { return HVec(-a, -b); }

Point::Point(Vec x_in, Vec y_in, double t_in)
    : x(std::move(x_in)), y(std::move(y_in)), t(t_in) {
  detail::require_same_n(static_cast<int>(x.size()),
                         static_cast<int>(y.size()), "Point");
  if (x.size() < 1) throw std::invalid_argument("Point: n must be >= 1");
  detail::require_finite(x, "Point");
  detail::require_finite(y, "Point");
  detail::require_finite(t, "Point");
}

Point::Point(double x0, double y0, double t0) {
  x = Vec::Constant(1, x0);
  y = Vec::Constant(1, y0);
  t = t0;
  detail::require_finite(x, "Point");
  detail::require_finite(y, "Point");
  detail::require_finite(t, "Point");
}

Point Point::origin(int n) { return Point(Vec::Zero(n), Vec::Zero(n), 0.0); }

Point group_mul(const Point& a, const Point& b) {
  detail::require_same_n(a.n(), b.n(), "group_mul");
  const double t = a.t + b.t + 2.0 * (b.x.dot(a.y) - a.x.dot(b.y));
  return Point(a.x + b.x, a.y + b.y, t);
}

Point group_inv(const Point& a) { return Point(-a.x, -a.y, -a.t); }

Point dilate(double lam, const Point& a) {
  if (!(lam > 0.0)) {
    throw std::invalid_argument("dilate: lam must be positive");
  }
  return Point(lam * a.x, lam * a.y, lam * lam * a.t);
}

double gauge(const Point& a) {
  // Rescale so the fourth powers cannot overflow/underflow.
  const double m =
      std::max({a.x.cwiseAbs().maxCoeff(), a.y.cwiseAbs().maxCoeff(),
                std::sqrt(std::abs(a.t))});
  if (m == 0.0) return 0.0;
  const Vec xs = a.x / m;
  const Vec ys = a.y / m;
  const double ts = a.t / (m * m);
  const double r2 = xs.squaredNorm() + ys.squaredNorm();
  return m * std::pow(r2 * r2 + ts * ts, 0.25);
}

double dist(const Point& a, const Point& b) {
  detail::require_same_n(a.n(), b.n(), "dist");
  const double t = a.t - b.t + 2.0 * (b.x.dot(a.y) - a.x.dot(b.y));
  return gauge(Point(a.x - b.x, a.y - b.y, t));
}

HVec xi1(const Point& a) { return HVec(a.x, a.y); }

Point exp_h(const Point& a, const HVec& w) {
  detail::require_same_n(a.n(), w.n(), "exp_h");
  return group_mul(a, Point(w.a, w.b, 0.0));
}

double hplane_t(const Point& base, const HVec& xy) {
  detail::require_same_n(base.n(), xy.n(), "hplane_t");
  return base.t + 2.0 * (base.y.dot(xy.a) - base.x.dot(xy.b));
}

double hplane_residual(const Point& base, const Point& q) {
  detail::require_same_n(base.n(), q.n(), "hplane_residual");
  return q.t - hplane_t(base, xi1(q));
}

bool in_hplane(const Point& base, const Point& q, double tol) {
  if (tol < 0.0) throw std::invalid_argument("in_hplane: tol must be >= 0");
  return std::abs(hplane_residual(base, q)) <= tol;
}

Point HPlane::at(const HVec& xy) const {
  return Point(xy.a, xy.b, hplane_t(base, xy));
}

}  // namespace hmono
