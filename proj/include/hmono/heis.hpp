#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

// Heisenberg group primitives.
//
// A point of H^n is (x, y, t) with x, y in R^n and t in R, under the product
//   (x,y,t) o (x',y',t') = (x+x', y+y', t+t' + 2(<x',y> - <x,y'>)).
// The first layer V1 of the Lie algebra is identified with R^{2n}; xi1 is the
// projection (x,y,t) -> (x,y).  All operations are pure; values are immutable
// after construction, so everything here is safe to call concurrently.

namespace hmono {

using Vec = Eigen::VectorXd;

// Thrown when two arguments disagree on n.
struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kDefaultTol = 1e-9;

// Element of the first layer V1 ~ R^{2n}, stored as the pair (a, b).
struct HVec {
  Vec a, b;

  HVec() = default;
  HVec(Vec a_in, Vec b_in);
  HVec(double a0, double b0);  // n = 1 convenience

  static HVec zero(int n);

  int n() const { return static_cast<int>(a.size()); }
  double dot(const HVec& o) const;
  double norm() const;
  double squared_norm() const;
  Vec flat() const;  // [a; b]
  static HVec from_flat(const Vec& f);

  HVec operator+(const HVec& o) const;
  HVec operator-(const HVec& o) const;
  HVec operator*(double s) const;
  HVec operator-() const;
};

inline HVec operator*(double s, const HVec& v) { return v * s; }

// Element of H^n.
struct Point {
  Vec x, y;
  double t = 0.0;

  Point() = default;
  Point(Vec x_in, Vec y_in, double t_in);
  Point(double x0, double y0, double t0);  // n = 1 convenience

  static Point origin(int n);

  int n() const { return static_cast<int>(x.size()); }
};

// Group operations ----------------------------------------------------------

Point group_mul(const Point& a, const Point& b);
Point group_inv(const Point& a);

// Non-isotropic dilation (lam*x, lam*y, lam^2*t); requires lam > 0.
Point dilate(double lam, const Point& a);

// Gauge norm N(x,y,t) = ((|x|^2+|y|^2)^2 + t^2)^{1/4}, computed with an
// overflow-safe rescaling.
double gauge(const Point& a);

// Koranyi-Cygan metric d(a,b) = N(b^{-1} o a).  Evaluated through the fused
// expansion
//   b^{-1} o a = (x_a-x_b, y_a-y_b, t_a-t_b + 2(<x_b,y_a> - <x_a,y_b>)),
// which keeps the rounding of the t channel at the scale of the difference.
// When b lies in the horizontal plane of a, the plane equation makes the t
// channel vanish identically, so d(a,b) = |xi1(a)-xi1(b)| (Euclidean); that
// collapse is exercised by the tests.
double dist(const Point& a, const Point& b);

// First-layer projection (x,y,t) -> (x,y).
HVec xi1(const Point& a);

// Horizontal exponential a o (w_a, w_b, 0); the image lies in the horizontal
// plane through a for every w.
Point exp_h(const Point& a, const HVec& w);

// t-coordinate of the point of the horizontal plane through `base` lying above
// the first-layer position `xy`: t0 + 2(<y0, x> - <x0, y>).
double hplane_t(const Point& base, const HVec& xy);

// Signed residual q.t - hplane_t(base, xi1(q)); zero iff q lies on the plane.
double hplane_residual(const Point& base, const Point& q);

// Membership test with an absolute tolerance on the t residual (the plane
// equation is affine in t, so a relative tolerance would misbehave near t=0).
// Symmetric: in_hplane(a, b) iff in_hplane(b, a).
bool in_hplane(const Point& base, const Point& q, double tol = kDefaultTol);

// Horizontal plane through a base point.
struct HPlane {
  Point base;

  explicit HPlane(Point b) : base(std::move(b)) {}

  double height_at(const HVec& xy) const { return hplane_t(base, xy); }
  // The unique plane point with first-layer position xy.
  Point at(const HVec& xy) const;
  bool contains(const Point& q, double tol = kDefaultTol) const {
    return in_hplane(base, q, tol);
  }
};

namespace detail {
void require_same_n(int na, int nb, const char* where);
void require_finite(const Vec& v, const char* where);
void require_finite(double s, const char* where);
}  // namespace detail

}  // namespace hmono
