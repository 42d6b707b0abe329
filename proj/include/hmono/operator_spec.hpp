#pragma once

#include <Eigen/Dense>
#include <memory>
#include <variant>

#include "hmono/value_set.hpp"

// The catalogue of set-valued maps T: H^n => V1 used throughout.
//
//   linear(A)        T(eta) = { A xi1(eta) },  A a 2n x 2n real matrix
//   gauge_subdiff()  the horizontal subgradient of the gauge norm (n = 1):
//                    the closed unit ball at the origin, otherwise the
//                    singleton  (x(x^2+y^2)+yt, y(x^2+y^2)-xt) / N^3
//   shift_scale(T,l) eta |-> xi1(eta) + l * T(eta)   (the map xi1 + l T)
//
// Every operator is defined on all of H^n and evaluates to a nonempty
// compact convex ValueSet.

namespace hmono {

class OperatorSpec {
 public:
  enum class Kind { Linear, GaugeSubdiff, ShiftScale };

  static OperatorSpec linear(Eigen::MatrixXd a);
  static OperatorSpec gauge_subdiff();
  static OperatorSpec shift_scale(OperatorSpec inner, double lam);

  Kind kind() const;
  int n() const;

  ValueSet eval(const Point& p) const;

  // True when eval(p) is guaranteed a singleton for this operator at p.
  bool single_valued_at(const Point& p) const;

  const Eigen::MatrixXd& matrix() const;     // Linear only
  const OperatorSpec& inner() const;         // ShiftScale only
  double shift_lambda() const;               // ShiftScale only

 private:
  struct Linear {
    Eigen::MatrixXd a;
  };
  struct Gauge {};
  struct Shift {
    std::shared_ptr<const OperatorSpec> inner;
    double lam;
  };

  explicit OperatorSpec(std::variant<Linear, Gauge, Shift> rep);

  std::variant<Linear, Gauge, Shift> rep_;
};

// The operator xi1 + lam * T from the Minty construction; lam > 0.
OperatorSpec t_lambda(const OperatorSpec& t, double lam);

}  // namespace hmono
