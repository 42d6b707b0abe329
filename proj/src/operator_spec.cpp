#include "hmono/operator_spec.hpp"

#include <cmath>

namespace hmono {

OperatorSpec::OperatorSpec(std::variant<Linear, Gauge, Shift> rep)
    : rep_(std::move(rep)) {}

OperatorSpec OperatorSpec::linear(Eigen::MatrixXd a) {
  if (a.rows() != a.cols() || a.rows() < 2 || a.rows() % 2 != 0) {
    throw std::invalid_argument(
        "OperatorSpec::linear: matrix must be square of even size 2n >= 2");
  }
  if (!a.allFinite()) {
    throw std::invalid_argument("OperatorSpec::linear: non-finite entry");
  }
  return OperatorSpec(Linear{std::move(a)});
}

OperatorSpec OperatorSpec::gauge_subdiff() { return OperatorSpec(Gauge{}); }

OperatorSpec OperatorSpec::shift_scale(OperatorSpec inner, double lam) {
  if (!(lam > 0.0) || !std::isfinite(lam)) {
    throw std::invalid_argument("OperatorSpec::shift_scale: lam must be > 0");
  }
  return OperatorSpec(
      Shift{std::make_shared<const OperatorSpec>(std::move(inner)), lam});
}

OperatorSpec::Kind OperatorSpec::kind() const {
  if (std::holds_alternative<Linear>(rep_)) return Kind::Linear;
  if (std::holds_alternative<Gauge>(rep_)) return Kind::GaugeSubdiff;
  return Kind::ShiftScale;
}

int OperatorSpec::n() const {
  if (const auto* l = std::get_if<Linear>(&rep_)) {
    return static_cast<int>(l->a.rows()) / 2;
  }
  if (std::holds_alternative<Gauge>(rep_)) return 1;
  return std::get<Shift>(rep_).inner->n();
}

namespace {

// Horizontal subgradient of the gauge norm at p != e (n = 1).  The formula is
// invariant under dilations, so evaluate at a rescaled point to stay clear of
// under/overflow in the fourth powers.
HVec gauge_gradient(const Point& p) {
  const double m = std::max({std::abs(p.x[0]), std::abs(p.y[0]),
                             std::sqrt(std::abs(p.t))});
  const double x = p.x[0] / m;
  const double y = p.y[0] / m;
  const double t = p.t / (m * m);
  const double r2 = x * x + y * y;
  const double n3 = std::pow(r2 * r2 + t * t, 0.75);
  return HVec((x * r2 + y * t) / n3, (y * r2 - x * t) / n3);
}

}  // namespace

ValueSet OperatorSpec::eval(const Point& p) const {
  detail::require_same_n(n(), p.n(), "OperatorSpec::eval");
  if (const auto* l = std::get_if<Linear>(&rep_)) {
    return ValueSet::singleton(HVec::from_flat(l->a * xi1(p).flat()));
  }
  if (std::holds_alternative<Gauge>(rep_)) {
    if (p.x[0] == 0.0 && p.y[0] == 0.0 && p.t == 0.0) {
      return ValueSet::ball(HVec::zero(1), 1.0);
    }
    return ValueSet::singleton(gauge_gradient(p));
  }
  const auto& s = std::get<Shift>(rep_);
  return s.inner->eval(p).translate_scale(xi1(p), s.lam);
}

bool OperatorSpec::single_valued_at(const Point& p) const {
  if (std::holds_alternative<Linear>(rep_)) return true;
  if (std::holds_alternative<Gauge>(rep_)) {
    return !(p.x[0] == 0.0 && p.y[0] == 0.0 && p.t == 0.0);
  }
  return std::get<Shift>(rep_).inner->single_valued_at(p);
}

const Eigen::MatrixXd& OperatorSpec::matrix() const {
  if (const auto* l = std::get_if<Linear>(&rep_)) return l->a;
  throw std::logic_error("OperatorSpec: not a linear operator");
}

const OperatorSpec& OperatorSpec::inner() const {
  if (const auto* s = std::get_if<Shift>(&rep_)) return *s->inner;
  throw std::logic_error("OperatorSpec: not a shifted operator");
}

double OperatorSpec::shift_lambda() const {
  if (const auto* s = std::get_if<Shift>(&rep_)) return s->lam;
  throw std::logic_error("OperatorSpec: not a shifted operator");
}

OperatorSpec t_lambda(const OperatorSpec& t, double lam) {
  return OperatorSpec::shift_scale(t, lam);
}

}  // namespace hmono
