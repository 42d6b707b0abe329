#include "hmono/monotone.hpp"

#include <cmath>

#include "hmono/parallel.hpp"
#include "hmono/rng.hpp"

namespace hmono {

namespace {

// Symplectic increment of the t-lift from z to z': 2 * omega(z, z') with
// omega(z, z') = <y, x'> - <x, y'>.
double symplectic(const HVec& z, const HVec& zn) {
  return z.b.dot(zn.a) - z.a.dot(zn.b);
}

double closure_sum_of(const std::vector<HVec>& xy) {
  double s = 0.0;
  const std::size_t m = xy.size();
  for (std::size_t i = 0; i < m; ++i) s += symplectic(xy[i], xy[(i + 1) % m]);
  return s;
}

}  // namespace

ClosedHChain ClosedHChain::from_points(std::vector<Point> points, double tol) {
  if (points.size() < 2) {
    throw ChainError("ClosedHChain: need at least 2 points");
  }
  const int n = points.front().n();
  const std::size_t m = points.size();
  for (std::size_t i = 0; i < m; ++i) {
    detail::require_same_n(points[i].n(), n, "ClosedHChain");
    const Point& cur = points[i];
    const Point& nxt = points[(i + 1) % m];
    const double res = hplane_residual(cur, nxt);
    if (std::abs(res) > tol) {
      throw ChainError("ClosedHChain: consecutive horizontality fails at index " +
                       std::to_string(i) + " (residual " + std::to_string(res) +
                       ")");
    }
  }
  std::vector<HVec> xy;
  xy.reserve(m);
  for (const Point& p : points) xy.push_back(xi1(p));
  const double s = closure_sum_of(xy);
  if (std::abs(s) > tol) {
    throw ChainError("ClosedHChain: symplectic closure sum " +
                     std::to_string(s) + " exceeds tol");
  }
  return ClosedHChain(std::move(points));
}

double ClosedHChain::closure_sum() const {
  std::vector<HVec> xy;
  xy.reserve(points_.size());
  for (const Point& p : points_) xy.push_back(xi1(p));
  return closure_sum_of(xy);
}

ClosedHChain close_chain(const std::vector<HVec>& xy_in, double t0,
                         ChainMode mode, double tol) {
  if (xy_in.size() < 2) {
    throw ChainError("close_chain: need at least 2 vertices");
  }
  std::vector<HVec> xy = xy_in;
  const std::size_t m = xy.size();
  const double s0 = closure_sum_of(xy);

  if (mode == ChainMode::Validate) {
    if (std::abs(s0) > tol) {
      throw ChainError("close_chain: closure sum " + std::to_string(s0) +
                       " exceeds tol " + std::to_string(tol));
    }
  } else {
    if (m < 3) {
      throw ChainError("close_chain: adjust mode needs >= 3 vertices");
    }
    // The closure sum is affine in the last vertex z:
    //   S(z + s d) = S(z) + s (<d_a, y_{m-2} - y_0> + <d_b, x_0 - x_{m-2}>).
    // Move z along the gradient direction; if that direction vanishes the
    // polygon is degenerate for this adjustment and we refuse to guess.
    const HVec& prev = xy[m - 2];
    const HVec& first = xy[0];
    const HVec d(prev.b - first.b, first.a - prev.a);
    const double coeff = d.squared_norm();
    if (coeff <= 1e-14) {
      throw ChainError(
          "close_chain: degenerate polygon, closure gradient vanishes");
    }
    xy[m - 1] = xy[m - 1] + d * (-s0 / coeff);
  }

  std::vector<Point> pts;
  pts.reserve(m);
  double t = t0;
  for (std::size_t i = 0; i < m; ++i) {
    pts.emplace_back(xy[i].a, xy[i].b, t);
    t += 2.0 * symplectic(xy[i], xy[(i + 1) % m]);
  }
  return ClosedHChain(std::move(pts));
}

MonotoneVerdict check_h_pair(const OperatorSpec& T, const Point& a,
                             const Point& b, double tol) {
  detail::require_same_n(T.n(), a.n(), "check_h_pair");
  if (!in_hplane(a, b, tol)) {
    throw std::invalid_argument(
        "check_h_pair: b is not in the horizontal plane of a (residual " +
        std::to_string(hplane_residual(a, b)) + ")");
  }
  const HVec d = xi1(a) - xi1(b);
  const ValueSet sa = T.eval(a);
  const ValueSet sb = T.eval(b);
  const double slack = -sa.support(-d) - sb.support(d);

  MonotoneVerdict v;
  v.worst_slack = slack;
  v.ok = slack >= -tol;
  if (slack < -std::max(tol, kWitnessThreshold)) {
    v.witness = PairWitness{a, b, sa.support_point(-d), sb.support_point(d),
                            slack};
  }
  return v;
}

MonotoneVerdict sample_h_pairs(const OperatorSpec& T, const Box& box, int count,
                               std::uint64_t seed, double tol) {
  if (count < 1) throw std::invalid_argument("sample_h_pairs: count >= 1");
  const int n = T.n();

  struct Shard {
    double worst = std::numeric_limits<double>::infinity();
    int witness_index = std::numeric_limits<int>::max();
    std::optional<PairWitness> witness;
  };
  std::vector<Shard> shards(shard_count(count));

  for_each_trial_sharded(count, [&](int shard, int i) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(i)));
    const Point a = rng.point_in_box(n, box.lo, box.hi);
    const Vec dir = rng.unit_vector(2 * n);
    const double mag = rng.log_uniform(1e-3, 10.0);
    const Point b = exp_h(a, HVec::from_flat(dir * mag));
    MonotoneVerdict one = check_h_pair(T, a, b, tol);
    Shard& s = shards[shard];
    s.worst = std::min(s.worst, one.worst_slack);
    if (one.witness && i < s.witness_index) {
      s.witness_index = i;
      s.witness = std::get<PairWitness>(*one.witness);
    }
  });

  MonotoneVerdict v;
  int best_index = std::numeric_limits<int>::max();
  for (const Shard& s : shards) {
    v.worst_slack = std::min(v.worst_slack, s.worst);
    if (s.witness && s.witness_index < best_index) {
      best_index = s.witness_index;
      v.witness = *s.witness;
    }
  }
  v.ok = v.worst_slack >= -tol;
  return v;
}

MonotoneVerdict check_cyclic(const OperatorSpec& T, const ClosedHChain& chain,
                             double tol) {
  const auto& pts = chain.points();
  detail::require_same_n(T.n(), pts.front().n(), "check_cyclic");
  const std::size_t m = pts.size();

  double slack = 0.0;
  std::vector<HVec> values;
  values.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const HVec d = xi1(pts[(i + 1) % m]) - xi1(pts[i]);
    const ValueSet s = T.eval(pts[i]);
    slack -= s.support(d);
    values.push_back(s.support_point(d));
  }

  MonotoneVerdict v;
  v.worst_slack = slack;
  v.ok = slack >= -tol;
  if (slack < -std::max(tol, kWitnessThreshold)) {
    v.witness = ChainWitness{pts, std::move(values), slack};
  }
  return v;
}

namespace {

// One random chain draw shared by the bulk sampler and the witness search;
// returns nullopt on a degenerate polygon (closure gradient ~ 0).
std::optional<ClosedHChain> random_chain(int n, int max_len, Rng& rng) {
  const int len = rng.uniform_int(3, max_len);
  std::vector<HVec> xy;
  xy.reserve(len);
  for (int k = 0; k < len; ++k) xy.push_back(rng.hvec_in_box(n, -3.0, 3.0));
  const double t0 = rng.uniform(-3.0, 3.0);
  try {
    return close_chain(xy, t0, ChainMode::Adjust);
  } catch (const ChainError&) {
    return std::nullopt;
  }
}

}  // namespace

MonotoneVerdict sample_cyclic_chains(const OperatorSpec& T, int max_len,
                                     int trials, std::uint64_t seed,
                                     double tol) {
  if (max_len < 3) {
    throw std::invalid_argument("sample_cyclic_chains: max_len >= 3");
  }
  if (trials < 1) {
    throw std::invalid_argument("sample_cyclic_chains: trials >= 1");
  }
  const int n = T.n();

  struct Shard {
    double worst = std::numeric_limits<double>::infinity();
    int witness_index = std::numeric_limits<int>::max();
    std::optional<ChainWitness> witness;
  };
  std::vector<Shard> shards(shard_count(trials));

  for_each_trial_sharded(trials, [&](int shard, int i) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(i)));
    const auto chain = random_chain(n, max_len, rng);
    if (!chain) return;
    MonotoneVerdict one = check_cyclic(T, *chain, tol);
    Shard& s = shards[shard];
    s.worst = std::min(s.worst, one.worst_slack);
    if (one.witness && i < s.witness_index) {
      s.witness_index = i;
      s.witness = std::get<ChainWitness>(*one.witness);
    }
  });

  MonotoneVerdict v;
  int best_index = std::numeric_limits<int>::max();
  for (const Shard& s : shards) {
    v.worst_slack = std::min(v.worst_slack, s.worst);
    if (s.witness && s.witness_index < best_index) {
      best_index = s.witness_index;
      v.witness = *s.witness;
    }
  }
  v.ok = v.worst_slack >= -tol;
  return v;
}

std::optional<ChainWitness> search_cyclic_violation(const OperatorSpec& T,
                                                    int max_len, int trials,
                                                    std::uint64_t seed,
                                                    double tol) {
  if (max_len < 3) {
    throw std::invalid_argument("search_cyclic_violation: max_len >= 3");
  }
  if (trials < 1) {
    throw std::invalid_argument("search_cyclic_violation: trials >= 1");
  }
  const int n = T.n();

  struct Shard {
    int witness_index = std::numeric_limits<int>::max();
    std::optional<ChainWitness> witness;
  };
  std::vector<Shard> shards(shard_count(trials));

  for_each_trial_sharded(trials, [&](int shard, int i) {
    Shard& s = shards[shard];
    if (i > s.witness_index) return;  // a shard-local earlier witness exists
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(i)));
    const auto chain = random_chain(n, max_len, rng);
    if (!chain) return;
    MonotoneVerdict v = check_cyclic(T, *chain, tol);
    if (v.witness) {
      s.witness_index = i;
      s.witness = std::get<ChainWitness>(*v.witness);
    }
  });

  int best_index = std::numeric_limits<int>::max();
  std::optional<ChainWitness> found;
  for (const Shard& s : shards) {
    if (s.witness && s.witness_index < best_index) {
      best_index = s.witness_index;
      found = *s.witness;
    }
  }
  return found;
}

}  // namespace hmono
