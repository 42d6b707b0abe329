#include "hmono/proof_geometry.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "hmono/parallel.hpp"
#include "hmono/rng.hpp"

namespace hmono {

SphericalAngle::SphericalAngle(Vec phi_in) : phi(std::move(phi_in)) {
  if (phi.size() < 1 || phi.size() % 2 != 1) {
    throw std::invalid_argument(
        "SphericalAngle: needs an odd number 2n-1 >= 1 of angles");
  }
  detail::require_finite(phi, "SphericalAngle");
}

SphericalAngle::SphericalAngle(double phi0)
    : SphericalAngle(Vec::Constant(1, phi0)) {}

namespace {

void check_angle_ranges(const SphericalAngle& ang) {
  const int k = ang.angle_count();
  for (int j = 0; j < k - 1; ++j) {
    if (ang.phi[j] < 0.0 || ang.phi[j] > M_PI) {
      throw std::invalid_argument("spherical_dir: angle " + std::to_string(j) +
                                  " outside [0, pi]");
    }
  }
  if (ang.phi[k - 1] < 0.0 || ang.phi[k - 1] >= 2.0 * M_PI) {
    throw std::invalid_argument("spherical_dir: last angle outside [0, 2pi)");
  }
}

template <typename S>
void spherical_dir_impl(int count, const S* phi, S* out /* count+1 */) {
  S running = S(1);
  for (int j = 0; j < count; ++j) {
    out[j] = running * std::cos(phi[j]);
    running *= std::sin(phi[j]);
  }
  out[count] = running;
}

}  // namespace

HVec spherical_dir(const SphericalAngle& ang) {
  check_angle_ranges(ang);
  const int k = ang.angle_count();
  Vec w(k + 1);
  spherical_dir_impl<double>(k, ang.phi.data(), w.data());
  return HVec::from_flat(w);
}

std::vector<CubeIndex> CubeIndex::all(int n) {
  if (n < 1) throw std::invalid_argument("CubeIndex::all: n >= 1");
  const int dims = 2 * n - 1;
  std::vector<CubeIndex> cubes;
  std::vector<int> idx(dims, 1);
  while (true) {
    cubes.push_back(CubeIndex{idx});
    int j = dims - 1;
    while (j >= 0) {
      const int cap = (j == dims - 1) ? 8 : 4;
      if (++idx[j] <= cap) break;
      idx[j] = 1;
      --j;
    }
    if (j < 0) break;
  }
  return cubes;
}

double sector_lower_bound(int n) {
  return std::pow(2.0, -(2.0 * n - 1.0) / 2.0);
}

double sector_bound_check(int n, double grid_step) {
  return sector_bound_scan(n, grid_step).min;
}

SectorScan sector_bound_scan(int n, double grid_step) {
  if (n < 1) throw std::invalid_argument("sector_bound_check: n >= 1");
  if (!(grid_step > 0.0) || grid_step > M_PI / 32.0 + 1e-15) {
    throw std::invalid_argument("sector_bound_check: grid_step in (0, pi/32]");
  }
  const int dims = 2 * n - 1;
  SectorScan scan;
  scan.cubes = CubeIndex::all(n);
  const std::vector<CubeIndex>& cubes = scan.cubes;
  scan.cube_min.assign(cubes.size(), 0.0);

  for_each_trial_sharded(
      static_cast<int>(cubes.size()),
      [&](int /*shard*/, int ci) {
        const CubeIndex& cube = cubes[ci];
        // Grid points of the half-open cube, flattened to unit vectors.
        std::vector<int> steps(dims);
        int total = 1;
        for (int j = 0; j < dims; ++j) {
          steps[j] = static_cast<int>(
              std::floor((cube.hi(j) - cube.lo(j)) / grid_step - 1e-12)) + 1;
          total *= steps[j];
        }
        const int dim_v = dims + 1;
        std::vector<double> dirs(static_cast<std::size_t>(total) * dim_v);
        std::vector<double> phi(dims);
        std::vector<int> counter(dims, 0);
        for (int p = 0; p < total; ++p) {
          for (int j = 0; j < dims; ++j) {
            phi[j] = cube.lo(j) + counter[j] * grid_step;
          }
          spherical_dir_impl<double>(dims, phi.data(),
                                     &dirs[static_cast<std::size_t>(p) * dim_v]);
          int j = dims - 1;
          while (j >= 0 && ++counter[j] == steps[j]) counter[j--] = 0;
        }
        double local = std::numeric_limits<double>::infinity();
        for (int i = 0; i < total; ++i) {
          const double* u = &dirs[static_cast<std::size_t>(i) * dim_v];
          for (int k = i; k < total; ++k) {
            const double* v = &dirs[static_cast<std::size_t>(k) * dim_v];
            double dp = 0.0;
            for (int d = 0; d < dim_v; ++d) dp += u[d] * v[d];
            if (dp < local) local = dp;
          }
        }
        scan.cube_min[ci] = local;
      });

  scan.min = std::numeric_limits<double>::infinity();
  for (double v : scan.cube_min) scan.min = std::min(scan.min, v);
  return scan;
}

Point sector_map(double t, double rho, const SphericalAngle& theta, double h,
                 const HVec& omega_base) {
  if (std::abs(omega_base.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("sector_map: omega_base must be a unit vector");
  }
  const int n = omega_base.n();
  if (theta.n() != n) {
    throw DimensionMismatch("sector_map: theta dimension does not match base");
  }
  const Point axis(Vec::Zero(n), Vec::Zero(n), h);
  const Point nu = exp_h(axis, omega_base * t);
  return exp_h(nu, spherical_dir(theta) * rho);
}

double sector_jacobian_closed_form(int n, double rho,
                                   const SphericalAngle& theta) {
  if (theta.n() != n) {
    throw DimensionMismatch("sector_jacobian_closed_form: angle count");
  }
  if (n == 1) {
    return 2.0 * rho * rho * std::abs(std::sin(theta.phi[0]));
  }
  double prod = 1.0;
  for (int i = 0; i < n; ++i) prod *= std::sin(theta.phi[i]);
  prod *= std::cos(theta.phi[n]);  // theta^{n+1}
  for (int j = 1; j <= 2 * n - 2; ++j) {
    prod *= std::pow(std::sin(theta.phi[j - 1]), 2 * n - 1 - j);
  }
  return 2.0 * std::pow(rho, 2 * n) * std::abs(prod);
}

namespace {

// Sector map with omega_base = e_1 (the normalization used for the Jacobian):
//   x = (t + rho w^1, rho w^2, ..., rho w^n),
//   y = rho (w^{n+1}, ..., w^{2n}),
//   t = h - 2 t rho w^{n+1}.
template <typename S>
void sector_map_e1(int n, S t, S rho, const S* theta, S h, S* out) {
  const int dims = 2 * n - 1;
  std::vector<S> w(2 * n);
  spherical_dir_impl<S>(dims, theta, w.data());
  out[0] = t + rho * w[0];
  for (int j = 1; j < 2 * n; ++j) out[j] = rho * w[j];
  out[2 * n] = h - S(2) * t * rho * w[n];
}

using LongMat =
    Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

// Central-difference Jacobian determinant of the e_1 sector map in extended
// precision.
long double fd_determinant(int n, long double t, long double rho,
                           const std::vector<long double>& theta,
                           long double h, long double step) {
  const int dims = 2 * n - 1;
  const int size = 2 * n + 1;
  LongMat jac(size, size);
  std::vector<long double> args(size);
  args[0] = t;
  args[1] = rho;
  for (int j = 0; j < dims; ++j) args[2 + j] = theta[j];

  std::vector<long double> fp(size), fm(size);
  for (int v = 0; v < size; ++v) {
    std::vector<long double> ap = args, am = args;
    ap[v] += step;
    am[v] -= step;
    sector_map_e1<long double>(n, ap[0], ap[1], &ap[2], h, fp.data());
    sector_map_e1<long double>(n, am[0], am[1], &am[2], h, fm.data());
    for (int r = 0; r < size; ++r) {
      jac(r, v) = (fp[r] - fm[r]) / (2.0L * step);
    }
  }
  return jac.partialPivLu().determinant();
}

}  // namespace

JacobianCheck jacobian_check(int n, double t, double rho,
                             const SphericalAngle& theta, double fd_step) {
  if (theta.n() != n) {
    throw DimensionMismatch("jacobian_check: angle count");
  }
  if (fd_step < 1e-7 || fd_step > 1e-4) {
    throw std::invalid_argument("jacobian_check: fd_step in [1e-7, 1e-4]");
  }
  check_angle_ranges(theta);

  JacobianCheck out;
  out.closed_form = sector_jacobian_closed_form(n, rho, theta);
  if (out.closed_form < 1e-12) {
    out.degenerate = true;
    out.numeric = std::numeric_limits<double>::quiet_NaN();
    out.rel_error = std::numeric_limits<double>::quiet_NaN();
    return out;
  }

  std::vector<long double> th(theta.angle_count());
  for (int j = 0; j < theta.angle_count(); ++j) th[j] = theta.phi[j];
  const long double h = 0.0L;  // translation only; derivatives ignore it

  const long double det1 =
      fd_determinant(n, t, rho, th, h, static_cast<long double>(fd_step));
  out.numeric = static_cast<double>(std::abs(det1));
  out.rel_error = std::abs(out.numeric - out.closed_form) / out.closed_form;
  if (out.rel_error > 1e-6) {
    // Richardson pass: kill the O(step^2) truncation with steps (s, s/2).
    const long double s = 1e-4L;
    const long double da = fd_determinant(n, t, rho, th, h, s);
    const long double db = fd_determinant(n, t, rho, th, h, s / 2.0L);
    const long double extr = (16.0L * db - da) / 15.0L;
    out.numeric = static_cast<double>(std::abs(extr));
    out.rel_error = std::abs(out.numeric - out.closed_form) / out.closed_form;
  }
  return out;
}

SphericalAngle sample_interior_angle(int n, Rng& rng) {
  const int dims = 2 * n - 1;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Vec phi(dims);
    for (int j = 0; j < dims - 1; ++j) phi[j] = rng.uniform(0.3, M_PI - 0.3);
    phi[dims - 1] = rng.uniform(0.3, 2.0 * M_PI - 0.3);
    SphericalAngle ang(phi);
    if (sector_jacobian_closed_form(n, 1.0, ang) >= 1e-3) return ang;
  }
  throw std::runtime_error("sample_interior_angle: rejection sampling failed");
}

LemmaFrame lemma_frame(const Point& eta) { return LemmaFrame{group_inv(eta)}; }

std::vector<Point> lemma_sequence(const Point& eta_prime,
                                  const std::vector<Point>& etas, double tol) {
  const int n = eta_prime.n();
  if (std::abs(eta_prime.t) > tol) {
    throw std::invalid_argument(
        "lemma_sequence: frame not normalized, eta' must have t = 0 "
        "(left-translate with lemma_frame first)");
  }
  const Vec& xp = eta_prime.x;
  const Vec& yp = eta_prime.y;
  if (xp.norm() == 0.0) {
    throw std::invalid_argument("lemma_sequence: x' must be nonzero");
  }

  std::vector<Point> out;
  out.reserve(etas.size());
  for (std::size_t k = 0; k < etas.size(); ++k) {
    const Point& ek = etas[k];
    detail::require_same_n(ek.n(), n, "lemma_sequence");
    const double a = xp.squaredNorm() - xp.dot(ek.x);
    const double b = xp.dot(ek.y) - yp.dot(ek.x);
    const double c = ek.t / 2.0 + b;
    if (c == 0.0 ||
        std::abs(c) <= 8.0 * std::numeric_limits<double>::epsilon() *
                           (std::abs(ek.t) / 2.0 + std::abs(b))) {
      throw std::domain_error("lemma_sequence: eta_" + std::to_string(k) +
                              " lies in the plane of eta' (c_k = 0)");
    }
    if (a <= 0.0) {
      throw std::domain_error("lemma_sequence: a_k <= 0 at index " +
                              std::to_string(k) +
                              " (point too far from the limit)");
    }
    const double A = (c > 0.0) ? -1.0 : 1.0;  // A_k = -sgn(c_k)
    const double disc = std::sqrt(b * b + 4.0 * a * std::abs(c));
    const double eps =
        (A > 0.0) ? (-b + disc) / (2.0 * A * a) : (-b - disc) / (2.0 * A * a);
    if (!(eps > 0.0)) {
      throw std::runtime_error(
          "lemma_sequence: selected root is not positive, contradicting the "
          "construction");
    }
    const Vec xk = (1.0 + eps) * xp;
    const Vec yk = (1.0 + eps) * yp + (A * eps * eps) * xp;
    const double tk = 2.0 * (yp.dot(xk) - xp.dot(yk));
    Point ep(xk, yk, tk);
    if (std::abs(hplane_residual(eta_prime, ep)) > tol ||
        std::abs(hplane_residual(ek, ep)) > tol) {
      std::ostringstream msg;
      msg << "lemma_sequence: plane residual exceeds tol at index " << k;
      throw std::runtime_error(msg.str());
    }
    out.push_back(std::move(ep));
  }
  return out;
}

namespace {

// All strictly increasing index subsets of size k from {0..m-1}.
void for_each_subset(int m, int k,
                     const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    int j = k - 1;
    while (j >= 0 && idx[j] == m - k + j) --j;
    if (j < 0) break;
    ++idx[j];
    for (int l = j + 1; l < k; ++l) idx[l] = idx[l - 1] + 1;
  }
}

// Exact recession-cone feasibility for {d : V d <= 0}: the cone is nontrivial
// iff V has a nontrivial null space (lineality) or some extreme-ray candidate
// on 2n-1 active constraints satisfies all inequalities.
bool recession_cone_trivial(const Eigen::MatrixXd& V) {
  const int dim = static_cast<int>(V.cols());
  const int m = static_cast<int>(V.rows());
  const double tol = 1e-10;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(V, Eigen::ComputeFullV);
  if (svd.singularValues()(dim - 1) < tol) {
    return false;  // lineality direction
  }

  bool found = false;
  for_each_subset(m, dim - 1, [&](const std::vector<int>& subset) {
    if (found) return;
    Eigen::MatrixXd sub(dim - 1, dim);
    for (int i = 0; i < dim - 1; ++i) sub.row(i) = V.row(subset[i]);
    Eigen::JacobiSVD<Eigen::MatrixXd> s(sub, Eigen::ComputeFullV);
    if (dim >= 2 && s.singularValues()(dim - 2) < tol) return;  // rank drop
    const Eigen::VectorXd d = s.matrixV().col(dim - 1);
    if ((V * d).maxCoeff() <= tol || (V * -d).maxCoeff() <= tol) {
      found = true;
    }
  });
  return !found;
}

}  // namespace

PolytopeBoundResult polytope_bound(const Point& xi, double K, double r) {
  const int n = xi.n();
  if (!(K > 0.0)) throw std::invalid_argument("polytope_bound: K > 0");
  if (!(r > 0.0 && r < 1.0)) {
    throw std::invalid_argument("polytope_bound: r in (0, 1)");
  }
  if (gauge(xi) > r + 1e-12) {
    throw std::invalid_argument(
        "polytope_bound: xi outside the Koranyi ball of radius r");
  }
  // Intersections of H_xi with the four segment families: the s parameter of
  // (e_j,0,s), (-e_j,0,s), (0,e_j,s), (0,-e_j,s) on the plane must stay in
  // [-1, 1] for the construction to exist.
  for (int j = 0; j < n; ++j) {
    const double s_vals[4] = {xi.t + 2.0 * xi.y[j], xi.t - 2.0 * xi.y[j],
                              xi.t - 2.0 * xi.x[j], xi.t + 2.0 * xi.x[j]};
    for (double s : s_vals) {
      if (std::abs(s) > 1.0) {
        throw std::invalid_argument(
            "polytope_bound: a horizontal plane misses an axis segment "
            "(|t +- 2 coord| > 1)");
      }
    }
  }

  PolytopeBoundResult out;
  const double offset = 2.0 * K;
  std::vector<HVec> normals;
  normals.reserve(4 * n);
  for (int j = 0; j < n; ++j) {
    Vec ej = Vec::Zero(n);
    ej[j] = 1.0;
    normals.emplace_back(ej - xi.x, -xi.y);    // toward (e_j, 0, s)
    normals.emplace_back(-ej - xi.x, -xi.y);   // toward (-e_j, 0, s)
    normals.emplace_back(-xi.x, ej - xi.y);    // toward (0, e_j, s)
    normals.emplace_back(-xi.x, -ej - xi.y);   // toward (0, -e_j, s)
  }
  for (const HVec& v : normals) {
    out.poly.halfspaces.push_back(Halfspace{v, offset});
  }

  const int dim = 2 * n;
  const int m = 4 * n;
  Eigen::MatrixXd V(m, dim);
  for (int i = 0; i < m; ++i) V.row(i) = normals[i].flat();

  out.bounded_exact = recession_cone_trivial(V);

  // Independent certificate: scan a fine sphere grid; boundedness needs every
  // direction to make positive progress against some face normal.
  {
    const int dims = 2 * n - 1;
    const double step = M_PI / 40.0;
    std::vector<int> steps(dims);
    int total = 1;
    for (int j = 0; j < dims; ++j) {
      const double hi = (j == dims - 1) ? 2.0 * M_PI : M_PI;
      steps[j] = static_cast<int>(std::floor(hi / step - 1e-12)) + 1;
      total *= steps[j];
    }
    double scan_min = std::numeric_limits<double>::infinity();
    std::vector<int> counter(dims, 0);
    std::vector<double> phi(dims);
    std::vector<double> w(dim);
    for (int p = 0; p < total; ++p) {
      for (int j = 0; j < dims; ++j) phi[j] = counter[j] * step;
      spherical_dir_impl<double>(dims, phi.data(), w.data());
      const Eigen::Map<const Eigen::VectorXd> d(w.data(), dim);
      scan_min = std::min(scan_min, (V * d).maxCoeff());
      int j = dims - 1;
      while (j >= 0 && ++counter[j] == steps[j]) counter[j--] = 0;
    }
    out.scan_min = scan_min;
  }
  out.bounded = out.bounded_exact && out.scan_min > 0.0;

  // Vertices: every feasible intersection of dim active faces.
  double radius = 0.0;
  for_each_subset(m, dim, [&](const std::vector<int>& subset) {
    Eigen::MatrixXd A(dim, dim);
    for (int i = 0; i < dim; ++i) A.row(i) = V.row(subset[i]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (!lu.isInvertible()) return;
    const Eigen::VectorXd u = lu.solve(Eigen::VectorXd::Constant(dim, offset));
    if (((V * u).array() <= offset + 1e-9 * (1.0 + offset)).all()) {
      out.vertices.push_back(HVec::from_flat(u));
      radius = std::max(radius, u.norm());
    }
  });
  out.radius_bound = radius;
  if (out.bounded && out.vertices.empty()) {
    throw std::runtime_error(
        "polytope_bound: bounded polytope produced no vertices");
  }
  return out;
}

double vertical_bound_probe(const OperatorSpec& T, const HVec& x, double t_lo,
                            double t_hi, int samples) {
  if (samples < 2) {
    throw std::invalid_argument("vertical_bound_probe: samples >= 2");
  }
  if (!(t_hi >= t_lo)) {
    throw std::invalid_argument("vertical_bound_probe: empty t range");
  }
  detail::require_same_n(T.n(), x.n(), "vertical_bound_probe");
  std::vector<ValueSet> sets;
  sets.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    const double t = t_lo + (t_hi - t_lo) * i / (samples - 1);
    sets.push_back(T.eval(Point(x.a, x.b, t)));
  }
  return union_diameter(sets);
}

}  // namespace hmono
