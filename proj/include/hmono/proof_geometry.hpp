#pragma once

#include <cmath>
#include <vector>

#include "hmono/operator_spec.hpp"

// Constructive ingredients of the local-boundedness proofs, made numerical:
// the spherical-sector machinery with its inner-product estimate and Jacobian
// closed form, the plane-intersection sequence of the technical lemma, the
// support polytope built from the axis segments, and the vertical-segment
// diameter probe.

namespace hmono {

// Angles (phi^1, ..., phi^{2n-1}) with phi^j in [0, pi] for j < 2n-1 and the
// last angle in [0, 2pi).  For n = 1 there is a single angle in [0, 2pi).
struct SphericalAngle {
  Vec phi;

  SphericalAngle() = default;
  explicit SphericalAngle(Vec phi_in);
  explicit SphericalAngle(double phi0);  // n = 1

  int angle_count() const { return static_cast<int>(phi.size()); }
  int n() const { return (angle_count() + 1) / 2; }
};

// Unit vector of S^{2n-1} in the standard recursion
//   w^1 = cos phi^1,  w^j = sin phi^1 ... sin phi^{j-1} cos phi^j,
//   w^{2n} = sin phi^1 ... sin phi^{2n-1}.
HVec spherical_dir(const SphericalAngle& ang);

// One cell of the angular subdivision: index i_j in {1..4} for j < 2n-1
// (quarters of [0, pi]) and i_{2n-1} in {1..8} (eighths of [0, 2pi)); every
// cell is a half-open box of side pi/4.
struct CubeIndex {
  std::vector<int> idx;

  int dims() const { return static_cast<int>(idx.size()); }
  double lo(int j) const { return (idx[j] - 1) * M_PI / 4.0; }
  double hi(int j) const { return idx[j] * M_PI / 4.0; }

  static std::vector<CubeIndex> all(int n);
};

// Minimum of <w(Phi), w(Psi)> over all grid pairs drawn from the same cube,
// scanned over every cube with the given angular step (<= pi/32).  The
// claimed lower bound is 2^{-(2n-1)/2}.
double sector_bound_check(int n, double grid_step);

// Same scan with the per-cube minima kept.
struct SectorScan {
  std::vector<CubeIndex> cubes;
  std::vector<double> cube_min;
  double min = 0.0;
};
SectorScan sector_bound_scan(int n, double grid_step);

double sector_lower_bound(int n);

// nu(t) o exp(rho w(theta)) with nu(t) = (0,...,0,h) o exp(t omega_base);
// omega_base must be a unit vector.  Evaluated through the group law.
Point sector_map(double t, double rho, const SphericalAngle& theta, double h,
                 const HVec& omega_base);

// |det JF| of the sector map in closed form:
//   n = 1:  2 rho^2 |sin theta|
//   n >= 2: 2 rho^{2n} |prod_{i<=n} sin theta^i * cos theta^{n+1}
//            * sin^{2n-2} theta^1 sin^{2n-3} theta^2 ... sin theta^{2n-2}|.
double sector_jacobian_closed_form(int n, double rho,
                                   const SphericalAngle& theta);

struct JacobianCheck {
  double closed_form = 0.0;
  double numeric = 0.0;
  double rel_error = 0.0;
  bool degenerate = false;  // closed form below 1e-12; comparison skipped
};

// Central finite-difference determinant of the sector map (omega_base = e_1,
// the paper's normalization) against the closed form.  The differencing runs
// in extended precision; if the first pass misses the 1e-6 relative target a
// Richardson pass repeats it.
JacobianCheck jacobian_check(int n, double t, double rho,
                             const SphericalAngle& theta,
                             double fd_step = 1e-6);

class Rng;

// Random angles away from the degenerate sine/cosine zeros: redraws until the
// closed form at rho = 1 clears 1e-3 (rho >= 1 only increases it).
SphericalAngle sample_interior_angle(int n, Rng& rng);

// Left-translation frame for the lemma: carries a point pair (eta, eta') with
// eta' in H_eta to the normalized position eta = e, t' = 0.
struct LemmaFrame {
  Point shift;  // group element applied on the left

  Point to_frame(const Point& p) const { return group_mul(shift, p); }
  Point from_frame(const Point& p) const {
    return group_mul(group_inv(shift), p);
  }
};

LemmaFrame lemma_frame(const Point& eta);

// The lemma's plane-intersection sequence, in the normalized frame eta = e,
// eta' = (x', y', 0) with x' != 0.  For each eta_k not in the plane of eta'
// it returns eta'_k = ((1+eps_k) x', (1+eps_k) y' + A_k eps_k^2 x', t'_k)
// where eps_k > 0 is the selected root of  a_k A_k eps^2 + b_k eps + c_k = 0
// and t'_k closes both plane memberships; membership residuals are asserted
// within tol.
std::vector<Point> lemma_sequence(const Point& eta_prime,
                                  const std::vector<Point>& etas,
                                  double tol = 1e-10);

struct Halfspace {
  HVec normal;
  double offset = 0.0;  // <u, normal> <= offset
};

struct SupportPolyhedron {
  std::vector<Halfspace> halfspaces;
};

struct PolytopeBoundResult {
  SupportPolyhedron poly;
  bool bounded = false;        // both certificates agree
  bool bounded_exact = false;  // recession-cone enumeration found no ray
  double scan_min = 0.0;       // min over sphere grid of max_j <d, v_j>
  double radius_bound = 0.0;   // max vertex norm (the K' of the proof)
  std::vector<HVec> vertices;
};

// Builds the 4n halfspaces {<u, v_j^{+-}(xi)> <= 2K} from the intersections
// of H_xi with the axis segments (checked to exist for xi in the Koranyi ball
// of radius r < 1), certifies boundedness two ways (exact recession-cone
// feasibility by extreme-ray enumeration, plus a sphere-grid scan), and
// reports the vertex-norm radius bound.
PolytopeBoundResult polytope_bound(const Point& xi, double K, double r);

// Largest first-layer distance observed between values of T along the
// vertical segment {(x, t) : t in [t_lo, t_hi]}, sampled at `samples` points
// (exact set diameters via the support structure of the value sets).
double vertical_bound_probe(const OperatorSpec& T, const HVec& x, double t_lo,
                            double t_hi, int samples);

}  // namespace hmono
