#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "hmono/heis.hpp"

// Deterministic random sampling.  std::uniform_real_distribution and friends
// are implementation-defined, so the distributions here are built directly
// from the (fully specified) mt19937_64 bit stream: same seed, same samples,
// on any standard library.

namespace hmono {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Decorrelated seed for an independent stream (one per trial index, so
  // results do not depend on how trials are sharded across workers).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
  }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Log-uniform magnitude in [lo, hi], lo > 0.
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

  // Integer in [lo, hi] inclusive (small ranges; modulo bias negligible and
  // determinism is what matters here).
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(gen_() % span);
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

  Vec vector(int dim, double lo, double hi) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = uniform(lo, hi);
    return v;
  }

  Vec unit_vector(int dim) {
    while (true) {
      Vec v(dim);
      for (int i = 0; i < dim; ++i) v[i] = normal();
      const double nrm = v.norm();
      if (nrm > 1e-12) return v / nrm;
    }
  }

  Point point_in_box(int n, double lo, double hi) {
    return Point(vector(n, lo, hi), vector(n, lo, hi), uniform(lo, hi));
  }

  HVec hvec_in_box(int n, double lo, double hi) {
    return HVec(vector(n, lo, hi), vector(n, lo, hi));
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace hmono
