#pragma once

#include <cstdint>

#include "gim/linalg.hpp"

namespace gim {

/// Deterministic generator with platform-independent uniforms (splitmix64).
/// Distribution code is hand-rolled so reports are byte-stable everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// uniform in [0, 1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// uniform in [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// combine a base seed with a stream index (per-point derivation)
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    Rng r(seed ^ (0x632be59bd9b4e019ull + stream * 0x9e3779b97f4a7c15ull));
    return r.next();
  }

  /// random unit vector of dimension m
  Vec unit_vector(int m) {
    while (true) {
      Vec v(m);
      for (int i = 0; i < m; ++i) v[i] = uniform(-1.0, 1.0);
      double norm = v.norm();
      if (norm > 0.2) return v / norm;
    }
  }

  /// random orthogonal m x m matrix (Gram-Schmidt on random columns)
  Mat orthogonal(int m) {
    while (true) {
      Mat M(m, m);
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) M(r, c) = uniform(-1.0, 1.0);
      Eigen::HouseholderQR<Mat> qr(M);
      Mat Q = qr.householderQ();
      if (std::abs(std::abs(Q.determinant()) - 1.0) < 1e-12) return Q;
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace gim
