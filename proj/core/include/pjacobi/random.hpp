#pragma once

#include <cstdint>
#include <random>

#include "pjacobi/lattice.hpp"

namespace pjacobi {

/// mt19937_64 with hand-rolled variate generation. The standard fixes the
/// engine's output sequence but not the distributions, so uniforms and normals
/// are derived here to keep streams identical across standard libraries.
class PortableRng {
 public:
  explicit PortableRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal, Marsaglia polar method.
  double normal();
  /// (N(0,1) + i N(0,1)) / sqrt(2).
  Complex complex_normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Normalised complex Gaussian amplitudes on the l1 ball of `radius` about the
/// origin, visited in geometry index order. Throws kRadiusTooLarge when the ball
/// does not fit (box: radius <= L_j; torus: 2 radius + 1 <= extent_j).
LatticeState random_state(std::uint64_t seed, const Geometry& geometry, std::int64_t radius);

}  // namespace pjacobi
