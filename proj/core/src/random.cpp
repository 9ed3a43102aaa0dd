#include "pjacobi/random.hpp"

#include <cmath>
#include <string>

#include "pjacobi/error.hpp"

namespace pjacobi {

double PortableRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

Complex PortableRng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return Complex{re, im} * M_SQRT1_2;
}

LatticeState random_state(std::uint64_t seed, const Geometry& geometry, std::int64_t radius) {
  if (radius < 0) throw Error(ErrorKind::kRadiusTooLarge, "radius must be non-negative");
  for (int j = 0; j < geometry.dim(); ++j) {
    const bool fits = geometry.is_box() ? radius <= geometry.radius()[j] : 2 * radius + 1 <= geometry.extent(j);
    if (!fits)
      throw Error(ErrorKind::kRadiusTooLarge,
                  "support radius " + std::to_string(radius) + " does not fit along axis " + std::to_string(j + 1));
  }
  PortableRng rng(seed);
  LatticeState psi(geometry);
  for (std::size_t i = 0; i < geometry.size(); ++i) {
    std::int64_t l1 = 0;
    for (int j = 0; j < geometry.dim(); ++j) l1 += std::abs(geometry.centered_coordinate(i, j));
    if (l1 <= radius) psi.amplitudes[static_cast<Eigen::Index>(i)] = rng.complex_normal();
  }
  psi.amplitudes /= psi.amplitudes.norm();
  return psi;
}

}  // namespace pjacobi
