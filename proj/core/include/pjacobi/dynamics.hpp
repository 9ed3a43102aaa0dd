#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "pjacobi/bands.hpp"
#include "pjacobi/jacobi_operator.hpp"
#include "pjacobi/lattice.hpp"
#include "pjacobi/linalg.hpp"

namespace pjacobi {

enum class EvolutionMode { kTorusFiber, kBoxDense };

/// Precomputed spectral data for e^{-itJ}. Torus plans diagonalise every fiber
/// of the commensurate torus; box plans diagonalise the dense truncated matrix.
class EvolutionPlan {
 public:
  static EvolutionPlan torus(const PeriodicJacobiOperator& op, std::vector<std::int64_t> cells, int threads = 1);
  static EvolutionPlan box(const PeriodicJacobiOperator& op, std::vector<std::int64_t> radius);

  EvolutionMode mode() const noexcept { return mode_; }
  const Geometry& geometry() const noexcept { return geometry_; }

  /// e^{-itJ} psi. Throws kGeometryMismatch if psi lives elsewhere.
  LatticeState evolve(const LatticeState& psi, double t) const;

 private:
  EvolutionPlan(EvolutionMode mode, Geometry geometry) : mode_(mode), geometry_(std::move(geometry)) {}

  EvolutionMode mode_;
  Geometry geometry_;
  std::vector<Eigendecomposition> fibers_;  // torus
  Eigendecomposition dense_;                // box
};

inline LatticeState evolve(const EvolutionPlan& plan, const LatticeState& psi, double t) {
  return plan.evolve(psi, t);
}

struct PositionMoments {
  double mean = 0.0;    // sum_x x_k |psi_x|^2
  double second = 0.0;  // sum_x x_k^2 |psi_x|^2
};

/// Box states only; torus states throw kTorusWithoutUnwrapConvention (use the
/// unwrapped trace instead). `axis` is 1-based.
PositionMoments position_moments(const LatticeState& psi, int axis);

/// <psi| P_k |psi> (real part; the imaginary part vanishes for Hermitian P_k).
double velocity_expectation(const PeriodicJacobiOperator& op, const LatticeState& psi, int axis);

/// Composite Simpson rule on [a, b] with an even number of panels of width <= h.
template <typename Fn>
double simpson(Fn&& f, double a, double b, double h) {
  if (b <= a) return 0.0;
  auto panels = static_cast<long>(std::ceil((b - a) / h - 1e-9));
  if (panels < 2) panels = 2;
  if (panels % 2) ++panels;
  const double w = (b - a) / static_cast<double>(panels);
  double sum = f(a) + f(b);
  for (long i = 1; i < panels; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + w * static_cast<double>(i));
  return sum * w / 3.0;
}

/// <X_k>(t) := <X_k>(0) + int_0^t <psi(s)|P_k|psi(s)> ds, Simpson with step <= h
/// between consecutive (ascending, non-negative) times. The initial position uses
/// centred torus coordinates (plain coordinates on a box).
std::vector<double> integrated_position_trace(const PeriodicJacobiOperator& op, const EvolutionPlan& plan,
                                              const LatticeState& psi, int axis, const std::vector<double>& times,
                                              double h);

/// Torus-only form of integrated_position_trace: the integral identity serves as the
/// definition of position on the torus. Throws kIncommensurateTorus for box plans.
std::vector<double> unwrapped_position_trace(const PeriodicJacobiOperator& op, const EvolutionPlan& plan,
                                             const LatticeState& psi, int axis, const std::vector<double>& times,
                                             double h);

struct BoundaryMonitor {
  double threshold = 1e-10;  // allowed boundary mass as a fraction of total mass
  std::int64_t layer = 4;    // sites from each face counted as boundary
};

/// Boundary mass fraction of a box state, relative to its squared norm.
double boundary_fraction(const LatticeState& box_state, const BoundaryMonitor& monitor);

/// support + ceil(2 (2 max|a|) d t) + margin: the radius a box needs so that
/// e^{itJ} X_k e^{-itJ} psi never feels the truncation.
std::int64_t recommended_box_radius(const PeriodicJacobiOperator& op, std::int64_t support_radius, double t,
                                    std::int64_t margin = 16);

struct HeisenbergResult {
  LatticeState state;     // (X_k(t) / t) psi
  double boundary_mass;   // worst boundary fraction seen along the way
};

/// (X_k(t)/t) psi = e^{itJ} X_k e^{-itJ} psi / t on a box plan. t = 0 is rejected;
/// throws kBoundaryContamination when either evolved state leaks past the monitor.
HeisenbergResult heisenberg_position_apply(const EvolutionPlan& plan, const LatticeState& psi, int axis, double t,
                                           const BoundaryMonitor& monitor = {});

}  // namespace pjacobi
