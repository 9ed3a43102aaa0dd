#pragma once

#include <cstdint>
#include <vector>

#include "pjacobi/bands.hpp"
#include "pjacobi/dynamics.hpp"
#include "pjacobi/jacobi_operator.hpp"
#include "pjacobi/lattice.hpp"

namespace pjacobi {

/// Asymptotic velocity Q_k on a commensurate torus, stored fiberwise as
/// Q_k(theta) = sum_j v_{j,k}(theta) |w_j><w_j| with (w_j, v_{j,k}) from the band
/// structure. On the torus the direct integral is an exact direct sum.
class AsymptoticVelocity {
 public:
  explicit AsymptoticVelocity(BandStructure bands) : bands_(std::move(bands)) {}
  static AsymptoticVelocity build(const PeriodicJacobiOperator& op, const std::vector<std::int64_t>& cells,
                                  const BandOptions& options = {});

  const BandStructure& bands() const noexcept { return bands_; }
  /// Torus the operator acts on: Torus(N, q) with N the grid resolution.
  Geometry torus() const { return Geometry::torus(bands_.grid.resolution(), bands_.period); }
  /// Dense Q_k(theta) at grid point `point`.
  ComplexMatrix fiber(std::size_t point, int axis) const;

 private:
  BandStructure bands_;
};

/// Q_k psi = F^{-1} { theta -> Q_k(theta) (F psi)(theta) }. Throws kGridMismatch
/// unless psi lives on av.torus().
LatticeState apply_Q(const AsymptoticVelocity& av, const LatticeState& psi, int axis);

struct QMoments {
  double mean = 0.0;    // <psi, Q psi>
  double second = 0.0;  // <Q psi, Q psi>
};

QMoments q_moments(const AsymptoticVelocity& av, const LatticeState& psi, int axis);

/// One atom of the spectral measure of Q_k in the state psi.
struct VelocityAtom {
  double velocity;
  double weight;       // |<w_j(theta), (F psi)(theta)>|^2
  std::size_t point;   // grid index
  std::size_t band;
};

std::vector<VelocityAtom> velocity_distribution(const AsymptoticVelocity& av, const LatticeState& psi, int axis);

struct BallisticRow {
  double t = 0.0;
  double strong_error = 0.0;    // ||(X_k(t)/t) psi - Q_k psi||
  double mean_error = 0.0;      // |<X_k>(t)/t - <Q_k>|
  double q_mean = 0.0;
  double q_second_moment = 0.0;
  double boundary_mass = 0.0;   // worst boundary fraction in the Heisenberg evaluation
};

struct BallisticReport {
  int axis = 1;
  std::vector<BallisticRow> rows;
  /// Mass of the torus vector Q_k psi that did not fit into the box when unfolded.
  double q_tail_mass = 0.0;
};

struct BallisticOptions {
  BoundaryMonitor monitor;
  int threads = 1;
};

/// Compares (X_k(t)/t) psi on the box plan against Q_k psi computed on the torus
/// Torus(cells, q) and unfolded into the box. psi must live on the plan's box and
/// fit inside one torus window.
BallisticReport ballistic_report(const PeriodicJacobiOperator& op, const LatticeState& psi, int axis,
                                 const std::vector<double>& times, const std::vector<std::int64_t>& cells,
                                 const EvolutionPlan& box_plan, const BallisticOptions& options = {});

}  // namespace pjacobi
