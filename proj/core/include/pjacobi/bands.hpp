#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pjacobi/floquet.hpp"
#include "pjacobi/jacobi_operator.hpp"
#include "pjacobi/linalg.hpp"

namespace pjacobi {

/// Velocities v_{j,k}(theta) for one fiber and one axis, plus the frame in which
/// the compressed velocity is diagonal.
///
/// Inside a cluster of eigenvalues closer than the degeneracy tolerance the frame
/// columns are rotated to diagonalise V_c^dagger P_k V_c; the cluster velocities are
/// its eigenvalues in ascending order. Outside clusters v_j = <v_j|P_k|v_j> and the
/// frame column is the eigenvector itself.
struct BandVelocity {
  Eigen::VectorXd values;
  ComplexMatrix frame;
};

/// Consecutive ascending eigenvalues with gaps below `tolerance` are grouped;
/// returns [begin, end) index pairs covering 0..size.
std::vector<std::pair<Eigen::Index, Eigen::Index>> degeneracy_clusters(const Eigen::VectorXd& energies,
                                                                       double tolerance);

BandVelocity band_velocity(const Eigendecomposition& fiber, const ComplexMatrix& velocity_fiber, double tolerance);

struct BandOptions {
  /// Axes (1-based) to compute velocities for; empty means all.
  std::vector<int> axes;
  /// Absolute degeneracy tolerance; unset means 1e-8 * spectral diameter.
  std::optional<double> degeneracy_tolerance;
  /// Worker threads for the per-theta work. Results do not depend on it.
  int threads = 1;
};

/// Band structure on a Brillouin grid. Grid points are in BrillouinGrid index
/// order; `velocities[axis_slot][point]` follows the order of `axes`.
struct BandStructure {
  BrillouinGrid grid;
  std::vector<std::int64_t> period;
  std::vector<int> axes;
  double degeneracy_tolerance = 0.0;
  std::vector<Eigendecomposition> fibers;
  std::vector<std::vector<BandVelocity>> velocities;

  std::size_t band_count() const { return fibers.empty() ? 0 : static_cast<std::size_t>(fibers.front().values.size()); }
  /// Slot of a 1-based axis in `axes`; throws kInvalidAxis when absent.
  std::size_t axis_slot(int axis) const;
};

/// Eigendecomposes J(theta) on every grid point and computes band velocities.
/// Note that even resolutions put theta = 0 and 1/2 on the grid, where bands may touch.
BandStructure compute_bands(const PeriodicJacobiOperator& op, const std::vector<std::int64_t>& resolution,
                            const BandOptions& options = {});

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct SpectrumIntervals {
  std::vector<Interval> bands;  // [min, max] of E_j over the grid, per ordered band
  std::vector<Interval> union_; // merged, ascending
};

SpectrumIntervals spectrum_intervals(const BandStructure& bands);

/// Fraction of (band, grid point) pairs with |v_{j,k}(theta)| < eps.
double kernel_mass_estimate(const BandStructure& bands, int axis, double eps);

}  // namespace pjacobi
