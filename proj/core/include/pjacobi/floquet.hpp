#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "pjacobi/jacobi_operator.hpp"
#include "pjacobi/lattice.hpp"

namespace pjacobi {

using Quasimomentum = std::vector<double>;

/// Product grid {(n_1/N_1, ..., n_d/N_d)} on the torus T^d, row-major in n.
class BrillouinGrid {
 public:
  explicit BrillouinGrid(std::vector<std::int64_t> resolution);

  int dim() const noexcept { return static_cast<int>(resolution_.size()); }
  std::size_t size() const noexcept { return size_; }
  const std::vector<std::int64_t>& resolution() const noexcept { return resolution_; }
  std::vector<std::int64_t> multi_index(std::size_t index) const;
  std::size_t index(const std::vector<std::int64_t>& n) const;
  Quasimomentum theta(std::size_t index) const;

  friend bool operator==(const BrillouinGrid&, const BrillouinGrid&) = default;

 private:
  std::vector<std::int64_t> resolution_;
  std::size_t size_ = 1;
};

/// A q-bar x q-bar matrix attached to a quasimomentum, indexed by the period cell.
struct FiberOperator {
  Quasimomentum theta;
  ComplexMatrix matrix;
};

/// J(theta) on C^Gamma. Each edge x -> y = y' + n q (y' in the cell) adds
/// a_{x,y} e^{-2 pi i <theta, n>} to entry (y', x); b_x goes on the diagonal.
/// Contributions landing on the same entry accumulate (periods 1 and 2).
FiberOperator fiber_hamiltonian(const PeriodicJacobiOperator& op, const Quasimomentum& theta);

/// P_k(theta), assembled from the P_k stencil with the same rule.
FiberOperator fiber_velocity(const PeriodicJacobiOperator& op, const Quasimomentum& theta, int axis);

/// diag(e^{2 pi i <theta, x/q>}) over cell sites x.
ComplexMatrix gauge_matrix(const PeriodicJacobiOperator& op, const Quasimomentum& theta);

struct GaugedFiber {
  ComplexMatrix hamiltonian;  // M^{-1} J(theta) M
  ComplexMatrix velocity;     // M^{-1} P_k(theta) M == (q_k / 2 pi) d/dtheta_k of `hamiltonian`
};

GaugedFiber gauged_fiber(const PeriodicJacobiOperator& op, const Quasimomentum& theta, int axis);

/// Grid samples of an element of the direct integral: one C^Gamma vector per grid point.
struct FiberField {
  BrillouinGrid grid;
  std::vector<std::int64_t> period;
  std::vector<ComplexVector> values;

  double squared_norm() const;
  double norm() const { return std::sqrt(squared_norm()); }
};

/// Discrete Floquet transform on the commensurate torus Torus(N, q):
///   [F psi](n/N, x) = (prod N_j)^{-1/2} sum_m psi_{x + m q} e^{-2 pi i <n/N, m>}.
/// Unitary; the state's torus geometry supplies N and q.
FiberField floquet_transform(const LatticeState& psi);
LatticeState inverse_floquet_transform(const FiberField& field);

struct BlockDiagonalizationDefect {
  double hamiltonian = 0.0;
  std::vector<double> velocity;  // one per axis

  double max() const;
};

/// max over `samples` random states of || F(J psi) - {theta -> J(theta) (F psi)(theta)} ||,
/// with J psi taken from the dense torus matrix; likewise for every P_k.
BlockDiagonalizationDefect verify_block_diagonalization(const PeriodicJacobiOperator& op,
                                                        const std::vector<std::int64_t>& cells, int samples = 4,
                                                        std::uint64_t seed = 1);

}  // namespace pjacobi
