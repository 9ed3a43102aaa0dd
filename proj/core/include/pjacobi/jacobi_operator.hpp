#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "pjacobi/lattice.hpp"

namespace pjacobi {

using ComplexMatrix = Eigen::MatrixXcd;

/// Raw, unvalidated operator description. Axes are 1-based.
///
/// Only positive-direction hoppings a_{x, x+e_j} for x in the period cell are
/// stored; every other coefficient follows from periodicity and
/// a_{y,x} = conj(a_{x,y}).
struct OperatorData {
  int dim = 0;
  std::vector<std::int64_t> period;
  std::map<std::pair<Site, int>, Complex> hoppings;
  std::map<Site, Complex> potential;

  friend bool operator==(const OperatorData&, const OperatorData&) = default;
};

enum class ViolationKind { kZeroHopping, kNonRealPotential, kNonFinite, kShapeMismatch };

struct Violation {
  ViolationKind kind;
  Site site;
  int axis = 0;  // 0 when not tied to an axis
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  bool has(ViolationKind kind) const;
  std::string summary() const;
};

ValidationReport validate(const OperatorData& data);

/// Validated q-periodic Jacobi operator. Immutable.
class PeriodicJacobiOperator {
 public:
  /// Throws Error(kInvalidOperator) carrying the validation summary.
  static PeriodicJacobiOperator create(const OperatorData& data);

  int dim() const noexcept { return static_cast<int>(period_.size()); }
  const std::vector<std::int64_t>& period() const noexcept { return period_; }
  /// Number of sites in the period cell (q-bar).
  std::size_t cell_size() const noexcept { return cell_.size(); }
  /// The period cell as a torus with one cell; its index() reduces any site mod q.
  const Geometry& cell() const noexcept { return cell_; }

  /// a_{x, x+e_axis} for the cell site with index `cell_index`.
  Complex hopping(std::size_t cell_index, int axis) const;
  double potential(std::size_t cell_index) const { return potential_.at(cell_index); }
  /// max |a| over all stored hoppings.
  double max_hopping() const noexcept { return max_hopping_; }
  /// True when every hopping is real.
  bool is_real() const noexcept { return real_; }

  OperatorData data() const;

 private:
  PeriodicJacobiOperator(std::vector<std::int64_t> period);

  std::vector<std::int64_t> period_;
  Geometry cell_;
  std::vector<Complex> hoppings_;  // cell_index * dim + (axis - 1)
  std::vector<double> potential_;
  double max_hopping_ = 0.0;
  bool real_ = true;
};

/// Throws kInvalidAxis unless 1 <= axis <= op.dim().
void check_axis(const PeriodicJacobiOperator& op, int axis);

/// a_{x,y} for ||x - y||_1 = 1, resolved through periodicity and Hermitian symmetry.
Complex hopping_at(const PeriodicJacobiOperator& op, std::span<const std::int64_t> x, std::span<const std::int64_t> y);

/// J psi, matrix-free. Box: zero boundary. Torus: wrap-around; the torus period
/// must equal the operator period.
LatticeState apply_J(const PeriodicJacobiOperator& op, const LatticeState& psi);

/// P_k psi with P_k = i[J, X_k]:
///   P_k delta_x = i a_{x,x-e_k} delta_{x-e_k} - i a_{x,x+e_k} delta_{x+e_k}.
LatticeState apply_P(const PeriodicJacobiOperator& op, const LatticeState& psi, int axis);

/// Largest geometry accepted by the dense routes.
inline constexpr std::size_t kMaxDenseSites = 4096;

/// Dense matrix of J on a geometry in its standard basis. Throws kTooLarge.
ComplexMatrix dense_matrix(const PeriodicJacobiOperator& op, const Geometry& geometry);
/// Dense matrix of P_k on a geometry. Throws kTooLarge, kInvalidAxis.
ComplexMatrix dense_velocity_matrix(const PeriodicJacobiOperator& op, const Geometry& geometry, int axis);

/// J restricted to the torus Z^d / (N_j q_j Z).
ComplexMatrix torus_matrix(const PeriodicJacobiOperator& op, const std::vector<std::int64_t>& cells);

}  // namespace pjacobi
