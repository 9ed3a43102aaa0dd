#pragma once

#include <Eigen/Core>

namespace pjacobi {

struct Eigendecomposition {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXcd vectors; // orthonormal columns, vectors.col(j) <-> values[j]
};

/// Largest entrywise |A - A^dagger|.
double hermiticity_defect(const Eigen::MatrixXcd& a);

/// Dense Hermitian eigensolver. Throws Error(kNotHermitian) when the
/// hermiticity defect exceeds 1e-10 * max(1, max|A_ij|). Real matrices are
/// routed through the real symmetric solver.
Eigendecomposition hermitian_eigendecomposition(const Eigen::MatrixXcd& a);

/// Spectral norm of a Hermitian matrix (largest |eigenvalue|).
double hermitian_norm(const Eigen::MatrixXcd& a);

}  // namespace pjacobi
