#include "pjacobi/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <limits>
#include <string>

#include "pjacobi/error.hpp"

namespace pjacobi {

double hermiticity_defect(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

Eigendecomposition hermitian_eigendecomposition(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::kNotHermitian, "matrix is not square");
  const double scale = a.size() == 0 ? 1.0 : std::max(1.0, a.cwiseAbs().maxCoeff());
  const double defect = hermiticity_defect(a);
  if (defect > 1e-10 * scale)
    throw Error(ErrorKind::kNotHermitian, "hermiticity defect " + std::to_string(defect));

  Eigendecomposition out;
  if (a.size() == 0) return out;
  // Symmetrise so the solver sees an exactly Hermitian input.
  if (a.imag().cwiseAbs().maxCoeff() == 0.0) {
    const Eigen::MatrixXd sym = 0.5 * (a.real() + a.real().transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    out.values = solver.eigenvalues();
    out.vectors = solver.eigenvectors().cast<std::complex<double>>();
  } else {
    const Eigen::MatrixXcd herm = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm);
    out.values = solver.eigenvalues();
    out.vectors = solver.eigenvectors();
  }
  return out;
}

double hermitian_norm(const Eigen::MatrixXcd& a) {
  if (a.size() == 0) return 0.0;
  const Eigen::MatrixXcd herm = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace pjacobi
