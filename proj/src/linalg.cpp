#include "chernoff/linalg.hpp"

#include <algorithm>

namespace chernoff {

HermEig herm_eig(const ComplexMatrix& h) {
  detail::require_square(h, "herm_eig");
  const double scale = h.norm();
  if ((h - h.adjoint()).norm() > 1e-10 * scale) {
    throw std::invalid_argument("herm_eig: matrix is not Hermitian");
  }
  const ComplexMatrix sym = 0.5 * (h + h.adjoint());
  const Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("herm_eig: eigensolver did not converge");
  }
  return HermEig{solver.eigenvalues(), solver.eigenvectors()};
}

double numerical_abscissa(const ComplexMatrix& a) {
  detail::require_square(a, "numerical_abscissa");
  const ComplexMatrix herm = 0.5 * (a + a.adjoint());
  const Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

bool is_dissipative(const ComplexMatrix& a, double tol) { return numerical_abscissa(a) <= tol; }

double relative_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).norm() / std::max(b.norm(), 1.0);
}

}  // namespace chernoff
