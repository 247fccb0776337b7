#include "epiq/linalg.hpp"

#include <cmath>

namespace epiq {

double matrix_norm(const CMatrix& m, NormKind kind) {
  if (m.size() == 0) return 0.0;
  if (kind == NormKind::max_entry) return m.cwiseAbs().maxCoeff();
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

double hermitian_deviation(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Eigen::VectorXd hermitian_eigenvalues(const CMatrix& m) {
  CMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

CVector apply_phase_convention(CVector v, double tol) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double r = std::abs(v(i));
    if (r > tol) {
      v *= std::conj(v(i)) / r;
      v(i) = Complex(r, 0.0);
      break;
    }
  }
  return v;
}

bool equal_up_to_phase(const CVector& u, const CVector& v, double tol) {
  if (u.size() != v.size()) return false;
  return std::abs(u.dot(v)) >= 1.0 - tol;
}

CMatrix projector(const CVector& v) { return v * v.adjoint(); }

} // namespace epiq
