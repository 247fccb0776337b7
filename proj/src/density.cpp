#include "epiq/density.hpp"

#include <cmath>

#include "epiq/errors.hpp"

namespace epiq {

DensityMatrix::DensityMatrix(const CMatrix& m, std::optional<PriorProvenance> provenance)
    : provenance_(std::move(provenance)) {
  if (m.rows() == 0 || m.rows() != m.cols())
    throw InvalidDensityMatrix("density matrix must be square and nonempty");
  if (!m.allFinite()) throw InvalidDensityMatrix("density matrix has non-finite entries");
  if (hermitian_deviation(m) > 1e-12) throw InvalidDensityMatrix("matrix is not Hermitian");
  m_ = 0.5 * (m + m.adjoint());
  if (std::abs(m_.trace().real() - 1.0) > 1e-12)
    throw InvalidDensityMatrix("trace differs from 1 by " +
                               std::to_string(std::abs(m_.trace().real() - 1.0)));
  if (hermitian_eigenvalues(m_)(0) < -1e-10)
    throw InvalidDensityMatrix("matrix is not positive semidefinite");
}

DensityMatrix DensityMatrix::pure(const CVector& unit_vector) {
  return DensityMatrix(projector(unit_vector));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dimension) {
  const auto d = static_cast<Eigen::Index>(dimension);
  return DensityMatrix(CMatrix::Identity(d, d) / static_cast<double>(dimension));
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

double DensityMatrix::von_neumann_entropy() const {
  double s = 0.0;
  auto ev = hermitian_eigenvalues(m_);
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > 1e-300) s -= ev(i) * std::log(ev(i));
  return s;
}

} // namespace epiq
