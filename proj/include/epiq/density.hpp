#pragma once

#include <optional>
#include <vector>

#include "epiq/linalg.hpp"
#include "epiq/model.hpp"

namespace epiq {

/// Prior weights over the answers of one experiment that produced a density matrix.
struct PriorProvenance {
  ExperimentIndex experiment;
  std::vector<double> weights;
};

/**
 * Hermitian, positive semidefinite, unit-trace matrix. Construction checks
 * Hermiticity to 1e-12, minimum eigenvalue >= -1e-10 and trace 1 +- 1e-12,
 * throwing InvalidDensityMatrix, then stores the exactly Hermitian part.
 */
class DensityMatrix {
public:
  explicit DensityMatrix(const CMatrix& m, std::optional<PriorProvenance> provenance = {});

  static DensityMatrix pure(const CVector& unit_vector);
  static DensityMatrix maximally_mixed(std::size_t dimension);

  const CMatrix& matrix() const noexcept { return m_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  const std::optional<PriorProvenance>& provenance() const noexcept { return provenance_; }

  double purity() const;
  /// -sum p log p over the spectrum, natural log.
  double von_neumann_entropy() const;

private:
  CMatrix m_;
  std::optional<PriorProvenance> provenance_;
};

} // namespace epiq
