#pragma once

#include <optional>
#include <span>
#include <vector>

#include "epiq/density.hpp"
#include "epiq/hilbert.hpp"

namespace epiq {

/// P[k][i] = |<a,k|b,i>|^2, the probability of lambda^b = value i after a
/// perfect measurement found lambda^a = value k.
struct TransitionMatrix {
  ExperimentIndex from;
  ExperimentIndex to;
  RMatrix entries;
  RealizationMode mode;
  bool via_fallback = false;
};

TransitionMatrix transition_matrix(const QuantumModel& qm, ExperimentIndex a, ExperimentIndex b);

/**
 * E = sum_i p_i |i><i| over an orthonormal basis, kept together with the
 * decomposition that produced it. Two effects are equal when their matrices
 * agree to 1e-12, whatever their decompositions.
 */
class Effect {
public:
  /// Weights over the state vectors |b,i> of experiment b.
  static Effect on_experiment(const QuantumModel& qm, ExperimentIndex b,
                              std::vector<double> weights);
  /// Weights over an explicit orthonormal basis (checked to 1e-10).
  static Effect on_basis(std::vector<CVector> basis, std::vector<double> weights);
  /// Spectral decomposition of a Hermitian matrix with spectrum in [0, 1].
  static Effect from_matrix(const CMatrix& m);

  const CMatrix& matrix() const noexcept { return matrix_; }
  const std::vector<CVector>& basis() const noexcept { return basis_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::optional<ExperimentIndex>& experiment() const noexcept { return experiment_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }

  bool same_as(const Effect& other, double tol = 1e-12) const;

private:
  Effect(std::vector<CVector> basis, std::vector<double> weights,
         std::optional<ExperimentIndex> experiment);

  std::vector<CVector> basis_;
  std::vector<double> weights_;
  std::optional<ExperimentIndex> experiment_;
  CMatrix matrix_;
};

/// sum_i p_i <i|rho|i> over the effect's own decomposition.
double effect_probability(const DensityMatrix& rho, const Effect& effect);
/// sum_i p_i |<i|psi>|^2 for a pure state.
double effect_probability(const AmplitudeVector& state, const Effect& effect);
/// tr(rho E) computed from the matrix form.
double trace_probability(const DensityMatrix& rho, const Effect& effect);

/// |P((E1+E2)/2) - P(E1)/2 - P(E2)/2|, with the average decomposed spectrally.
/// Throws NotAnEffect if the average leaves the [0,1] spectrum.
double mixture_check(const Effect& e1, const Effect& e2, const DensityMatrix& rho);

struct GleasonSample {
  Effect effect;
  double probability;
};

struct GleasonFit {
  DensityMatrix recovered;          // projected to the PSD, unit-trace set
  CMatrix raw;                      // least-squares Hermitian solution before projection
  double raw_residual = 0.0;        // max |P_s - tr(raw E_s)|
  double residual = 0.0;            // max |P_s - tr(recovered E_s)|
  double min_raw_eigenvalue = 0.0;
  std::size_t sample_size = 0;
};

/// Least-squares Hermitian rho over the real span of Hermitian d x d matrices,
/// then eigenvalue clipping at 0 and trace renormalization. Throws
/// RankDeficient when the effects do not span that space.
GleasonFit gleason_fit(std::span<const GleasonSample> samples);

} // namespace epiq
