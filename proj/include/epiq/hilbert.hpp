#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "epiq/linalg.hpp"
#include "epiq/model.hpp"

namespace epiq {

struct Tolerances {
  double structural = 1e-10;       // unitarity, homomorphism, eigen-relations
  double word_consistency = 1e-8;  // agreement of alternative words for the same element
  NormKind norm = NormKind::operator_norm;
};

enum class RealizationMode { full_group, indicator_fallback };
std::string to_string(RealizationMode mode);

/// Which coordinates a vector uses: points of the total parameter space (the
/// ambient L2 realization) or the basis of the common space H.
enum class BasisTag { ambient, common };

class AmplitudeVector {
public:
  AmplitudeVector(BasisTag tag, CVector coords);

  BasisTag tag() const noexcept { return tag_; }
  const CVector& coords() const noexcept { return coords_; }
  double norm() const { return coords_.norm(); }

  /// <this|other>; throws BasisMismatch for differently tagged vectors.
  Complex inner(const AmplitudeVector& other) const;
  AmplitudeVector operator+(const AmplitudeVector& other) const;
  AmplitudeVector operator-(const AmplitudeVector& other) const;
  AmplitudeVector operator*(Complex s) const;

private:
  void require_same_basis(const AmplitudeVector& other) const;

  BasisTag tag_;
  CVector coords_;
};

/// Normalized indicators of the value blocks of one experiment, in value order.
struct SubspaceBasis {
  ExperimentIndex experiment;
  std::vector<AmplitudeVector> vectors;
};

/// Right regular representation (U(g) f)(phi) = f(phi g), held as permutations.
class RegularRepresentation {
public:
  explicit RegularRepresentation(const GroupAction& action);

  CVector apply(ElementIndex g, const CVector& f) const;
  CMatrix matrix(ElementIndex g) const;
  const Permutation& perm(ElementIndex g) const { return perms_.at(g); }
  /// Permutation of U(g)U(h) computed by composing the two permutations.
  Permutation compose(ElementIndex g, ElementIndex h) const;
  std::size_t dimension() const noexcept { return dim_; }

private:
  std::vector<Permutation> perms_;
  std::size_t dim_;
};

struct Representation {
  ElementSet domain;
  std::map<ElementIndex, CMatrix> matrices;
  RealizationMode mode = RealizationMode::full_group;
  double word_consistency_residual = 0.0;  // max over g, letter of |W(g)F(x) - W(gx)|
  double invariance_residual = 0.0;        // max component outside H of a generator factor

  bool contains(ElementIndex g) const { return matrices.contains(g); }
  /// Throws NotInGeneratedSubgroup.
  const CMatrix& at(ElementIndex g) const;
};

struct StateVector {
  ExperimentIndex experiment;
  ValueIndex value_index;
  AmplitudeVector vector;  // common-space coordinates, phase convention applied
  bool via_fallback = false;
};

struct ObservableOperator {
  ExperimentIndex experiment;
  CMatrix matrix;
  std::vector<double> eigenvalues;
};

RegularRepresentation build_regular_rep(const ExperimentModel& model);
SubspaceBasis indicator_basis(const ExperimentModel& model, ExperimentIndex a);

/**
 * The generator factor E^a-dagger U(g) E^a with E^a = U(g_ca), for g in G^a.
 * Evaluated on the ambient indicator basis of H = H^c and compressed to H.
 */
struct GeneratorFactor {
  CMatrix matrix;
  double outside_residual;  // largest norm of a basis image's component orthogonal to H
};
GeneratorFactor generator_factor(const ExperimentModel& model, const RegularRepresentation& u,
                                 const SubspaceBasis& common, ExperimentIndex a, ElementIndex g);

/// Representation W on the subgroup generated by all G^a; every W(g) is the
/// product of generator factors along the breadth-first word for g.
/// Throws WellDefinednessViolation if another word for some g disagrees beyond
/// tol.word_consistency.
Representation build_W(const ExperimentModel& model, const Tolerances& tol = {});

/// |a,k>: W(g_ca)|c,k'> where k' is the reference value carried to value k of a
/// by the connection; falls back to the indicator realization E^a-dagger f_k^a
/// projected onto H when g_ca is outside the domain of W.
StateVector state_vector(const ExperimentModel& model, const Representation& w,
                         ExperimentIndex a, ValueIndex k);

/// T^a = sum_k lambda_k |a,k><a,k|.
ObservableOperator observable(const ExperimentModel& model,
                              const std::vector<StateVector>& states_of_a);

/// Everything derived from a validated model, built once and then read-only.
class QuantumModel {
public:
  /// Validates first; throws ModelInvalid when any assumption fails.
  static QuantumModel build(ExperimentModel model, Tolerances tol = {});

  const ExperimentModel& model() const noexcept { return model_; }
  const ExperimentCatalog& catalog() const noexcept { return model_.catalog(); }
  const Tolerances& tolerances() const noexcept { return tol_; }
  const ValidationReport& validation() const noexcept { return validation_; }
  const Representation& W() const noexcept { return w_; }
  RealizationMode mode() const noexcept { return w_.mode; }
  std::size_t dimension() const noexcept { return dimension_; }
  const std::vector<ElementSet>& induced_subgroups() const noexcept { return induced_; }

  const StateVector& state(ExperimentIndex a, ValueIndex k) const { return states_.at(a).at(k); }
  const std::vector<StateVector>& states(ExperimentIndex a) const { return states_.at(a); }
  const ObservableOperator& observable(ExperimentIndex a) const { return observables_.at(a); }
  ExperimentIndex index_of(std::string_view label) const { return catalog().index_of(label); }

private:
  QuantumModel(ExperimentModel model, Tolerances tol);

  ExperimentModel model_;
  Tolerances tol_;
  ValidationReport validation_;
  std::vector<ElementSet> induced_;
  Representation w_;
  std::size_t dimension_ = 0;
  std::vector<std::vector<StateVector>> states_;
  std::vector<ObservableOperator> observables_;
};

struct GcsSet {
  std::vector<AmplitudeVector> vectors;   // deduplicated up to phase
  std::vector<ElementIndex> elements;     // first element producing each vector
  bool contains_all_states = false;
  std::vector<std::pair<ExperimentIndex, ValueIndex>> missing;
};

/// {W(g) seed : g in domain(W)} up to phase, and whether every |a,k> occurs.
GcsSet enumerate_gcs(const QuantumModel& qm, const AmplitudeVector& seed);

} // namespace epiq
