#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "epiq/group.hpp"
#include "epiq/model.hpp"

namespace epiq {

struct NaturalityWitness {
  PointIndex first;
  PointIndex second;
  ElementIndex element;
};

/// f is natural when f(p1) = f(p2) implies f(p1 g) = f(p2 g). Exhaustive over
/// pairs and elements; the first counterexample found is returned.
struct NaturalityResult {
  bool natural = true;
  std::optional<NaturalityWitness> witness;
};

NaturalityResult natural_function_check(std::span<const std::string> labels,
                                        const GroupAction& action);

/**
 * Parameter with a finite ordered range and a right action of a subgroup on it.
 * action.points() is the range; action.group() element i is element
 * elements[i] of the shared group.
 */
struct WideParameter {
  std::string label;
  GroupAction action;
  ElementSet elements;

  const std::vector<std::string>& range() const noexcept { return action.points(); }
};

/// The values of experiment a with the induced subgroup acting on them.
WideParameter wide_parameter_from_experiment(const ExperimentModel& model, ExperimentIndex a);

/// Tuple space of several parameters with the componentwise action of the
/// elements shared by every factor. Points are tuples in lexicographic order.
struct CartesianTotal {
  std::vector<WideParameter> factors;
  std::vector<std::vector<std::size_t>> tuples;
  ElementSet shared_elements;  // shared-group indices of action.group() elements
  GroupAction action;

  /// Throws std::out_of_range for a tuple outside the product.
  PointIndex index_of(std::span<const std::size_t> tuple) const;
};

/// Throws ActionMismatch when a factor's elements are not a subgroup of the
/// shared group or its multiplication disagrees with it.
CartesianTotal cartesian_total(std::vector<WideParameter> factors, const FiniteGroup& group);

/// Distinct tuples (lambda^a1(phi), ..., lambda^an(phi)) over all phi, sorted.
std::vector<std::vector<ValueIndex>> realized_tuples(const ExperimentModel& model,
                                                     std::span<const ExperimentIndex> experiments);

/// Values of coordinate `factor` taken on the subset psi. Throws EmptyRestriction.
std::vector<std::size_t> admissible_values(const CartesianTotal& total,
                                           std::span<const PointIndex> psi, std::size_t factor);

/// Orbits of a parameter's action on its range, sorted by smallest value.
std::vector<std::vector<std::size_t>> range_orbits(const WideParameter& wide);

struct ReducedExperiment {
  WideParameter source;
  std::vector<std::vector<std::size_t>> orbits;
  std::vector<std::size_t> selected_orbits;
  /// Range value -> position in selected_orbits; empty for excluded values.
  std::vector<std::optional<std::size_t>> value_map;
  std::vector<std::string> labels;  // one per selected orbit

  /// The source action restricted to the values that survive.
  GroupAction restricted_action() const;
  /// Reduced label of every surviving value, aligned with restricted_action().points().
  std::vector<std::string> restricted_labels() const;
};

/// Maps every value of a selected orbit to that orbit's label. Throws
/// NoOrbitSelected when the selection is empty or names an unknown orbit.
ReducedExperiment orbit_reduce(const WideParameter& wide,
                               std::span<const std::size_t> selected_orbits);

struct ReducedModel {
  ExperimentModel model;
  ReducedExperiment reduction;
  std::vector<std::string> dropped_experiments;
};

/**
 * Restricts a model to the points whose value of experiment a lies in the
 * selected orbits of G^a. The group becomes the setwise stabilizer of those
 * points; experiment a takes the orbit labels as values; other experiments
 * are restricted and kept when they retain two values and stay connected to
 * the reference inside the stabilizer. Throws InvalidExperiment when the
 * reduced experiment has a single value.
 */
ReducedModel reduce_model(const ExperimentModel& model, ExperimentIndex a,
                          std::span<const std::size_t> selected_orbits);

} // namespace epiq
