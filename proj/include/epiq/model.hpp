#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "epiq/group.hpp"

namespace epiq {

using ValueIndex = std::size_t;

struct ParameterValue {
  std::string name;
  double eigenvalue = 0.0;
  bool operator==(const ParameterValue&) const = default;
};

/**
 * A mutually exclusive experiment: its parameter is a total function from the
 * points of the total parameter space to finitely many values.
 *
 * Values are ordered; that order fixes the index k of |a,k> and the basis
 * order of H^a. Every declared value must be taken by some point and at
 * least two values are required (InvalidExperiment otherwise).
 */
class Experiment {
public:
  Experiment(std::string label, std::vector<ParameterValue> values,
             std::vector<ValueIndex> value_of_point);

  const std::string& label() const noexcept { return label_; }
  std::size_t num_values() const noexcept { return values_.size(); }
  std::size_t num_points() const noexcept { return value_of_point_.size(); }
  const ParameterValue& value(ValueIndex k) const { return values_.at(k); }
  const std::vector<ParameterValue>& values() const noexcept { return values_; }
  std::optional<ValueIndex> find_value(std::string_view name) const;
  ValueIndex value_of(PointIndex p) const { return value_of_point_.at(p); }
  const std::vector<ValueIndex>& value_map() const noexcept { return value_of_point_; }
  std::vector<double> eigenvalues() const;

  /// Points carrying each value, in value order.
  const std::vector<std::vector<PointIndex>>& blocks() const noexcept { return blocks_; }

  bool operator==(const Experiment&) const = default;

private:
  std::string label_;
  std::vector<ParameterValue> values_;
  std::vector<ValueIndex> value_of_point_;
  std::vector<std::vector<PointIndex>> blocks_;
};

using ExperimentIndex = std::size_t;

struct Connection {
  ExperimentIndex from;
  ExperimentIndex to;
  ElementIndex element;
  bool operator==(const Connection&) const = default;
};

/**
 * Experiments, the connections g_ab and the reference experiment c.
 *
 * Connections that are not declared are completed through the reference:
 * g_aa = e, g_ac = inverse(g_ca), g_ab = g_ac * g_cb. Declared connections are
 * kept as given, so the catalog may violate the transformation or cocycle law;
 * validate_assumptions reports that.
 */
class ExperimentCatalog {
public:
  ExperimentCatalog(std::vector<Experiment> experiments, std::vector<Connection> declared,
                    ExperimentIndex reference, const FiniteGroup& group);

  std::size_t size() const noexcept { return experiments_.size(); }
  const Experiment& experiment(ExperimentIndex a) const { return experiments_.at(a); }
  const std::vector<Experiment>& experiments() const noexcept { return experiments_; }
  ExperimentIndex reference() const noexcept { return reference_; }
  std::optional<ExperimentIndex> find(std::string_view label) const;
  /// Throws UnknownExperiment.
  ExperimentIndex index_of(std::string_view label) const;

  ElementIndex connection(ExperimentIndex a, ExperimentIndex b) const {
    return connections_[a][b];
  }
  bool declared(ExperimentIndex a, ExperimentIndex b) const { return declared_[a][b]; }
  std::vector<Connection> declared_connections() const;

  bool operator==(const ExperimentCatalog&) const = default;

private:
  std::vector<Experiment> experiments_;
  std::vector<std::vector<ElementIndex>> connections_;
  std::vector<std::vector<bool>> declared_;
  ExperimentIndex reference_;
};

/// Total parameter space with its group action plus the experiment catalog.
class ExperimentModel {
public:
  ExperimentModel(std::string name, GroupAction action, ExperimentCatalog catalog);

  const std::string& name() const noexcept { return name_; }
  const GroupAction& action() const noexcept { return action_; }
  const FiniteGroup& group() const noexcept { return action_.group(); }
  const ExperimentCatalog& catalog() const noexcept { return catalog_; }
  std::size_t num_points() const noexcept { return action_.num_points(); }

  bool operator==(const ExperimentModel&) const = default;

private:
  std::string name_;
  GroupAction action_;
  ExperimentCatalog catalog_;
};

struct InducedSubgroup {
  ElementSet elements;
  bool trivial = false;
};

/// Maximal set of g whose action maps each value block of experiment a onto a
/// value block. Asserts the result is a subgroup.
InducedSubgroup derive_induced_subgroup(const ExperimentModel& model, ExperimentIndex a);

/// Transformation of the values of experiment a induced by g, or nullopt when g
/// does not respect the value partition: entry j is lambda^a(phi g) for any phi
/// with lambda^a(phi) = j. This is a right action of G^a on the values.
std::optional<std::vector<ValueIndex>> induced_value_action(const ExperimentModel& model,
                                                            ExperimentIndex a, ElementIndex g);

/// Relabeling beta with lambda^b(phi) = beta(lambda^a(phi g)) for all phi, if one exists.
std::optional<std::vector<ValueIndex>> value_bijection(const ExperimentModel& model,
                                                       ExperimentIndex a, ExperimentIndex b,
                                                       ElementIndex g);

enum class CheckStatus { pass, warning, fail };
std::string to_string(CheckStatus status);

struct AssumptionCheck {
  std::string id;
  std::string statement;
  CheckStatus status = CheckStatus::pass;
  std::string detail;
  std::vector<std::string> witnesses;
};

struct ValueBijection {
  ExperimentIndex from;
  ExperimentIndex to;
  ElementIndex element;
  std::vector<ValueIndex> mapping; // from-value index -> to-value index
};

struct ValidationReport {
  std::string model_name;
  std::vector<AssumptionCheck> checks; // exactly ten, fixed order
  bool generates_group = false;
  std::size_t generated_order = 0;
  std::vector<std::size_t> induced_subgroup_sizes;           // per experiment
  std::vector<std::vector<std::size_t>> block_sizes;         // per experiment, value order
  std::vector<ValueBijection> bijections;                    // every valid ordered pair
  bool eigenvalue_sets_agree = true;

  bool ok() const; // no failures (warnings allowed)
  std::size_t count(CheckStatus status) const;
  const AssumptionCheck& check(std::string_view id) const;
};

/// Checks every general assumption by exhaustive enumeration. Never throws for
/// model defects; they become failing entries.
ValidationReport validate_assumptions(const ExperimentModel& model);

} // namespace epiq
