#include "epiq/model.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "epiq/errors.hpp"

namespace epiq {

Experiment::Experiment(std::string label, std::vector<ParameterValue> values,
                       std::vector<ValueIndex> value_of_point)
    : label_(std::move(label)), values_(std::move(values)),
      value_of_point_(std::move(value_of_point)) {
  if (label_.empty()) throw InvalidExperiment("experiment label is empty");
  std::set<std::string> names;
  for (const auto& v : values_)
    if (!names.insert(v.name).second)
      throw InvalidExperiment("experiment '" + label_ + "' declares value '" + v.name + "' twice");
  blocks_.assign(values_.size(), {});
  for (PointIndex p = 0; p < value_of_point_.size(); ++p) {
    if (value_of_point_[p] >= values_.size())
      throw InvalidExperiment("experiment '" + label_ + "' maps a point to an unknown value");
    blocks_[value_of_point_[p]].push_back(p);
  }
  for (std::size_t k = 0; k < blocks_.size(); ++k)
    if (blocks_[k].empty())
      throw InvalidExperiment("experiment '" + label_ + "': value '" + values_[k].name +
                              "' is never taken");
  if (values_.size() < 2)
    throw InvalidExperiment("experiment '" + label_ +
                            "' has fewer than two distinct values; it asks no question");
}

std::optional<ValueIndex> Experiment::find_value(std::string_view name) const {
  for (std::size_t k = 0; k < values_.size(); ++k)
    if (values_[k].name == name) return k;
  return std::nullopt;
}

std::vector<double> Experiment::eigenvalues() const {
  std::vector<double> out;
  for (const auto& v : values_) out.push_back(v.eigenvalue);
  return out;
}

ExperimentCatalog::ExperimentCatalog(std::vector<Experiment> experiments,
                                     std::vector<Connection> declared, ExperimentIndex reference,
                                     const FiniteGroup& group)
    : experiments_(std::move(experiments)), reference_(reference) {
  const std::size_t n = experiments_.size();
  if (n == 0) throw CatalogError("catalog has no experiments");
  if (reference_ >= n) throw CatalogError("reference experiment out of range");
  std::set<std::string> labels;
  for (const auto& e : experiments_)
    if (!labels.insert(e.label()).second)
      throw CatalogError("duplicate experiment label '" + e.label() + "'");

  constexpr auto unset = static_cast<ElementIndex>(-1);
  connections_.assign(n, std::vector<ElementIndex>(n, unset));
  declared_.assign(n, std::vector<bool>(n, false));
  for (const auto& c : declared) {
    if (c.from >= n || c.to >= n || c.element >= group.size())
      throw CatalogError("connection refers to an unknown experiment or element");
    if (declared_[c.from][c.to])
      throw CatalogError("connection (" + experiments_[c.from].label() + ", " +
                         experiments_[c.to].label() + ") declared twice");
    connections_[c.from][c.to] = c.element;
    declared_[c.from][c.to] = true;
  }

  const auto c = reference_;
  for (std::size_t a = 0; a < n; ++a) {
    if (connections_[a][a] == unset) connections_[a][a] = group.identity();
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (connections_[c][a] == unset && connections_[a][c] != unset)
      connections_[c][a] = group.inverse(connections_[a][c]);
    if (connections_[a][c] == unset && connections_[c][a] != unset)
      connections_[a][c] = group.inverse(connections_[c][a]);
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (connections_[a][b] != unset) continue;
      if (connections_[a][c] == unset || connections_[c][b] == unset)
        throw CatalogError("no connection from '" + experiments_[a].label() + "' to '" +
                           experiments_[b].label() + "' and none derivable via the reference");
      connections_[a][b] = group.multiply(connections_[a][c], connections_[c][b]);
    }
}

std::optional<ExperimentIndex> ExperimentCatalog::find(std::string_view label) const {
  for (std::size_t a = 0; a < experiments_.size(); ++a)
    if (experiments_[a].label() == label) return a;
  return std::nullopt;
}

ExperimentIndex ExperimentCatalog::index_of(std::string_view label) const {
  if (auto a = find(label)) return *a;
  throw UnknownExperiment("no experiment labelled '" + std::string(label) + "'");
}

std::vector<Connection> ExperimentCatalog::declared_connections() const {
  std::vector<Connection> out;
  for (std::size_t a = 0; a < size(); ++a)
    for (std::size_t b = 0; b < size(); ++b)
      if (declared_[a][b]) out.push_back({a, b, connections_[a][b]});
  return out;
}

ExperimentModel::ExperimentModel(std::string name, GroupAction action, ExperimentCatalog catalog)
    : name_(std::move(name)), action_(std::move(action)), catalog_(std::move(catalog)) {
  for (const auto& e : catalog_.experiments())
    if (e.num_points() != action_.num_points())
      throw InvalidExperiment("experiment '" + e.label() + "' is not defined on every point");
}

std::optional<std::vector<ValueIndex>> induced_value_action(const ExperimentModel& model,
                                                            ExperimentIndex a, ElementIndex g) {
  const auto& exp = model.catalog().experiment(a);
  constexpr auto unset = static_cast<ValueIndex>(-1);
  std::vector<ValueIndex> image(exp.num_values(), unset);
  for (PointIndex p = 0; p < model.num_points(); ++p) {
    auto from = exp.value_of(p);
    auto to = exp.value_of(model.action().apply(p, g));
    if (image[from] == unset) image[from] = to;
    else if (image[from] != to) return std::nullopt;
  }
  return image;
}

InducedSubgroup derive_induced_subgroup(const ExperimentModel& model, ExperimentIndex a) {
  InducedSubgroup out;
  for (ElementIndex g = 0; g < model.group().size(); ++g)
    if (induced_value_action(model, a, g)) out.elements.push_back(g);
  if (!model.group().is_subgroup(out.elements))
    throw NotASubgroup("partition-compatible set of '" +
                       model.catalog().experiment(a).label() + "' is not a subgroup");
  out.trivial = out.elements.size() == 1;
  return out;
}

std::optional<std::vector<ValueIndex>> value_bijection(const ExperimentModel& model,
                                                       ExperimentIndex a, ExperimentIndex b,
                                                       ElementIndex g) {
  const auto& ea = model.catalog().experiment(a);
  const auto& eb = model.catalog().experiment(b);
  if (ea.num_values() != eb.num_values()) return std::nullopt;
  constexpr auto unset = static_cast<ValueIndex>(-1);
  std::vector<ValueIndex> forward(ea.num_values(), unset), backward(eb.num_values(), unset);
  for (PointIndex p = 0; p < model.num_points(); ++p) {
    auto va = ea.value_of(model.action().apply(p, g));
    auto vb = eb.value_of(p);
    if (forward[va] == unset && backward[vb] == unset) {
      forward[va] = vb;
      backward[vb] = va;
    } else if (forward[va] != vb || backward[vb] != va) {
      return std::nullopt;
    }
  }
  return forward;
}

std::string to_string(CheckStatus status) {
  switch (status) {
  case CheckStatus::pass: return "pass";
  case CheckStatus::warning: return "warning";
  case CheckStatus::fail: return "fail";
  }
  return "unknown";
}

bool ValidationReport::ok() const { return count(CheckStatus::fail) == 0; }

std::size_t ValidationReport::count(CheckStatus status) const {
  return static_cast<std::size_t>(std::count_if(
      checks.begin(), checks.end(), [status](const auto& c) { return c.status == status; }));
}

const AssumptionCheck& ValidationReport::check(std::string_view id) const {
  for (const auto& c : checks)
    if (c.id == id) return c;
  throw std::out_of_range("no assumption check '" + std::string(id) + "'");
}

namespace {

std::string point_name(const ExperimentModel& m, PointIndex p) { return m.action().points()[p]; }
std::string element_name(const ExperimentModel& m, ElementIndex g) { return m.group().name(g); }

// Why the value relabeling fails for (a, b, g): two points that force conflicting images.
std::string bijection_witness(const ExperimentModel& model, ExperimentIndex a, ExperimentIndex b,
                              ElementIndex g) {
  const auto& ea = model.catalog().experiment(a);
  const auto& eb = model.catalog().experiment(b);
  if (ea.num_values() != eb.num_values())
    return "value counts differ (" + std::to_string(ea.num_values()) + " vs " +
           std::to_string(eb.num_values()) + ")";
  for (PointIndex p = 0; p < model.num_points(); ++p)
    for (PointIndex q = p + 1; q < model.num_points(); ++q) {
      bool same_a = ea.value_of(model.action().apply(p, g)) ==
                    ea.value_of(model.action().apply(q, g));
      bool same_b = eb.value_of(p) == eb.value_of(q);
      if (same_a != same_b)
        return "points " + point_name(model, p) + ", " + point_name(model, q) + ": lambda^" +
               eb.label() + (same_b ? " agrees" : " differs") + " but lambda^" + ea.label() +
               "(phi " + element_name(model, g) + ")" + (same_a ? " agrees" : " differs");
    }
  return "no bijection";
}

} // namespace

ValidationReport validate_assumptions(const ExperimentModel& model) {
  ValidationReport report;
  report.model_name = model.name();
  const auto& catalog = model.catalog();
  const auto& group = model.group();
  const auto& action = model.action();
  const std::size_t n = catalog.size();

  {
    AssumptionCheck c{"experiments",
                      "There is a set of mutually exclusive experiments, each with its parameter",
                      CheckStatus::pass, std::to_string(n) + " experiments", {}};
    if (n == 0) {
      c.status = CheckStatus::fail;
      c.detail = "no experiments";
    }
    report.checks.push_back(std::move(c));
  }

  {
    AssumptionCheck c{"total_parameter",
                      "Each parameter is a function of the total parameter, and a group acts on it",
                      CheckStatus::pass, "", {}};
    for (const auto& e : catalog.experiments())
      if (e.num_points() != model.num_points()) {
        c.status = CheckStatus::fail;
        c.witnesses.push_back("experiment " + e.label() + " is not total");
      }
    std::size_t pairs = 0;
    for (ElementIndex g = 0; g < group.size(); ++g)
      for (ElementIndex h = 0; h < group.size(); ++h, ++pairs)
        for (PointIndex p = 0; p < model.num_points(); ++p)
          if (action.apply(p, group.multiply(g, h)) != action.apply(action.apply(p, g), h)) {
            c.status = CheckStatus::fail;
            c.witnesses.push_back("(" + element_name(model, g) + ", " + element_name(model, h) +
                                  ") at " + point_name(model, p));
            break;
          }
    c.detail = "right-action law checked on " + std::to_string(pairs) + " element pairs";
    report.checks.push_back(std::move(c));
  }

  std::vector<ElementSet> induced;
  {
    AssumptionCheck c{"induced_subgroups",
                      "Each experiment has a nontrivial subgroup acting on its parameter",
                      CheckStatus::pass, "", {}};
    for (ExperimentIndex a = 0; a < n; ++a) {
      auto sub = derive_induced_subgroup(model, a);
      report.induced_subgroup_sizes.push_back(sub.elements.size());
      if (sub.trivial) {
        c.status = CheckStatus::warning;
        c.witnesses.push_back(catalog.experiment(a).label() + ": trivial");
      }
      induced.push_back(std::move(sub.elements));
    }
    std::ostringstream detail;
    detail << "orders";
    for (ExperimentIndex a = 0; a < n; ++a)
      detail << " " << catalog.experiment(a).label() << "=" << report.induced_subgroup_sizes[a];
    c.detail = detail.str();
    report.checks.push_back(std::move(c));
  }

  {
    AssumptionCheck c{"connections",
                      "For every pair a, b some g_ab transforms lambda^a into lambda^b",
                      CheckStatus::pass, "", {}};
    std::size_t checked = 0;
    for (ExperimentIndex a = 0; a < n; ++a)
      for (ExperimentIndex b = 0; b < n; ++b, ++checked) {
        auto g = catalog.connection(a, b);
        if (auto beta = value_bijection(model, a, b, g)) {
          report.bijections.push_back({a, b, g, std::move(*beta)});
        } else {
          c.status = CheckStatus::fail;
          c.witnesses.push_back("(" + catalog.experiment(a).label() + ", " +
                                catalog.experiment(b).label() + ") via " +
                                element_name(model, g) + ": " +
                                bijection_witness(model, a, b, g));
        }
      }
    c.detail = std::to_string(checked) + " ordered pairs checked";
    report.checks.push_back(std::move(c));
  }

  {
    AssumptionCheck c{"cocycle", "g_ac = g_ab g_bc for all a, b, c", CheckStatus::pass, "", {}};
    for (ExperimentIndex a = 0; a < n; ++a)
      if (catalog.connection(a, a) != group.identity()) {
        c.status = CheckStatus::fail;
        c.witnesses.push_back("g_aa is not the identity for " + catalog.experiment(a).label());
      }
    for (ExperimentIndex a = 0; a < n; ++a)
      for (ExperimentIndex b = 0; b < n; ++b)
        for (ExperimentIndex d = 0; d < n; ++d)
          if (catalog.connection(a, d) !=
              group.multiply(catalog.connection(a, b), catalog.connection(b, d))) {
            c.status = CheckStatus::fail;
            c.witnesses.push_back("(" + catalog.experiment(a).label() + ", " +
                                  catalog.experiment(b).label() + ", " +
                                  catalog.experiment(d).label() + ")");
          }
    c.detail = std::to_string(n * n * n) + " triples checked";
    report.checks.push_back(std::move(c));
  }

  {
    AssumptionCheck c{"finite_values", "Each parameter takes only a finite number of values",
                      CheckStatus::pass, "", {}};
    std::ostringstream detail;
    detail << "value counts";
    for (const auto& e : catalog.experiments()) {
      detail << " " << e.label() << "=" << e.num_values();
      std::vector<std::size_t> sizes;
      for (const auto& block : e.blocks()) sizes.push_back(block.size());
      report.block_sizes.push_back(std::move(sizes));
      if (e.num_values() < 2) {
        c.status = CheckStatus::fail;
        c.witnesses.push_back(e.label() + " is single-valued");
      }
    }
    c.detail = detail.str();
    report.checks.push_back(std::move(c));
  }

  report.checks.push_back({"locally_compact", "The total parameter space is locally compact",
                           model.num_points() > 0 ? CheckStatus::pass : CheckStatus::fail,
                           std::to_string(model.num_points()) + " points, discrete topology",
                           {}});

  {
    AssumptionCheck c{"invariant_measure",
                      "The action has a right invariant measure on the total parameter space",
                      CheckStatus::pass, "counting measure; every element acts bijectively", {}};
    for (ElementIndex g = 0; g < group.size(); ++g) {
      std::vector<bool> hit(model.num_points(), false);
      for (auto q : action.perm(g)) hit[q] = true;
      if (std::find(hit.begin(), hit.end(), false) != hit.end()) {
        c.status = CheckStatus::fail;
        c.witnesses.push_back(element_name(model, g) + " is not a bijection");
      }
    }
    report.checks.push_back(std::move(c));
  }

  {
    AssumptionCheck c{"compact_group", "The group is compact", CheckStatus::pass, "", {}};
    try {
      FiniteGroup recheck(group.names(), group.cayley());
      c.detail = "finite group of order " + std::to_string(group.size());
    } catch (const GroupError& e) {
      c.status = CheckStatus::fail;
      c.witnesses.push_back(e.what());
    }
    report.checks.push_back(std::move(c));
  }

  {
    ElementSet generators;
    for (const auto& sub : induced) generators.insert(generators.end(), sub.begin(), sub.end());
    auto generated = group.closure(generators);
    report.generated_order = generated.size();
    report.generates_group = generated.size() == group.size();
    AssumptionCheck c{"generation", "The subgroups G^a generate G",
                      report.generates_group ? CheckStatus::pass : CheckStatus::warning,
                      "generated subgroup has order " + std::to_string(generated.size()) +
                          " of " + std::to_string(group.size()),
                      {}};
    if (!report.generates_group)
      for (ElementIndex g = 0; g < group.size(); ++g)
        if (!std::binary_search(generated.begin(), generated.end(), g))
          c.witnesses.push_back(element_name(model, g));
    report.checks.push_back(std::move(c));
  }

  {
    auto ref = catalog.experiment(catalog.reference()).eigenvalues();
    std::sort(ref.begin(), ref.end());
    for (const auto& e : catalog.experiments()) {
      auto ev = e.eigenvalues();
      std::sort(ev.begin(), ev.end());
      if (ev != ref) report.eigenvalue_sets_agree = false;
    }
  }
  return report;
}

} // namespace epiq
