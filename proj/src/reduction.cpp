#include "epiq/reduction.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "epiq/errors.hpp"

namespace epiq {

NaturalityResult natural_function_check(std::span<const std::string> labels,
                                        const GroupAction& action) {
  if (labels.size() != action.num_points())
    throw std::invalid_argument("one label per point is required");
  for (PointIndex p = 0; p < labels.size(); ++p)
    for (PointIndex q = p + 1; q < labels.size(); ++q) {
      if (labels[p] != labels[q]) continue;
      for (ElementIndex g = 0; g < action.group().size(); ++g)
        if (labels[action.apply(p, g)] != labels[action.apply(q, g)])
          return {false, NaturalityWitness{p, q, g}};
    }
  return {};
}

WideParameter wide_parameter_from_experiment(const ExperimentModel& model, ExperimentIndex a) {
  const auto& exp = model.catalog().experiment(a);
  const auto induced = derive_induced_subgroup(model, a);
  std::vector<std::string> range;
  for (const auto& v : exp.values()) range.push_back(v.name);
  std::vector<Permutation> perms;
  for (auto g : induced.elements) perms.push_back(*induced_value_action(model, a, g));
  return WideParameter{exp.label(),
                       GroupAction(model.group().restrict_to(induced.elements), std::move(range),
                                   std::move(perms)),
                       induced.elements};
}

PointIndex CartesianTotal::index_of(std::span<const std::size_t> tuple) const {
  if (tuple.size() != factors.size()) throw std::out_of_range("tuple arity");
  PointIndex index = 0;
  for (std::size_t f = 0; f < factors.size(); ++f) {
    const auto n = factors[f].range().size();
    if (tuple[f] >= n) throw std::out_of_range("tuple coordinate out of range");
    index = index * n + tuple[f];
  }
  return index;
}

namespace {

void check_factor(const WideParameter& w, const FiniteGroup& group) {
  const auto& sub = w.action.group();
  if (w.elements.size() != sub.size())
    throw ActionMismatch("factor '" + w.label + "' lists " + std::to_string(w.elements.size()) +
                         " elements for a group of order " + std::to_string(sub.size()));
  for (auto g : w.elements)
    if (g >= group.size())
      throw ActionMismatch("factor '" + w.label + "' refers to an element outside the group");
  if (!std::is_sorted(w.elements.begin(), w.elements.end()) ||
      std::adjacent_find(w.elements.begin(), w.elements.end()) != w.elements.end())
    throw ActionMismatch("factor '" + w.label + "' elements must be strictly ascending");
  for (ElementIndex i = 0; i < sub.size(); ++i)
    for (ElementIndex j = 0; j < sub.size(); ++j)
      if (group.multiply(w.elements[i], w.elements[j]) != w.elements[sub.multiply(i, j)])
        throw ActionMismatch("factor '" + w.label + "' multiplication disagrees with the group at (" +
                             group.name(w.elements[i]) + ", " + group.name(w.elements[j]) + ")");
}

} // namespace

CartesianTotal cartesian_total(std::vector<WideParameter> factors, const FiniteGroup& group) {
  if (factors.empty()) throw std::invalid_argument("at least one factor is required");
  for (const auto& f : factors) check_factor(f, group);

  ElementSet shared = factors.front().elements;
  for (std::size_t f = 1; f < factors.size(); ++f) {
    ElementSet next;
    std::set_intersection(shared.begin(), shared.end(), factors[f].elements.begin(),
                          factors[f].elements.end(), std::back_inserter(next));
    shared = std::move(next);
  }

  std::vector<std::vector<std::size_t>> tuples{{}};
  for (const auto& f : factors) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& t : tuples)
      for (std::size_t v = 0; v < f.range().size(); ++v) {
        auto u = t;
        u.push_back(v);
        next.push_back(std::move(u));
      }
    tuples = std::move(next);
  }

  std::vector<std::string> names;
  for (const auto& t : tuples) {
    std::string name = "(";
    for (std::size_t f = 0; f < t.size(); ++f)
      name += (f ? "," : "") + factors[f].range()[t[f]];
    names.push_back(name + ")");
  }

  // Local index of each shared element inside every factor.
  std::vector<std::vector<ElementIndex>> local(factors.size());
  for (std::size_t f = 0; f < factors.size(); ++f)
    for (auto g : shared)
      local[f].push_back(static_cast<ElementIndex>(
          std::lower_bound(factors[f].elements.begin(), factors[f].elements.end(), g) -
          factors[f].elements.begin()));

  std::vector<Permutation> perms;
  for (std::size_t s = 0; s < shared.size(); ++s) {
    Permutation p;
    for (const auto& t : tuples) {
      PointIndex image = 0;
      for (std::size_t f = 0; f < t.size(); ++f)
        image = image * factors[f].range().size() + factors[f].action.apply(t[f], local[f][s]);
      p.push_back(image);
    }
    perms.push_back(std::move(p));
  }
  GroupAction action(group.restrict_to(shared), std::move(names), std::move(perms));
  return CartesianTotal{std::move(factors), std::move(tuples), std::move(shared),
                        std::move(action)};
}

std::vector<std::vector<ValueIndex>> realized_tuples(const ExperimentModel& model,
                                                     std::span<const ExperimentIndex> experiments) {
  std::set<std::vector<ValueIndex>> seen;
  for (PointIndex p = 0; p < model.num_points(); ++p) {
    std::vector<ValueIndex> t;
    for (auto a : experiments) t.push_back(model.catalog().experiment(a).value_of(p));
    seen.insert(std::move(t));
  }
  return {seen.begin(), seen.end()};
}

std::vector<std::size_t> admissible_values(const CartesianTotal& total,
                                           std::span<const PointIndex> psi, std::size_t factor) {
  if (psi.empty()) throw EmptyRestriction("restriction set is empty");
  if (factor >= total.factors.size()) throw std::out_of_range("factor index out of range");
  std::set<std::size_t> values;
  for (auto p : psi) values.insert(total.tuples.at(p)[factor]);
  return {values.begin(), values.end()};
}

std::vector<std::vector<std::size_t>> range_orbits(const WideParameter& wide) {
  return orbits(wide.action, wide.action.group().all_elements());
}

GroupAction ReducedExperiment::restricted_action() const {
  std::vector<std::size_t> kept;
  for (std::size_t v = 0; v < value_map.size(); ++v)
    if (value_map[v]) kept.push_back(v);
  std::vector<std::size_t> position(value_map.size());
  for (std::size_t i = 0; i < kept.size(); ++i) position[kept[i]] = i;
  std::vector<std::string> points;
  for (auto v : kept) points.push_back(source.range()[v]);
  std::vector<Permutation> perms;
  for (const auto& full : source.action.perms()) {
    Permutation p;
    for (auto v : kept) p.push_back(position[full[v]]);
    perms.push_back(std::move(p));
  }
  return GroupAction(source.action.group(), std::move(points), std::move(perms));
}

std::vector<std::string> ReducedExperiment::restricted_labels() const {
  std::vector<std::string> out;
  for (const auto& m : value_map)
    if (m) out.push_back(labels[*m]);
  return out;
}

ReducedExperiment orbit_reduce(const WideParameter& wide,
                               std::span<const std::size_t> selected_orbits) {
  if (selected_orbits.empty()) throw NoOrbitSelected("no orbit selected");
  ReducedExperiment r{wide, range_orbits(wide), {}, {}, {}};
  for (auto o : selected_orbits) {
    if (o >= r.orbits.size())
      throw NoOrbitSelected("orbit " + std::to_string(o) + " does not exist (there are " +
                            std::to_string(r.orbits.size()) + ")");
    if (std::find(r.selected_orbits.begin(), r.selected_orbits.end(), o) == r.selected_orbits.end())
      r.selected_orbits.push_back(o);
  }
  r.value_map.assign(wide.range().size(), std::nullopt);
  for (std::size_t i = 0; i < r.selected_orbits.size(); ++i) {
    const auto& orbit = r.orbits[r.selected_orbits[i]];
    std::string label = "{";
    for (std::size_t k = 0; k < orbit.size(); ++k) {
      label += (k ? "," : "") + wide.range()[orbit[k]];
      r.value_map[orbit[k]] = i;
    }
    r.labels.push_back(label + "}");
  }
  return r;
}

ReducedModel reduce_model(const ExperimentModel& model, ExperimentIndex a,
                          std::span<const std::size_t> selected_orbits) {
  const auto& catalog = model.catalog();
  const auto& group = model.group();
  auto reduction = orbit_reduce(wide_parameter_from_experiment(model, a), selected_orbits);

  std::vector<PointIndex> kept;
  std::vector<std::optional<PointIndex>> position(model.num_points());
  for (PointIndex p = 0; p < model.num_points(); ++p)
    if (reduction.value_map[catalog.experiment(a).value_of(p)]) {
      position[p] = kept.size();
      kept.push_back(p);
    }

  ElementSet stabilizer;
  for (ElementIndex g = 0; g < group.size(); ++g)
    if (std::all_of(kept.begin(), kept.end(),
                    [&](PointIndex p) { return position[model.action().apply(p, g)].has_value(); }))
      stabilizer.push_back(g);
  auto in_stabilizer = [&](ElementIndex g) {
    return std::binary_search(stabilizer.begin(), stabilizer.end(), g);
  };
  auto local = [&](ElementIndex g) {
    return static_cast<ElementIndex>(std::lower_bound(stabilizer.begin(), stabilizer.end(), g) -
                                     stabilizer.begin());
  };

  std::vector<std::string> points;
  for (auto p : kept) points.push_back(model.action().points()[p]);
  std::vector<Permutation> perms;
  for (auto g : stabilizer) {
    Permutation perm;
    for (auto p : kept) perm.push_back(*position[model.action().apply(p, g)]);
    perms.push_back(std::move(perm));
  }
  GroupAction action(group.restrict_to(stabilizer), std::move(points), std::move(perms));

  // Restriction of experiment b to the kept points, or nullopt when fewer than two values remain.
  auto restrict = [&](ExperimentIndex b) -> std::optional<Experiment> {
    const auto& exp = catalog.experiment(b);
    std::vector<ValueIndex> values;
    if (b == a) {
      std::vector<ParameterValue> names;
      for (std::size_t i = 0; i < reduction.labels.size(); ++i)
        names.push_back({reduction.labels[i], static_cast<double>(i + 1)});
      for (auto p : kept) values.push_back(*reduction.value_map[exp.value_of(p)]);
      return Experiment(exp.label(), std::move(names), std::move(values));
    }
    std::map<ValueIndex, ValueIndex> renumber;
    for (auto p : kept) renumber.emplace(exp.value_of(p), 0);
    if (renumber.size() < 2) return std::nullopt;
    std::vector<ParameterValue> names;
    for (auto& [old, fresh] : renumber) {
      fresh = names.size();
      names.push_back(exp.value(old));
    }
    for (auto p : kept) values.push_back(renumber[exp.value_of(p)]);
    return Experiment(exp.label(), std::move(names), std::move(values));
  };

  const auto reduced_a = restrict(a);
  ExperimentIndex reference = a;
  const auto old_ref = catalog.reference();
  if (old_ref != a && restrict(old_ref) && in_stabilizer(catalog.connection(old_ref, a)))
    reference = old_ref;

  std::vector<ExperimentIndex> survivors;
  std::vector<Experiment> experiments;
  std::vector<std::string> dropped;
  for (ExperimentIndex b = 0; b < catalog.size(); ++b) {
    auto e = b == a ? reduced_a : restrict(b);
    if (e && in_stabilizer(catalog.connection(reference, b))) {
      survivors.push_back(b);
      experiments.push_back(std::move(*e));
    } else {
      dropped.push_back(catalog.experiment(b).label());
    }
  }
  auto new_index = [&](ExperimentIndex b) {
    return static_cast<ExperimentIndex>(std::find(survivors.begin(), survivors.end(), b) -
                                        survivors.begin());
  };

  std::vector<Connection> connections;
  for (auto b : survivors)
    if (b != reference)
      connections.push_back(
          {new_index(reference), new_index(b), local(catalog.connection(reference, b))});
  for (const auto& c : catalog.declared_connections()) {
    if (c.from == reference) continue;
    const bool kept_ends = std::find(survivors.begin(), survivors.end(), c.from) != survivors.end() &&
                           std::find(survivors.begin(), survivors.end(), c.to) != survivors.end();
    if (kept_ends && in_stabilizer(c.element))
      connections.push_back({new_index(c.from), new_index(c.to), local(c.element)});
  }

  const auto& reduced_group = action.group();
  ExperimentCatalog reduced_catalog(std::move(experiments), std::move(connections),
                                    new_index(reference), reduced_group);
  return ReducedModel{ExperimentModel(model.name() + "-reduced-" + catalog.experiment(a).label(),
                                      std::move(action), std::move(reduced_catalog)),
                      std::move(reduction), std::move(dropped)};
}

} // namespace epiq
