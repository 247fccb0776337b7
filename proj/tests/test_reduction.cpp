#include "doctest.h"

#include "epiq/errors.hpp"
#include "epiq/reduction.hpp"
#include "support.hpp"

using namespace epiq;

namespace {

FiniteGroup trivial_group() { return FiniteGroup({"e"}, {{0}}); }

WideParameter trivial_binary(const std::string& label) {
  return {label, GroupAction(trivial_group(), {"0", "1"}, {{0, 1}}), {0}};
}

// Signed magnitudes -2, -1, +1, +2 with the sign-preserving magnitude swap.
GroupAction magnitude_action() {
  return GroupAction::from_generators({"-2", "-1", "+1", "+2"}, {{"m", {1, 0, 3, 2}}});
}

WideParameter magnitude_parameter() {
  auto action = magnitude_action();
  auto elements = action.group().all_elements();
  return {"magnitude", std::move(action), std::move(elements)};
}

ExperimentModel magnitude_model() {
  auto action = magnitude_action();
  const auto& g = action.group();
  Experiment e("magnitude", {{"-2", -2}, {"-1", -1}, {"+1", 1}, {"+2", 2}}, {0, 1, 2, 3});
  ExperimentCatalog catalog({e}, {}, 0, g);
  return ExperimentModel("magnitude", std::move(action), std::move(catalog));
}

// Pairwise naturality check written out independently.
bool natural_oracle(const std::vector<std::string>& f, const GroupAction& a) {
  for (PointIndex p = 0; p < a.num_points(); ++p)
    for (PointIndex q = 0; q < a.num_points(); ++q)
      for (ElementIndex g = 0; g < a.group().size(); ++g)
        if (f[p] == f[q] && f[a.apply(p, g)] != f[a.apply(q, g)]) return false;
  return true;
}

std::size_t local_index(const WideParameter& w, ElementIndex shared) {
  return static_cast<std::size_t>(std::find(w.elements.begin(), w.elements.end(), shared) -
                                  w.elements.begin());
}

} // namespace

TEST_CASE("constant and injective labelings are natural") {
  const auto& a = testing::spin3().action();
  const std::vector<std::string> constant(a.num_points(), "x");
  CHECK(natural_function_check(constant, a).natural);
  CHECK(natural_function_check(a.points(), a).natural);
}

TEST_CASE("first coordinate under the coordinate swap is not natural") {
  const FiniteGroup z2({"e", "s"}, {{0, 1}, {1, 0}});
  const GroupAction swap(z2, {"00", "01", "10", "11"}, {{0, 1, 2, 3}, {0, 2, 1, 3}});
  const std::vector<std::string> first{"0", "0", "1", "1"};
  const auto r = natural_function_check(first, swap);
  REQUIRE_FALSE(r.natural);
  REQUIRE(r.witness.has_value());
  const auto [p, q, g] = *r.witness;
  CHECK(first[p] == first[q]);
  CHECK(first[swap.apply(p, g)] != first[swap.apply(q, g)]);
}

TEST_CASE("naturality agrees with the pairwise oracle on experiment value maps") {
  for (const auto* m : {&testing::spin3(), &testing::triangle6()})
    for (ExperimentIndex a = 0; a < m->catalog().size(); ++a) {
      std::vector<std::string> f;
      for (PointIndex p = 0; p < m->num_points(); ++p)
        f.push_back(std::to_string(m->catalog().experiment(a).value_of(p)));
      CHECK(natural_function_check(f, m->action()).natural == natural_oracle(f, m->action()));
      const auto sub = m->action().restrict_to(testing::brute_force_induced(*m, a));
      CHECK(natural_function_check(f, sub).natural);
    }
}

TEST_CASE("a single factor is its own cartesian total") {
  const auto& m = testing::spin3();
  const auto w = wide_parameter_from_experiment(m, 0);
  const auto total = cartesian_total({w}, m.group());
  REQUIRE(total.tuples.size() == w.range().size());
  CHECK(total.shared_elements == w.elements);
  for (ElementIndex g = 0; g < total.action.group().size(); ++g)
    for (PointIndex p = 0; p < total.tuples.size(); ++p)
      CHECK(total.tuples[total.action.apply(p, g)][0] ==
            w.action.apply(total.tuples[p][0], local_index(w, total.shared_elements[g])));
}

TEST_CASE("two binary factors under the trivial action give four singleton orbits") {
  const auto total = cartesian_total({trivial_binary("a"), trivial_binary("b")}, trivial_group());
  CHECK(total.tuples.size() == 4);
  CHECK(total.action.points() == std::vector<std::string>{"(0,0)", "(0,1)", "(1,0)", "(1,1)"});
  CHECK(orbits(total.action, total.action.group().all_elements()).size() == 4);
  const std::vector<std::size_t> t{1, 0};
  CHECK(total.index_of(t) == 2);
}

TEST_CASE("spin3 realized sign triples are six of eight and match brute force") {
  const auto& m = testing::spin3();
  const std::vector<ExperimentIndex> all{0, 1, 2};
  std::set<std::vector<ValueIndex>> brute;
  for (PointIndex p = 0; p < m.num_points(); ++p) {
    std::vector<ValueIndex> t;
    for (auto a : all) t.push_back(m.catalog().experiment(a).value_of(p));
    brute.insert(t);
  }
  const auto realized = realized_tuples(m, all);
  CHECK(realized == std::vector<std::vector<ValueIndex>>(brute.begin(), brute.end()));
  CHECK(realized.size() == 6);

  std::vector<WideParameter> factors;
  for (auto a : all) factors.push_back(wide_parameter_from_experiment(m, a));
  const auto total = cartesian_total(factors, m.group());
  CHECK(total.tuples.size() == 8);
  std::vector<PointIndex> psi;
  for (const auto& t : realized) psi.push_back(total.index_of(std::vector<std::size_t>(t.begin(), t.end())));
  for (std::size_t f = 0; f < 3; ++f) {
    CHECK(admissible_values(total, psi, f) == std::vector<std::size_t>{0, 1});
    std::vector<PointIndex> everything(total.tuples.size());
    std::iota(everything.begin(), everything.end(), PointIndex{0});
    CHECK(admissible_values(total, everything, f).size() == factors[f].range().size());
    const std::vector<PointIndex> one{psi[2]};
    CHECK(admissible_values(total, one, f) ==
          std::vector<std::size_t>{total.tuples[psi[2]][f]});
  }
  CHECK_THROWS_AS(admissible_values(total, std::span<const PointIndex>{}, 0), EmptyRestriction);
}

TEST_CASE("projection of the cartesian total recovers every factor action") {
  const auto& m = testing::spin3();
  std::vector<WideParameter> factors;
  for (ExperimentIndex a = 0; a < 3; ++a) factors.push_back(wide_parameter_from_experiment(m, a));
  const auto total = cartesian_total(factors, m.group());
  for (ElementIndex g = 0; g < total.action.group().size(); ++g) {
    const auto shared = total.shared_elements[g];
    for (PointIndex p = 0; p < total.tuples.size(); ++p)
      for (std::size_t f = 0; f < 3; ++f)
        CHECK(total.tuples[total.action.apply(p, g)][f] ==
              factors[f].action.apply(total.tuples[p][f], local_index(factors[f], shared)));
  }
}

TEST_CASE("factors whose multiplication disagrees with the shared group are rejected") {
  const FiniteGroup z2({"e", "s"}, {{0, 1}, {1, 0}});
  WideParameter w{"w", GroupAction(z2, {"0", "1"}, {{0, 1}, {1, 0}}), {0, 1}};
  const auto& z3 = testing::spin3().group();
  CHECK_THROWS_AS(cartesian_total({w}, FiniteGroup({"a", "b", "c"}, {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}})),
                  ActionMismatch);
  w.elements = {0, static_cast<ElementIndex>(z3.size())};
  CHECK_THROWS_AS(cartesian_total({w}, z3), ActionMismatch);
}

TEST_CASE("orbit partitions of value actions are exact") {
  for (const auto* m : {&testing::spin3(), &testing::triangle6()})
    for (ExperimentIndex a = 0; a < m->catalog().size(); ++a) {
      const auto w = wide_parameter_from_experiment(*m, a);
      const auto blocks = range_orbits(w);
      std::vector<int> seen(w.range().size(), 0);
      for (const auto& b : blocks)
        for (auto v : b) {
          ++seen[v];
          for (ElementIndex g = 0; g < w.action.group().size(); ++g)
            CHECK(std::find(b.begin(), b.end(), w.action.apply(v, g)) != b.end());
        }
      for (int s : seen) CHECK(s == 1);
    }
}

TEST_CASE("orbit reduction of a transitive action is single-valued") {
  const auto w = wide_parameter_from_experiment(testing::spin3(), 0);
  REQUIRE(range_orbits(w).size() == 1);
  const std::vector<std::size_t> all{0};
  const auto r = orbit_reduce(w, all);
  CHECK(r.labels.size() == 1);
  CHECK(natural_function_check(r.restricted_labels(), r.restricted_action()).natural);
}

TEST_CASE("orbit reduction under the trivial action is a sublabeling") {
  const auto w = trivial_binary("t");
  const std::vector<std::size_t> both{0, 1};
  const auto r = orbit_reduce(w, both);
  CHECK(r.labels == std::vector<std::string>{"{0}", "{1}"});
  CHECK(r.value_map == std::vector<std::optional<std::size_t>>{0, 1});
  CHECK(natural_function_check(r.restricted_labels(), r.restricted_action()).natural);
}

TEST_CASE("signed magnitudes reduce to their sign") {
  const auto w = magnitude_parameter();
  const auto blocks = range_orbits(w);
  CHECK(blocks == std::vector<std::vector<std::size_t>>{{0, 1}, {2, 3}});
  const std::vector<std::size_t> both{0, 1};
  const auto r = orbit_reduce(w, both);
  CHECK(r.labels == std::vector<std::string>{"{-2,-1}", "{+1,+2}"});
  CHECK(r.value_map == std::vector<std::optional<std::size_t>>{0, 0, 1, 1});
  CHECK(natural_function_check(r.restricted_labels(), r.restricted_action()).natural);

  const std::vector<std::size_t> positives{1};
  const auto half = orbit_reduce(w, positives);
  CHECK_FALSE(half.value_map[0].has_value());
  CHECK(half.restricted_action().points() == std::vector<std::string>{"+1", "+2"});
  CHECK(natural_function_check(half.restricted_labels(), half.restricted_action()).natural);
}

TEST_CASE("orbit reduction needs a valid nonempty selection") {
  const auto w = magnitude_parameter();
  CHECK_THROWS_AS(orbit_reduce(w, std::span<const std::size_t>{}), NoOrbitSelected);
  const std::vector<std::size_t> unknown{5};
  CHECK_THROWS_AS(orbit_reduce(w, unknown), NoOrbitSelected);
}

TEST_CASE("reducing a model relabels the experiment by orbit") {
  const auto m = magnitude_model();
  const std::vector<std::size_t> both{0, 1};
  const auto r = reduce_model(m, 0, both);
  const auto& e = r.model.catalog().experiment(0);
  CHECK(e.num_values() == 2);
  CHECK(e.value(0).name == "{-2,-1}");
  CHECK(e.value_map() == std::vector<ValueIndex>{0, 0, 1, 1});
  CHECK(r.model.num_points() == 4);
  CHECK(r.dropped_experiments.empty());

  const std::vector<std::size_t> one{1};
  CHECK_THROWS_AS(reduce_model(m, 0, one), InvalidExperiment);
  const std::vector<std::size_t> spin_all{0};
  CHECK_THROWS_AS(reduce_model(testing::spin3(), 0, spin_all), InvalidExperiment);
}
