#include "doctest.h"

#include <deque>
#include <functional>

#include "epiq/errors.hpp"
#include "epiq/group.hpp"
#include "support.hpp"

using namespace epiq;

namespace {

FiniteGroup cyclic(std::size_t n) {
  std::vector<std::string> names;
  std::vector<std::vector<ElementIndex>> table(n, std::vector<ElementIndex>(n));
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back("c" + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) table[i][j] = (i + j) % n;
  }
  return FiniteGroup(names, table);
}

// Symmetric group on three points from a transposition and a 3-cycle.
GroupAction s3() {
  return GroupAction::from_generators({"x", "y", "z"}, {{"t", {1, 0, 2}}, {"c", {1, 2, 0}}});
}

// Smallest set containing the generators and closed under products, by iteration.
ElementSet naive_closure(const FiniteGroup& g, ElementSet gens) {
  std::set<ElementIndex> s(gens.begin(), gens.end());
  s.insert(g.identity());
  for (bool grew = true; grew;) {
    grew = false;
    for (auto a : std::vector<ElementIndex>(s.begin(), s.end()))
      for (auto b : std::vector<ElementIndex>(s.begin(), s.end()))
        grew |= s.insert(g.multiply(a, b)).second;
  }
  return {s.begin(), s.end()};
}

// Word length of every element by plain breadth-first search on the Cayley graph.
std::vector<int> bfs_distance(const FiniteGroup& g, const std::vector<ElementSet>& sets) {
  std::vector<int> dist(g.size(), -1);
  dist[g.identity()] = 0;
  std::deque<ElementIndex> queue{g.identity()};
  while (!queue.empty()) {
    auto x = queue.front();
    queue.pop_front();
    for (const auto& s : sets)
      for (auto y : s) {
        if (y == g.identity()) continue;
        auto z = g.multiply(x, y);
        if (dist[z] < 0) {
          dist[z] = dist[x] + 1;
          queue.push_back(z);
        }
      }
  }
  return dist;
}

} // namespace

TEST_CASE("cyclic group tables pass the axioms") {
  const auto g = cyclic(5);
  CHECK(g.size() == 5);
  CHECK(g.identity() == 0);
  for (ElementIndex i = 0; i < 5; ++i) CHECK(g.multiply(i, g.inverse(i)) == 0);
}

TEST_CASE("tables violating the axioms are rejected") {
  SUBCASE("not a Latin square") {
    CHECK_THROWS_AS(FiniteGroup({"a", "b"}, {{0, 1}, {0, 1}}), GroupError);
  }
  SUBCASE("duplicate names") {
    CHECK_THROWS_AS(FiniteGroup({"a", "a"}, {{0, 1}, {1, 0}}), GroupError);
  }
  SUBCASE("non-associative quasigroup") {
    // Latin square with identity 0 that is not associative.
    std::vector<std::vector<ElementIndex>> t{
        {0, 1, 2, 3, 4}, {1, 0, 3, 4, 2}, {2, 4, 0, 1, 3}, {3, 2, 4, 0, 1}, {4, 3, 1, 2, 0}};
    CHECK_THROWS_AS(FiniteGroup({"a", "b", "c", "d", "e"}, t), GroupError);
  }
}

TEST_CASE("closing two generators of S3 gives six elements obeying the right-action law") {
  const auto a = s3();
  REQUIRE(a.group().size() == 6);
  CHECK(a.is_faithful());
  const auto& g = a.group();
  for (ElementIndex x = 0; x < g.size(); ++x)
    for (ElementIndex y = 0; y < g.size(); ++y)
      for (PointIndex p = 0; p < 3; ++p)
        CHECK(a.apply(p, g.multiply(x, y)) == a.apply(a.apply(p, x), y));
}

TEST_CASE("generator closure rejects non-bijections and coinciding elements") {
  CHECK_THROWS_AS(GroupAction::from_generators({"x", "y"}, {{"bad", {0, 0}}}), ActionError);
  CHECK_THROWS_AS(GroupAction::from_generators({"x", "y"}, {{"s", {1, 0}}, {"t", {1, 0}}}),
                  ActionError);
}

TEST_CASE("an explicit action violating the action law is rejected") {
  // Z2 acting by a 3-cycle is not an action.
  CHECK_THROWS_AS(GroupAction(cyclic(2), {"x", "y", "z"}, {{0, 1, 2}, {1, 2, 0}}), ActionError);
}

TEST_CASE("closure agrees with naive iteration on every pair of spin3 elements") {
  const auto& g = testing::spin3().group();
  for (ElementIndex x = 0; x < g.size(); ++x)
    for (ElementIndex y = 0; y < g.size(); ++y) {
      ElementSet gens{x, y};
      auto c = g.closure(gens);
      CHECK(c == naive_closure(g, gens));
      CHECK(g.is_subgroup(c));
    }
}

TEST_CASE("orbits partition the points and match a union-find oracle") {
  const auto& m = testing::spin3();
  const auto& g = m.group();
  for (ElementIndex x = 0; x < g.size(); ++x) {
    const auto sub = g.closure(ElementSet{x});
    const auto blocks = orbits(m.action(), sub);
    std::vector<PointIndex> parent(m.num_points());
    std::iota(parent.begin(), parent.end(), PointIndex{0});
    std::function<PointIndex(PointIndex)> find = [&](PointIndex p) {
      return parent[p] == p ? p : parent[p] = find(parent[p]);
    };
    for (auto h : sub)
      for (PointIndex p = 0; p < m.num_points(); ++p)
        parent[find(p)] = find(m.action().apply(p, h));
    std::vector<std::size_t> covered(m.num_points(), 0);
    for (const auto& b : blocks)
      for (auto p : b) {
        ++covered[p];
        CHECK(find(p) == find(b.front()));
      }
    for (auto c : covered) CHECK(c == 1);
    std::set<PointIndex> roots;
    for (PointIndex p = 0; p < m.num_points(); ++p) roots.insert(find(p));
    CHECK(roots.size() == blocks.size());
  }
}

TEST_CASE("orbits reject non-subgroups and non-invariant domains") {
  const auto a = s3();
  const auto t = *a.group().find("t");
  CHECK_THROWS_AS(orbits(a, ElementSet{t}), NotASubgroup);
  const auto sub = a.group().closure(ElementSet{t});
  const std::vector<PointIndex> domain{0};
  CHECK_THROWS_AS(orbits(a, sub, domain), NotInvariant);
}

TEST_CASE("words are shortest, evaluate to their element and are deterministic") {
  const auto& m = testing::spin3();
  std::vector<ElementSet> sets;
  for (ExperimentIndex a = 0; a < m.catalog().size(); ++a)
    sets.push_back(testing::brute_force_induced(m, a));
  const WordTable table(m.group(), sets);
  const WordTable again(m.group(), sets);
  const auto dist = bfs_distance(m.group(), sets);
  for (ElementIndex g = 0; g < m.group().size(); ++g) {
    REQUIRE(table.reachable(g));
    CHECK(evaluate(m.group(), *table.word(g)) == g);
    CHECK(static_cast<int>(table.word(g)->size()) == dist[g]);
    CHECK(*table.word(g) == *again.word(g));
  }
}

TEST_CASE("word decomposition outside the generated subgroup throws") {
  const auto& m = testing::triangle6();
  std::vector<ElementSet> sets{testing::brute_force_induced(m, 0)};
  const auto r01 = *m.group().find("r01");
  CHECK_THROWS_AS(word_decompose(m.group(), r01, sets), NotInGeneratedSubgroup);
  const auto r04 = *m.group().find("r04");
  CHECK(evaluate(m.group(), word_decompose(m.group(), r04, sets)) == r04);
}

TEST_CASE("restriction keeps names and multiplication") {
  const auto& g = testing::triangle6().group();
  const auto sub = testing::brute_force_induced(testing::triangle6(), 0);
  const auto h = g.restrict_to(sub);
  REQUIRE(h.size() == sub.size());
  for (ElementIndex i = 0; i < h.size(); ++i) {
    CHECK(h.name(i) == g.name(sub[i]));
    for (ElementIndex j = 0; j < h.size(); ++j)
      CHECK(sub[h.multiply(i, j)] == g.multiply(sub[i], sub[j]));
  }
}
