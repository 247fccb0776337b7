#include "epiq/group.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

#include "epiq/errors.hpp"

namespace epiq {

namespace {

bool is_permutation_of_range(const std::vector<std::size_t>& row, std::size_t n) {
  if (row.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (auto v : row) {
    if (v >= n || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

// Composition "p first, then q" for right actions.
Permutation then(const Permutation& p, const Permutation& q) {
  Permutation r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[i] = q[p[i]];
  return r;
}

} // namespace

FiniteGroup::FiniteGroup(std::vector<std::string> names,
                         std::vector<std::vector<ElementIndex>> cayley)
    : names_(std::move(names)), cayley_(std::move(cayley)) {
  const std::size_t n = names_.size();
  if (n == 0) throw GroupError("group has no elements");
  if (cayley_.size() != n) throw GroupError("Cayley table has wrong number of rows");
  {
    auto sorted = names_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw GroupError("duplicate element name");
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!is_permutation_of_range(cayley_[i], n))
      throw GroupError("Cayley row of '" + names_[i] + "' is not a permutation");
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::size_t> column(n);
    for (std::size_t i = 0; i < n; ++i) column[i] = cayley_[i][j];
    if (!is_permutation_of_range(column, n))
      throw GroupError("Cayley column of '" + names_[j] + "' is not a permutation");
  }

  std::optional<ElementIndex> identity;
  for (std::size_t e = 0; e < n && !identity; ++e) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) ok = cayley_[e][i] == i && cayley_[i][e] == i;
    if (ok) identity = e;
  }
  if (!identity) throw GroupError("Cayley table has no identity");
  identity_ = *identity;

  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (cayley_[cayley_[a][b]][c] != cayley_[a][cayley_[b][c]])
          throw GroupError("associativity fails for (" + names_[a] + ", " + names_[b] +
                           ", " + names_[c] + ")");

  inverses_.assign(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (cayley_[a][b] == identity_) inverses_[a] = b;
  for (std::size_t a = 0; a < n; ++a)
    if (inverses_[a] == n || cayley_[inverses_[a]][a] != identity_)
      throw GroupError("element '" + names_[a] + "' has no two-sided inverse");
}

std::optional<ElementIndex> FiniteGroup::find(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<ElementIndex>(it - names_.begin());
}

ElementSet FiniteGroup::all_elements() const {
  ElementSet all(size());
  std::iota(all.begin(), all.end(), ElementIndex{0});
  return all;
}

bool FiniteGroup::is_subgroup(std::span<const ElementIndex> elements) const {
  std::vector<bool> member(size(), false);
  for (auto g : elements) {
    if (g >= size()) return false;
    member[g] = true;
  }
  if (!member[identity_]) return false;
  for (auto a : elements) {
    if (!member[inverses_[a]]) return false;
    for (auto b : elements)
      if (!member[cayley_[a][b]]) return false;
  }
  return true;
}

ElementSet FiniteGroup::closure(std::span<const ElementIndex> generators) const {
  std::vector<bool> member(size(), false);
  std::deque<ElementIndex> queue{identity_};
  member[identity_] = true;
  while (!queue.empty()) {
    auto g = queue.front();
    queue.pop_front();
    for (auto s : generators) {
      auto h = cayley_[g][s];
      if (!member[h]) {
        member[h] = true;
        queue.push_back(h);
      }
    }
  }
  ElementSet out;
  for (std::size_t g = 0; g < size(); ++g)
    if (member[g]) out.push_back(g);
  return out;
}

FiniteGroup FiniteGroup::restrict_to(std::span<const ElementIndex> subgroup) const {
  if (!is_subgroup(subgroup)) throw NotASubgroup("restriction target is not a subgroup");
  ElementSet sorted(subgroup.begin(), subgroup.end());
  std::sort(sorted.begin(), sorted.end());
  std::map<ElementIndex, std::size_t> renumber;
  for (std::size_t i = 0; i < sorted.size(); ++i) renumber[sorted[i]] = i;
  std::vector<std::string> names;
  std::vector<std::vector<ElementIndex>> table(sorted.size(),
                                               std::vector<ElementIndex>(sorted.size()));
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    names.push_back(names_[sorted[i]]);
    for (std::size_t j = 0; j < sorted.size(); ++j)
      table[i][j] = renumber.at(cayley_[sorted[i]][sorted[j]]);
  }
  return FiniteGroup(std::move(names), std::move(table));
}

GroupAction::GroupAction(FiniteGroup group, std::vector<std::string> points,
                         std::vector<Permutation> perms)
    : group_(std::move(group)), points_(std::move(points)), perms_(std::move(perms)) {
  const std::size_t n = points_.size();
  if (n == 0) throw ActionError("point set is empty");
  if (perms_.size() != group_.size())
    throw ActionError("need exactly one permutation per group element");
  for (std::size_t g = 0; g < perms_.size(); ++g)
    if (!is_permutation_of_range(perms_[g], n))
      throw ActionError("action of '" + group_.name(g) + "' is not a bijection of the points");
  for (std::size_t i = 0; i < n; ++i)
    if (perms_[group_.identity()][i] != i)
      throw ActionError("identity element does not act trivially");
  for (std::size_t g = 0; g < group_.size(); ++g)
    for (std::size_t h = 0; h < group_.size(); ++h)
      if (perms_[group_.multiply(g, h)] != then(perms_[g], perms_[h]))
        throw ActionError("right-action law fails for (" + group_.name(g) + ", " +
                          group_.name(h) + ")");
}

GroupAction GroupAction::from_generators(
    std::vector<std::string> points,
    const std::vector<std::pair<std::string, Permutation>>& generators) {
  const std::size_t n = points.size();
  std::map<Permutation, std::size_t> index;
  std::vector<Permutation> perms;
  std::vector<std::string> names;

  Permutation id(n);
  std::iota(id.begin(), id.end(), PointIndex{0});

  for (const auto& [name, perm] : generators) {
    if (!is_permutation_of_range(perm, n))
      throw ActionError("action of '" + name + "' is not a bijection of the points");
    if (auto it = index.find(perm); it != index.end())
      throw ActionError("elements '" + names[it->second] + "' and '" + name +
                        "' act identically (unfaithful action)");
    index.emplace(perm, perms.size());
    perms.push_back(perm);
    names.push_back(name);
  }
  if (!index.contains(id)) {
    index.emplace(id, perms.size());
    perms.push_back(id);
    names.push_back("e");
  }

  // Breadth-first closure: right-multiply every known element by each generator.
  for (std::size_t i = 0; i < perms.size(); ++i) {
    for (const auto& [gname, gperm] : generators) {
      auto product = then(perms[i], gperm);
      if (index.contains(product)) continue;
      std::string name = (perms[i] == id ? std::string{} : names[i] + "*") + gname;
      while (std::find(names.begin(), names.end(), name) != names.end()) name += "'";
      index.emplace(product, perms.size());
      perms.push_back(std::move(product));
      names.push_back(std::move(name));
    }
  }

  const std::size_t m = perms.size();
  std::vector<std::vector<ElementIndex>> table(m, std::vector<ElementIndex>(m));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) table[a][b] = index.at(then(perms[a], perms[b]));

  return GroupAction(FiniteGroup(std::move(names), std::move(table)), std::move(points),
                     std::move(perms));
}

std::optional<PointIndex> GroupAction::find_point(std::string_view id) const {
  auto it = std::find(points_.begin(), points_.end(), id);
  if (it == points_.end()) return std::nullopt;
  return static_cast<PointIndex>(it - points_.begin());
}

bool GroupAction::is_faithful() const {
  auto sorted = perms_;
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

GroupAction GroupAction::restrict_to(std::span<const ElementIndex> subgroup) const {
  ElementSet sorted(subgroup.begin(), subgroup.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<Permutation> perms;
  for (auto g : sorted) perms.push_back(perms_.at(g));
  return GroupAction(group_.restrict_to(sorted), points_, std::move(perms));
}

std::vector<std::vector<PointIndex>> orbits(const GroupAction& action,
                                            std::span<const ElementIndex> subgroup,
                                            std::span<const PointIndex> domain) {
  if (!action.group().is_subgroup(subgroup))
    throw NotASubgroup("orbit computation needs a subgroup");
  std::vector<int> in_domain(action.num_points(), 0);
  for (auto p : domain) {
    if (p >= action.num_points()) throw NotInvariant("domain point out of range");
    in_domain[p] = 1;
  }
  std::vector<bool> assigned(action.num_points(), false);
  std::vector<std::vector<PointIndex>> blocks;
  std::vector<PointIndex> sorted_domain(domain.begin(), domain.end());
  std::sort(sorted_domain.begin(), sorted_domain.end());
  for (auto p : sorted_domain) {
    if (assigned[p]) continue;
    std::vector<PointIndex> block;
    for (auto g : subgroup) {
      auto q = action.apply(p, g);
      if (!in_domain[q])
        throw NotInvariant("domain is not invariant: " + action.points()[p] + " maps to " +
                           action.points()[q]);
      if (!assigned[q]) {
        assigned[q] = true;
        block.push_back(q);
      }
    }
    std::sort(block.begin(), block.end());
    blocks.push_back(std::move(block));
  }
  return blocks;
}

std::vector<std::vector<PointIndex>> orbits(const GroupAction& action,
                                            std::span<const ElementIndex> subgroup) {
  std::vector<PointIndex> all(action.num_points());
  std::iota(all.begin(), all.end(), PointIndex{0});
  return orbits(action, subgroup, all);
}

WordTable::WordTable(const FiniteGroup& group, std::span<const ElementSet> generating_sets)
    : words_(group.size()) {
  for (std::size_t s = 0; s < generating_sets.size(); ++s)
    if (!group.is_subgroup(generating_sets[s]))
      throw NotASubgroup("generating set " + std::to_string(s) + " is not a subgroup");

  std::vector<Letter> letters;
  for (std::size_t s = 0; s < generating_sets.size(); ++s) {
    ElementSet sorted = generating_sets[s];
    std::sort(sorted.begin(), sorted.end());
    for (auto g : sorted)
      if (g != group.identity()) letters.push_back({s, g});
  }

  // Nodes are dequeued in lexicographic order of their words within each depth,
  // so the first discovery of an element is its lexicographically least shortest word.
  words_[group.identity()] = Word{};
  std::deque<ElementIndex> queue{group.identity()};
  while (!queue.empty()) {
    auto g = queue.front();
    queue.pop_front();
    for (const auto& letter : letters) {
      auto h = group.multiply(g, letter.element);
      if (words_[h]) continue;
      Word w = *words_[g];
      w.push_back(letter);
      words_[h] = std::move(w);
      queue.push_back(h);
    }
  }
}

ElementSet WordTable::domain() const {
  ElementSet out;
  for (std::size_t g = 0; g < words_.size(); ++g)
    if (words_[g]) out.push_back(g);
  return out;
}

Word word_decompose(const FiniteGroup& group, ElementIndex g,
                    std::span<const ElementSet> generating_sets) {
  WordTable table(group, generating_sets);
  if (g >= group.size() || !table.reachable(g))
    throw NotInGeneratedSubgroup("element '" + (g < group.size() ? group.name(g) : "?") +
                                 "' is not in the subgroup generated by the given sets");
  return *table.word(g);
}

ElementIndex evaluate(const FiniteGroup& group, const Word& word) {
  ElementIndex g = group.identity();
  for (const auto& letter : word) g = group.multiply(g, letter.element);
  return g;
}

} // namespace epiq
