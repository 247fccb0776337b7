#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace epiq {

using ElementIndex = std::size_t;
using PointIndex = std::size_t;

/// Sorted list of element indices.
using ElementSet = std::vector<ElementIndex>;

/// perm[i] is the index of point_i * g (groups act on the right).
using Permutation = std::vector<PointIndex>;

/**
 * Finite group given by its Cayley table.
 *
 * Entry (i, j) of the table is the index of element_i * element_j. The
 * constructor checks the group axioms exhaustively (Latin square,
 * associativity, identity, inverses) and throws GroupError otherwise.
 */
class FiniteGroup {
public:
  FiniteGroup(std::vector<std::string> names,
              std::vector<std::vector<ElementIndex>> cayley);

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(ElementIndex g) const { return names_.at(g); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<ElementIndex> find(std::string_view name) const;

  ElementIndex multiply(ElementIndex a, ElementIndex b) const { return cayley_[a][b]; }
  ElementIndex inverse(ElementIndex g) const { return inverses_[g]; }
  ElementIndex identity() const noexcept { return identity_; }
  const std::vector<std::vector<ElementIndex>>& cayley() const noexcept { return cayley_; }
  const std::vector<ElementIndex>& inverses() const noexcept { return inverses_; }

  ElementSet all_elements() const;

  /// True when the set contains the identity and is closed under products and inverses.
  bool is_subgroup(std::span<const ElementIndex> elements) const;

  /// Smallest subgroup containing the given elements.
  ElementSet closure(std::span<const ElementIndex> generators) const;

  /// The subgroup as a group in its own right; names are kept, indices are renumbered
  /// in increasing order of the original indices.
  FiniteGroup restrict_to(std::span<const ElementIndex> subgroup) const;

  bool operator==(const FiniteGroup&) const = default;

private:
  std::vector<std::string> names_;
  std::vector<std::vector<ElementIndex>> cayley_;
  std::vector<ElementIndex> inverses_;
  ElementIndex identity_ = 0;
};

/// Right action of a finite group on a finite point set. Counting measure on the
/// points is invariant under any such action.
class GroupAction {
public:
  /// Checks bijectivity of every permutation, that the identity acts trivially,
  /// and the right-action law perm(g*h) = perm(h) after perm(g). Throws ActionError.
  GroupAction(FiniteGroup group, std::vector<std::string> points,
              std::vector<Permutation> perms);

  /// Closes the given permutations into the permutation group they generate.
  /// Products g*h mean "g first, then h". New elements are named by the
  /// shortest generator word joining names with '*'. Throws ActionError when a
  /// permutation is not a bijection or two named elements coincide.
  static GroupAction from_generators(
      std::vector<std::string> points,
      const std::vector<std::pair<std::string, Permutation>>& generators);

  const FiniteGroup& group() const noexcept { return group_; }
  const std::vector<std::string>& points() const noexcept { return points_; }
  std::size_t num_points() const noexcept { return points_.size(); }
  std::optional<PointIndex> find_point(std::string_view id) const;

  PointIndex apply(PointIndex point, ElementIndex g) const { return perms_[g][point]; }
  const Permutation& perm(ElementIndex g) const { return perms_.at(g); }
  const std::vector<Permutation>& perms() const noexcept { return perms_; }

  bool is_faithful() const;

  /// Restriction to a subgroup (renumbered as in FiniteGroup::restrict_to).
  GroupAction restrict_to(std::span<const ElementIndex> subgroup) const;

  bool operator==(const GroupAction&) const = default;

private:
  FiniteGroup group_;
  std::vector<std::string> points_;
  std::vector<Permutation> perms_;
};

/// Orbit partition of an invariant point set under a subgroup. Blocks are sorted
/// by their smallest point; points inside a block ascend.
/// Throws NotASubgroup if the set is not closed, NotInvariant if the domain is not.
std::vector<std::vector<PointIndex>> orbits(const GroupAction& action,
                                            std::span<const ElementIndex> subgroup,
                                            std::span<const PointIndex> domain);

std::vector<std::vector<PointIndex>> orbits(const GroupAction& action,
                                            std::span<const ElementIndex> subgroup);

struct Letter {
  std::size_t set_id;
  ElementIndex element;
  bool operator==(const Letter&) const = default;
};
using Word = std::vector<Letter>;

/// Shortest words over the union of the generating sets for every element of
/// the group they generate. Breadth-first; ties broken lexicographically by
/// (set id, element index), so the result is unique.
class WordTable {
public:
  WordTable(const FiniteGroup& group, std::span<const ElementSet> generating_sets);

  const std::optional<Word>& word(ElementIndex g) const { return words_.at(g); }
  bool reachable(ElementIndex g) const { return words_.at(g).has_value(); }
  /// Elements with a word, ascending.
  ElementSet domain() const;

private:
  std::vector<std::optional<Word>> words_;
};

/// Throws NotASubgroup if a generating set is not a subgroup and
/// NotInGeneratedSubgroup when g is outside the generated subgroup.
Word word_decompose(const FiniteGroup& group, ElementIndex g,
                    std::span<const ElementSet> generating_sets);

ElementIndex evaluate(const FiniteGroup& group, const Word& word);

} // namespace epiq
