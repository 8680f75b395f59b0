#pragma once

// Group arithmetic for the family G = 1 + L1 built on the graded algebra, and
// for small finite groups given by a Cayley table.

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nilprob/algebra.hpp"
#include "nilprob/error.hpp"

namespace nilprob::groups {

using algebra::AlgebraElement;
using algebra::ParamsPtr;

template <class E>
struct ConjugacyClass {
  E representative;
  std::uint64_t size;
};

/// Anything the statistics and structure code can run on.
template <class G>
concept FiniteGroup = requires(const G& g, const typename G::element_type& x,
                               std::mt19937_64& rng, std::uint64_t i) {
  { g.order() } -> std::convertible_to<std::uint64_t>;
  { g.identity() } -> std::convertible_to<typename G::element_type>;
  { g.mul(x, x) } -> std::convertible_to<typename G::element_type>;
  { g.inv(x) } -> std::convertible_to<typename G::element_type>;
  { g.commutator(x, x) } -> std::convertible_to<typename G::element_type>;
  { g.conj(x, x) } -> std::convertible_to<typename G::element_type>;
  { g.is_identity(x) } -> std::convertible_to<bool>;
  { g.sample(rng) } -> std::convertible_to<typename G::element_type>;
  { g.element(i) } -> std::convertible_to<typename G::element_type>;
  { g.class_size(x) } -> std::convertible_to<std::uint64_t>;
};

/// Left-normed [g1, ..., gk] = [[g1, ..., g(k-1)], gk]; k >= 2.
template <FiniteGroup G>
typename G::element_type long_commutator(const G& group,
                                         std::span<const typename G::element_type> elems) {
  if (elems.size() < 2) throw InvalidArgument("long_commutator needs at least two entries");
  auto acc = group.commutator(elems[0], elems[1]);
  for (std::size_t i = 2; i < elems.size(); ++i) acc = group.commutator(acc, elems[i]);
  return acc;
}

// ---------------------------------------------------------------------------
// The algebra family.

/// 1 + a for a in L1 = R1 + R2 + R3 + R4. Ordered and hashed by the flat digit
/// layout r1 | r2 (row-major) | r3 | c4, compared lexicographically.
class GroupElement {
 public:
  /// Requires a.c0() == 0.
  explicit GroupElement(AlgebraElement a);
  static GroupElement identity(ParamsPtr params);

  const AlgebraElement& l1_part() const noexcept { return a_; }
  const ParamsPtr& params() const noexcept { return a_.params(); }
  /// 1 + a as an algebra element.
  AlgebraElement as_algebra() const;
  bool is_identity() const noexcept { return a_.is_zero(); }

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  friend std::strong_ordering operator<=>(const GroupElement& x, const GroupElement& y);

 private:
  AlgebraElement a_;
};

GroupElement grp_mul(const GroupElement& g, const GroupElement& h);
/// (1 + a)^-1 = 1 - a + a^2 - a^3 + a^4.
GroupElement grp_inv(const GroupElement& g);
/// g^-1 h^-1 g h.
GroupElement commutator(const GroupElement& g, const GroupElement& h);

/// Text form of the L1 part: "r1 | r2-rows | r3 | c4" (the algebra format
/// without the c0 section). "identity" is also accepted by the parser.
std::string format_group_element(const GroupElement& g);
GroupElement parse_group_element(ParamsPtr params, std::string_view text);

inline constexpr std::size_t kDefaultOrbitCap = std::size_t{1} << 16;
inline constexpr std::uint64_t kDefaultClassEnumerationCap = std::uint64_t{1} << 16;

class AlgebraGroup {
 public:
  using element_type = GroupElement;

  explicit AlgebraGroup(ParamsPtr params, std::size_t orbit_cap = kDefaultOrbitCap);

  const ParamsPtr& params() const noexcept { return params_; }
  unsigned p() const noexcept { return params_->p(); }
  /// dim L1 = 2d + d^2 + 1; the order is p^dimension().
  std::size_t dimension() const noexcept { return params_->element_size() - 1; }
  bool order_fits() const noexcept;
  /// Throws CapExceeded if p^dimension() does not fit in 63 bits.
  std::uint64_t order() const;
  std::size_t orbit_cap() const noexcept { return orbit_cap_; }

  /// {1 + e : e in the graded basis of L1}, in flat digit order.
  std::span<const GroupElement> generators() const noexcept { return generators_; }

  GroupElement identity() const { return GroupElement::identity(params_); }
  GroupElement mul(const GroupElement& g, const GroupElement& h) const { return grp_mul(g, h); }
  GroupElement inv(const GroupElement& g) const { return grp_inv(g); }
  GroupElement commutator(const GroupElement& g, const GroupElement& h) const {
    return groups::commutator(g, h);
  }
  /// g^-1 x g.
  GroupElement conj(const GroupElement& x, const GroupElement& g) const;
  bool is_identity(const GroupElement& g) const noexcept { return g.is_identity(); }

  /// Uniform over G: every L1 digit independently uniform.
  GroupElement sample(std::mt19937_64& rng) const;
  /// Element with base-p index over the L1 digit layout (first digit least
  /// significant).
  GroupElement element(std::uint64_t index) const;
  std::uint64_t index_of(const GroupElement& g) const;

  /// Closure of {g} under conjugation by the generators, sorted. Throws
  /// OrbitOverflow past the orbit cap.
  std::vector<GroupElement> conjugacy_orbit(const GroupElement& g) const;
  std::uint64_t class_size(const GroupElement& g) const;
  std::uint64_t centralizer_order(const GroupElement& g) const;

  /// Full class partition; requires order() <= cap.
  std::vector<ConjugacyClass<GroupElement>> conjugacy_classes(
      std::uint64_t cap = kDefaultClassEnumerationCap) const;

 private:
  ParamsPtr params_;
  std::size_t orbit_cap_;
  std::vector<GroupElement> generators_;
  std::vector<GroupElement> generator_inverses_;
};

// ---------------------------------------------------------------------------
// Cayley-table groups.

class TableError : public Error {
 public:
  enum class Kind { parse, not_permutation, identity, associativity };

  TableError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

using Index = std::uint32_t;
using ElementSet = std::vector<Index>;  // sorted, duplicate free

class TableGroup {
 public:
  using element_type = Index;

  enum class Validation { checked, trusted };

  /// Row-major m x m multiplication table, element 0 the identity. Checked
  /// validation tests permutation rows/columns, the identity, and
  /// associativity (all triples for m <= 256, 10^6 random triples above).
  TableGroup(std::size_t m, std::vector<Index> table, Validation validation = Validation::checked);

  std::uint64_t order() const noexcept { return m_; }
  std::span<const Index> table() const noexcept { return table_; }

  Index identity() const noexcept { return 0; }
  Index mul(Index a, Index b) const noexcept { return table_[a * m_ + b]; }
  Index inv(Index a) const noexcept { return inverse_[a]; }
  Index commutator(Index a, Index b) const noexcept {
    return mul(mul(inverse_[a], inverse_[b]), mul(a, b));
  }
  Index conj(Index x, Index g) const noexcept { return mul(mul(inverse_[g], x), g); }
  bool is_identity(Index a) const noexcept { return a == 0; }
  Index sample(std::mt19937_64& rng) const;
  Index element(std::uint64_t i) const noexcept { return static_cast<Index>(i); }

  std::uint64_t class_size(Index a) const noexcept { return classes_[class_of_[a]].size(); }
  std::uint64_t centralizer_order(Index a) const noexcept { return m_ / class_size(a); }
  std::size_t class_of(Index a) const noexcept { return class_of_[a]; }
  /// Conjugacy classes as sorted element lists, ordered by smallest member.
  const std::vector<ElementSet>& classes() const noexcept { return classes_; }
  std::vector<ConjugacyClass<Index>> conjugacy_classes(std::uint64_t = 0) const;
  std::vector<Index> conjugacy_orbit(Index a) const { return classes_[class_of_[a]]; }
  bool is_abelian() const noexcept { return classes_.size() == m_; }

 private:
  void validate(Validation validation) const;
  void build_caches();

  std::size_t m_;
  std::vector<Index> table_;
  std::vector<Index> inverse_;
  std::vector<std::size_t> class_of_;
  std::vector<ElementSet> classes_;
};

/// Cayley table text: line 1 "m", then m lines of m indices in [0, m).
TableGroup parse_cayley_table(std::string_view text);
TableGroup load_cayley_table(const std::string& path);
std::string format_cayley_table(const TableGroup& g);

/// Subgroup generated by gens.
ElementSet generate_subgroup(const TableGroup& g, std::span<const Index> gens);
bool is_subgroup(const TableGroup& g, std::span<const Index> elems);
bool is_normal(const TableGroup& g, std::span<const Index> subgroup);
/// <[a, b] : a in A, b in B>.
ElementSet commutator_subgroup(const TableGroup& g, std::span<const Index> a, std::span<const Index> b);
ElementSet center(const TableGroup& g);

/// H as a standalone TableGroup; embedding[i] is the G-index of H-element i
/// (embedding[0] = identity, the rest in increasing G-index order).
struct SubgroupTable {
  TableGroup group;
  std::vector<Index> embedding;
};
SubgroupTable subgroup_table(const TableGroup& g, std::span<const Index> subgroup);

/// G/N for normal N; coset_of[x] is the quotient index of xN. Cosets are
/// numbered by their smallest member.
struct QuotientTable {
  TableGroup group;
  std::vector<Index> coset_of;
};
QuotientTable quotient_table(const TableGroup& g, std::span<const Index> normal_subgroup);

/// Cayley table of an algebra-family group, indexed by AlgebraGroup::index_of.
TableGroup to_table_group(const AlgebraGroup& g, std::uint64_t cap = std::uint64_t{1} << 12);

}  // namespace nilprob::groups

template <>
struct std::hash<nilprob::groups::GroupElement> {
  std::size_t operator()(const nilprob::groups::GroupElement& g) const noexcept {
    return std::hash<nilprob::algebra::AlgebraElement>{}(g.l1_part());
  }
};
