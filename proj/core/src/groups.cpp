#include "nilprob/groups.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace nilprob::groups {

GroupElement::GroupElement(AlgebraElement a) : a_(std::move(a)) {
  if (a_.c0() != 0) throw InvalidArgument("group element 1 + a needs a in L1 (c0 = 0)");
}

GroupElement GroupElement::identity(ParamsPtr params) {
  return GroupElement(AlgebraElement(std::move(params)));
}

AlgebraElement GroupElement::as_algebra() const {
  return AlgebraElement::one(a_.params()) + a_;
}

std::strong_ordering operator<=>(const GroupElement& x, const GroupElement& y) {
  const auto dx = x.a_.digits();
  const auto dy = y.a_.digits();
  return std::lexicographical_compare_three_way(dx.begin(), dx.end(), dy.begin(), dy.end());
}

GroupElement grp_mul(const GroupElement& g, const GroupElement& h) {
  const auto& a = g.l1_part();
  const auto& b = h.l1_part();
  auto sum = algebra::alg_mul(a, b);
  sum += a;
  sum += b;
  return GroupElement(std::move(sum));
}

GroupElement grp_inv(const GroupElement& g) {
  const auto& a = g.l1_part();
  const auto a2 = algebra::alg_mul(a, a);
  const auto a3 = algebra::alg_mul(a2, a);
  const auto a4 = algebra::alg_mul(a3, a);
  auto out = -a;
  out += a2;
  out -= a3;
  out += a4;
  return GroupElement(std::move(out));
}

GroupElement commutator(const GroupElement& g, const GroupElement& h) {
  return grp_mul(grp_mul(grp_inv(g), grp_inv(h)), grp_mul(g, h));
}

std::string format_group_element(const GroupElement& g) {
  const auto full = algebra::format_element(g.l1_part());
  // Drop the leading "c0 | ".
  return full.substr(full.find('|') + 2);
}

GroupElement parse_group_element(ParamsPtr params, std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  const auto last = text.find_last_not_of(" \t\r\n");
  if (first != std::string_view::npos && text.substr(first, last - first + 1) == "identity") {
    return GroupElement::identity(std::move(params));
  }
  return GroupElement(algebra::parse_element(std::move(params), "0 | " + std::string(text)));
}

// ---------------------------------------------------------------------------

AlgebraGroup::AlgebraGroup(ParamsPtr params, std::size_t orbit_cap)
    : params_(std::move(params)), orbit_cap_(orbit_cap) {
  for (std::size_t k = 1; k < params_->element_size(); ++k) {
    generators_.emplace_back(AlgebraElement::basis(params_, k));
    generator_inverses_.push_back(grp_inv(generators_.back()));
  }
}

bool AlgebraGroup::order_fits() const noexcept {
  long double order = 1;
  for (std::size_t i = 0; i < dimension(); ++i) order *= p();
  return order < 9.2e18L;
}

std::uint64_t AlgebraGroup::order() const {
  if (!order_fits()) {
    throw CapExceeded("AlgebraGroup order p^" + std::to_string(dimension()), UINT64_MAX, INT64_MAX);
  }
  std::uint64_t order = 1;
  for (std::size_t i = 0; i < dimension(); ++i) order *= p();
  return order;
}

GroupElement AlgebraGroup::conj(const GroupElement& x, const GroupElement& g) const {
  return grp_mul(grp_mul(grp_inv(g), x), g);
}

GroupElement AlgebraGroup::sample(std::mt19937_64& rng) const {
  std::uniform_int_distribution<unsigned> digit(0, p() - 1);
  AlgebraElement a(params_);
  auto digits = a.mutable_digits();
  for (std::size_t k = 1; k < digits.size(); ++k) digits[k] = static_cast<fieldlin::Digit>(digit(rng));
  return GroupElement(std::move(a));
}

GroupElement AlgebraGroup::element(std::uint64_t index) const {
  AlgebraElement a(params_);
  auto digits = a.mutable_digits();
  for (std::size_t k = 1; k < digits.size(); ++k) {
    digits[k] = static_cast<fieldlin::Digit>(index % p());
    index /= p();
  }
  return GroupElement(std::move(a));
}

std::uint64_t AlgebraGroup::index_of(const GroupElement& g) const {
  const auto digits = g.l1_part().digits();
  std::uint64_t index = 0;
  for (std::size_t k = digits.size() - 1; k >= 1; --k) index = index * p() + digits[k];
  return index;
}

std::vector<GroupElement> AlgebraGroup::conjugacy_orbit(const GroupElement& g) const {
  std::unordered_set<GroupElement> seen{g};
  std::deque<GroupElement> queue{g};
  while (!queue.empty()) {
    const auto x = std::move(queue.front());
    queue.pop_front();
    for (std::size_t s = 0; s < generators_.size(); ++s) {
      auto y = grp_mul(grp_mul(generator_inverses_[s], x), generators_[s]);
      if (seen.insert(y).second) {
        if (seen.size() > orbit_cap_) {
          throw OrbitOverflow("conjugacy orbit size", seen.size(), orbit_cap_);
        }
        queue.push_back(std::move(y));
      }
    }
  }
  std::vector<GroupElement> orbit(seen.begin(), seen.end());
  std::sort(orbit.begin(), orbit.end());
  return orbit;
}

std::uint64_t AlgebraGroup::class_size(const GroupElement& g) const {
  return conjugacy_orbit(g).size();
}

std::uint64_t AlgebraGroup::centralizer_order(const GroupElement& g) const {
  return order() / class_size(g);
}

std::vector<ConjugacyClass<GroupElement>> AlgebraGroup::conjugacy_classes(std::uint64_t cap) const {
  if (!order_fits() || order() > cap) {
    throw CapExceeded("conjugacy class enumeration", order_fits() ? order() : UINT64_MAX, cap);
  }
  const auto m = order();
  std::vector<bool> done(m, false);
  std::vector<ConjugacyClass<GroupElement>> out;
  for (std::uint64_t i = 0; i < m; ++i) {
    if (done[i]) continue;
    const auto rep = element(i);
    const auto orbit = conjugacy_orbit(rep);
    for (const auto& x : orbit) done[index_of(x)] = true;
    out.push_back({rep, orbit.size()});
  }
  return out;
}

// ---------------------------------------------------------------------------

TableGroup::TableGroup(std::size_t m, std::vector<Index> table, Validation validation)
    : m_(m), table_(std::move(table)) {
  if (m_ == 0) throw TableError(TableError::Kind::parse, "Cayley table: order must be positive");
  if (table_.size() != m_ * m_) {
    throw TableError(TableError::Kind::parse, "Cayley table: expected " + std::to_string(m_ * m_) + " entries");
  }
  validate(validation);
  build_caches();
}

void TableGroup::validate(Validation validation) const {
  for (auto v : table_) {
    if (v >= m_) throw TableError(TableError::Kind::parse, "Cayley table: entry " + std::to_string(v) + " out of range");
  }
  if (validation == Validation::trusted) return;

  std::vector<char> seen(m_);
  for (std::size_t r = 0; r < m_; ++r) {
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t c = 0; c < m_; ++c) {
      if (seen[table_[r * m_ + c]]++) {
        throw TableError(TableError::Kind::not_permutation, "Cayley table: row " + std::to_string(r) + " is not a permutation");
      }
    }
  }
  for (std::size_t c = 0; c < m_; ++c) {
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t r = 0; r < m_; ++r) {
      if (seen[table_[r * m_ + c]]++) {
        throw TableError(TableError::Kind::not_permutation, "Cayley table: column " + std::to_string(c) + " is not a permutation");
      }
    }
  }
  for (std::size_t x = 0; x < m_; ++x) {
    if (table_[x] != x || table_[x * m_] != x) {
      throw TableError(TableError::Kind::identity, "Cayley table: element 0 is not a two-sided identity (element " + std::to_string(x) + ")");
    }
  }
  const auto check = [&](std::size_t a, std::size_t b, std::size_t c) {
    if (table_[table_[a * m_ + b] * m_ + c] != table_[a * m_ + table_[b * m_ + c]]) {
      throw TableError(TableError::Kind::associativity,
                       "Cayley table: associativity fails at (" + std::to_string(a) + ", " +
                           std::to_string(b) + ", " + std::to_string(c) + ")");
    }
  };
  if (m_ <= 256) {
    for (std::size_t a = 0; a < m_; ++a)
      for (std::size_t b = 0; b < m_; ++b)
        for (std::size_t c = 0; c < m_; ++c) check(a, b, c);
  } else {
    std::mt19937_64 rng(0x7ab1e);
    std::uniform_int_distribution<std::size_t> pick(0, m_ - 1);
    for (int t = 0; t < 1'000'000; ++t) check(pick(rng), pick(rng), pick(rng));
  }
}

void TableGroup::build_caches() {
  inverse_.assign(m_, 0);
  for (Index a = 0; a < m_; ++a) {
    for (Index b = 0; b < m_; ++b) {
      if (mul(a, b) == 0) {
        inverse_[a] = b;
        break;
      }
    }
  }
  constexpr auto kUnset = static_cast<std::size_t>(-1);
  class_of_.assign(m_, kUnset);
  for (Index x = 0; x < m_; ++x) {
    if (class_of_[x] != kUnset) continue;
    const std::size_t id = classes_.size();
    ElementSet members;
    for (Index g = 0; g < m_; ++g) {
      const Index y = conj(x, g);
      if (class_of_[y] == kUnset) {
        class_of_[y] = id;
        members.push_back(y);
      }
    }
    std::sort(members.begin(), members.end());
    classes_.push_back(std::move(members));
  }
}

Index TableGroup::sample(std::mt19937_64& rng) const {
  std::uniform_int_distribution<std::uint64_t> pick(0, m_ - 1);
  return static_cast<Index>(pick(rng));
}

std::vector<ConjugacyClass<Index>> TableGroup::conjugacy_classes(std::uint64_t) const {
  std::vector<ConjugacyClass<Index>> out;
  out.reserve(classes_.size());
  for (const auto& c : classes_) out.push_back({c.front(), c.size()});
  return out;
}

TableGroup parse_cayley_table(std::string_view text) {
  std::istringstream in{std::string(text)};
  long long m = 0;
  if (!(in >> m) || m <= 0) throw TableError(TableError::Kind::parse, "Cayley table: expected positive order on line 1");
  if (m > 65536) throw TableError(TableError::Kind::parse, "Cayley table: order too large");
  std::vector<Index> table;
  table.reserve(static_cast<std::size_t>(m * m));
  for (long long k = 0; k < m * m; ++k) {
    long long v = 0;
    if (!(in >> v)) {
      throw TableError(TableError::Kind::parse, "Cayley table: expected " + std::to_string(m * m) + " entries, got " + std::to_string(k));
    }
    if (v < 0 || v >= m) throw TableError(TableError::Kind::parse, "Cayley table: entry " + std::to_string(v) + " out of range");
    table.push_back(static_cast<Index>(v));
  }
  std::string trailing;
  if (in >> trailing) throw TableError(TableError::Kind::parse, "Cayley table: trailing data");
  return TableGroup(static_cast<std::size_t>(m), std::move(table));
}

TableGroup load_cayley_table(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw TableError(TableError::Kind::parse, "cannot open Cayley table " + path);
  std::stringstream buf;
  buf << file.rdbuf();
  return parse_cayley_table(buf.str());
}

std::string format_cayley_table(const TableGroup& g) {
  std::ostringstream out;
  const auto m = g.order();
  out << m << '\n';
  for (Index a = 0; a < m; ++a) {
    for (Index b = 0; b < m; ++b) {
      if (b) out << ' ';
      out << g.mul(a, b);
    }
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------

ElementSet generate_subgroup(const TableGroup& g, std::span<const Index> gens) {
  std::vector<char> in(g.order(), 0);
  ElementSet elems{0};
  in[0] = 1;
  // Closure under right multiplication by generators reaches all of <gens>
  // because the group is finite.
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (auto s : gens) {
      const Index y = g.mul(elems[i], s);
      if (!in[y]) {
        in[y] = 1;
        elems.push_back(y);
      }
    }
  }
  std::sort(elems.begin(), elems.end());
  return elems;
}

bool is_subgroup(const TableGroup& g, std::span<const Index> elems) {
  std::vector<char> in(g.order(), 0);
  for (auto x : elems) in[x] = 1;
  if (elems.empty() || !in[0]) return false;
  for (auto a : elems)
    for (auto b : elems)
      if (!in[g.mul(a, g.inv(b))]) return false;
  return true;
}

bool is_normal(const TableGroup& g, std::span<const Index> subgroup) {
  std::vector<char> in(g.order(), 0);
  for (auto x : subgroup) in[x] = 1;
  for (auto x : subgroup)
    for (Index h = 0; h < g.order(); ++h)
      if (!in[g.conj(x, h)]) return false;
  return true;
}

ElementSet commutator_subgroup(const TableGroup& g, std::span<const Index> a, std::span<const Index> b) {
  std::vector<char> in(g.order(), 0);
  std::vector<Index> comms;
  for (auto x : a)
    for (auto y : b) {
      const Index c = g.commutator(x, y);
      if (!in[c]) {
        in[c] = 1;
        comms.push_back(c);
      }
    }
  return generate_subgroup(g, comms);
}

ElementSet center(const TableGroup& g) {
  ElementSet z;
  for (Index x = 0; x < g.order(); ++x)
    if (g.class_size(x) == 1) z.push_back(x);
  return z;
}

SubgroupTable subgroup_table(const TableGroup& g, std::span<const Index> subgroup) {
  if (!is_subgroup(g, subgroup)) throw InvalidArgument("subgroup_table: not a subgroup");
  std::vector<Index> embedding(subgroup.begin(), subgroup.end());
  std::sort(embedding.begin(), embedding.end());  // identity 0 sorts first
  std::vector<Index> local(g.order(), 0);
  for (Index i = 0; i < embedding.size(); ++i) local[embedding[i]] = i;
  const std::size_t k = embedding.size();
  std::vector<Index> table(k * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) table[i * k + j] = local[g.mul(embedding[i], embedding[j])];
  return {TableGroup(k, std::move(table), TableGroup::Validation::trusted), std::move(embedding)};
}

QuotientTable quotient_table(const TableGroup& g, std::span<const Index> normal_subgroup) {
  if (!is_subgroup(g, normal_subgroup) || !is_normal(g, normal_subgroup)) {
    throw InvalidArgument("quotient_table: not a normal subgroup");
  }
  constexpr auto kUnset = static_cast<Index>(-1);
  std::vector<Index> coset_of(g.order(), kUnset);
  std::vector<Index> reps;
  for (Index x = 0; x < g.order(); ++x) {
    if (coset_of[x] != kUnset) continue;
    const auto id = static_cast<Index>(reps.size());
    reps.push_back(x);
    for (auto n : normal_subgroup) coset_of[g.mul(x, n)] = id;
  }
  const std::size_t k = reps.size();
  std::vector<Index> table(k * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) table[i * k + j] = coset_of[g.mul(reps[i], reps[j])];
  return {TableGroup(k, std::move(table), TableGroup::Validation::trusted), std::move(coset_of)};
}

TableGroup to_table_group(const AlgebraGroup& g, std::uint64_t cap) {
  if (!g.order_fits() || g.order() > cap) {
    throw CapExceeded("Cayley table of algebra group", g.order_fits() ? g.order() : UINT64_MAX, cap);
  }
  const std::size_t m = g.order();
  std::vector<GroupElement> elems;
  elems.reserve(m);
  for (std::uint64_t i = 0; i < m; ++i) elems.push_back(g.element(i));
  std::vector<Index> table(m * m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      table[a * m + b] = static_cast<Index>(g.index_of(g.mul(elems[a], elems[b])));
  return TableGroup(m, std::move(table), TableGroup::Validation::trusted);
}

}  // namespace nilprob::groups
