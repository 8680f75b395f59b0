#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <set>
#include <unordered_set>

#include "nilprob/error.hpp"
#include "nilprob/groups.hpp"
#include "oracles.hpp"

using namespace nilprob;
using namespace nilprob::groups;
using algebra::AlgebraElement;

namespace {

AlgebraGroup family_group(unsigned p, std::size_t n, std::size_t cap = kDefaultOrbitCap) {
  return AlgebraGroup(algebra::make_params(fieldlin::hyperbolic_form(p, n)), cap);
}

GroupElement one_plus(const AlgebraGroup& G, const fieldlin::FpVector& x) {
  return GroupElement(AlgebraElement::from_r1(G.params(), x));
}

TableError::Kind table_error_kind(const std::string& text) {
  try {
    parse_cayley_table(text);
  } catch (const TableError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no TableError for:\n" << text;
  return TableError::Kind::parse;
}

}  // namespace

static_assert(FiniteGroup<AlgebraGroup>);
static_assert(FiniteGroup<TableGroup>);

TEST(AlgebraGroup, OrdersAndGenerators) {
  EXPECT_EQ(family_group(2, 1).order(), std::uint64_t{1} << 9);
  EXPECT_EQ(family_group(2, 2).order(), std::uint64_t{1} << 25);
  EXPECT_EQ(family_group(2, 3).order(), std::uint64_t{1} << 49);
  EXPECT_EQ(family_group(2, 3).generators().size(), 49U);
  const auto big = family_group(7, 3);
  EXPECT_FALSE(big.order_fits());
  EXPECT_THROW(big.order(), CapExceeded);
}

TEST(AlgebraGroup, InverseAndIdentity) {
  std::mt19937_64 rng(1);
  const auto G = family_group(3, 2);
  EXPECT_EQ(G.inv(G.identity()), G.identity());
  for (int t = 0; t < 1000; ++t) {
    const auto g = G.sample(rng);
    ASSERT_TRUE(G.mul(g, G.inv(g)).is_identity());
    ASSERT_TRUE(G.mul(G.inv(g), g).is_identity());
  }
}

TEST(AlgebraGroup, ProductOfTwoGenerators) {
  const auto G = family_group(2, 1);
  const auto e1 = fieldlin::FpVector::unit(2, 2, 0), e1p = fieldlin::FpVector::unit(2, 2, 1);
  const auto prod = G.mul(one_plus(G, e1), one_plus(G, e1p));
  // (1 + x)(1 + y) = 1 + x + y + x (x) y
  const auto expected = AlgebraElement::from_r1(G.params(), e1 + e1p) + AlgebraElement::tensor(G.params(), e1, e1p);
  EXPECT_EQ(prod.l1_part(), expected);
}

TEST(AlgebraGroup, AssociativeOnRandomTriples) {
  std::mt19937_64 rng(2);
  const auto G = family_group(2, 2);
  for (int t = 0; t < 10000; ++t) {
    const auto a = G.sample(rng), b = G.sample(rng), c = G.sample(rng);
    ASSERT_EQ(G.mul(G.mul(a, b), c), G.mul(a, G.mul(b, c)));
  }
}

TEST(AlgebraGroup, CommutatorWithIdentity) {
  std::mt19937_64 rng(3);
  const auto G = family_group(3, 1);
  for (int t = 0; t < 100; ++t) {
    const auto g = G.sample(rng);
    EXPECT_TRUE(G.commutator(g, G.identity()).is_identity());
    EXPECT_TRUE(G.commutator(G.identity(), g).is_identity());
  }
}

TEST(AlgebraGroup, CommutatorBracketRelation) {
  // [1 + x, 1 + y] = 1 + (1 + x)^-1 (1 + y)^-1 [x, y]_L
  std::mt19937_64 rng(4);
  for (unsigned p : {2U, 3U}) {
    const auto G = family_group(p, 2);
    for (int t = 0; t < 1000; ++t) {
      const auto g = G.sample(rng), h = G.sample(rng);
      const auto lhs = G.commutator(g, h).as_algebra();
      const auto rhs = AlgebraElement::one(G.params()) +
                       G.inv(g).as_algebra() * G.inv(h).as_algebra() * algebra::lie_bracket(g.l1_part(), h.l1_part());
      ASSERT_EQ(lhs, rhs);
    }
  }
}

TEST(AlgebraGroup, TripleCommutatorMatchesLieBracketModuloL4) {
  std::mt19937_64 rng(5);
  for (auto [p, n] : {std::pair{2U, 1U}, std::pair{2U, 2U}, std::pair{3U, 2U}}) {
    const auto G = family_group(p, n);
    const auto d = G.params()->d();
    for (int t = 0; t < 10000; ++t) {
      const auto x = oracle::random_vector(p, d, rng), y = oracle::random_vector(p, d, rng);
      const auto z = oracle::random_vector(p, d, rng);
      const std::vector<GroupElement> gs{one_plus(G, x), one_plus(G, y), one_plus(G, z)};
      const auto c = long_commutator(G, std::span<const GroupElement>(gs)).l1_part();
      ASSERT_TRUE(c.component(1).is_zero());
      ASSERT_TRUE(c.component(2).is_zero());
      ASSERT_EQ(c.r3_vector(), algebra::lie3_closed(*G.params(), x, y, z));
    }
  }
}

TEST(AlgebraGroup, FiveFoldCommutatorsAreTrivial) {
  std::mt19937_64 rng(6);
  for (auto [p, n] : {std::pair{2U, 1U}, std::pair{2U, 3U}, std::pair{5U, 2U}}) {
    const auto G = family_group(p, n);
    for (int t = 0; t < 2000; ++t) {
      std::vector<GroupElement> gs;
      for (int k = 0; k < 5; ++k) gs.push_back(G.sample(rng));
      ASSERT_TRUE(long_commutator(G, std::span<const GroupElement>(gs)).is_identity());
    }
  }
  const auto G = family_group(2, 1);
  const std::vector<GroupElement> one{G.identity()};
  EXPECT_THROW(long_commutator(G, std::span<const GroupElement>(one)), InvalidArgument);
}

TEST(AlgebraGroup, IndexRoundTrip) {
  const auto G = family_group(3, 1);
  std::mt19937_64 rng(7);
  for (int t = 0; t < 500; ++t) {
    const auto g = G.sample(rng);
    EXPECT_EQ(G.element(G.index_of(g)), g);
  }
  EXPECT_TRUE(G.element(0).is_identity());
}

TEST(AlgebraGroup, GroupElementTextFormat) {
  const auto G = family_group(2, 1);
  const auto g = G.mul(one_plus(G, fieldlin::FpVector(2, {1, 0})), one_plus(G, fieldlin::FpVector(2, {0, 1})));
  EXPECT_EQ(format_group_element(g), "11 | 01 00 | 00 | 0");
  EXPECT_EQ(parse_group_element(G.params(), "11 | 01 00 | 00 | 0"), g);
  EXPECT_EQ(parse_group_element(G.params(), "identity"), G.identity());
  EXPECT_THROW(parse_group_element(G.params(), "11 | 01 00 | 00"), InvalidArgument);
  EXPECT_THROW(GroupElement(AlgebraElement::one(G.params())), InvalidArgument);
}

TEST(AlgebraGroup, CentralElementHasTrivialOrbit) {
  const auto G = family_group(3, 2);
  const GroupElement z(AlgebraElement::top(G.params(), 1));
  EXPECT_EQ(G.conjugacy_orbit(z), std::vector<GroupElement>{z});
  EXPECT_EQ(G.centralizer_order(z), G.order());
}

TEST(AlgebraGroup, OrbitsAreClosedUnderGeneratorConjugation) {
  std::mt19937_64 rng(8);
  const auto G = family_group(2, 2);
  for (int t = 0; t < 30; ++t) {
    const auto g = G.sample(rng);
    const auto orbit = G.conjugacy_orbit(g);
    const std::set<GroupElement> members(orbit.begin(), orbit.end());
    EXPECT_TRUE(members.count(g));
    for (const auto& x : orbit)
      for (const auto& s : G.generators()) ASSERT_TRUE(members.count(G.conj(x, s)));
    EXPECT_EQ(G.order() % orbit.size(), 0U);
  }
}

TEST(AlgebraGroup, OrbitsMatchTheCayleyTableClasses) {
  const auto G = family_group(2, 1);
  const auto T = to_table_group(G);
  for (std::uint64_t i = 0; i < G.order(); ++i) {
    const auto g = G.element(i);
    const auto orbit = G.conjugacy_orbit(g);
    const auto conj = oracle::conjugates(T, static_cast<Index>(i));
    ASSERT_EQ(orbit.size(), conj.size());
    for (const auto& x : orbit) ASSERT_TRUE(conj.count(static_cast<Index>(G.index_of(x))));
  }
  EXPECT_EQ(G.conjugacy_classes().size(), T.classes().size());
}

TEST(AlgebraGroup, CommutatorsOfSmallestFamilyHaveAtMostEightConjugates) {
  const auto G = family_group(2, 1);
  std::unordered_set<GroupElement> comms;
  for (const auto& cls : G.conjugacy_classes())
    for (std::uint64_t i = 0; i < G.order(); ++i) comms.insert(G.commutator(cls.representative, G.element(i)));
  for (const auto& c : comms) EXPECT_LE(G.class_size(c), 8U);
}

TEST(AlgebraGroup, OrbitCapRaisesOverflow) {
  const auto G = family_group(2, 1, 2);
  std::mt19937_64 rng(9);
  bool raised = false;
  for (int t = 0; t < 50 && !raised; ++t) {
    try {
      G.conjugacy_orbit(G.sample(rng));
    } catch (const OrbitOverflow&) {
      raised = true;
    }
  }
  EXPECT_TRUE(raised);
}

TEST(TableGroup, LoadsCorpus) {
  const auto S3 = oracle::load("s3");
  EXPECT_EQ(S3.order(), 6U);
  EXPECT_EQ(S3.classes().size(), 3U);
  const auto T = oracle::load("trivial");
  EXPECT_EQ(T.order(), 1U);
  for (const auto& name : oracle::corpus_names()) EXPECT_NO_THROW(oracle::load(name)) << name;
}

TEST(TableGroup, ValidationErrorsAreDistinct) {
  EXPECT_EQ(table_error_kind("3\n0 1 2\n1 1 0\n2 0 1\n"), TableError::Kind::not_permutation);
  EXPECT_EQ(table_error_kind("3\n1 2 0\n2 0 1\n0 1 2\n"), TableError::Kind::identity);
  EXPECT_EQ(table_error_kind("5\n0 1 2 3 4\n1 0 3 4 2\n2 4 0 1 3\n3 2 4 0 1\n4 3 1 2 0\n"),
            TableError::Kind::associativity);
  EXPECT_EQ(table_error_kind("2\n0 1\n1\n"), TableError::Kind::parse);
  EXPECT_EQ(table_error_kind("2\n0 1\n1 2\n"), TableError::Kind::parse);
  EXPECT_EQ(table_error_kind("x"), TableError::Kind::parse);
}

TEST(TableGroup, FormatRoundTrip) {
  const auto Q8 = oracle::load("q8");
  const auto again = parse_cayley_table(format_cayley_table(Q8));
  EXPECT_TRUE(std::equal(Q8.table().begin(), Q8.table().end(), again.table().begin()));
}

TEST(TableGroup, ClassesMatchOracleAndOrbitStabilizer) {
  for (const auto& name : oracle::corpus_names()) {
    const auto G = oracle::load(name);
    std::size_t total = 0;
    for (const auto& cls : G.classes()) {
      total += cls.size();
      EXPECT_EQ(G.order() % cls.size(), 0U);
    }
    EXPECT_EQ(total, G.order()) << name;
    for (Index x = 0; x < G.order(); ++x) {
      const auto conj = oracle::conjugates(G, x);
      EXPECT_EQ(G.class_size(x), conj.size());
      EXPECT_EQ(G.centralizer_order(x), oracle::centralizer_count(G, x));
      EXPECT_EQ(G.class_size(x) * G.centralizer_order(x), G.order());
      const auto orbit = G.conjugacy_orbit(x);
      EXPECT_TRUE(std::equal(orbit.begin(), orbit.end(), conj.begin(), conj.end()));
    }
  }
}

TEST(TableGroup, InversesAndSampling) {
  const auto G = oracle::load("a4");
  for (Index x = 0; x < G.order(); ++x) EXPECT_EQ(G.mul(x, G.inv(x)), 0U);
  std::mt19937_64 rng(10);
  std::set<Index> seen;
  for (int t = 0; t < 1000; ++t) seen.insert(G.sample(rng));
  EXPECT_EQ(seen.size(), G.order());
}

TEST(Subgroups, CenterNormalityAndQuotients) {
  const auto D4 = oracle::load("d4");
  const auto Z = center(D4);
  EXPECT_EQ(Z.size(), 2U);
  EXPECT_TRUE(is_subgroup(D4, Z));
  EXPECT_TRUE(is_normal(D4, Z));
  const auto Q = quotient_table(D4, Z);
  EXPECT_EQ(Q.group.order(), 4U);
  EXPECT_TRUE(Q.group.is_abelian());
  for (Index x = 0; x < D4.order(); ++x)
    for (Index y = 0; y < D4.order(); ++y)
      ASSERT_EQ(Q.coset_of[D4.mul(x, y)], Q.group.mul(Q.coset_of[x], Q.coset_of[y]));

  const auto S3 = oracle::load("s3");
  Index t = 1;
  while (S3.mul(t, t) != 0) ++t;  // an involution, i.e. a transposition
  const std::vector<Index> one_transposition{t};
  const auto H = generate_subgroup(S3, one_transposition);
  EXPECT_EQ(H.size(), 2U);
  EXPECT_FALSE(is_normal(S3, H));
  EXPECT_THROW(quotient_table(S3, H), InvalidArgument);
}

TEST(Subgroups, DerivedSubgroupMatchesOracle) {
  for (const auto& name : oracle::corpus_names()) {
    const auto G = oracle::load(name);
    std::vector<Index> all(G.order());
    std::iota(all.begin(), all.end(), 0);
    const auto Gp = commutator_subgroup(G, all, all);
    const auto expected = oracle::derived_subgroup(G);
    EXPECT_TRUE(std::equal(Gp.begin(), Gp.end(), expected.begin(), expected.end())) << name;
  }
}

TEST(Subgroups, SubgroupTableEmbedding) {
  const auto A4 = oracle::load("a4");
  std::vector<Index> all(A4.order());
  std::iota(all.begin(), all.end(), 0);
  const auto V = commutator_subgroup(A4, all, all);
  ASSERT_EQ(V.size(), 4U);
  const auto sub = subgroup_table(A4, V);
  EXPECT_EQ(sub.group.order(), 4U);
  EXPECT_EQ(sub.embedding[0], 0U);
  for (Index a = 0; a < 4; ++a)
    for (Index b = 0; b < 4; ++b)
      EXPECT_EQ(sub.embedding[sub.group.mul(a, b)], A4.mul(sub.embedding[a], sub.embedding[b]));
}
