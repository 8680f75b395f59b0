#pragma once

// Structural probes on finite groups: central and derived series, Engel
// degree, bounded generation, the class-3 subspace obstruction for the
// algebra family, and the constructive Neumann extraction for invariant
// seminorms.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nilprob/algebra.hpp"
#include "nilprob/groups.hpp"
#include "nilprob/rational.hpp"

namespace nilprob::structure {

using groups::ElementSet;
using groups::Index;
using groups::TableGroup;

inline constexpr std::uint64_t kDefaultSeriesCap = std::uint64_t{1} << 12;

struct SeriesReport {
  enum class Kind { lower_central, upper_central, derived };

  Kind kind;
  /// lower-central: gamma_1, gamma_2, ...; upper-central: Z_0, Z_1, ...;
  /// derived: G^(0), G^(1), .... The last term repeats forever.
  std::vector<ElementSet> terms;
  /// Position (in `terms`) of the first term equal to its successor.
  std::size_t stabilized_at = 0;

  std::vector<std::uint64_t> orders() const;
  /// Term i, continuing with the stable term past the end.
  const ElementSet& term(std::size_t i) const;
};

std::string kind_name(SeriesReport::Kind kind);

SeriesReport lower_central_series(const TableGroup& g, std::uint64_t cap = kDefaultSeriesCap);
SeriesReport upper_central_series(const TableGroup& g, std::uint64_t cap = kDefaultSeriesCap);
SeriesReport derived_series(const TableGroup& g, std::uint64_t cap = kDefaultSeriesCap);

/// Least c with gamma_(c+1) = 1; none if the lower central series stops above 1.
std::optional<std::size_t> nilpotency_class(const TableGroup& g, std::uint64_t cap = kDefaultSeriesCap);
/// Least l with G^(l) = 1; none for insoluble groups.
std::optional<std::size_t> derived_length(const TableGroup& g, std::uint64_t cap = kDefaultSeriesCap);

/// ([gamma_s : Z_t cap gamma_s], [gamma_(s+1) : Z_(t-1) cap gamma_(s+1)]); s, t >= 1.
std::pair<std::uint64_t, std::uint64_t> baer_indices(const TableGroup& g, std::size_t s, std::size_t t,
                                                     std::uint64_t cap = kDefaultSeriesCap);

inline constexpr unsigned kDefaultMaxEngel = 10;

/// Least l in [1, max_l] with [x, y, ..., y] (y repeated l times) = 1 for all x, y.
std::optional<unsigned> engel_degree(const TableGroup& g, unsigned max_l = kDefaultMaxEngel);

struct RadiusReport {
  std::size_t radius;   // least r with X^r = X^(r+1) = <X>
  std::uint64_t bound;  // 3 floor(|G| / |X|)
  std::size_t generated_order;
  bool within_bound() const noexcept { return radius <= bound; }
};

/// X must be symmetric and contain the identity (InvalidArgument otherwise).
RadiusReport power_closure_radius(const TableGroup& g, std::span<const Index> X);

// ---------------------------------------------------------------------------

struct ProbeWitness {
  std::vector<algebra::FpVector> H_basis;  // echelon basis of H
  std::size_t codim = 0;
  /// (x, y, z, w) in H with z in ker f^S(x, .), so the bracket equals
  /// f^A(x, w) f^S(y, z) != 0.
  std::optional<std::array<algebra::FpVector, 4>> witness;
  algebra::FpScalar bracket;   // lie4_closed at the witness
  std::string reason;          // why no witness was produced

  bool found() const noexcept { return witness.has_value(); }
};

/// Searches H for a nonzero quadruple bracket following the constructive
/// argument: x, w in H with f^A(x, w) != 0; H1 = H cap ker f^S(x, .); y in H,
/// z in H1 with f^S(y, z) != 0. Requires f^S and f^A nondegenerate
/// (InvalidArgument otherwise); returns no witness unless 2 codim(H) + 1 < dim V.
ProbeWitness class3_subspace_probe(const algebra::AlgebraParams& params,
                                   std::span<const algebra::FpVector> H_basis);

// ---------------------------------------------------------------------------

struct Seminorm {
  std::string name;
  std::function<double(Index)> norm;  // may return +infinity
};

/// 0 at the identity, +infinity elsewhere.
Seminorm discrete_norm(const TableGroup& g);
/// log |x^G| (natural log).
Seminorm conjugacy_class_norm(const TableGroup& g);

struct NeumannResult {
  bool hypothesis_holds = false;
  Rational hypothesis_probability;  // P_(a, b)(||[a, b]|| <= C)
  double C = 0;

  ElementSet A, B;
  ElementSet X;    // {a : P_b(||[a, b]|| <= C) >= 1/2C}
  ElementSet X_B;  // {b : P_a(||[a, b]|| <= C) >= 1/2C}
  ElementSet H, K;
  std::uint64_t index_H = 0, index_K = 0;

  /// Least D with P_k(||[h, k]|| <= D) >= 1/D for all h in H and
  /// P_h(||[h, k]|| <= D) >= 1/D for all k in K.
  double D = 0;
  ElementSet commutators;           // Comm(H, K)
  double separation = 0;            // 4D + 1
  std::vector<Index> centers;       // maximal separated subset, greedy in index order
  std::vector<ElementSet> balls;    // commutators assigned to each center
};

/// Runs the extraction with A = B = G unless normal subgroups A, B are given.
/// When the hypothesis P(||[a, b]|| <= C) >= 1/C fails, only the hypothesis
/// fields are filled in.
NeumannResult neumann_extract(const TableGroup& g, const Seminorm& norm, double C,
                              std::optional<ElementSet> A = std::nullopt,
                              std::optional<ElementSet> B = std::nullopt);

inline constexpr std::uint64_t kSubgroupEnumerationCap = 64;

/// Every subgroup, via closure under adjoining one element at a time.
std::vector<ElementSet> all_subgroups(const TableGroup& g, std::uint64_t cap = kSubgroupEnumerationCap);

struct ParetoPoint {
  std::uint64_t index;
  std::uint64_t derived_order;
  ElementSet subgroup;  // first subgroup found attaining the point
};

/// Pareto frontier of ([G:H], |H'|) over all subgroups, sorted by index.
std::vector<ParetoPoint> neumann_pareto(const TableGroup& g, std::uint64_t cap = kSubgroupEnumerationCap);

}  // namespace nilprob::structure
