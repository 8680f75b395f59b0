#include "nilprob/structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "nilprob/error.hpp"

namespace nilprob::structure {

namespace {

void require_cap(const TableGroup& g, std::uint64_t cap, const char* what) {
  if (g.order() > cap) throw CapExceeded(what, g.order(), cap);
}

ElementSet all_elements(const TableGroup& g) {
  ElementSet all(g.order());
  for (Index i = 0; i < g.order(); ++i) all[i] = i;
  return all;
}

ElementSet intersect(const ElementSet& a, const ElementSet& b) {
  ElementSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

SeriesReport iterate_series(SeriesReport::Kind kind, ElementSet first,
                            const std::function<ElementSet(const ElementSet&)>& next) {
  SeriesReport r{kind, {std::move(first)}, 0};
  for (;;) {
    auto succ = next(r.terms.back());
    if (succ == r.terms.back()) {
      r.stabilized_at = r.terms.size() - 1;
      return r;
    }
    r.terms.push_back(std::move(succ));
  }
}

}  // namespace

std::vector<std::uint64_t> SeriesReport::orders() const {
  std::vector<std::uint64_t> out;
  for (const auto& t : terms) out.push_back(t.size());
  return out;
}

const ElementSet& SeriesReport::term(std::size_t i) const {
  return terms[std::min(i, terms.size() - 1)];
}

std::string kind_name(SeriesReport::Kind kind) {
  switch (kind) {
    case SeriesReport::Kind::lower_central:
      return "lower-central";
    case SeriesReport::Kind::upper_central:
      return "upper-central";
    case SeriesReport::Kind::derived:
      return "derived";
  }
  return "unknown";
}

SeriesReport lower_central_series(const TableGroup& g, std::uint64_t cap) {
  require_cap(g, cap, "lower_central_series group order");
  const auto G = all_elements(g);
  return iterate_series(SeriesReport::Kind::lower_central, G,
                        [&](const ElementSet& gamma) { return groups::commutator_subgroup(g, gamma, G); });
}

SeriesReport upper_central_series(const TableGroup& g, std::uint64_t cap) {
  require_cap(g, cap, "upper_central_series group order");
  return iterate_series(SeriesReport::Kind::upper_central, ElementSet{0}, [&](const ElementSet& Z) {
    std::vector<char> in(g.order(), 0);
    for (auto z : Z) in[z] = 1;
    ElementSet next;
    for (Index x = 0; x < g.order(); ++x) {
      bool central = true;
      for (Index y = 0; y < g.order() && central; ++y) central = in[g.commutator(x, y)];
      if (central) next.push_back(x);
    }
    return next;
  });
}

SeriesReport derived_series(const TableGroup& g, std::uint64_t cap) {
  require_cap(g, cap, "derived_series group order");
  return iterate_series(SeriesReport::Kind::derived, all_elements(g),
                        [&](const ElementSet& H) { return groups::commutator_subgroup(g, H, H); });
}

std::optional<std::size_t> nilpotency_class(const TableGroup& g, std::uint64_t cap) {
  const auto s = lower_central_series(g, cap);
  if (s.terms.back().size() != 1) return std::nullopt;
  // terms[c] = gamma_(c+1) is the first trivial term.
  for (std::size_t c = 0; c < s.terms.size(); ++c)
    if (s.terms[c].size() == 1) return c;
  return std::nullopt;
}

std::optional<std::size_t> derived_length(const TableGroup& g, std::uint64_t cap) {
  const auto s = derived_series(g, cap);
  if (s.terms.back().size() != 1) return std::nullopt;
  for (std::size_t l = 0; l < s.terms.size(); ++l)
    if (s.terms[l].size() == 1) return l;
  return std::nullopt;
}

std::pair<std::uint64_t, std::uint64_t> baer_indices(const TableGroup& g, std::size_t s, std::size_t t,
                                                     std::uint64_t cap) {
  if (s < 1 || t < 1) throw InvalidArgument("baer_indices: s and t must be at least 1");
  const auto gamma = lower_central_series(g, cap);
  const auto Z = upper_central_series(g, cap);
  const auto index = [&](std::size_t si, std::size_t ti) -> std::uint64_t {
    const auto& gs = gamma.term(si - 1);  // gamma_si
    const auto& zt = Z.term(ti);          // Z_ti
    return gs.size() / intersect(gs, zt).size();
  };
  return {index(s, t), index(s + 1, t - 1)};
}

std::optional<unsigned> engel_degree(const TableGroup& g, unsigned max_l) {
  unsigned worst = 1;
  for (Index x = 0; x < g.order(); ++x) {
    for (Index y = 0; y < g.order(); ++y) {
      Index c = g.commutator(x, y);
      unsigned l = 1;
      while (c != 0) {
        if (++l > max_l) return std::nullopt;
        c = g.commutator(c, y);
      }
      worst = std::max(worst, l);
    }
  }
  return worst;
}

RadiusReport power_closure_radius(const TableGroup& g, std::span<const Index> X) {
  std::vector<char> inX(g.order(), 0);
  for (auto x : X) {
    if (x >= g.order()) throw InvalidArgument("power_closure_radius: element out of range");
    inX[x] = 1;
  }
  if (!inX[0]) throw InvalidArgument("power_closure_radius: X must contain the identity");
  for (auto x : X)
    if (!inX[g.inv(x)]) throw InvalidArgument("power_closure_radius: X must be symmetric");
  ElementSet xs;
  for (Index i = 0; i < g.order(); ++i)
    if (inX[i]) xs.push_back(i);

  std::vector<char> current = inX;  // X^r
  std::size_t count = xs.size();
  std::size_t r = 1;
  for (;;) {
    std::vector<char> next = current;
    std::size_t next_count = count;
    for (Index a = 0; a < g.order(); ++a) {
      if (!current[a]) continue;
      for (auto x : xs) {
        const Index b = g.mul(a, x);
        if (!next[b]) {
          next[b] = 1;
          ++next_count;
        }
      }
    }
    if (next_count == count) break;
    current = std::move(next);
    count = next_count;
    ++r;
  }
  return {r, 3 * (g.order() / xs.size()), count};
}

// ---------------------------------------------------------------------------

ProbeWitness class3_subspace_probe(const algebra::AlgebraParams& params,
                                   std::span<const algebra::FpVector> H_basis) {
  using algebra::FpVector;
  const auto& S = params.symm();
  const auto& A = params.antisymm();
  if (!fieldlin::is_nondegenerate(S) || !fieldlin::is_nondegenerate(A)) {
    throw InvalidArgument(std::string("class3_subspace_probe: f^S is ") +
                          (fieldlin::is_nondegenerate(S) ? "nondegenerate" : "degenerate") + " and f^A is " +
                          (fieldlin::is_nondegenerate(A) ? "nondegenerate" : "degenerate") +
                          "; both must be nondegenerate");
  }
  for (const auto& v : H_basis) {
    if (v.p() != params.p() || v.dim() != params.d()) throw DimensionMismatch("class3_subspace_probe: basis vector not in V");
  }

  ProbeWitness out;
  out.H_basis = fieldlin::span_basis(H_basis);
  const auto& basis = out.H_basis;
  const std::size_t d = params.d();
  out.codim = d - basis.size();
  if (!(2 * out.codim + 1 < d)) {
    out.reason = "codimension " + std::to_string(out.codim) + " too large: need 2 codim + 1 < dim V = " +
                 std::to_string(d);
    return out;
  }

  for (const auto& x : basis) {
    for (const auto& w : basis) {
      if (fieldlin::form_eval(A, x, w).is_zero()) continue;
      std::vector<fieldlin::Digit> values;
      for (const auto& b : basis) values.push_back(fieldlin::form_eval(S, x, b).value);
      const auto H1 = fieldlin::kernel_within(basis, values);
      for (const auto& y : basis) {
        for (const auto& z : H1) {
          if (fieldlin::form_eval(S, y, z).is_zero()) continue;
          out.witness = std::array<FpVector, 4>{x, y, z, w};
          out.bracket = algebra::lie4_closed(params, x, y, z, w);
          return out;
        }
      }
    }
  }
  out.reason = "no witness found in H";
  return out;
}

// ---------------------------------------------------------------------------

Seminorm discrete_norm(const TableGroup&) {
  return {"discrete", [](Index x) { return x == 0 ? 0.0 : std::numeric_limits<double>::infinity(); }};
}

Seminorm conjugacy_class_norm(const TableGroup& g) {
  return {"conjugacy", [&g](Index x) { return std::log(static_cast<double>(g.class_size(x))); }};
}

namespace {

/// Smallest D with max(t, 1/q(t)) = D over candidate radii t.
double measure_D(const TableGroup& g, const Seminorm& norm, const ElementSet& H, const ElementSet& K) {
  std::vector<double> values;
  std::vector<double> table(H.size() * K.size());
  for (std::size_t i = 0; i < H.size(); ++i)
    for (std::size_t j = 0; j < K.size(); ++j) {
      const double v = norm.norm(g.commutator(H[i], K[j]));
      table[i * K.size() + j] = v;
      if (std::isfinite(v)) values.push_back(v);
    }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  double best = std::numeric_limits<double>::infinity();
  for (double t : values) {
    double q = 1.0;
    for (std::size_t i = 0; i < H.size(); ++i) {
      std::size_t hits = 0;
      for (std::size_t j = 0; j < K.size(); ++j) hits += table[i * K.size() + j] <= t;
      q = std::min(q, static_cast<double>(hits) / static_cast<double>(K.size()));
    }
    for (std::size_t j = 0; j < K.size(); ++j) {
      std::size_t hits = 0;
      for (std::size_t i = 0; i < H.size(); ++i) hits += table[i * K.size() + j] <= t;
      q = std::min(q, static_cast<double>(hits) / static_cast<double>(H.size()));
    }
    if (q > 0) best = std::min(best, std::max(t, 1.0 / q));
  }
  return best;
}

}  // namespace

NeumannResult neumann_extract(const TableGroup& g, const Seminorm& norm, double C,
                              std::optional<ElementSet> A, std::optional<ElementSet> B) {
  if (!(C >= 1.0)) throw InvalidArgument("neumann_extract: C must be at least 1");
  NeumannResult r;
  r.C = C;
  r.A = A ? std::move(*A) : all_elements(g);
  r.B = B ? std::move(*B) : all_elements(g);
  for (ElementSet* S : {&r.A, &r.B}) {
    std::sort(S->begin(), S->end());
    if (!groups::is_subgroup(g, *S) || !groups::is_normal(g, *S)) {
      throw InvalidArgument("neumann_extract: A and B must be normal subgroups");
    }
  }

  const std::size_t na = r.A.size(), nb = r.B.size();
  std::vector<char> small(na * nb);
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) {
      small[i * nb + j] = norm.norm(g.commutator(r.A[i], r.B[j])) <= C;
      total += small[i * nb + j];
    }
  r.hypothesis_probability = Rational(total, static_cast<std::uint64_t>(na) * nb);
  r.hypothesis_holds = static_cast<double>(total) * C >= static_cast<double>(na * nb);
  if (!r.hypothesis_holds) return r;

  for (std::size_t i = 0; i < na; ++i) {
    std::size_t hits = 0;
    for (std::size_t j = 0; j < nb; ++j) hits += small[i * nb + j];
    if (2.0 * C * static_cast<double>(hits) >= static_cast<double>(nb)) r.X.push_back(r.A[i]);
  }
  for (std::size_t j = 0; j < nb; ++j) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < na; ++i) hits += small[i * nb + j];
    if (2.0 * C * static_cast<double>(hits) >= static_cast<double>(na)) r.X_B.push_back(r.B[j]);
  }
  r.H = groups::generate_subgroup(g, r.X);
  r.K = groups::generate_subgroup(g, r.X_B);
  r.index_H = na / r.H.size();
  r.index_K = nb / r.K.size();

  r.D = measure_D(g, norm, r.H, r.K);
  r.separation = 4 * r.D + 1;

  std::vector<char> is_comm(g.order(), 0);
  for (auto h : r.H)
    for (auto k : r.K) is_comm[g.commutator(h, k)] = 1;
  for (Index c = 0; c < g.order(); ++c)
    if (is_comm[c]) r.commutators.push_back(c);

  const auto dist = [&](Index x, Index y) { return norm.norm(g.mul(x, g.inv(y))); };
  for (auto c : r.commutators) {
    const bool separated = std::all_of(r.centers.begin(), r.centers.end(),
                                       [&](Index s) { return dist(c, s) > r.separation; });
    if (separated) r.centers.push_back(c);
  }
  r.balls.assign(r.centers.size(), {});
  for (auto c : r.commutators) {
    for (std::size_t i = 0; i < r.centers.size(); ++i) {
      if (dist(c, r.centers[i]) <= r.separation) {
        r.balls[i].push_back(c);
        break;
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

std::vector<ElementSet> all_subgroups(const TableGroup& g, std::uint64_t cap) {
  require_cap(g, cap, "all_subgroups group order");
  std::set<ElementSet> seen;
  std::vector<ElementSet> out{ElementSet{0}};
  seen.insert(out.front());
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::vector<char> in(g.order(), 0);
    for (auto x : out[i]) in[x] = 1;
    for (Index x = 0; x < g.order(); ++x) {
      if (in[x]) continue;
      ElementSet gens = out[i];
      gens.push_back(x);
      auto K = groups::generate_subgroup(g, gens);
      if (seen.insert(K).second) out.push_back(std::move(K));
    }
  }
  std::sort(out.begin(), out.end(), [](const ElementSet& a, const ElementSet& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

std::vector<ParetoPoint> neumann_pareto(const TableGroup& g, std::uint64_t cap) {
  std::vector<ParetoPoint> points;
  for (auto& H : all_subgroups(g, cap)) {
    const auto derived = groups::commutator_subgroup(g, H, H);
    points.push_back({g.order() / H.size(), derived.size(), std::move(H)});
  }
  std::vector<ParetoPoint> frontier;
  for (const auto& pt : points) {
    const bool dominated = std::any_of(points.begin(), points.end(), [&](const ParetoPoint& o) {
      return o.index <= pt.index && o.derived_order <= pt.derived_order &&
             (o.index < pt.index || o.derived_order < pt.derived_order);
    });
    const bool duplicate = std::any_of(frontier.begin(), frontier.end(), [&](const ParetoPoint& o) {
      return o.index == pt.index && o.derived_order == pt.derived_order;
    });
    if (!dominated && !duplicate) frontier.push_back(pt);
  }
  std::sort(frontier.begin(), frontier.end(),
            [](const ParetoPoint& a, const ParetoPoint& b) { return a.index < b.index; });
  return frontier;
}

}  // namespace nilprob::structure
