#pragma once

// Nilpotency-degree statistics d_k, the conjugacy-class norm, and checks of
// the commutator covering condition Comm(G, G) within B S, where
// B = {x : |x^G| <= n}.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "nilprob/error.hpp"
#include "nilprob/groups.hpp"
#include "nilprob/parallel.hpp"
#include "nilprob/rational.hpp"

namespace nilprob::stats {

using groups::AlgebraGroup;
using groups::FiniteGroup;
using groups::TableGroup;

struct StatReport {
  enum class Kind { exact, monte_carlo };

  Kind kind = Kind::exact;
  std::string statistic;             // "d1", "d2", "d3", ..., "bias"
  std::optional<Rational> exact;     // exact reports only
  double estimate = 0.0;             // point value (also set for exact reports)
  std::optional<double> ci_low;      // monte-carlo only
  std::optional<double> ci_high;
  double confidence = 0.0;           // monte-carlo only
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double elapsed_ms = 0.0;
};

/// Two-sided Clopper-Pearson interval for `successes` out of `trials`.
std::pair<double, double> clopper_pearson(std::uint64_t successes, std::uint64_t trials,
                                          double confidence);

inline constexpr double kConfidence = 0.99;
inline constexpr std::uint64_t kDefaultD1Cap = std::uint64_t{1} << 16;
inline constexpr std::uint64_t kDefaultD2Cap = std::uint64_t{1} << 10;
inline constexpr std::uint64_t kDefaultPairCap = std::uint64_t{1} << 22;
inline constexpr std::size_t kMonteCarloChunks = 64;

struct ExactOptions {
  std::uint64_t cap = 0;  // 0: the statistic's default cap
  unsigned threads = 1;
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

template <FiniteGroup G>
std::uint64_t checked_order(const G& g, std::uint64_t cap, const char* what) {
  if constexpr (std::same_as<G, AlgebraGroup>) {
    if (!g.order_fits()) throw CapExceeded(what, UINT64_MAX, cap);
  }
  const std::uint64_t m = g.order();
  if (m > cap) throw CapExceeded(what, m, cap);
  return m;
}

/// Class sizes, memoized for groups whose class_size is not a table lookup.
template <FiniteGroup G>
class ClassSizeCache {
 public:
  using E = typename G::element_type;
  explicit ClassSizeCache(const G& g) : g_(g) {}

  std::uint64_t operator()(const E& x) {
    if constexpr (std::same_as<G, TableGroup>) {
      return g_.class_size(x);
    } else {
      auto it = memo_.find(x);
      if (it != memo_.end()) return it->second;
      // One orbit computation fills in every member.
      const auto orbit = g_.conjugacy_orbit(x);
      for (const auto& y : orbit) memo_.emplace(y, orbit.size());
      return orbit.size();
    }
  }

 private:
  const G& g_;
  std::unordered_map<E, std::uint64_t> memo_;
};

}  // namespace detail

/// d1(G) = k(G) / |G|.
template <FiniteGroup G>
StatReport d1_exact(const G& g, const ExactOptions& opts = {}) {
  const auto t0 = detail::Clock::now();
  const auto cap = opts.cap ? opts.cap : kDefaultD1Cap;
  const auto m = detail::checked_order(g, cap, "d1_exact group order");
  const auto classes = g.conjugacy_classes(cap);
  StatReport r;
  r.statistic = "d1";
  r.exact = Rational(classes.size(), m);
  r.estimate = r.exact->to_double();
  r.elapsed_ms = detail::ms_since(t0);
  return r;
}

/// d2(G) = |G|^-3 sum_{x, y} |C_G([x, y])|, with x running over class
/// representatives weighted by class size.
template <FiniteGroup G>
StatReport d2_exact(const G& g, const ExactOptions& opts = {}) {
  const auto t0 = detail::Clock::now();
  const auto cap = opts.cap ? opts.cap : kDefaultD2Cap;
  const auto m = detail::checked_order(g, cap, "d2_exact group order");
  if (m > (std::uint64_t{1} << 21)) throw CapExceeded("d2_exact exact arithmetic", m, std::uint64_t{1} << 21);
  const auto classes = g.conjugacy_classes(std::max<std::uint64_t>(cap, kDefaultD1Cap));

  std::vector<std::uint64_t> partial(classes.size(), 0);
  const unsigned threads = std::max(1U, opts.threads);
  parallel_chunks(classes.size(), threads, threads,
                  [&](std::size_t begin, std::size_t end, std::size_t) {
                    detail::ClassSizeCache<G> sizes(g);
                    for (std::size_t c = begin; c < end; ++c) {
                      std::uint64_t acc = 0;
                      const auto& x = classes[c].representative;
                      for (std::uint64_t i = 0; i < m; ++i) {
                        acc += m / sizes(g.commutator(x, g.element(i)));
                      }
                      partial[c] = acc * classes[c].size;
                    }
                  });
  std::uint64_t total = 0;
  for (auto v : partial) total += v;

  StatReport r;
  r.statistic = "d2";
  r.exact = Rational(total, m * m * m);
  r.estimate = r.exact->to_double();
  r.elapsed_ms = detail::ms_since(t0);
  return r;
}

/// Estimates d_k(G) = P([x1, ..., x(k+1)] = 1) from uniform (k+1)-tuples with a
/// 99% Clopper-Pearson interval. Samples are split into fixed chunks with
/// per-chunk seeds, so the result depends on the seed only.
template <FiniteGroup G>
StatReport dk_monte_carlo(const G& g, unsigned k, std::uint64_t samples, std::uint64_t seed,
                          unsigned threads = 1) {
  if (k < 1) throw InvalidArgument("dk_monte_carlo: k must be at least 1");
  if (samples < 1) throw InvalidArgument("dk_monte_carlo: samples must be at least 1");
  const auto t0 = detail::Clock::now();
  std::vector<std::uint64_t> hits(kMonteCarloChunks, 0);
  parallel_chunks(samples, kMonteCarloChunks, threads,
                  [&](std::size_t begin, std::size_t end, std::size_t chunk) {
                    std::seed_seq sseq{seed, static_cast<std::uint64_t>(chunk)};
                    std::mt19937_64 rng(sseq);
                    std::vector<typename G::element_type> tuple;
                    for (std::size_t s = begin; s < end; ++s) {
                      tuple.clear();
                      for (unsigned i = 0; i <= k; ++i) tuple.push_back(g.sample(rng));
                      if (g.is_identity(groups::long_commutator<G>(g, tuple))) ++hits[chunk];
                    }
                  });
  std::uint64_t total = 0;
  for (auto h : hits) total += h;

  StatReport r;
  r.kind = StatReport::Kind::monte_carlo;
  r.statistic = "d" + std::to_string(k);
  r.estimate = static_cast<double>(total) / static_cast<double>(samples);
  const auto [lo, hi] = clopper_pearson(total, samples, kConfidence);
  r.ci_low = lo;
  r.ci_high = hi;
  r.confidence = kConfidence;
  r.samples = samples;
  r.seed = seed;
  r.elapsed_ms = detail::ms_since(t0);
  return r;
}

// ---------------------------------------------------------------------------

struct NormValue {
  double value;
  std::string base;  // "p" (log base p) for the algebra family, "e" for tables
};

/// ||g|| = log |g^G|.
NormValue conjugacy_norm(const AlgebraGroup& g, const groups::GroupElement& x);
NormValue conjugacy_norm(const TableGroup& g, groups::Index x);

// ---------------------------------------------------------------------------

enum class CoverMode { exhaustive, sampled };

struct CoverOptions {
  CoverMode mode = CoverMode::exhaustive;
  std::uint64_t pair_cap = kDefaultPairCap;  // |G|^2 limit for exhaustive mode
  std::uint64_t samples = 10'000;            // sampled mode
  std::uint64_t seed = 0;
};

template <class E>
struct CoveringWitness {
  std::uint64_t n = 0;
  std::vector<E> S;
  CoverMode mode = CoverMode::exhaustive;
  std::uint64_t checked = 0;  // commutators (exhaustive) or sampled pairs
  Rational verified_fraction;
  std::optional<E> counterexample;

  bool verified() const noexcept { return !counterexample.has_value(); }
};

/// Distinct commutators Comm(G, G), sorted. Pairs (rep, y) over class
/// representatives, then closed under conjugation.
template <FiniteGroup G>
std::vector<typename G::element_type> commutator_set(const G& g, std::uint64_t pair_cap = kDefaultPairCap) {
  using E = typename G::element_type;
  const auto m = detail::checked_order(g, std::uint64_t{1} << 32, "commutator_set group order");
  if (m * m > pair_cap) throw CapExceeded("commutator_set pairs |G|^2", m * m, pair_cap);
  std::unordered_set<E> seen;
  for (const auto& cls : g.conjugacy_classes(m)) {
    for (std::uint64_t i = 0; i < m; ++i) {
      auto c = g.commutator(cls.representative, g.element(i));
      if (seen.insert(c).second) {
        for (auto& y : g.conjugacy_orbit(c)) seen.insert(std::move(y));
      }
    }
  }
  std::vector<E> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {
template <FiniteGroup G>
bool in_ball_translate(const G& g, ClassSizeCache<G>& sizes, const typename G::element_type& c,
                       std::span<const typename G::element_type> S, std::uint64_t n) {
  for (const auto& s : S) {
    if (sizes(g.mul(c, g.inv(s))) <= n) return true;
  }
  return false;
}
}  // namespace detail

/// Checks that every commutator c (all of them, or those of sampled pairs)
/// has some s in S with |(c s^-1)^G| <= n.
template <FiniteGroup G>
CoveringWitness<typename G::element_type> covering_check(
    const G& g, std::uint64_t n, std::span<const typename G::element_type> S,
    const CoverOptions& opts = {}) {
  using E = typename G::element_type;
  CoveringWitness<E> w;
  w.n = n;
  w.S.assign(S.begin(), S.end());
  w.mode = opts.mode;
  detail::ClassSizeCache<G> sizes(g);
  std::uint64_t ok = 0;
  const auto visit = [&](const E& c) {
    ++w.checked;
    if (detail::in_ball_translate(g, sizes, c, S, n)) {
      ++ok;
    } else if (!w.counterexample) {
      w.counterexample = c;
    }
  };
  if (opts.mode == CoverMode::exhaustive) {
    for (const auto& c : commutator_set(g, opts.pair_cap)) visit(c);
  } else {
    std::mt19937_64 rng(opts.seed);
    for (std::uint64_t t = 0; t < opts.samples; ++t) {
      const auto x = g.sample(rng);
      const auto y = g.sample(rng);
      visit(g.commutator(x, y));
    }
  }
  w.verified_fraction = w.checked ? Rational(ok, w.checked) : Rational(1, 1);
  return w;
}

template <class E>
struct MinimalCover {
  CoveringWitness<E> witness;  // certificate for the returned S
  std::size_t greedy_size = 0;
  std::optional<std::size_t> exact_size;  // when the exact search ran
  std::size_t ball_classes = 0;           // distinct candidate coverage sets
};

inline constexpr std::size_t kExactCoverMaxClasses = 20;

/// Greedy set cover of Comm(G, G) by translates B s, s in Comm(G, G); exact
/// minimum by subset search when at most 20 distinct translates remain.
template <FiniteGroup G>
MinimalCover<typename G::element_type> covering_minimal_S(const G& g, std::uint64_t n,
                                                          std::uint64_t pair_cap = kDefaultPairCap) {
  using E = typename G::element_type;
  if (n < 1) throw InvalidArgument("covering_minimal_S: bound n must be at least 1");
  const auto comms = commutator_set(g, pair_cap);
  detail::ClassSizeCache<G> sizes(g);
  const std::size_t N = comms.size();

  // coverage[s][c]: commutator c lies in B * comms[s].
  std::vector<std::vector<char>> coverage(N, std::vector<char>(N, 0));
  for (std::size_t s = 0; s < N; ++s) {
    const auto s_inv = g.inv(comms[s]);
    for (std::size_t c = 0; c < N; ++c) coverage[s][c] = sizes(g.mul(comms[c], s_inv)) <= n;
  }

  std::vector<std::size_t> chosen;
  std::vector<char> covered(N, 0);
  std::size_t remaining = N;
  while (remaining > 0) {
    std::size_t best = 0, best_gain = 0;
    for (std::size_t s = 0; s < N; ++s) {
      std::size_t gain = 0;
      for (std::size_t c = 0; c < N; ++c) gain += coverage[s][c] && !covered[c];
      if (gain > best_gain) {
        best_gain = gain;
        best = s;
      }
    }
    // Each commutator c covers itself (c c^-1 = 1), so gain is positive.
    chosen.push_back(best);
    for (std::size_t c = 0; c < N; ++c) {
      if (coverage[best][c] && !covered[c]) {
        covered[c] = 1;
        --remaining;
      }
    }
  }

  MinimalCover<E> out;
  out.greedy_size = chosen.size();

  // Deduplicate candidates by coverage set, keeping the first in order.
  std::vector<std::size_t> distinct;
  {
    std::vector<std::vector<char>> sets;
    for (std::size_t s = 0; s < N; ++s) {
      if (std::find(sets.begin(), sets.end(), coverage[s]) == sets.end()) {
        sets.push_back(coverage[s]);
        distinct.push_back(s);
      }
    }
  }
  out.ball_classes = distinct.size();
  if (distinct.size() <= kExactCoverMaxClasses) {
    const std::size_t K = distinct.size();
    std::optional<std::uint32_t> best_mask;
    for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << K); ++mask) {
      if (best_mask && std::popcount(mask) >= std::popcount(*best_mask)) continue;
      bool all = true;
      for (std::size_t c = 0; c < N && all; ++c) {
        bool hit = false;
        for (std::size_t b = 0; b < K && !hit; ++b) hit = ((mask >> b) & 1U) && coverage[distinct[b]][c];
        all = hit;
      }
      if (all) best_mask = mask;
    }
    if (best_mask) {
      out.exact_size = static_cast<std::size_t>(std::popcount(*best_mask));
      if (*out.exact_size < chosen.size()) {
        chosen.clear();
        for (std::size_t b = 0; b < K; ++b)
          if ((*best_mask >> b) & 1U) chosen.push_back(distinct[b]);
      }
    }
  }

  std::vector<E> S;
  for (auto s : chosen) S.push_back(comms[s]);
  std::sort(S.begin(), S.end());
  CoverOptions opts;
  opts.pair_cap = pair_cap;
  out.witness = covering_check(g, n, std::span<const E>(S), opts);
  return out;
}

/// For H <= G and a covering set S of G with bound n: one point of B s within
/// H for each s where that intersection is nonempty (smallest G-index). With
/// bound n^2 the result covers Comm(H, H).
std::vector<groups::Index> hereditary_covering_set(const TableGroup& g, std::uint64_t n,
                                                   std::span<const groups::Index> S,
                                                   std::span<const groups::Index> subgroup);

}  // namespace nilprob::stats
