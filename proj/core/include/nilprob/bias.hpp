#pragma once

// Multilinear maps between F_p vector spaces, their vanishing probability
// P(F = 0), and bounded-rank structured expressions
//   F(x) = sum over terms of G(g_1(x_I1), ..., g_m(x_Im), x_rest)
// checked pointwise against F.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nilprob/algebra.hpp"
#include "nilprob/fieldlin.hpp"
#include "nilprob/rational.hpp"
#include "nilprob/stats.hpp"

namespace nilprob::bias {

using fieldlin::Digit;
using fieldlin::FpVector;

inline constexpr std::size_t kMaxArity = 4;

/// Coefficient tensor of a multilinear map F_p^d1 x ... x F_p^dk -> F_p^e.
/// Layout is row-major with the output coordinate first:
///   coeffs[((o * d1 + i1) * d2 + i2) ... * dk + ik]
/// and F(x)_o = sum over (i1..ik) of coeff * x1[i1] * ... * xk[ik].
class DenseMultilinear {
 public:
  DenseMultilinear() = default;
  /// Zero map.
  DenseMultilinear(unsigned p, std::vector<std::size_t> dims, std::size_t codim);
  DenseMultilinear(unsigned p, std::vector<std::size_t> dims, std::size_t codim, std::vector<Digit> coeffs);

  /// The form as a map V x V -> F_p.
  static DenseMultilinear from_form(const fieldlin::BilinearForm& f);

  unsigned p() const noexcept { return p_; }
  std::size_t arity() const noexcept { return dims_.size(); }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t codim() const noexcept { return codim_; }
  std::span<const Digit> coeffs() const noexcept { return coeffs_; }
  std::span<Digit> mutable_coeffs() noexcept { return coeffs_; }

  FpVector evaluate(std::span<const FpVector> args) const;

  /// Dimension of the span of the image (the generated subgroup is p^this).
  std::size_t image_dimension() const;

 private:
  unsigned p_ = 2;
  std::vector<std::size_t> dims_;
  std::size_t codim_ = 0;
  std::vector<Digit> coeffs_;
};

class MultilinearMap {
 public:
  using Evaluator = std::function<FpVector(std::span<const FpVector>)>;

  MultilinearMap(unsigned p, std::vector<std::size_t> dims, std::size_t codim, Evaluator eval,
                 std::string name = {});
  explicit MultilinearMap(DenseMultilinear dense, std::string name = "dense");

  unsigned p() const noexcept { return p_; }
  std::size_t arity() const noexcept { return dims_.size(); }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t codim() const noexcept { return codim_; }
  const std::string& name() const noexcept { return name_; }
  /// Total dimension sum d_i of the domain.
  std::size_t domain_dimension() const noexcept;

  FpVector evaluate(std::span<const FpVector> args) const;

 private:
  unsigned p_;
  std::vector<std::size_t> dims_;
  std::size_t codim_;
  Evaluator eval_;
  std::string name_;
};

MultilinearMap zero_map(unsigned p, std::vector<std::size_t> dims, std::size_t codim);
/// (x, y, z) -> [x, y, z]_L in R3 coordinates, closed form.
MultilinearMap lie3_map(const algebra::ParamsPtr& params);
/// (x, y, z, w) -> [x, y, z, w]_L in R4, closed form.
MultilinearMap lie4_map(const algebra::ParamsPtr& params);

// ---------------------------------------------------------------------------

struct InnerMap {
  std::vector<std::size_t> slots;  // argument positions fed to `map`, in order
  DenseMultilinear map;
};

/// outer(inner_1(x), ..., inner_m(x), x_free...) with free slots ascending.
struct ExpressionTerm {
  std::vector<InnerMap> inners;
  std::vector<std::size_t> free_slots;
  DenseMultilinear outer;

  /// Union of the inner slots, sorted (the term's index set I).
  std::vector<std::size_t> index_set() const;
};

class StructuredExpression {
 public:
  StructuredExpression(unsigned p, std::vector<std::size_t> dims, std::size_t codim);

  /// Validates the term: at least one inner map, every slot used exactly once,
  /// and all shapes consistent.
  void add_term(ExpressionTerm term);

  unsigned p() const noexcept { return p_; }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t codim() const noexcept { return codim_; }
  const std::vector<ExpressionTerm>& terms() const noexcept { return terms_; }
  std::vector<ExpressionTerm>& mutable_terms() noexcept { return terms_; }

  /// log_p of the rank: sum of the inner codomain dimensions.
  std::size_t rank_exponent() const noexcept;
  /// prod |cod(g)| over all inner maps.
  std::uint64_t rank() const;

  FpVector evaluate(std::span<const FpVector> args) const;

 private:
  unsigned p_;
  std::vector<std::size_t> dims_;
  std::size_t codim_;
  std::vector<ExpressionTerm> terms_;
};

FpVector evaluate_expression(const StructuredExpression& expr, std::span<const FpVector> args);

// ---------------------------------------------------------------------------

enum class Mode { exhaustive, sampled };

inline constexpr std::uint64_t kDefaultExhaustiveCap = std::uint64_t{1} << 24;

struct EvalOptions {
  Mode mode = Mode::exhaustive;
  std::uint64_t cap = kDefaultExhaustiveCap;  // domain size limit in exhaustive mode
  std::uint64_t samples = 1'000'000;          // sampled mode
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct VerifyResult {
  bool verified = true;
  Mode mode = Mode::exhaustive;
  std::uint64_t points = 0;
  std::optional<std::vector<FpVector>> counterexample;
};

VerifyResult verify_expression(const StructuredExpression& expr, const MultilinearMap& F,
                               const EvalOptions& opts = {});

/// P(F = 0): exact by enumeration or Monte Carlo with a 99% interval.
stats::StatReport bias_probability(const MultilinearMap& F, const EvalOptions& opts = {});

/// f^A(x, w) f^S(y, z) - f^A(y, w) f^S(x, z) as a two-term expression of
/// rank p^4.
StructuredExpression family_quad_expression(const algebra::ParamsPtr& params);

/// f^S(y, z) x - f^S(x, z) y in the shape
/// G4(g4(x, y), z) + G5(g5(x, z), y) + G6(g6(y, z), x) with g4 = 0.
StructuredExpression family_tri_expression(const algebra::ParamsPtr& params);

/// prod over the three inner maps of |<image>|^-1; requires the three-term
/// trilinear shape above (InvalidArgument otherwise).
Rational trilinear_lower_bound(const StructuredExpression& expr);

}  // namespace nilprob::bias
