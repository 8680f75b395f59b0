#include "nilprob/bias.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>

#include "nilprob/error.hpp"
#include "nilprob/parallel.hpp"

namespace nilprob::bias {

namespace {

std::size_t product(const std::vector<std::size_t>& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

void check_args(unsigned p, const std::vector<std::size_t>& dims, std::span<const FpVector> args,
                const char* what) {
  if (args.size() != dims.size()) {
    throw DimensionMismatch(std::string(what) + ": expected " + std::to_string(dims.size()) + " arguments, got " +
                            std::to_string(args.size()));
  }
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (args[i].p() != p || args[i].dim() != dims[i]) {
      throw DimensionMismatch(std::string(what) + ": argument " + std::to_string(i) + " has wrong shape");
    }
  }
}

std::uint64_t checked_pow(unsigned p, std::size_t e) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < e; ++i) {
    if (out > (std::uint64_t{1} << 62) / p) throw CapExceeded("p-power", UINT64_MAX, std::uint64_t{1} << 62);
    out *= p;
  }
  return out;
}

/// Decodes a point index into argument vectors (slot 0 least significant).
void decode_point(unsigned p, const std::vector<std::size_t>& dims, std::uint64_t index,
                  std::vector<FpVector>& out) {
  out.clear();
  for (auto d : dims) {
    out.push_back(FpVector::from_index(p, d, index));
    for (std::size_t i = 0; i < d; ++i) index /= p;
  }
}

std::vector<FpVector> random_point(unsigned p, const std::vector<std::size_t>& dims, std::mt19937_64& rng) {
  std::uniform_int_distribution<unsigned> digit(0, p - 1);
  std::vector<FpVector> out;
  for (auto d : dims) {
    FpVector v(p, d);
    for (std::size_t i = 0; i < d; ++i) v.set(i, digit(rng));
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

DenseMultilinear::DenseMultilinear(unsigned p, std::vector<std::size_t> dims, std::size_t codim)
    : p_(p), dims_(std::move(dims)), codim_(codim) {
  fieldlin::require_supported_prime(p);
  if (dims_.size() > kMaxArity) throw InvalidArgument("multilinear arity above 4");
  coeffs_.assign(codim_ * product(dims_), 0);
}

DenseMultilinear::DenseMultilinear(unsigned p, std::vector<std::size_t> dims, std::size_t codim,
                                   std::vector<Digit> coeffs)
    : DenseMultilinear(p, std::move(dims), codim) {
  if (coeffs.size() != coeffs_.size()) {
    throw DimensionMismatch("DenseMultilinear: expected " + std::to_string(coeffs_.size()) + " coefficients");
  }
  for (std::size_t k = 0; k < coeffs.size(); ++k) coeffs_[k] = fieldlin::reduce(coeffs[k], p);
}

DenseMultilinear DenseMultilinear::from_form(const fieldlin::BilinearForm& f) {
  const auto c = f.coeffs();
  return DenseMultilinear(f.p(), {f.dim(), f.dim()}, 1, std::vector<Digit>(c.begin(), c.end()));
}

FpVector DenseMultilinear::evaluate(std::span<const FpVector> args) const {
  check_args(p_, dims_, args, "DenseMultilinear::evaluate");
  const std::size_t block = product(dims_);
  std::vector<long> acc(codim_, 0);
  std::vector<std::size_t> idx(dims_.size(), 0);
  for (std::size_t flat = 0; flat < block; ++flat) {
    // idx is the mixed-radix decomposition of flat, last slot fastest.
    long term = 1;
    for (std::size_t s = 0; s < dims_.size() && term; ++s) term *= args[s][idx[s]];
    if (term) {
      for (std::size_t o = 0; o < codim_; ++o) acc[o] += term * coeffs_[o * block + flat];
    }
    for (std::size_t s = dims_.size(); s-- > 0;) {
      if (++idx[s] < dims_[s]) break;
      idx[s] = 0;
    }
  }
  FpVector out(p_, codim_);
  for (std::size_t o = 0; o < codim_; ++o) out.set(o, acc[o]);
  return out;
}

std::size_t DenseMultilinear::image_dimension() const {
  // The image spans the same subspace as the values on basis tuples, which
  // are exactly the coefficient columns.
  const std::size_t block = product(dims_);
  std::vector<FpVector> columns;
  for (std::size_t flat = 0; flat < block; ++flat) {
    FpVector v(p_, codim_);
    for (std::size_t o = 0; o < codim_; ++o) v.set(o, coeffs_[o * block + flat]);
    if (!v.is_zero()) columns.push_back(std::move(v));
  }
  return fieldlin::matrix_rank(columns);
}

// ---------------------------------------------------------------------------

MultilinearMap::MultilinearMap(unsigned p, std::vector<std::size_t> dims, std::size_t codim, Evaluator eval,
                               std::string name)
    : p_(p), dims_(std::move(dims)), codim_(codim), eval_(std::move(eval)), name_(std::move(name)) {
  fieldlin::require_supported_prime(p);
  if (dims_.size() > kMaxArity) throw InvalidArgument("multilinear arity above 4");
}

MultilinearMap::MultilinearMap(DenseMultilinear dense, std::string name)
    : p_(dense.p()), dims_(dense.dims()), codim_(dense.codim()), name_(std::move(name)) {
  eval_ = [d = std::move(dense)](std::span<const FpVector> args) { return d.evaluate(args); };
}

std::size_t MultilinearMap::domain_dimension() const noexcept {
  return std::accumulate(dims_.begin(), dims_.end(), std::size_t{0});
}

FpVector MultilinearMap::evaluate(std::span<const FpVector> args) const {
  check_args(p_, dims_, args, "MultilinearMap::evaluate");
  return eval_(args);
}

MultilinearMap zero_map(unsigned p, std::vector<std::size_t> dims, std::size_t codim) {
  return MultilinearMap(
      p, std::move(dims), codim, [p, codim](std::span<const FpVector>) { return FpVector(p, codim); }, "zero");
}

MultilinearMap lie3_map(const algebra::ParamsPtr& params) {
  const auto d = params->d();
  return MultilinearMap(
      params->p(), {d, d, d}, d,
      [params](std::span<const FpVector> a) { return algebra::lie3_closed(*params, a[0], a[1], a[2]); }, "lie3");
}

MultilinearMap lie4_map(const algebra::ParamsPtr& params) {
  const auto d = params->d();
  const auto p = params->p();
  return MultilinearMap(
      p, {d, d, d, d}, 1,
      [params, p](std::span<const FpVector> a) {
        const auto v = algebra::lie4_closed(*params, a[0], a[1], a[2], a[3]);
        return FpVector(p, {static_cast<long long>(v.value)});
      },
      "lie4");
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> ExpressionTerm::index_set() const {
  std::vector<std::size_t> out;
  for (const auto& in : inners) out.insert(out.end(), in.slots.begin(), in.slots.end());
  std::sort(out.begin(), out.end());
  return out;
}

StructuredExpression::StructuredExpression(unsigned p, std::vector<std::size_t> dims, std::size_t codim)
    : p_(p), dims_(std::move(dims)), codim_(codim) {
  fieldlin::require_supported_prime(p);
  if (dims_.empty() || dims_.size() > kMaxArity) throw InvalidArgument("expression arity must be 1..4");
}

void StructuredExpression::add_term(ExpressionTerm term) {
  if (term.inners.empty()) throw InvalidArgument("expression term needs a nonempty index set");
  std::vector<int> uses(dims_.size(), 0);
  std::vector<std::size_t> outer_dims;
  for (const auto& in : term.inners) {
    if (in.map.p() != p_) throw DimensionMismatch("inner map over a different field");
    if (in.slots.empty() || in.slots.size() != in.map.arity()) {
      throw DimensionMismatch("inner map arity does not match its slot list");
    }
    for (std::size_t k = 0; k < in.slots.size(); ++k) {
      const auto s = in.slots[k];
      if (s >= dims_.size()) throw DimensionMismatch("inner slot out of range");
      if (in.map.dims()[k] != dims_[s]) throw DimensionMismatch("inner map domain does not match slot dimension");
      ++uses[s];
    }
    outer_dims.push_back(in.map.codim());
  }
  std::sort(term.free_slots.begin(), term.free_slots.end());
  for (auto s : term.free_slots) {
    if (s >= dims_.size()) throw DimensionMismatch("free slot out of range");
    ++uses[s];
    outer_dims.push_back(dims_[s]);
  }
  if (std::any_of(uses.begin(), uses.end(), [](int u) { return u != 1; })) {
    throw InvalidArgument("every slot must feed exactly one inner map or be free exactly once");
  }
  if (term.outer.p() != p_ || term.outer.dims() != outer_dims || term.outer.codim() != codim_) {
    throw DimensionMismatch("outer map shape does not match inner codomains and free slots");
  }
  terms_.push_back(std::move(term));
}

std::size_t StructuredExpression::rank_exponent() const noexcept {
  std::size_t e = 0;
  for (const auto& t : terms_)
    for (const auto& in : t.inners) e += in.map.codim();
  return e;
}

std::uint64_t StructuredExpression::rank() const { return checked_pow(p_, rank_exponent()); }

FpVector StructuredExpression::evaluate(std::span<const FpVector> args) const {
  check_args(p_, dims_, args, "evaluate_expression");
  FpVector out(p_, codim_);
  std::vector<FpVector> outer_args;
  std::vector<FpVector> inner_args;
  for (const auto& t : terms_) {
    outer_args.clear();
    for (const auto& in : t.inners) {
      inner_args.clear();
      for (auto s : in.slots) inner_args.push_back(args[s]);
      outer_args.push_back(in.map.evaluate(inner_args));
    }
    for (auto s : t.free_slots) outer_args.push_back(args[s]);
    out += t.outer.evaluate(outer_args);
  }
  return out;
}

FpVector evaluate_expression(const StructuredExpression& expr, std::span<const FpVector> args) {
  return expr.evaluate(args);
}

// ---------------------------------------------------------------------------

namespace {

std::uint64_t domain_size_checked(unsigned p, std::size_t total_dim, std::uint64_t cap, const char* what) {
  long double size = 1;
  for (std::size_t i = 0; i < total_dim; ++i) size *= p;
  if (size > static_cast<long double>(cap)) {
    throw CapExceeded(what, size > 1.8e19L ? UINT64_MAX : static_cast<std::uint64_t>(size), cap);
  }
  return static_cast<std::uint64_t>(size);
}

}  // namespace

VerifyResult verify_expression(const StructuredExpression& expr, const MultilinearMap& F, const EvalOptions& opts) {
  if (expr.p() != F.p() || expr.dims() != F.dims() || expr.codim() != F.codim()) {
    throw DimensionMismatch("verify_expression: expression and map have different domains");
  }
  VerifyResult r;
  r.mode = opts.mode;
  if (opts.mode == Mode::exhaustive) {
    const auto total = domain_size_checked(F.p(), F.domain_dimension(), opts.cap, "verify_expression domain size");
    const unsigned threads = std::max(1U, opts.threads);
    std::vector<std::optional<std::uint64_t>> first_bad(threads);
    parallel_chunks(total, threads, threads, [&](std::size_t begin, std::size_t end, std::size_t chunk) {
      std::vector<FpVector> pt;
      for (std::size_t i = begin; i < end; ++i) {
        decode_point(F.p(), F.dims(), i, pt);
        if (expr.evaluate(pt) != F.evaluate(pt)) {
          first_bad[chunk] = i;
          return;
        }
      }
    });
    r.points = total;
    for (const auto& bad : first_bad) {
      if (bad) {
        r.verified = false;
        std::vector<FpVector> pt;
        decode_point(F.p(), F.dims(), *bad, pt);
        r.counterexample = std::move(pt);
        break;
      }
    }
    return r;
  }
  std::mt19937_64 rng(opts.seed);
  for (std::uint64_t s = 0; s < opts.samples; ++s) {
    auto pt = random_point(F.p(), F.dims(), rng);
    ++r.points;
    if (expr.evaluate(pt) != F.evaluate(pt)) {
      r.verified = false;
      r.counterexample = std::move(pt);
      break;
    }
  }
  return r;
}

stats::StatReport bias_probability(const MultilinearMap& F, const EvalOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  stats::StatReport r;
  r.statistic = "bias";
  if (opts.mode == Mode::exhaustive) {
    const auto total = domain_size_checked(F.p(), F.domain_dimension(), opts.cap, "bias_probability domain size");
    const unsigned threads = std::max(1U, opts.threads);
    std::vector<std::uint64_t> zeros(threads, 0);
    parallel_chunks(total, threads, threads, [&](std::size_t begin, std::size_t end, std::size_t chunk) {
      std::vector<FpVector> pt;
      for (std::size_t i = begin; i < end; ++i) {
        decode_point(F.p(), F.dims(), i, pt);
        zeros[chunk] += F.evaluate(pt).is_zero();
      }
    });
    const auto z = std::accumulate(zeros.begin(), zeros.end(), std::uint64_t{0});
    r.exact = Rational(z, total);
    r.estimate = r.exact->to_double();
    r.samples = total;
  } else {
    std::mt19937_64 rng(opts.seed);
    std::uint64_t z = 0;
    for (std::uint64_t s = 0; s < opts.samples; ++s) z += F.evaluate(random_point(F.p(), F.dims(), rng)).is_zero();
    r.kind = stats::StatReport::Kind::monte_carlo;
    r.estimate = static_cast<double>(z) / static_cast<double>(opts.samples);
    const auto [lo, hi] = stats::clopper_pearson(z, opts.samples, stats::kConfidence);
    r.ci_low = lo;
    r.ci_high = hi;
    r.confidence = stats::kConfidence;
    r.samples = opts.samples;
    r.seed = opts.seed;
  }
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

// ---------------------------------------------------------------------------

namespace {

/// (u, v) -> sign * u v on F_p x F_p.
DenseMultilinear scalar_product(unsigned p, int sign) {
  return DenseMultilinear(p, {1, 1}, 1, {fieldlin::reduce(sign, p)});
}

/// (u, x) -> sign * u x for u in F_p, x in F_p^d.
DenseMultilinear scale_vector(unsigned p, std::size_t d, int sign) {
  DenseMultilinear m(p, {1, d}, d);
  auto c = m.mutable_coeffs();
  for (std::size_t o = 0; o < d; ++o) c[o * d + o] = fieldlin::reduce(sign, p);
  return m;
}

}  // namespace

StructuredExpression family_quad_expression(const algebra::ParamsPtr& params) {
  const auto p = params->p();
  const auto d = params->d();
  const auto fA = DenseMultilinear::from_form(params->antisymm());
  const auto fS = DenseMultilinear::from_form(params->symm());
  StructuredExpression expr(p, {d, d, d, d}, 1);
  // f^A(x, w) f^S(y, z)
  expr.add_term({{{{0, 3}, fA}, {{1, 2}, fS}}, {}, scalar_product(p, +1)});
  // - f^A(y, w) f^S(x, z)
  expr.add_term({{{{1, 3}, fA}, {{0, 2}, fS}}, {}, scalar_product(p, -1)});
  return expr;
}

StructuredExpression family_tri_expression(const algebra::ParamsPtr& params) {
  const auto p = params->p();
  const auto d = params->d();
  const auto fS = DenseMultilinear::from_form(params->symm());
  StructuredExpression expr(p, {d, d, d}, d);
  // G4(g4(x, y), z) with g4 = 0.
  expr.add_term({{{{0, 1}, DenseMultilinear(p, {d, d}, 1)}}, {2}, scale_vector(p, d, 0)});
  // G5(g5(x, z), y) = -f^S(x, z) y
  expr.add_term({{{{0, 2}, fS}}, {1}, scale_vector(p, d, -1)});
  // G6(g6(y, z), x) = f^S(y, z) x
  expr.add_term({{{{1, 2}, fS}}, {0}, scale_vector(p, d, +1)});
  return expr;
}

Rational trilinear_lower_bound(const StructuredExpression& expr) {
  const auto shape_error = [] {
    return InvalidArgument(
        "trilinear_lower_bound: expression must be G4(g4(x, y), z) + G5(g5(x, z), y) + G6(g6(y, z), x)");
  };
  if (expr.dims().size() != 3 || expr.terms().size() != 3) throw shape_error();
  std::vector<std::vector<std::size_t>> seen;
  std::size_t exponent = 0;
  for (const auto& t : expr.terms()) {
    if (t.inners.size() != 1 || t.inners.front().slots.size() != 2 || t.free_slots.size() != 1) throw shape_error();
    auto I = t.index_set();
    if (std::find(seen.begin(), seen.end(), I) != seen.end()) throw shape_error();
    seen.push_back(std::move(I));
    exponent += t.inners.front().map.image_dimension();
  }
  return Rational(1, checked_pow(expr.p(), exponent));
}

}  // namespace nilprob::bias
