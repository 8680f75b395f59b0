#pragma once

// The graded unital algebra R = R0 + R1 + R2 + R3 + R4 over F_p built from a
// bilinear form f on V:
//   R0 = K, R1 = V, R2 = V (x) V, R3 = V (via the identity map theta), R4 = K.
// Products of pure elements of R1:
//   (x y) z = x (y z) = f(y, z) x^theta + f(x, y) z^theta
//   x^theta y = x y^theta = f(x, y)
//   (x y)(z w) = f(x, y) f(z, w) + f(y, z) f(x, w)
// and all products landing in grade > 4 vanish.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nilprob/fieldlin.hpp"

namespace nilprob::algebra {

using fieldlin::BilinearForm;
using fieldlin::Digit;
using fieldlin::FpScalar;
using fieldlin::FpVector;

class AlgebraParams {
 public:
  struct Entry {
    std::uint32_t row;
    std::uint32_t col;
    Digit value;
  };

  explicit AlgebraParams(BilinearForm f);

  unsigned p() const noexcept { return form_.p(); }
  std::size_t d() const noexcept { return form_.dim(); }
  const BilinearForm& form() const noexcept { return form_; }
  const BilinearForm& symm() const noexcept { return symm_; }
  const BilinearForm& antisymm() const noexcept { return antisymm_; }

  /// Nonzero coefficients of f, row-major.
  std::span<const Entry> nonzeros() const noexcept { return nonzeros_; }

  /// Flat digit layout: c0 | r1[d] | r2[d*d] | r3[d] | c4.
  std::size_t element_size() const noexcept { return 2 + 2 * d() + d() * d(); }
  std::size_t r1_offset() const noexcept { return 1; }
  std::size_t r2_offset() const noexcept { return 1 + d(); }
  std::size_t r3_offset() const noexcept { return 1 + d() + d() * d(); }
  std::size_t c4_offset() const noexcept { return 1 + 2 * d() + d() * d(); }

  /// Dimension of grade k (1, d, d^2, d, 1).
  std::size_t grade_dim(int k) const;
  /// Grade of flat digit position.
  int grade_of(std::size_t pos) const;

  bool same_as(const AlgebraParams& o) const noexcept {
    return this == &o || form_ == o.form_;
  }

 private:
  BilinearForm form_;
  BilinearForm symm_;
  BilinearForm antisymm_;
  std::vector<Entry> nonzeros_;
};

using ParamsPtr = std::shared_ptr<const AlgebraParams>;

ParamsPtr make_params(BilinearForm f);

class AlgebraElement {
 public:
  /// The zero element.
  explicit AlgebraElement(ParamsPtr params);

  static AlgebraElement one(ParamsPtr params);
  static AlgebraElement scalar(ParamsPtr params, long long c);
  /// x in R1.
  static AlgebraElement from_r1(ParamsPtr params, const FpVector& x);
  /// x (x) y in R2.
  static AlgebraElement tensor(ParamsPtr params, const FpVector& x, const FpVector& y);
  /// x^theta in R3.
  static AlgebraElement theta(ParamsPtr params, const FpVector& x);
  /// c in R4.
  static AlgebraElement top(ParamsPtr params, long long c);
  /// The k-th graded basis vector, k in [0, element_size): the flat digit
  /// position k set to 1.
  static AlgebraElement basis(ParamsPtr params, std::size_t k);

  const ParamsPtr& params() const noexcept { return params_; }
  unsigned p() const noexcept { return params_->p(); }
  std::size_t d() const noexcept { return params_->d(); }

  Digit c0() const noexcept { return digits_[0]; }
  Digit r1(std::size_t i) const { return digits_[params_->r1_offset() + i]; }
  Digit r2(std::size_t i, std::size_t j) const { return digits_[params_->r2_offset() + i * d() + j]; }
  Digit r3(std::size_t i) const { return digits_[params_->r3_offset() + i]; }
  Digit c4() const noexcept { return digits_.back(); }

  FpVector r1_vector() const;
  /// theta-preimage coordinates of the R3 component.
  FpVector r3_vector() const;

  std::span<const Digit> digits() const noexcept { return digits_; }
  std::span<Digit> mutable_digits() noexcept { return digits_; }
  void set_digit(std::size_t pos, long long v) { digits_.at(pos) = fieldlin::reduce(v, p()); }

  /// Component of grade k only.
  AlgebraElement component(int k) const;
  /// Sum of the components of grade >= k.
  AlgebraElement tail(int k) const;
  bool is_zero() const noexcept;

  AlgebraElement& operator+=(const AlgebraElement& o);
  AlgebraElement& operator-=(const AlgebraElement& o);
  AlgebraElement operator-() const;

  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  friend AlgebraElement operator*(long long c, const AlgebraElement& a);

  friend bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
    return a.params_->same_as(*b.params_) && a.digits_ == b.digits_;
  }

 private:
  ParamsPtr params_;
  std::vector<Digit> digits_;
};

/// Throws DimensionMismatch if the elements come from different algebras.
void require_same_params(const AlgebraElement& a, const AlgebraElement& b);

AlgebraElement alg_mul(const AlgebraElement& a, const AlgebraElement& b);
inline AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  return alg_mul(a, b);
}

/// [a, b]_L = ab - ba.
AlgebraElement lie_bracket(const AlgebraElement& a, const AlgebraElement& b);

/// Closed form of [x, y, z]_L = f^S(y, z) x^theta - f^S(x, z) y^theta, returned
/// in theta-preimage coordinates.
FpVector lie3_closed(const AlgebraParams& params, const FpVector& x, const FpVector& y,
                     const FpVector& z);

/// Closed form of [x, y, z, w]_L = f^A(x, w) f^S(y, z) - f^A(y, w) f^S(x, z).
FpScalar lie4_closed(const AlgebraParams& params, const FpVector& x, const FpVector& y,
                     const FpVector& z, const FpVector& w);

/// Text form "c0 | r1 | r2-rows | r3 | c4": one digit per coordinate, the d
/// rows of the R2 block separated by single spaces, e.g. for d = 2
/// "1 | 01 | 10 00 | 00 | 0".
std::string format_element(const AlgebraElement& a);
AlgebraElement parse_element(ParamsPtr params, std::string_view text);

}  // namespace nilprob::algebra

template <>
struct std::hash<nilprob::algebra::AlgebraElement> {
  std::size_t operator()(const nilprob::algebra::AlgebraElement& a) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (auto d : a.digits()) h = (h ^ d) * 0x100000001b3ULL;
    return h;
  }
};
