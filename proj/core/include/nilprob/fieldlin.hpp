#pragma once

// Exact linear algebra over the small prime fields F_p, p in {2, 3, 5, 7}.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nilprob::fieldlin {

using Digit = std::uint8_t;

bool is_supported_prime(unsigned p) noexcept;

/// Throws InvalidArgument unless p is one of 2, 3, 5, 7.
void require_supported_prime(unsigned p);

/// Reduces an arbitrary integer into [0, p).
inline Digit reduce(long long v, unsigned p) noexcept {
  const long long r = v % static_cast<long long>(p);
  return static_cast<Digit>(r < 0 ? r + p : r);
}

/// Multiplicative inverse of a nonzero residue.
Digit inverse(Digit a, unsigned p);

struct FpScalar {
  Digit value = 0;
  Digit p = 2;

  FpScalar() = default;
  FpScalar(long long v, unsigned prime);

  bool is_zero() const noexcept { return value == 0; }
  friend bool operator==(const FpScalar&, const FpScalar&) = default;
  friend FpScalar operator+(FpScalar a, FpScalar b);
  friend FpScalar operator-(FpScalar a, FpScalar b);
  friend FpScalar operator*(FpScalar a, FpScalar b);
};

std::ostream& operator<<(std::ostream& os, const FpScalar& s);

class FpVector {
 public:
  FpVector() = default;
  /// Zero vector.
  FpVector(unsigned p, std::size_t dim);
  /// Coordinates are reduced mod p.
  FpVector(unsigned p, std::span<const long long> coords);
  FpVector(unsigned p, std::initializer_list<long long> coords);

  static FpVector unit(unsigned p, std::size_t dim, std::size_t i);
  /// The index-th vector in base-p counting order (coordinate 0 least significant).
  static FpVector from_index(unsigned p, std::size_t dim, std::uint64_t index);

  unsigned p() const noexcept { return p_; }
  std::size_t dim() const noexcept { return coords_.size(); }
  Digit operator[](std::size_t i) const { return coords_[i]; }
  void set(std::size_t i, long long v) { coords_.at(i) = reduce(v, p_); }
  std::span<const Digit> coords() const noexcept { return coords_; }
  bool is_zero() const noexcept;

  FpVector& operator+=(const FpVector& o);
  FpVector& operator-=(const FpVector& o);
  FpVector& operator*=(Digit c);

  friend FpVector operator+(FpVector a, const FpVector& b) { return a += b; }
  friend FpVector operator-(FpVector a, const FpVector& b) { return a -= b; }
  friend FpVector operator*(Digit c, FpVector a) { return a *= c; }
  friend bool operator==(const FpVector&, const FpVector&) = default;
  friend auto operator<=>(const FpVector&, const FpVector&) = default;

 private:
  unsigned p_ = 2;
  std::vector<Digit> coords_;
};

std::ostream& operator<<(std::ostream& os, const FpVector& v);

/// Throws DimensionMismatch when the two vectors do not live in the same space.
void require_same_space(const FpVector& a, const FpVector& b);

/// f(x, y) = sum_ij x_i c_ij y_j over F_p.
class BilinearForm {
 public:
  BilinearForm() = default;
  /// Zero form.
  BilinearForm(unsigned p, std::size_t dim);
  /// Row-major d x d coefficients, reduced mod p.
  BilinearForm(unsigned p, std::size_t dim, std::span<const long long> coeffs);

  unsigned p() const noexcept { return p_; }
  std::size_t dim() const noexcept { return dim_; }
  Digit at(std::size_t i, std::size_t j) const { return coeffs_[i * dim_ + j]; }
  void set(std::size_t i, std::size_t j, long long v) {
    coeffs_.at(i * dim_ + j) = reduce(v, p_);
  }
  std::span<const Digit> coeffs() const noexcept { return coeffs_; }

  BilinearForm transpose() const;

  friend bool operator==(const BilinearForm&, const BilinearForm&) = default;

 private:
  unsigned p_ = 2;
  std::size_t dim_ = 0;
  std::vector<Digit> coeffs_;
};

FpScalar form_eval(const BilinearForm& f, const FpVector& x, const FpVector& y);

/// f^S(x, y) = f(x, y) + f(y, x).
BilinearForm symm_part(const BilinearForm& f);
/// f^A(x, y) = f(x, y) - f(y, x).
BilinearForm antisymm_part(const BilinearForm& f);

std::size_t rank(const BilinearForm& f);
bool is_nondegenerate(const BilinearForm& f);

/// Basis of {y : f(x, y) = 0}.
std::vector<FpVector> slice_kernel(const BilinearForm& f, const FpVector& x);

/// Hyperbolic form on F_p^{2n}, basis ordered (e_1..e_n, e'_1..e'_n):
/// f(e_i, e'_j) = delta_ij and every other basis pairing is zero.
BilinearForm hyperbolic_form(unsigned p, std::size_t n);

// -- generic dense linear algebra ------------------------------------------

/// Rank of the row set by Gaussian elimination.
std::size_t matrix_rank(std::span<const FpVector> rows);

/// Reduced row-echelon basis of span(vectors); zero rows dropped.
std::vector<FpVector> span_basis(std::span<const FpVector> vectors);

/// Basis of {y : <r, y> = 0 for every row r}, in space of dimension dim.
std::vector<FpVector> nullspace(unsigned p, std::size_t dim, std::span<const FpVector> rows);

/// Basis of {h in span(basis) : lambda(h) = 0} where lambda is linear and
/// given through its values on the basis.
std::vector<FpVector> kernel_within(std::span<const FpVector> basis,
                                    std::span<const Digit> values);

/// All hyperplanes of F_p^dim, each given by a basis; one per projective
/// class of nonzero functional, ordered by the normalized
/// functional (first nonzero coordinate equal to 1) in base-p counting order.
std::vector<std::vector<FpVector>> hyperplanes(unsigned p, std::size_t dim);

// -- packed F_2 representation ---------------------------------------------

/// Bit-packed vector over F_2, dimension at most 64; bit i holds coordinate i.
struct F2Vector {
  std::uint64_t bits = 0;
  std::size_t dim = 0;

  static F2Vector pack(const FpVector& v);
  FpVector unpack() const;
  friend bool operator==(const F2Vector&, const F2Vector&) = default;
};

/// Bit-packed bilinear form over F_2; row i is the mask of nonzero c_ij.
class F2Form {
 public:
  explicit F2Form(const BilinearForm& f);
  std::size_t dim() const noexcept { return rows_.size(); }
  unsigned eval(F2Vector x, F2Vector y) const noexcept;
  std::size_t rank() const;

 private:
  std::vector<std::uint64_t> rows_;
};

// -- form files ------------------------------------------------------------

/// Parses "p d" followed by d rows of d residues.
BilinearForm parse_form(std::string_view text);

/// Accepts "hyperbolic:p:n" or a path to a form file.
BilinearForm load_form(const std::string& source);

std::string format_form(const BilinearForm& f);

}  // namespace nilprob::fieldlin
