#include "nilprob/fieldlin.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "nilprob/error.hpp"

namespace nilprob::fieldlin {

bool is_supported_prime(unsigned p) noexcept {
  return p == 2 || p == 3 || p == 5 || p == 7;
}

void require_supported_prime(unsigned p) {
  if (!is_supported_prime(p)) {
    throw InvalidArgument("unsupported prime " + std::to_string(p) +
                          " (expected 2, 3, 5 or 7)");
  }
}

Digit inverse(Digit a, unsigned p) {
  if (a % p == 0) throw InvalidArgument("inverse of zero residue");
  for (unsigned b = 1; b < p; ++b) {
    if ((a * b) % p == 1) return static_cast<Digit>(b);
  }
  throw InvalidArgument("no inverse");  // unreachable for prime p
}

// ---------------------------------------------------------------------------

FpScalar::FpScalar(long long v, unsigned prime) : value(reduce(v, prime)), p(static_cast<Digit>(prime)) {
  require_supported_prime(prime);
}

namespace {
void require_same_prime(unsigned a, unsigned b) {
  if (a != b) {
    throw DimensionMismatch("prime mismatch: " + std::to_string(a) + " vs " +
                            std::to_string(b));
  }
}
}  // namespace

FpScalar operator+(FpScalar a, FpScalar b) {
  require_same_prime(a.p, b.p);
  return FpScalar(a.value + b.value, a.p);
}
FpScalar operator-(FpScalar a, FpScalar b) {
  require_same_prime(a.p, b.p);
  return FpScalar(a.value - b.value, a.p);
}
FpScalar operator*(FpScalar a, FpScalar b) {
  require_same_prime(a.p, b.p);
  return FpScalar(a.value * b.value, a.p);
}

std::ostream& operator<<(std::ostream& os, const FpScalar& s) {
  return os << static_cast<unsigned>(s.value);
}

// ---------------------------------------------------------------------------

FpVector::FpVector(unsigned p, std::size_t dim) : p_(p), coords_(dim, 0) {
  require_supported_prime(p);
}

FpVector::FpVector(unsigned p, std::span<const long long> coords) : p_(p) {
  require_supported_prime(p);
  coords_.reserve(coords.size());
  for (auto c : coords) coords_.push_back(reduce(c, p));
}

FpVector::FpVector(unsigned p, std::initializer_list<long long> coords)
    : FpVector(p, std::span<const long long>(coords.begin(), coords.size())) {}

FpVector FpVector::unit(unsigned p, std::size_t dim, std::size_t i) {
  FpVector v(p, dim);
  v.coords_.at(i) = 1;
  return v;
}

FpVector FpVector::from_index(unsigned p, std::size_t dim, std::uint64_t index) {
  FpVector v(p, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    v.coords_[i] = static_cast<Digit>(index % p);
    index /= p;
  }
  return v;
}

bool FpVector::is_zero() const noexcept {
  return std::all_of(coords_.begin(), coords_.end(), [](Digit d) { return d == 0; });
}

void require_same_space(const FpVector& a, const FpVector& b) {
  require_same_prime(a.p(), b.p());
  if (a.dim() != b.dim()) {
    throw DimensionMismatch("vector dimension mismatch: " + std::to_string(a.dim()) +
                            " vs " + std::to_string(b.dim()));
  }
}

FpVector& FpVector::operator+=(const FpVector& o) {
  require_same_space(*this, o);
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    coords_[i] = static_cast<Digit>((coords_[i] + o.coords_[i]) % p_);
  }
  return *this;
}

FpVector& FpVector::operator-=(const FpVector& o) {
  require_same_space(*this, o);
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    coords_[i] = static_cast<Digit>((coords_[i] + p_ - o.coords_[i]) % p_);
  }
  return *this;
}

FpVector& FpVector::operator*=(Digit c) {
  for (auto& x : coords_) x = static_cast<Digit>((x * c) % p_);
  return *this;
}

std::ostream& operator<<(std::ostream& os, const FpVector& v) {
  for (auto c : v.coords()) os << static_cast<unsigned>(c);
  return os;
}

// ---------------------------------------------------------------------------

BilinearForm::BilinearForm(unsigned p, std::size_t dim)
    : p_(p), dim_(dim), coeffs_(dim * dim, 0) {
  require_supported_prime(p);
}

BilinearForm::BilinearForm(unsigned p, std::size_t dim, std::span<const long long> coeffs)
    : BilinearForm(p, dim) {
  if (coeffs.size() != dim * dim) {
    throw DimensionMismatch("bilinear form needs " + std::to_string(dim * dim) +
                            " coefficients, got " + std::to_string(coeffs.size()));
  }
  for (std::size_t k = 0; k < coeffs.size(); ++k) coeffs_[k] = reduce(coeffs[k], p);
}

BilinearForm BilinearForm::transpose() const {
  BilinearForm t(p_, dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) t.coeffs_[j * dim_ + i] = at(i, j);
  return t;
}

FpScalar form_eval(const BilinearForm& f, const FpVector& x, const FpVector& y) {
  if (x.p() != f.p() || y.p() != f.p() || x.dim() != f.dim() || y.dim() != f.dim()) {
    throw DimensionMismatch("form_eval: form is " + std::to_string(f.dim()) +
                            "-dimensional over F_" + std::to_string(f.p()));
  }
  long long acc = 0;
  for (std::size_t i = 0; i < f.dim(); ++i) {
    if (x[i] == 0) continue;
    long long row = 0;
    for (std::size_t j = 0; j < f.dim(); ++j) row += f.at(i, j) * y[j];
    acc += x[i] * row;
  }
  return FpScalar(acc, f.p());
}

namespace {
BilinearForm combine_with_transpose(const BilinearForm& f, int sign) {
  BilinearForm out(f.p(), f.dim());
  for (std::size_t i = 0; i < f.dim(); ++i)
    for (std::size_t j = 0; j < f.dim(); ++j)
      out.set(i, j, static_cast<long long>(f.at(i, j)) + sign * static_cast<long long>(f.at(j, i)));
  return out;
}

std::vector<FpVector> form_rows(const BilinearForm& f) {
  std::vector<FpVector> rows;
  rows.reserve(f.dim());
  for (std::size_t i = 0; i < f.dim(); ++i) {
    FpVector r(f.p(), f.dim());
    for (std::size_t j = 0; j < f.dim(); ++j) r.set(j, f.at(i, j));
    rows.push_back(std::move(r));
  }
  return rows;
}
}  // namespace

BilinearForm symm_part(const BilinearForm& f) { return combine_with_transpose(f, +1); }
BilinearForm antisymm_part(const BilinearForm& f) { return combine_with_transpose(f, -1); }

std::size_t rank(const BilinearForm& f) {
  if (f.p() == 2 && f.dim() <= 64) return F2Form(f).rank();
  const auto rows = form_rows(f);
  return matrix_rank(rows);
}

bool is_nondegenerate(const BilinearForm& f) { return rank(f) == f.dim(); }

std::vector<FpVector> slice_kernel(const BilinearForm& f, const FpVector& x) {
  if (x.p() != f.p() || x.dim() != f.dim()) {
    throw DimensionMismatch("slice_kernel: vector does not match form");
  }
  // y -> f(x, y) is the row vector x^T C.
  FpVector functional(f.p(), f.dim());
  for (std::size_t j = 0; j < f.dim(); ++j) {
    long long acc = 0;
    for (std::size_t i = 0; i < f.dim(); ++i) acc += x[i] * f.at(i, j);
    functional.set(j, acc);
  }
  const std::vector<FpVector> rows{functional};
  return nullspace(f.p(), f.dim(), rows);
}

BilinearForm hyperbolic_form(unsigned p, std::size_t n) {
  if (n < 1) throw InvalidArgument("hyperbolic_form: n must be at least 1");
  BilinearForm f(p, 2 * n);
  for (std::size_t i = 0; i < n; ++i) f.set(i, n + i, 1);
  return f;
}

// ---------------------------------------------------------------------------

namespace {

/// In-place reduced row echelon form; returns pivot columns.
std::vector<std::size_t> row_reduce(std::vector<FpVector>& rows) {
  std::vector<std::size_t> pivots;
  if (rows.empty()) return pivots;
  const unsigned p = rows.front().p();
  const std::size_t cols = rows.front().dim();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t pivot = r;
    while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[r], rows[pivot]);
    rows[r] *= inverse(rows[r][c], p);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (k == r || rows[k][c] == 0) continue;
      const Digit factor = rows[k][c];
      rows[k] -= factor * rows[r];
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

}  // namespace

std::size_t matrix_rank(std::span<const FpVector> rows) {
  std::vector<FpVector> work(rows.begin(), rows.end());
  return row_reduce(work).size();
}

std::vector<FpVector> span_basis(std::span<const FpVector> vectors) {
  std::vector<FpVector> work(vectors.begin(), vectors.end());
  row_reduce(work);
  return work;
}

std::vector<FpVector> nullspace(unsigned p, std::size_t dim, std::span<const FpVector> rows) {
  std::vector<FpVector> work(rows.begin(), rows.end());
  for (const auto& r : work) {
    if (r.p() != p || r.dim() != dim) throw DimensionMismatch("nullspace: row shape");
  }
  const auto pivots = row_reduce(work);
  std::vector<bool> is_pivot(dim, false);
  for (auto c : pivots) is_pivot[c] = true;

  std::vector<FpVector> basis;
  for (std::size_t free = 0; free < dim; ++free) {
    if (is_pivot[free]) continue;
    FpVector v(p, dim);
    v.set(free, 1);
    for (std::size_t r = 0; r < pivots.size(); ++r) {
      v.set(pivots[r], -static_cast<long long>(work[r][free]));
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<FpVector> kernel_within(std::span<const FpVector> basis,
                                    std::span<const Digit> values) {
  if (basis.size() != values.size()) {
    throw DimensionMismatch("kernel_within: one value per basis vector required");
  }
  if (basis.empty()) return {};
  const unsigned p = basis.front().p();
  FpVector row(p, basis.size());
  for (std::size_t i = 0; i < values.size(); ++i) row.set(i, values[i]);
  const std::vector<FpVector> rows{row};
  std::vector<FpVector> out;
  for (const auto& coeffs : nullspace(p, basis.size(), rows)) {
    FpVector v(p, basis.front().dim());
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (coeffs[i] != 0) v += coeffs[i] * basis[i];
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<std::vector<FpVector>> hyperplanes(unsigned p, std::size_t dim) {
  require_supported_prime(p);
  std::vector<std::vector<FpVector>> out;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < dim; ++i) total *= p;
  // Functionals normalized so the first nonzero coordinate is 1: one per
  // projective class.
  for (std::uint64_t idx = 1; idx < total; ++idx) {
    const auto functional = FpVector::from_index(p, dim, idx);
    std::size_t lead = dim;
    for (std::size_t i = 0; i < dim; ++i) {
      if (functional[i] != 0) {
        lead = i;
        break;
      }
    }
    if (functional[lead] != 1) continue;
    const std::vector<FpVector> rows{functional};
    out.push_back(nullspace(p, dim, rows));
  }
  return out;
}

// ---------------------------------------------------------------------------

F2Vector F2Vector::pack(const FpVector& v) {
  if (v.p() != 2 || v.dim() > 64) throw InvalidArgument("F2Vector::pack needs F_2, dim <= 64");
  F2Vector out{0, v.dim()};
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (v[i]) out.bits |= std::uint64_t{1} << i;
  }
  return out;
}

FpVector F2Vector::unpack() const {
  FpVector v(2, dim);
  for (std::size_t i = 0; i < dim; ++i) v.set(i, (bits >> i) & 1U);
  return v;
}

F2Form::F2Form(const BilinearForm& f) : rows_(f.dim(), 0) {
  if (f.p() != 2 || f.dim() > 64) throw InvalidArgument("F2Form needs F_2, dim <= 64");
  for (std::size_t i = 0; i < f.dim(); ++i)
    for (std::size_t j = 0; j < f.dim(); ++j)
      if (f.at(i, j)) rows_[i] |= std::uint64_t{1} << j;
}

unsigned F2Form::eval(F2Vector x, F2Vector y) const noexcept {
  unsigned acc = 0;
  for (auto bits = x.bits; bits != 0; bits &= bits - 1) {
    acc += std::popcount(rows_[std::countr_zero(bits)] & y.bits);
  }
  return acc & 1U;
}

std::size_t F2Form::rank() const {
  auto rows = rows_;
  std::size_t r = 0;
  for (std::size_t c = 0; c < rows.size() && r < rows.size(); ++c) {
    const std::uint64_t bit = std::uint64_t{1} << c;
    std::size_t pivot = r;
    while (pivot < rows.size() && !(rows[pivot] & bit)) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[r], rows[pivot]);
    for (std::size_t k = 0; k < rows.size(); ++k)
      if (k != r && (rows[k] & bit)) rows[k] ^= rows[r];
    ++r;
  }
  return r;
}

// ---------------------------------------------------------------------------

BilinearForm parse_form(std::string_view text) {
  std::istringstream in{std::string(text)};
  long long p = 0;
  long long d = -1;
  if (!(in >> p >> d) || d < 0) throw InvalidArgument("form file: expected header \"p d\"");
  if (p < 0 || !is_supported_prime(static_cast<unsigned>(p))) {
    throw InvalidArgument("form file: unsupported prime " + std::to_string(p));
  }
  std::vector<long long> coeffs;
  coeffs.reserve(static_cast<std::size_t>(d * d));
  for (long long k = 0; k < d * d; ++k) {
    long long v = 0;
    if (!(in >> v)) throw InvalidArgument("form file: expected " + std::to_string(d * d) + " coefficients");
    if (v < 0 || v >= p) throw InvalidArgument("form file: coefficient out of range [0, p)");
    coeffs.push_back(v);
  }
  std::string trailing;
  if (in >> trailing) throw InvalidArgument("form file: trailing data");
  return BilinearForm(static_cast<unsigned>(p), static_cast<std::size_t>(d), coeffs);
}

BilinearForm load_form(const std::string& source) {
  constexpr std::string_view kKeyword = "hyperbolic:";
  if (source.starts_with(kKeyword)) {
    const auto rest = std::string_view(source).substr(kKeyword.size());
    const auto colon = rest.find(':');
    unsigned p = 0;
    std::size_t n = 0;
    if (colon == std::string_view::npos) throw InvalidArgument("expected hyperbolic:p:n");
    const auto ps = rest.substr(0, colon);
    const auto ns = rest.substr(colon + 1);
    if (std::from_chars(ps.data(), ps.data() + ps.size(), p).ec != std::errc{} ||
        std::from_chars(ns.data(), ns.data() + ns.size(), n).ec != std::errc{}) {
      throw InvalidArgument("expected hyperbolic:p:n, got " + source);
    }
    require_supported_prime(p);
    return hyperbolic_form(p, n);
  }
  std::ifstream file(source);
  if (!file) throw InvalidArgument("cannot open form file " + source);
  std::stringstream buf;
  buf << file.rdbuf();
  return parse_form(buf.str());
}

std::string format_form(const BilinearForm& f) {
  std::ostringstream out;
  out << f.p() << ' ' << f.dim() << '\n';
  for (std::size_t i = 0; i < f.dim(); ++i) {
    for (std::size_t j = 0; j < f.dim(); ++j) {
      if (j) out << ' ';
      out << static_cast<unsigned>(f.at(i, j));
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace nilprob::fieldlin
