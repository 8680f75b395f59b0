#include "nilprob/algebra.hpp"

#include <algorithm>
#include <sstream>

#include "nilprob/error.hpp"

namespace nilprob::algebra {

AlgebraParams::AlgebraParams(BilinearForm f)
    : form_(std::move(f)), symm_(fieldlin::symm_part(form_)), antisymm_(fieldlin::antisymm_part(form_)) {
  if (form_.dim() == 0) throw InvalidArgument("algebra needs dim V >= 1");
  for (std::uint32_t i = 0; i < form_.dim(); ++i)
    for (std::uint32_t j = 0; j < form_.dim(); ++j)
      if (const auto v = form_.at(i, j)) nonzeros_.push_back({i, j, v});
}

std::size_t AlgebraParams::grade_dim(int k) const {
  switch (k) {
    case 0:
    case 4:
      return 1;
    case 1:
    case 3:
      return d();
    case 2:
      return d() * d();
    default:
      return 0;
  }
}

int AlgebraParams::grade_of(std::size_t pos) const {
  if (pos == 0) return 0;
  if (pos < r2_offset()) return 1;
  if (pos < r3_offset()) return 2;
  if (pos < c4_offset()) return 3;
  return 4;
}

ParamsPtr make_params(BilinearForm f) { return std::make_shared<const AlgebraParams>(std::move(f)); }

// ---------------------------------------------------------------------------

AlgebraElement::AlgebraElement(ParamsPtr params) : params_(std::move(params)) {
  if (!params_) throw InvalidArgument("AlgebraElement: null params");
  digits_.assign(params_->element_size(), 0);
}

AlgebraElement AlgebraElement::one(ParamsPtr params) { return scalar(std::move(params), 1); }

AlgebraElement AlgebraElement::scalar(ParamsPtr params, long long c) {
  AlgebraElement a(std::move(params));
  a.set_digit(0, c);
  return a;
}

namespace {
void require_vector(const AlgebraParams& params, const FpVector& x) {
  if (x.p() != params.p() || x.dim() != params.d()) {
    throw DimensionMismatch("vector does not belong to V = F_" + std::to_string(params.p()) +
                            "^" + std::to_string(params.d()));
  }
}
}  // namespace

AlgebraElement AlgebraElement::from_r1(ParamsPtr params, const FpVector& x) {
  require_vector(*params, x);
  AlgebraElement a(std::move(params));
  std::copy(x.coords().begin(), x.coords().end(), a.digits_.begin() + a.params_->r1_offset());
  return a;
}

AlgebraElement AlgebraElement::tensor(ParamsPtr params, const FpVector& x, const FpVector& y) {
  require_vector(*params, x);
  require_vector(*params, y);
  AlgebraElement a(std::move(params));
  const auto d = a.d();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) a.set_digit(a.params_->r2_offset() + i * d + j, x[i] * y[j]);
  return a;
}

AlgebraElement AlgebraElement::theta(ParamsPtr params, const FpVector& x) {
  require_vector(*params, x);
  AlgebraElement a(std::move(params));
  std::copy(x.coords().begin(), x.coords().end(), a.digits_.begin() + a.params_->r3_offset());
  return a;
}

AlgebraElement AlgebraElement::top(ParamsPtr params, long long c) {
  AlgebraElement a(std::move(params));
  a.set_digit(a.params_->c4_offset(), c);
  return a;
}

AlgebraElement AlgebraElement::basis(ParamsPtr params, std::size_t k) {
  AlgebraElement a(std::move(params));
  a.digits_.at(k) = 1;
  return a;
}

FpVector AlgebraElement::r1_vector() const {
  FpVector v(p(), d());
  for (std::size_t i = 0; i < d(); ++i) v.set(i, r1(i));
  return v;
}

FpVector AlgebraElement::r3_vector() const {
  FpVector v(p(), d());
  for (std::size_t i = 0; i < d(); ++i) v.set(i, r3(i));
  return v;
}

AlgebraElement AlgebraElement::component(int k) const {
  AlgebraElement out(params_);
  for (std::size_t pos = 0; pos < digits_.size(); ++pos)
    if (params_->grade_of(pos) == k) out.digits_[pos] = digits_[pos];
  return out;
}

AlgebraElement AlgebraElement::tail(int k) const {
  AlgebraElement out(params_);
  for (std::size_t pos = 0; pos < digits_.size(); ++pos)
    if (params_->grade_of(pos) >= k) out.digits_[pos] = digits_[pos];
  return out;
}

bool AlgebraElement::is_zero() const noexcept {
  return std::all_of(digits_.begin(), digits_.end(), [](Digit d) { return d == 0; });
}

void require_same_params(const AlgebraElement& a, const AlgebraElement& b) {
  if (!a.params()->same_as(*b.params())) {
    throw DimensionMismatch("algebra elements belong to different algebras");
  }
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
  require_same_params(*this, o);
  const unsigned p = this->p();
  for (std::size_t i = 0; i < digits_.size(); ++i) digits_[i] = static_cast<Digit>((digits_[i] + o.digits_[i]) % p);
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& o) {
  require_same_params(*this, o);
  const unsigned p = this->p();
  for (std::size_t i = 0; i < digits_.size(); ++i) digits_[i] = static_cast<Digit>((digits_[i] + p - o.digits_[i]) % p);
  return *this;
}

AlgebraElement AlgebraElement::operator-() const {
  AlgebraElement out(params_);
  const unsigned p = this->p();
  for (std::size_t i = 0; i < digits_.size(); ++i) out.digits_[i] = static_cast<Digit>((p - digits_[i]) % p);
  return out;
}

AlgebraElement operator*(long long c, const AlgebraElement& a) {
  AlgebraElement out(a.params_);
  const Digit k = fieldlin::reduce(c, a.p());
  for (std::size_t i = 0; i < a.digits_.size(); ++i) out.digits_[i] = static_cast<Digit>((k * a.digits_[i]) % a.p());
  return out;
}

// ---------------------------------------------------------------------------

AlgebraElement alg_mul(const AlgebraElement& a, const AlgebraElement& b) {
  require_same_params(a, b);
  const AlgebraParams& P = *a.params();
  const std::size_t d = P.d();
  const unsigned p = P.p();
  const auto nz = P.nonzeros();

  const Digit* x = a.digits().data();
  const Digit* y = b.digits().data();
  const Digit a0 = x[0], b0 = y[0];
  const Digit* a1 = x + P.r1_offset();
  const Digit* b1 = y + P.r1_offset();
  const Digit* A2 = x + P.r2_offset();
  const Digit* B2 = y + P.r2_offset();
  const Digit* a3 = x + P.r3_offset();
  const Digit* b3 = y + P.r3_offset();

  std::vector<long> acc(P.element_size(), 0);
  long* c2 = acc.data() + P.r2_offset();
  long* c3 = acc.data() + P.r3_offset();
  long& c4 = acc[P.c4_offset()];

  // R0 acts by scalars on both sides.
  acc[0] = a0 * b0;
  if (a0 || b0) {
    for (std::size_t k = 1; k < acc.size(); ++k) acc[k] = a0 * y[k] + b0 * x[k];
  }

  // R1 x R1 -> R2: the universal map.
  for (std::size_t i = 0; i < d; ++i) {
    if (!a1[i]) continue;
    for (std::size_t j = 0; j < d; ++j) c2[i * d + j] += a1[i] * b1[j];
  }

  // s(M) = sum_ij M_ij f(e_i, e_j).
  long sA = 0, sB = 0;
  for (const auto& e : nz) {
    sA += e.value * A2[e.row * d + e.col];
    sB += e.value * B2[e.row * d + e.col];
  }

  // R2 x R1 -> R3: (e_i e_j) z = f(e_j, z) e_i^theta + f(e_i, e_j) z^theta.
  {
    std::vector<long> Fz(d, 0);
    for (const auto& e : nz) Fz[e.row] += e.value * b1[e.col];
    for (std::size_t i = 0; i < d; ++i) {
      long s = sA * b1[i];
      for (std::size_t j = 0; j < d; ++j) s += A2[i * d + j] * Fz[j];
      c3[i] += s;
    }
  }
  // R1 x R2 -> R3: z (e_i e_j) = f(z, e_i) e_j^theta + f(e_i, e_j) z^theta.
  {
    std::vector<long> Ftz(d, 0);
    for (const auto& e : nz) Ftz[e.col] += e.value * a1[e.row];
    for (std::size_t j = 0; j < d; ++j) {
      long s = sB * a1[j];
      for (std::size_t i = 0; i < d; ++i) s += B2[i * d + j] * Ftz[i];
      c3[j] += s;
    }
  }

  // R1 x R3 and R3 x R1 -> R4.
  for (const auto& e : nz) c4 += e.value * (a1[e.row] * b3[e.col] + a3[e.row] * b1[e.col]);

  // R2 x R2 -> R4: (e_i e_j)(e_k e_l) = f_ij f_kl + f_jk f_il.
  c4 += sA * sB;
  for (const auto& jk : nz) {
    for (const auto& il : nz) {
      c4 += static_cast<long>(jk.value) * il.value * A2[il.row * d + jk.row] * B2[jk.col * d + il.col];
    }
  }

  AlgebraElement out(a.params());
  auto digits = out.mutable_digits();
  for (std::size_t k = 0; k < acc.size(); ++k) digits[k] = fieldlin::reduce(acc[k], p);
  return out;
}

AlgebraElement lie_bracket(const AlgebraElement& a, const AlgebraElement& b) {
  return alg_mul(a, b) - alg_mul(b, a);
}

FpVector lie3_closed(const AlgebraParams& params, const FpVector& x, const FpVector& y,
                     const FpVector& z) {
  const auto syz = fieldlin::form_eval(params.symm(), y, z);
  const auto sxz = fieldlin::form_eval(params.symm(), x, z);
  return syz.value * x - sxz.value * y;
}

FpScalar lie4_closed(const AlgebraParams& params, const FpVector& x, const FpVector& y,
                     const FpVector& z, const FpVector& w) {
  const auto& S = params.symm();
  const auto& A = params.antisymm();
  return fieldlin::form_eval(A, x, w) * fieldlin::form_eval(S, y, z) -
         fieldlin::form_eval(A, y, w) * fieldlin::form_eval(S, x, z);
}

// ---------------------------------------------------------------------------

std::string format_element(const AlgebraElement& a) {
  std::ostringstream out;
  const auto d = a.d();
  const auto digit = [&](Digit v) { out << static_cast<char>('0' + v); };
  digit(a.c0());
  out << " | ";
  for (std::size_t i = 0; i < d; ++i) digit(a.r1(i));
  out << " | ";
  for (std::size_t i = 0; i < d; ++i) {
    if (i) out << ' ';
    for (std::size_t j = 0; j < d; ++j) digit(a.r2(i, j));
  }
  out << " | ";
  for (std::size_t i = 0; i < d; ++i) digit(a.r3(i));
  out << " | ";
  digit(a.c4());
  return out.str();
}

AlgebraElement parse_element(ParamsPtr params, std::string_view text) {
  AlgebraElement a(params);
  const auto d = params->d();
  std::vector<Digit> digits;
  std::vector<std::size_t> group_sizes;  // digits per '|' section
  std::size_t current = 0;
  for (char ch : text) {
    if (ch == '|') {
      group_sizes.push_back(current);
      current = 0;
    } else if (ch >= '0' && ch <= '9') {
      const unsigned v = static_cast<unsigned>(ch - '0');
      if (v >= params->p()) throw InvalidArgument("element text: digit out of range for F_" + std::to_string(params->p()));
      digits.push_back(static_cast<Digit>(v));
      ++current;
    } else if (ch != ' ' && ch != '\t' && ch != '\n' && ch != '\r') {
      throw InvalidArgument(std::string("element text: unexpected character '") + ch + "'");
    }
  }
  group_sizes.push_back(current);
  const std::vector<std::size_t> expected{1, d, d * d, d, 1};
  if (group_sizes != expected) {
    throw InvalidArgument("element text: expected \"c0 | r1 | r2-rows | r3 | c4\" with d = " + std::to_string(d));
  }
  std::copy(digits.begin(), digits.end(), a.mutable_digits().begin());
  return a;
}

}  // namespace nilprob::algebra
