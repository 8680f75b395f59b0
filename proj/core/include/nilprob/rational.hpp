#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "nilprob/error.hpp"

namespace nilprob {

/// Nonnegative exact rational, always stored in lowest terms.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::uint64_t num, std::uint64_t den) : num_(num), den_(den) {
    if (den_ == 0) throw InvalidArgument("Rational: zero denominator");
    reduce();
  }

  std::uint64_t num() const noexcept { return num_; }
  std::uint64_t den() const noexcept { return den_; }
  double to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }
  std::string str() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend Rational operator*(const Rational& a, const Rational& b) {
    // Cross-reduce first so intermediate products stay small.
    const auto g1 = std::gcd(a.num_, b.den_);
    const auto g2 = std::gcd(b.num_, a.den_);
    return Rational((a.num_ / g1) * (b.num_ / g2), (a.den_ / g2) * (b.den_ / g1));
  }

  friend bool operator==(const Rational& a, const Rational& b) = default;

  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    __extension__ using Wide = unsigned __int128;
    const auto lhs = static_cast<Wide>(a.num_) * b.den_;
    const auto rhs = static_cast<Wide>(b.num_) * a.den_;
    return lhs <=> rhs;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
  }

 private:
  void reduce() {
    const auto g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
};

}  // namespace nilprob
