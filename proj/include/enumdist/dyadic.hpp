#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace enumdist {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Nonnegative dyadic rational num / 2^exp with arbitrary-precision numerator.
// Kept canonical (num odd, or num == 0 with exp == 0) so that operator== is a
// plain field comparison yet still means value equality.
class Dyadic {
 public:
  Dyadic() : num_(0), exp_(0) {}
  explicit Dyadic(const BigInt& integer_value);
  explicit Dyadic(std::int64_t integer_value) : Dyadic(BigInt(integer_value)) {}

  // num / 2^exp
  static Dyadic scaled(const BigInt& num, std::uint32_t exp);
  // 2^k, k may be negative
  static Dyadic pow2(std::int64_t k);

  const BigInt& num() const { return num_; }
  std::uint32_t exp() const { return exp_; }
  bool is_zero() const { return num_ == 0; }
  bool is_one() const { return num_ == 1 && exp_ == 0; }

  Dyadic& operator+=(const Dyadic& o);
  friend Dyadic operator+(Dyadic a, const Dyadic& b) { return a += b; }
  Dyadic& operator*=(const Dyadic& o);
  friend Dyadic operator*(Dyadic a, const Dyadic& b) { return a *= b; }

  // Exact difference; throws std::domain_error if the result would be negative.
  Dyadic checked_sub(const Dyadic& o) const;

  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.exp_ == b.exp_ && a.num_ == b.num_;
  }
  friend bool operator!=(const Dyadic& a, const Dyadic& b) { return !(a == b); }
  friend bool operator<(const Dyadic& a, const Dyadic& b) { return cmp(a, b) < 0; }
  friend bool operator<=(const Dyadic& a, const Dyadic& b) { return cmp(a, b) <= 0; }
  friend bool operator>(const Dyadic& a, const Dyadic& b) { return cmp(a, b) > 0; }
  friend bool operator>=(const Dyadic& a, const Dyadic& b) { return cmp(a, b) >= 0; }

  Rational to_rational() const;
  BigInt ceil_int() const;

  // "num/2^exp", or just "num" when exp == 0.
  std::string to_string() const;

 private:
  static int cmp(const Dyadic& a, const Dyadic& b);
  void canonicalize();

  BigInt num_;
  std::uint32_t exp_;
};

Dyadic min(const Dyadic& a, const Dyadic& b);
Dyadic max(const Dyadic& a, const Dyadic& b);

// ||a|| = |ceil(log2 a) - 1| for a > 0. Exact; no floating point.
// ||1|| = 1, ||1/8|| = 4, ||3/4|| = 1, ||2|| = 0, ||2^k|| = |k - 1|.
std::int64_t lognorm(const Dyadic& a);
std::int64_t lognorm(const BigInt& a);
std::int64_t lognorm(const Rational& a);

// nullopt for zero instead of throwing; callers map it to an infinite sentinel.
std::optional<std::int64_t> lognorm_opt(const Dyadic& a);

// ceil(log2 a) for a > 0, the inner quantity of lognorm.
std::int64_t ceil_log2(const Dyadic& a);

std::string to_string(const Rational& r);

}  // namespace enumdist
