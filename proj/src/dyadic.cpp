#include "enumdist/dyadic.hpp"

#include <stdexcept>

namespace enumdist {

namespace mp = boost::multiprecision;

Dyadic::Dyadic(const BigInt& integer_value) : num_(integer_value), exp_(0) {
  if (num_ < 0) throw std::domain_error("Dyadic: negative value");
  canonicalize();
}

Dyadic Dyadic::scaled(const BigInt& num, std::uint32_t exp) {
  if (num < 0) throw std::domain_error("Dyadic: negative value");
  Dyadic d;
  d.num_ = num;
  d.exp_ = exp;
  d.canonicalize();
  return d;
}

Dyadic Dyadic::pow2(std::int64_t k) {
  if (k >= 0) return Dyadic(BigInt(1) << static_cast<unsigned>(k));
  return scaled(1, static_cast<std::uint32_t>(-k));
}

void Dyadic::canonicalize() {
  if (num_ == 0) {
    exp_ = 0;
    return;
  }
  unsigned tz = mp::lsb(num_);
  if (tz > exp_) tz = exp_;
  if (tz > 0) {
    num_ >>= tz;
    exp_ -= tz;
  }
}

Dyadic& Dyadic::operator+=(const Dyadic& o) {
  std::uint32_t e = exp_ > o.exp_ ? exp_ : o.exp_;
  num_ = (num_ << (e - exp_)) + (o.num_ << (e - o.exp_));
  exp_ = e;
  canonicalize();
  return *this;
}

Dyadic& Dyadic::operator*=(const Dyadic& o) {
  num_ *= o.num_;
  exp_ += o.exp_;
  canonicalize();
  return *this;
}

Dyadic Dyadic::checked_sub(const Dyadic& o) const {
  std::uint32_t e = exp_ > o.exp_ ? exp_ : o.exp_;
  BigInt a = num_ << (e - exp_);
  BigInt b = o.num_ << (e - o.exp_);
  if (a < b) throw std::domain_error("Dyadic: subtraction would be negative");
  return scaled(a - b, e);
}

int Dyadic::cmp(const Dyadic& a, const Dyadic& b) {
  std::uint32_t e = a.exp_ > b.exp_ ? a.exp_ : b.exp_;
  BigInt x = a.num_ << (e - a.exp_);
  BigInt y = b.num_ << (e - b.exp_);
  return x < y ? -1 : (x == y ? 0 : 1);
}

Rational Dyadic::to_rational() const {
  return Rational(num_, BigInt(1) << exp_);
}

BigInt Dyadic::ceil_int() const {
  if (exp_ == 0) return num_;
  return (num_ + (BigInt(1) << exp_) - 1) >> exp_;
}

std::string Dyadic::to_string() const {
  if (exp_ == 0) return num_.str();
  return num_.str() + "/2^" + std::to_string(exp_);
}

Dyadic min(const Dyadic& a, const Dyadic& b) { return a <= b ? a : b; }
Dyadic max(const Dyadic& a, const Dyadic& b) { return a >= b ? a : b; }

std::int64_t ceil_log2(const Dyadic& a) {
  if (a.is_zero()) throw std::domain_error("ceil_log2: zero");
  // num = 2^m exactly gives ceil(log2 num) = m, otherwise msb+1.
  const BigInt& n = a.num();
  std::int64_t m = static_cast<std::int64_t>(mp::msb(n));
  bool pow_of_two = (n == (BigInt(1) << static_cast<unsigned>(m)));
  std::int64_t cl = pow_of_two ? m : m + 1;
  return cl - static_cast<std::int64_t>(a.exp());
}

std::int64_t lognorm(const Dyadic& a) {
  std::int64_t c = ceil_log2(a) - 1;
  return c < 0 ? -c : c;
}

std::int64_t lognorm(const BigInt& a) {
  if (a <= 0) throw std::domain_error("lognorm: nonpositive integer");
  return lognorm(Dyadic(a));
}

std::int64_t lognorm(const Rational& a) {
  if (a <= 0) throw std::domain_error("lognorm: nonpositive value");
  // ceil(log2(p/q)) = the unique c with 2^(c-1) < p/q <= 2^c.
  // ceil(log2 x) = min{c : x <= 2^c}; msb bounds pin it to two candidates.
  BigInt p = numerator(a), q = denominator(a);
  std::int64_t guess = static_cast<std::int64_t>(mp::msb(p)) -
                       static_cast<std::int64_t>(mp::msb(q));
  auto le_pow2 = [&](std::int64_t c) {
    return c >= 0 ? p <= (q << static_cast<unsigned>(c))
                  : (p << static_cast<unsigned>(-c)) <= q;
  };
  std::int64_t c = le_pow2(guess) ? guess : guess + 1;
  std::int64_t v = c - 1;
  return v < 0 ? -v : v;
}

std::optional<std::int64_t> lognorm_opt(const Dyadic& a) {
  if (a.is_zero()) return std::nullopt;
  return lognorm(a);
}

std::string to_string(const Rational& r) {
  BigInt p = numerator(r), q = denominator(r);
  if (q == 1) return p.str();
  return p.str() + "/" + q.str();
}

}  // namespace enumdist
