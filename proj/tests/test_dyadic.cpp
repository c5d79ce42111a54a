#include "enumdist/dyadic.hpp"

#include <stdexcept>

#include "doctest.h"

using namespace enumdist;

TEST_CASE("construction canonicalizes to an odd numerator") {
  CHECK(Dyadic::scaled(BigInt(4), 4) == Dyadic::scaled(BigInt(1), 2));
  CHECK(Dyadic::scaled(BigInt(4), 4).num() == 1);
  CHECK(Dyadic::scaled(BigInt(4), 4).exp() == 2);
  CHECK(Dyadic::scaled(BigInt(0), 7) == Dyadic());
  CHECK(Dyadic::scaled(BigInt(0), 7).exp() == 0);
  CHECK(Dyadic(BigInt(6)) == Dyadic::scaled(BigInt(12), 1));
}

TEST_CASE("arithmetic is exact at mixed scales") {
  // 1/2 + 1/4 + 1/4 = 1, and the sum leaves canonical form intact
  Dyadic s = Dyadic::pow2(-1) + Dyadic::pow2(-2) + Dyadic::pow2(-2);
  CHECK(s.is_one());

  // 3/4 * 3/4 = 9/16
  Dyadic q = Dyadic::scaled(BigInt(3), 2);
  CHECK(q * q == Dyadic::scaled(BigInt(9), 4));

  CHECK(Dyadic() * Dyadic(BigInt(5)) == Dyadic());
  CHECK(Dyadic::pow2(3) == Dyadic(BigInt(8)));
}

TEST_CASE("comparison follows value, not representation") {
  CHECK(Dyadic::scaled(BigInt(1), 1) < Dyadic::scaled(BigInt(3), 2));
  CHECK(Dyadic::scaled(BigInt(3), 2) < Dyadic(BigInt(1)));
  CHECK(Dyadic() < Dyadic::pow2(-30));
  CHECK(Dyadic::scaled(BigInt(5), 3) <= Dyadic::scaled(BigInt(5), 3));
  CHECK(Dyadic::pow2(-2) > Dyadic::pow2(-3));
}

TEST_CASE("checked_sub refuses to go negative") {
  Dyadic a = Dyadic::scaled(BigInt(3), 2);  // 3/4
  Dyadic b = Dyadic::pow2(-1);              // 1/2
  CHECK(a.checked_sub(b) == Dyadic::pow2(-2));
  CHECK(a.checked_sub(a) == Dyadic());
  CHECK_THROWS_AS(b.checked_sub(a), std::domain_error);
}

TEST_CASE("lognorm on the documented anchor points") {
  CHECK(lognorm(Dyadic(BigInt(1))) == 1);
  CHECK(lognorm(Dyadic::pow2(-3)) == 4);
  CHECK(lognorm(Dyadic::scaled(BigInt(3), 2)) == 1);
  CHECK(lognorm(Dyadic(BigInt(2))) == 0);
  for (std::int64_t k = -12; k <= 12; ++k) {
    std::int64_t expect = k - 1 >= 0 ? k - 1 : 1 - k;
    CHECK(lognorm(Dyadic::pow2(k)) == expect);
  }
  // non-powers round up first: ceil(log2 5) = 3
  CHECK(lognorm(Dyadic(BigInt(5))) == 2);
  CHECK(lognorm(Dyadic::scaled(BigInt(5), 3)) == 1);  // 5/8, ceil = 0
}

TEST_CASE("lognorm agrees across the three numeric carriers") {
  Dyadic d = Dyadic::scaled(BigInt(7), 5);  // 7/32
  CHECK(lognorm(d) == lognorm(d.to_rational()));
  CHECK(lognorm(BigInt(7)) == lognorm(Dyadic(BigInt(7))));
  CHECK(lognorm(Rational(1, 3)) == 2);   // ceil(log2 1/3) = -1
  CHECK(lognorm(Rational(2, 3)) == 1);   // ceil = 0
  CHECK(lognorm(Rational(4, 3)) == 0);   // ceil = 1
}

TEST_CASE("lognorm_opt maps zero to nullopt and nothing else") {
  CHECK(!lognorm_opt(Dyadic()));
  CHECK(lognorm_opt(Dyadic::pow2(-5)) == 6);
}

TEST_CASE("ceil_log2 is the inner quantity of lognorm") {
  CHECK(ceil_log2(Dyadic(BigInt(1))) == 0);
  CHECK(ceil_log2(Dyadic(BigInt(5))) == 3);
  CHECK(ceil_log2(Dyadic::scaled(BigInt(3), 2)) == 0);
  CHECK(ceil_log2(Dyadic::pow2(-4)) == -4);
  CHECK(ceil_log2(Dyadic::scaled(BigInt(9), 3)) == 1);  // 9/8
}

TEST_CASE("ceil_int rounds up exactly") {
  CHECK(Dyadic::scaled(BigInt(1), 3).ceil_int() == 1);
  CHECK(Dyadic(BigInt(4)).ceil_int() == 4);
  CHECK(Dyadic::scaled(BigInt(9), 2).ceil_int() == 3);  // 9/4
  CHECK(Dyadic().ceil_int() == 0);
}

TEST_CASE("string forms") {
  CHECK(Dyadic::scaled(BigInt(3), 2).to_string() == "3/2^2");
  CHECK(Dyadic(BigInt(6)).to_string() == "6");
  CHECK(Dyadic().to_string() == "0");
  CHECK(to_string(Rational(22, 8)) == "11/4");
  CHECK(to_string(Rational(3)) == "3");
}

TEST_CASE("min and max") {
  Dyadic a = Dyadic::pow2(-1), b = Dyadic::scaled(BigInt(3), 2);
  CHECK(min(a, b) == a);
  CHECK(max(a, b) == b);
  CHECK(min(a, a) == a);
}
