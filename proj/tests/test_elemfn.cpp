#include "enumdist/elemfn.hpp"

#include <stdexcept>

#include "doctest.h"

using namespace enumdist;

TEST_CASE("constants and indicators") {
  ElemFn c = ElemFn::constant(Rational(3, 4));
  CHECK(c.depth() == 0);
  CHECK(c.at(Prefix()) == Rational(3, 4));
  CHECK(c.at(Prefix::from_string("0110")) == Rational(3, 4));

  ElemFn ind = ElemFn::indicator(Prefix::from_string("01"));
  CHECK(ind.depth() == 2);
  CHECK(ind.at(Prefix::from_string("01")) == 1);
  CHECK(ind.at(Prefix::from_string("010")) == 1);
  CHECK(ind.at(Prefix::from_string("00")) == 0);
  CHECK(ind.at(Prefix::from_string("11")) == 0);
  CHECK(ind.nonnegative());
}

TEST_CASE("at rejects nodes above the function depth") {
  ElemFn ind = ElemFn::indicator(Prefix::from_string("01"));
  CHECK_THROWS_AS(ind.at(Prefix::from_string("0")), std::invalid_argument);
  CHECK_THROWS_AS(ind.at(Prefix()), std::invalid_argument);
}

TEST_CASE("lift re-represents without changing the function") {
  ElemFn ind = ElemFn::indicator(Prefix::from_string("1"));
  ElemFn lifted = elemfn_lift(ind, 3);
  CHECK(lifted.depth() == 3);
  CHECK(lifted.node_count() == 8);
  CHECK(extensionally_equal(ind, lifted));
  CHECK(lifted.at(Prefix::from_string("101")) == 1);
  CHECK(lifted.at(Prefix::from_string("010")) == 0);
  CHECK_THROWS_AS(elemfn_lift(lifted, 1), std::invalid_argument);
}

TEST_CASE("lattice operations work pointwise at a common depth") {
  ElemFn a = ElemFn::indicator(Prefix::from_string("0"));   // depth 1
  ElemFn b = ElemFn::indicator(Prefix::from_string("01"));  // depth 2

  ElemFn lo = elemfn_min(a, b);
  CHECK(lo.depth() == 2);
  CHECK(lo.at(Prefix::from_string("01")) == 1);
  CHECK(lo.at(Prefix::from_string("00")) == 0);
  CHECK(extensionally_equal(lo, b));

  ElemFn hi = elemfn_max(a, b);
  CHECK(extensionally_equal(hi, a));

  ElemFn s = elemfn_add(a, b);
  CHECK(s.at(Prefix::from_string("01")) == 2);
  CHECK(s.at(Prefix::from_string("00")) == 1);
  CHECK(s.at(Prefix::from_string("10")) == 0);

  ElemFn half = elemfn_scale(s, Rational(1, 2));
  CHECK(half.at(Prefix::from_string("01")) == 1);
  CHECK(half.at(Prefix::from_string("00")) == Rational(1, 2));
}

TEST_CASE("negative values are representable and detected") {
  ElemFn f(1, std::vector<Rational>{Rational(1), Rational(-1)});
  CHECK(!f.nonnegative());
  CHECK(f.at(Prefix::from_string("1")) == -1);
  ElemFn g = elemfn_scale(f, Rational(-2));
  CHECK(g.at(Prefix::from_string("1")) == 2);
  CHECK(elemfn_min(f, ElemFn::constant(Rational(0))).at(Prefix::from_string("1")) == -1);
}

TEST_CASE("extensional equality ignores representation depth") {
  ElemFn c = ElemFn::constant(Rational(1, 3));
  ElemFn deep(4, Rational(1, 3));
  CHECK(extensionally_equal(c, deep));
  ElemFn tweaked = deep;
  tweaked.at_index(5) = Rational(1, 2);
  CHECK(!extensionally_equal(c, tweaked));
}

TEST_CASE("mutable at_index writes through") {
  ElemFn f(2, Rational(0));
  f.at_index(Prefix::from_string("10").index()) = Rational(7);
  CHECK(f.at(Prefix::from_string("10")) == 7);
  CHECK(f.at(Prefix::from_string("11")) == 0);
}
