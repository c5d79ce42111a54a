#pragma once

#include <cstdint>
#include <vector>

#include "enumdist/dyadic.hpp"
#include "enumdist/prefix.hpp"

namespace enumdist {

// The finite function lattice: all elementary functions of depth <= depth.
struct Lattice {
  std::uint32_t depth = 0;
};

// Elementary function: constant on depth-n cylinders, i.e. one rational value
// per length-n bit string. Values may be negative; distribution masses are
// Dyadic, function values are general rationals by design.
class ElemFn {
 public:
  ElemFn() : depth_(0), values_(1, Rational(0)) {}
  ElemFn(std::uint32_t depth, Rational fill);
  ElemFn(std::uint32_t depth, std::vector<Rational> values);

  static ElemFn constant(const Rational& c) { return ElemFn(0, c); }
  // Indicator of the cylinder [node] as a depth-|node| function.
  static ElemFn indicator(const Prefix& node);

  std::uint32_t depth() const { return depth_; }
  std::size_t node_count() const { return values_.size(); }
  const Rational& at_index(std::uint64_t i) const { return values_[i]; }
  Rational& at_index(std::uint64_t i) { return values_[i]; }
  // Value at a node of length >= depth (the function is constant below its
  // own depth). Shorter nodes have no single value and are rejected.
  const Rational& at(const Prefix& node) const;

  bool nonnegative() const;

 private:
  std::uint32_t depth_;
  std::vector<Rational> values_;  // index = Prefix::index() at depth_
};

// Exact re-representation at a deeper level. newDepth < f.depth() throws:
// cannot coarsen exactly.
ElemFn elemfn_lift(const ElemFn& f, std::uint32_t new_depth);

ElemFn elemfn_min(const ElemFn& f, const ElemFn& g);
ElemFn elemfn_max(const ElemFn& f, const ElemFn& g);
ElemFn elemfn_add(const ElemFn& f, const ElemFn& g);
ElemFn elemfn_scale(const ElemFn& f, const Rational& c);

// Equality as functions on the tree, i.e. after lifting to a common depth.
bool extensionally_equal(const ElemFn& f, const ElemFn& g);

}  // namespace enumdist
