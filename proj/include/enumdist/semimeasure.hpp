#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "enumdist/dyadic.hpp"
#include "enumdist/elemfn.hpp"
#include "enumdist/prefix.hpp"

namespace enumdist {

// Node masses on the full binary tree to a fixed depth. A valid table has
// mass(eps) <= 1 and mass(x) >= mass(x0) + mass(x1) at every internal node;
// equality everywhere makes it a measure to this depth. Validity is not
// enforced on mutation: builders fill tables incrementally and call
// semimeasure_ok() when done.
class SemimeasureTable {
 public:
  SemimeasureTable() : SemimeasureTable(0) {}
  explicit SemimeasureTable(std::uint32_t depth);

  // The uniform measure: 2^-|x| at every node.
  static SemimeasureTable lambda(std::uint32_t depth);
  // `mass` on every node along `path`, continued along the all-zeros branch
  // below it; everything off the path is zero.
  static SemimeasureTable path_mass(const Prefix& path, std::uint32_t depth,
                                    const Dyadic& mass);

  std::uint32_t depth() const { return depth_; }

  const Dyadic& at(const Prefix& node) const;
  const Dyadic& at(std::uint32_t len, std::uint64_t index) const;
  void set(const Prefix& node, const Dyadic& v);
  void add_at(std::uint32_t len, std::uint64_t index, const Dyadic& v);

  bool semimeasure_ok() const;
  bool is_measure() const;  // children sum exactly to the parent everywhere

  // Pointwise comparison on the common depth prefix of the two tables.
  bool dominates(const SemimeasureTable& other) const;

  SemimeasureTable truncated(std::uint32_t new_depth) const;
  // Zero masses below the current depth (sound for any semimeasure).
  SemimeasureTable zero_extended(std::uint32_t new_depth) const;

  friend bool operator==(const SemimeasureTable& a, const SemimeasureTable& b) {
    return a.depth_ == b.depth_ && a.levels_ == b.levels_;
  }
  friend bool operator!=(const SemimeasureTable& a, const SemimeasureTable& b) {
    return !(a == b);
  }

 private:
  std::uint32_t depth_;
  std::vector<std::vector<Dyadic>> levels_;  // levels_[len][Prefix::index]
};

// Masses on pairs of prefixes, one table entry per (x, y) with |x| <= depth1
// and |y| <= depth2. The semimeasure inequality is required per coordinate.
class PairTable {
 public:
  PairTable(std::uint32_t depth1, std::uint32_t depth2);

  std::uint32_t depth1() const { return depth1_; }
  std::uint32_t depth2() const { return depth2_; }

  const Dyadic& at(const Prefix& x, const Prefix& y) const;
  void set(const Prefix& x, const Prefix& y, const Dyadic& v);

  bool semimeasure_ok() const;
  bool is_measure() const;

  // Sum over all y of length `len2` at fixed x.
  Dyadic marginal_first(const Prefix& x, std::uint32_t len2) const;

 private:
  std::size_t slot(std::uint32_t l1, std::uint32_t l2) const;
  std::uint32_t depth1_, depth2_;
  // grids_[l1 * (depth2+1) + l2][i1 * 2^l2 + i2]
  std::vector<std::vector<Dyadic>> grids_;
};

// Mean of f under mu, evaluated against the depth-f masses. Linear for
// measures; for strict semimeasures this is the documented convention (an
// upper bound on the conservative infimum), and f must be nonnegative.
Rational mean(const SemimeasureTable& mu, const ElemFn& f);

// Product semimeasure: mass(x, y) = mu(x) * phi(y).
PairTable product(const SemimeasureTable& mu, const SemimeasureTable& phi);

// Mean of the rectangle function f(alpha) * g(beta) under a pair table.
Rational mean_rectangle(const PairTable& nu, const ElemFn& f, const ElemFn& g);

// Largest measure on the depth-E lattice dominated by mu at every node.
// The result keeps mu's depth: values at depth E.depth equal mu there, values
// above are the induced sums, values below are zero (the non-normative
// zero-splitting convention).
SemimeasureTable coarse_grain(const SemimeasureTable& mu, const Lattice& E);

// Finite transformation of the sequence space. PCTDual: each input node maps
// to a nonempty union of output cylinders, shrinking as the input extends;
// the dual action on functions takes the min of f over the reachable set.
// Concave: each input cell carries an output semimeasure; the action takes
// the mean. Constructors refuse tables violating these shapes.
class OperatorSpec {
 public:
  enum class Kind : std::uint8_t { PCTDual, Concave };

  static OperatorSpec pct(std::uint32_t input_depth, std::uint32_t output_depth,
                          std::map<Prefix, std::vector<Prefix>, LengthLexLess> sets);
  static OperatorSpec identity_pct(std::uint32_t depth);
  // Every input maps to the cylinder of `target`.
  static OperatorSpec constant_pct(std::uint32_t input_depth, const Prefix& target);
  static OperatorSpec concave(std::uint32_t input_depth,
                              std::map<Prefix, SemimeasureTable, LengthLexLess> kernels);

  Kind kind() const { return kind_; }
  std::uint32_t input_depth() const { return input_depth_; }
  std::uint32_t output_depth() const { return output_depth_; }

  // Reachable output set for an input node, as an antichain of cylinder
  // roots; the entry of the deepest specified ancestor applies.
  const std::vector<Prefix>& reach(const Prefix& input) const;
  const SemimeasureTable& kernel(const Prefix& input) const;

  // True when the whole reachable set at this depth-input_depth node lies in
  // one depth-`d` cylinder; that cylinder's root is then written to *out.
  bool reach_in_single_cylinder(const Prefix& input, std::uint32_t d, Prefix* out) const;

  const std::map<Prefix, std::vector<Prefix>, LengthLexLess>& set_table() const {
    return sets_;
  }

 private:
  OperatorSpec() = default;
  Kind kind_ = Kind::PCTDual;
  std::uint32_t input_depth_ = 0;
  std::uint32_t output_depth_ = 0;
  std::map<Prefix, std::vector<Prefix>, LengthLexLess> sets_;
  std::map<Prefix, SemimeasureTable, LengthLexLess> kernels_;
};

// Dual action: g(u) = min of f over the reachable set (PCTDual) or the
// kernel mean of f (Concave). Result has depth input_depth.
ElemFn apply_operator(const OperatorSpec& A, const ElemFn& f);

// Pushforward: node mass of the result at v is phi(A(indicator of v)).
// Requires phi.depth >= A.input_depth; result depth is A.output_depth.
SemimeasureTable push_distribution(const OperatorSpec& A, const SemimeasureTable& phi);

}  // namespace enumdist
