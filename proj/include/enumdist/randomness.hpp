#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "enumdist/dyadic.hpp"
#include "enumdist/elemfn.hpp"
#include "enumdist/enumerator.hpp"
#include "enumdist/prefix.hpp"
#include "enumdist/semimeasure.hpp"

namespace enumdist {

// Staged value of a randomness test at one prefix. Ratios against arbitrary
// measure tables leave the dyadic lattice, so the value is a full rational.
// `infinite` marks a zero-mass prefix under the reference measure; `value`
// is meaningless then.
struct TestValue {
  Rational value;
  Stage stage;
  bool infinite = false;
};

// Integer rarity of a test value. The sign is part of the value: tests near
// zero give -2 or -1 by the defining formula, and nothing clamps them.
struct Deficiency {
  std::int64_t value = 0;
  bool infinite = false;
  Prefix prefix;  // the prefix the test was evaluated at; empty for
                  // whole-table deficiencies
  Stage stage;
};

// T_mu(x): sum over i <= |x| of m_t(x_[i]) / mu(x_[i]), the i = 0 term
// included. Exact; monotone nondecreasing in stage and in |x|. Requires
// |x| <= mu.depth(); a zero-mass prefix under mu makes the test infinite.
TestValue ml_test(const SemimeasureTable& mu, const Prefix& x,
                  const DiscreteBound& m);

// The uniform-measure instance of the test as a lattice function:
// value at a depth-`depth` node x is sum over i <= |x| of 2^i * m_t(x_[i]).
// The `depth`-truncated test; its lambda-mean equals the total discrete mass
// at lengths <= depth and so never exceeds 1.
ElemFn ml_test_lambda(const DiscreteBound& m, std::uint32_t depth);

// d = lognorm(ceil T) - 2 for finite T > 0. T = 0 reports -2, the formula's
// floor over small positive values. Infinite tests pass the sentinel through.
Deficiency deficiency(const TestValue& t, const Prefix& x);

// Complexity-gap form: sup over i <= |x| of lognorm(mu(x_[i])) - K_t(x_[i]),
// skipping prefixes with no halted program yet. Tracks deficiency(ml_test)
// within a machine-dependent constant. Throws std::invalid_argument when
// every term is skipped (empty stage).
std::int64_t deficiency_gap(const SemimeasureTable& mu, const Prefix& x,
                            const DiscreteBound& m);

// {0} union {2^j : -g <= j <= g}, ascending. The candidate value set for the
// surrogate sup.
std::vector<Dyadic> dyadic_grid(std::int64_t g);

// Pointwise-largest grid-valued nonnegative f on lattice E with
// apply_operator(A, f) <= t_lambda at every depth-input_depth cell.
// t_lambda must have depth A.input_depth(). The sup is taken per node:
// cylinder singletons realize it, so no search is needed. Monotone under
// grid refinement and under pointwise growth of t_lambda. Empty grid gives
// the zero function.
ElemFn surrogate_test(const OperatorSpec& A, const Lattice& E,
                      const std::vector<Dyadic>& grid, const ElemFn& t_lambda);

// The stage-t machine as a transformation of sequences: a program prefix
// reaches exactly the cylinder of its settled output, truncated to
// out_depth. Programs run with the stage budget; in_depth is how much
// program tape the operator reads (stage.max_len() recovers the full
// stage-t machine).
OperatorSpec machine_operator(Stage stage, const EnumConfig& cfg,
                              std::uint32_t in_depth, std::uint32_t out_depth);

// Prefix-dispatch combination: input C(i) . w routes to library operator i,
// with C the self-delimiting count code, so operator i owns input mass
// 2^-|C(i)|. A singleton library dispatches without a prefix and is returned
// unchanged. Cylinder-set operators only; kernel operators do not compose by
// input routing.
OperatorSpec dispatch_operator(const std::vector<OperatorSpec>& library);

// Product of regularization: the dispatch of the surviving library, its
// pushforward of the uniform measure, and the audit trail.
struct RegularizedSM {
  SemimeasureTable source;  // the stage table the certificates were checked against
  OperatorSpec combined;    // dispatch of the survivors
  SemimeasureTable result;  // ubar = combined(lambda)
  std::vector<std::size_t> evicted;     // original library indices, ascending
  std::vector<std::string> eviction_log;  // one line per eviction
  bool factor_two_ok = false;  // source <= 2 * result on the common depth
};

// Keeps the operators whose lambda-pushforward stays under `mu` nodewise
// (the by-construction certificate, re-audited here), evicts the rest with a
// log line, and dispatches the survivors. Evicted operators never contribute
// mass: dispatch codes are assigned to survivors only. factor_two_ok records
// mu <= 2 * ubar, which holds whenever a generator of mu survives at library
// position 0. Throws std::invalid_argument if no operator survives.
RegularizedSM regularize(const SemimeasureTable& mu,
                         const std::vector<OperatorSpec>& library);

// Whole-semimeasure deficiency: the mean under coarse_grain(phi, E) of the
// surrogate test of mu's regularized operator, pushed through the rarity
// formula. phi must be at least E.depth deep.
Deficiency deficiency_semimeasure(const SemimeasureTable& phi,
                                  const RegularizedSM& mu_reg, const Lattice& E,
                                  const std::vector<Dyadic>& grid,
                                  const DiscreteBound& m);

}  // namespace enumdist
