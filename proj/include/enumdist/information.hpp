#pragma once

#include <cstdint>
#include <functional>
#include <list>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "enumdist/dyadic.hpp"
#include "enumdist/enumerator.hpp"
#include "enumdist/prefix.hpp"
#include "enumdist/randomness.hpp"
#include "enumdist/semimeasure.hpp"

namespace enumdist {

// Staged mutual-information report. Complexities are upper bounds, so the
// I estimate is a two-sided-uncontrolled difference; every infinite
// component is carried as nullopt rather than silently dropped, and
// i_estimate is present only when all three components are finite.
struct InfoReport {
  Prefix a, b;
  Stage stage;
  std::optional<std::int64_t> k_a, k_b, k_pair;
  std::optional<std::int64_t> i_estimate;  // K_t(a) + K_t(b) - K_t(a,b)
  std::optional<std::int64_t> i_bound;     // filled by info_lower_bound users
  std::optional<std::int64_t> sup_bound;   // filled by info_sup_bound users
  std::optional<Prefix> sup_witness;
};

// I_t(a:b) through the pairing code: K_t(pair) is the complexity of
// pair_encode(a, b).
InfoReport info_finite(const Prefix& a, const Prefix& b, const DiscreteBound& m);

// Conditional enumeration cache: bound(y, stage) is the discrete bound of
// the machine run with conditional tape y. Entries are recomputed on demand
// and kept under an LRU cap, so corpus loops that touch each conditional a
// few times in a row stay cheap without holding every table at once.
class ConditionalRegistry {
 public:
  explicit ConditionalRegistry(EnumConfig base, std::size_t capacity = 64);

  const DiscreteBound& bound(const Prefix& y, Stage stage);

 private:
  using Key = std::pair<std::uint32_t, Prefix>;
  struct KeyLess {
    bool operator()(const Key& a, const Key& b) const {
      if (a.first != b.first) return a.first < b.first;
      return LengthLexLess{}(a.second, b.second);
    }
  };
  EnumConfig base_;
  std::size_t capacity_;
  std::list<std::pair<Key, DiscreteBound>> order_;  // front = most recent
  std::map<Key, std::list<std::pair<Key, DiscreteBound>>::iterator, KeyLess> index_;
};

// i(a:b): lognorm of the ceiling of
//   sum over (x, y) of m_t(x|a) * m_t(y|b) * 2^(I_t(x:y)),
// minus 2. The sum ranges over decodable pairs taken straight from the keys
// of m's mass table with |x|, |y| <= cap; pairs whose I_t is still infinite
// contribute zero (dropping nonnegative terms keeps this a lower bound).
// An empty sum reports -2, the same floor the rarity formula uses.
std::int64_t info_lower_bound(const Prefix& a, const Prefix& b,
                              ConditionalRegistry& cond, const DiscreteBound& m,
                              std::uint32_t cap = 10);

struct SupBound {
  std::optional<std::int64_t> value;  // nullopt when nothing is enumerated yet
  Prefix witness;
};

// sup over x of K_t(x) - K_t(x|a) - K_t(x|b), taken over the x that have all
// three values finite at this stage, with the maximizing x reported.
SupBound info_sup_bound(const Prefix& a, const Prefix& b,
                        ConditionalRegistry& cond, const DiscreteBound& m);

// A computable string map for the conservation harness; nullopt marks the
// points it is not defined at (those samples are skipped and logged).
struct StringMap {
  std::string name;
  std::function<std::optional<Prefix>(const Prefix&)> apply;
};

// identity, drop-last-bit, duplicate, xor-halves.
std::vector<StringMap> standard_transformations();

struct ConservationRecord {
  std::string transform;
  Prefix a, b;
  std::optional<Prefix> image;  // A(a); nullopt when A is partial at a
  std::optional<std::int64_t> i_before;  // I_t(a:b)
  std::optional<std::int64_t> i_after;   // I_t(A(a):b)
  // i_before - i_after when both are finite; negative slack is a violation
  std::optional<std::int64_t> slack;
  bool skipped = false;
  std::string note;
};

struct ConservationSummary {
  std::string transform;
  std::size_t samples = 0;
  std::size_t finite = 0;   // records with a defined slack
  std::size_t skipped = 0;  // partial-A samples
  // max over finite records of (i_after - i_before); the measured c_A.
  // Meaningless when finite == 0.
  std::int64_t max_violation = 0;
};

// Per-sample records of inequality I_t(A(a):b) <= I_t(a:b) + c_A over the
// corpus. Samples with an infinite side carry no slack and are reported
// as-is; partial-A samples are skipped with a note.
std::vector<ConservationRecord> conservation_harness(
    const StringMap& A, const std::vector<std::pair<Prefix, Prefix>>& corpus,
    const DiscreteBound& m);

ConservationSummary summarize_conservation(
    const std::string& transform, const std::vector<ConservationRecord>& records);

// Deterministic corpus of pairs with finite pair complexity at m's stage:
// the decodable pair keys of the mass table, sampled uniformly with the
// given seed (with replacement when the pool is smaller than `count`).
std::vector<std::pair<Prefix, Prefix>> sample_pair_corpus(const DiscreteBound& m,
                                                          std::size_t count,
                                                          std::uint64_t seed);

struct AdjunctionResult {
  std::size_t draws = 0;
  std::size_t finite = 0;
  // mean and max over finite draws of
  //   I_t((a,w):b) - I_t(a:b) - rarity of w under the uniform measure
  Rational mean_excess;
  std::int64_t max_excess = 0;
};

// Randomized-adjunction check: w is drawn from the uniform measure at fixed
// length and adjoined through the pair code; the test-log term is the
// ml_test rarity of w. Draws whose complexities are infinite count toward
// `draws` but not the statistics.
AdjunctionResult randomized_adjunction(const Prefix& a, const Prefix& b,
                                       std::uint32_t w_len, std::size_t draws,
                                       std::uint64_t seed, const DiscreteBound& m);

struct OperatorConservationRecord {
  std::size_t op_index = 0;
  std::size_t phi_index = 0;
  std::int64_t d_before = 0;  // deficiency_semimeasure(phi | mu_reg)
  std::int64_t d_after = 0;   // deficiency_semimeasure(pushforward of phi | mu_reg)
};

// Semimeasure-test conservation: rarity against the regularized reference
// before and after pushing each table through each operator.
std::vector<OperatorConservationRecord> operator_conservation(
    const std::vector<OperatorSpec>& ops,
    const std::vector<SemimeasureTable>& phis, const RegularizedSM& mu_reg,
    const Lattice& E, const std::vector<Dyadic>& grid, const DiscreteBound& m);

}  // namespace enumdist
