#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "enumdist/dyadic.hpp"
#include "enumdist/machine.hpp"
#include "enumdist/prefix.hpp"
#include "enumdist/semimeasure.hpp"

namespace enumdist {

// Dovetail schedule: at stage t, all programs of length <= t run for t*t
// steps. Stage 0 runs nothing.
struct Stage {
  std::uint32_t t = 0;
  std::uint32_t max_len() const { return t; }
  std::uint64_t budget() const { return std::uint64_t{t} * t; }
  friend bool operator==(Stage a, Stage b) { return a.t == b.t; }
};

struct EnumConfig {
  MachineConfig machine;
  std::uint32_t tree_depth = 16;  // continuous table depth
  std::uint32_t workers = 1;      // wall time only, never output bytes
  std::uint32_t split_depth = 6;  // subtree fan-out depth for workers

  std::string describe() const;  // canonical, feeds the config hash
};

// The walk variant is a derived mode of one underlying machine, not part of
// the config identity: the same EnumConfig yields the discrete bound through
// a halting walk and the continuous bound through a monotone walk.
MachineConfig discrete_machine(const EnumConfig& cfg);
MachineConfig continuous_machine(const EnumConfig& cfg);

using MassMap = std::map<Prefix, Dyadic, LengthLexLess>;

// Staged lower bound on the discrete universal distribution: mass(x) sums
// 2^-|p| over programs p that halted with output x within the stage budget.
struct DiscreteBound {
  Stage stage;
  MachineConfig machine;
  MassMap mass;
  std::vector<ProgramRecord> halted;  // shortlex, the programs behind `mass`

  Dyadic kraft_sum() const;
  // K_t(x): lognorm of mass(x); nullopt is the infinite sentinel (no program
  // yet). Monotone nonincreasing in the stage.
  std::optional<std::int64_t> complexity(const Prefix& x) const;
};

// Staged lower bound on the continuous (monotone-machine) semimeasure.
struct ContinuousBound {
  Stage stage;
  MachineConfig machine;
  SemimeasureTable tree;

  std::optional<std::int64_t> complexity(const Prefix& x) const;  // KM_t(x)
};

DiscreteBound compute_discrete(Stage stage, const EnumConfig& cfg);
ContinuousBound compute_continuous(Stage stage, const EnumConfig& cfg);

// Next-stage bounds. Stage work is cumulative, so these recompute at t+1 and
// audit pointwise monotonicity against the input exactly, throwing
// std::logic_error on any violation.
DiscreteBound advance_discrete(const DiscreteBound& b, const EnumConfig& cfg);
ContinuousBound advance_continuous(const ContinuousBound& b, const EnumConfig& cfg);

// Weighted sum of semimeasure tables. Weights must sum to at most 1; the
// result is a semimeasure dominating each component scaled by its weight.
SemimeasureTable mixture_semimeasure(
    const std::vector<std::pair<Dyadic, SemimeasureTable>>& components);

// Default summable weight sequence, 2^-(2 * ceil(log2(i + 2))): 1/4, 1/16,
// 1/16, 1/64 x4, ... Dyadic stand-in for the classical 1/(2 i^2).
Dyadic default_mixture_weight(std::size_t i);

}  // namespace enumdist
