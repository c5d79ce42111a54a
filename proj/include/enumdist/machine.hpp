#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "enumdist/prefix.hpp"

namespace enumdist {

// Semantics are pinned by docs/instruction_set.md; bump this string for any
// behavioral change, since snapshots and pinned fixtures key on it.
inline constexpr const char* kIsaVersion = "bitvm-1";

// Hard cap on enumeration length; 2^24 tree nodes is the practical desk limit.
inline constexpr std::uint32_t kMaxProgramLen = 24;

enum class Variant : std::uint8_t {
  PrefixDiscrete,
  MonotoneContinuous,
  ConditionalPrefix,
};

struct MachineConfig {
  Variant variant = Variant::PrefixDiscrete;
  Prefix conditional;  // read-only tape, used only by ConditionalPrefix

  // Canonical description string; feeds config hashes.
  std::string describe() const;
};

struct RunOutcome {
  enum class Status : std::uint8_t { Halted, NeedsMoreInput, OutOfBudget, Diverged };
  Status status = Status::NeedsMoreInput;
  Prefix output;
  std::uint64_t steps_used = 0;
  std::uint32_t bits_consumed = 0;
};

const char* to_string(RunOutcome::Status s);

// Runs the machine on the given bits under a step budget. Halting mid-string
// is fine: bits_consumed tells how much of `program` is the actual program.
RunOutcome run_prefix(const Prefix& program, std::uint64_t budget, const MachineConfig& cfg);

// Monotone view of the same run: consumed_at_len[k] is the number of input
// bits the machine had consumed when output length first reached k+1. Used
// for minimal-program accounting in the continuous bound.
struct MonotoneRun {
  RunOutcome::Status status = RunOutcome::Status::NeedsMoreInput;
  Prefix output;
  std::vector<std::uint32_t> consumed_at_len;
  std::uint64_t steps_used = 0;
  std::uint32_t bits_consumed = 0;
};
MonotoneRun run_monotone(const Prefix& stream, std::uint64_t budget, const MachineConfig& cfg);

// Node view handed to walk visitors. `output` references walk-internal
// storage and is only valid during the callback.
struct NodeView {
  RunOutcome::Status status;
  const std::vector<std::uint8_t>& output;
  std::uint64_t steps_used;
};

class WalkVisitor {
 public:
  virtual ~WalkVisitor() = default;
  // Pre-order; `program` is the consumed prefix. Returning false vetoes
  // expansion of this node's children.
  virtual bool enter(const Prefix& program, const NodeView& view) = 0;
  virtual void leave(const Prefix& program) { (void)program; }
};

// Depth-first walk of the consumed-prefix tree, visiting every reachable
// consumption state of length <= max_len under the budget. Children exist
// only below nodes that still want input; discrete variants also prune
// Diverged nodes (no extension ever halts). With a nonempty `root`, its bits
// are fed first and only nodes extending root (root included) are visited;
// returns false if the machine halts or blocks before consuming all of root.
bool walk_programs(std::uint32_t max_len, std::uint64_t budget, const MachineConfig& cfg,
                   WalkVisitor& visitor, const Prefix& root = {});

struct ProgramRecord {
  Prefix program;
  RunOutcome outcome;
};

// Classification of the whole tree in shortlex order, with prefix-free
// pruning below halted (and diverged) nodes.
std::vector<ProgramRecord> enumerate_programs(std::uint32_t max_len, std::uint64_t budget,
                                              const MachineConfig& cfg);

// Human-readable execution log, one line per transition.
std::vector<std::string> trace_run(const Prefix& program, std::uint64_t budget,
                                   const MachineConfig& cfg);

}  // namespace enumdist
