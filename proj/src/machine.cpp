#include "enumdist/machine.hpp"

#include <algorithm>
#include <stdexcept>

namespace enumdist {

namespace {

enum class Op : std::uint8_t { Halt, EmitH, EmitC, Stream, YCopy, Read, SkipZ, Dub };

// Phases with pending work; Fetch/LenField/Payload/StreamLoop/ReadBit consume
// the next input bit, DubHeader/DubSecond/YEmit emit without consuming.
enum class Phase : std::uint8_t {
  Fetch,
  LenField,
  Payload,
  ReadBit,
  StreamLoop,
  DubHeader,
  DubSecond,
  YEmit,
  Done,
};

struct VmState {
  Phase phase = Phase::Fetch;
  Op op = Op::Halt;
  bool skipping = false;
  bool ycopy_all = false;
  std::uint8_t ones = 0;
  std::uint8_t len_bits = 0;
  std::uint8_t len_val = 0;
  std::uint16_t remaining = 0;
  std::uint16_t emit_pos = 0;
  std::vector<std::uint8_t> header;  // DUB pair-code prefix, emitted before payload
  std::vector<std::uint8_t> dub;     // DUB payload, emitted again after payload
  std::vector<std::uint8_t> stack;
  std::vector<std::uint8_t> out;
  std::uint32_t ypos = 0;
  std::uint64_t steps = 0;
};

bool internal_pending(Phase p) {
  return p == Phase::DubHeader || p == Phase::DubSecond || p == Phase::YEmit;
}

// Ends the current instruction while in skip mode.
void end_skipped(VmState& st) {
  st.skipping = false;
  st.phase = Phase::Fetch;
}

void opcode_complete(VmState& st, Op op) {
  st.op = op;
  switch (op) {
    case Op::Halt:
      if (st.skipping) end_skipped(st);
      else st.phase = Phase::Done;
      break;
    case Op::Stream:
      if (st.skipping) end_skipped(st);
      else st.phase = Phase::StreamLoop;
      break;
    case Op::Read:
      st.phase = Phase::ReadBit;
      break;
    case Op::SkipZ:
      if (st.skipping) {
        end_skipped(st);  // skipped SKIPZ does not pop
      } else {
        std::uint8_t b = 0;
        if (!st.stack.empty()) {
          b = st.stack.back();
          st.stack.pop_back();
        }
        if (b == 0) st.skipping = true;
        st.phase = Phase::Fetch;
      }
      break;
    case Op::EmitH:
    case Op::EmitC:
    case Op::YCopy:
    case Op::Dub:
      st.phase = Phase::LenField;
      st.len_bits = 0;
      st.len_val = 0;
      break;
  }
}

void length_complete(VmState& st, const MachineConfig& cfg) {
  std::uint16_t n = st.len_val;
  switch (st.op) {
    case Op::EmitH:
      if (n == 0) {
        if (st.skipping) end_skipped(st);
        else st.phase = Phase::Done;
      } else {
        st.remaining = n;
        st.phase = Phase::Payload;
      }
      break;
    case Op::EmitC:
      if (n == 0) {
        if (st.skipping) end_skipped(st);
        else st.phase = Phase::Fetch;
      } else {
        st.remaining = n;
        st.phase = Phase::Payload;
      }
      break;
    case Op::Dub:
      if (st.skipping) {
        if (n == 0) {
          end_skipped(st);
        } else {
          st.remaining = n;
          st.phase = Phase::Payload;
        }
      } else {
        st.header = encode_count(n).bits();
        st.dub.clear();
        st.remaining = n;
        st.emit_pos = 0;
        st.phase = Phase::DubHeader;
      }
      break;
    case Op::YCopy: {
      if (st.skipping) {
        end_skipped(st);
        break;
      }
      std::uint32_t rem = 0;
      if (cfg.variant == Variant::ConditionalPrefix)
        rem = static_cast<std::uint32_t>(cfg.conditional.size()) - st.ypos;
      st.ycopy_all = (n == 0);
      std::uint32_t take = st.ycopy_all ? rem : std::min<std::uint32_t>(n, rem);
      if (take > 0) {
        st.remaining = static_cast<std::uint16_t>(take);
        st.phase = Phase::YEmit;
      } else if (st.ycopy_all) {
        st.phase = Phase::Done;  // empty tape: emit nothing, still halt
      } else {
        st.phase = Phase::Fetch;
      }
      break;
    }
    default:
      throw std::logic_error("length field without operand op");
  }
}

void apply_consume(VmState& st, std::uint8_t bit, const MachineConfig& cfg) {
  switch (st.phase) {
    case Phase::Fetch:
      if (bit == 1) {
        ++st.ones;
        if (st.ones == 7) {
          st.ones = 0;
          opcode_complete(st, Op::Dub);
        }
      } else {
        static constexpr Op by_ones[7] = {Op::Halt,  Op::EmitH, Op::EmitC, Op::Stream,
                                          Op::YCopy, Op::Read,  Op::SkipZ};
        Op op = by_ones[st.ones];
        st.ones = 0;
        opcode_complete(st, op);
      }
      break;
    case Phase::LenField:
      st.len_val = static_cast<std::uint8_t>((st.len_val << 1) | bit);
      if (++st.len_bits == 4) length_complete(st, cfg);
      break;
    case Phase::Payload:
      if (!st.skipping) {
        st.out.push_back(bit);
        if (st.op == Op::Dub) st.dub.push_back(bit);
      }
      if (--st.remaining == 0) {
        switch (st.op) {
          case Op::EmitH:
            if (st.skipping) end_skipped(st);
            else st.phase = Phase::Done;
            break;
          case Op::EmitC:
            if (st.skipping) end_skipped(st);
            else st.phase = Phase::Fetch;
            break;
          case Op::Dub:
            if (st.skipping) {
              end_skipped(st);
            } else {
              st.emit_pos = 0;
              st.phase = Phase::DubSecond;
            }
            break;
          default:
            throw std::logic_error("payload without payload op");
        }
      }
      break;
    case Phase::ReadBit:
      if (st.skipping) end_skipped(st);
      else {
        st.stack.push_back(bit);
        st.phase = Phase::Fetch;
      }
      break;
    case Phase::StreamLoop:
      st.out.push_back(bit);
      break;
    default:
      throw std::logic_error("consume in non-consuming phase");
  }
}

void apply_internal(VmState& st, const MachineConfig& cfg) {
  switch (st.phase) {
    case Phase::DubHeader:
      st.out.push_back(st.header[st.emit_pos]);
      if (++st.emit_pos == st.header.size()) {
        if (st.remaining > 0) st.phase = Phase::Payload;
        else st.phase = Phase::Done;  // DUB of the empty string: header only
      }
      break;
    case Phase::DubSecond:
      st.out.push_back(st.dub[st.emit_pos]);
      if (++st.emit_pos == st.dub.size()) st.phase = Phase::Done;
      break;
    case Phase::YEmit:
      st.out.push_back(cfg.conditional[st.ypos]);
      ++st.ypos;
      if (--st.remaining == 0) st.phase = st.ycopy_all ? Phase::Done : Phase::Fetch;
      break;
    default:
      throw std::logic_error("internal step in consuming phase");
  }
}

// Runs emissions that need no input until the machine halts, wants a bit, or
// the budget is exhausted.
void settle(VmState& st, std::uint64_t budget, const MachineConfig& cfg) {
  while (internal_pending(st.phase) && st.steps < budget) {
    apply_internal(st, cfg);
    ++st.steps;
  }
}

RunOutcome::Status blocked_status(const VmState& st, bool input_exhausted) {
  if (st.phase == Phase::Done) return RunOutcome::Status::Halted;
  if (st.phase == Phase::StreamLoop) return RunOutcome::Status::Diverged;
  if (internal_pending(st.phase)) return RunOutcome::Status::OutOfBudget;
  return input_exhausted ? RunOutcome::Status::NeedsMoreInput : RunOutcome::Status::OutOfBudget;
}

Prefix to_prefix(const std::vector<std::uint8_t>& bits) { return Prefix(bits); }

}  // namespace

std::string MachineConfig::describe() const {
  std::string v;
  switch (variant) {
    case Variant::PrefixDiscrete: v = "prefix"; break;
    case Variant::MonotoneContinuous: v = "monotone"; break;
    case Variant::ConditionalPrefix: v = "conditional"; break;
  }
  std::string s = std::string(kIsaVersion) + ";variant=" + v;
  if (variant == Variant::ConditionalPrefix) s += ";y=" + conditional.to_string();
  return s;
}

const char* to_string(RunOutcome::Status s) {
  switch (s) {
    case RunOutcome::Status::Halted: return "halted";
    case RunOutcome::Status::NeedsMoreInput: return "needs-more-input";
    case RunOutcome::Status::OutOfBudget: return "out-of-budget";
    case RunOutcome::Status::Diverged: return "diverged";
  }
  return "?";
}

RunOutcome run_prefix(const Prefix& program, std::uint64_t budget, const MachineConfig& cfg) {
  VmState st;
  std::size_t pos = 0;
  while (true) {
    settle(st, budget, cfg);
    if (st.phase == Phase::Done) break;
    if (internal_pending(st.phase)) break;  // budget hit mid-emission
    if (pos == program.size()) {
      return {blocked_status(st, true), to_prefix(st.out), st.steps,
              static_cast<std::uint32_t>(pos)};
    }
    if (st.steps == budget) break;
    apply_consume(st, program[pos++], cfg);
    ++st.steps;
  }
  return {blocked_status(st, false), to_prefix(st.out), st.steps,
          static_cast<std::uint32_t>(pos)};
}

MonotoneRun run_monotone(const Prefix& stream, std::uint64_t budget, const MachineConfig& cfg) {
  VmState st;
  std::size_t pos = 0;
  MonotoneRun r;
  auto note_growth = [&] {
    while (r.consumed_at_len.size() < st.out.size())
      r.consumed_at_len.push_back(static_cast<std::uint32_t>(pos));
  };
  while (true) {
    while (internal_pending(st.phase) && st.steps < budget) {
      apply_internal(st, cfg);
      ++st.steps;
      note_growth();
    }
    if (st.phase == Phase::Done || internal_pending(st.phase)) break;
    if (pos == stream.size()) {
      r.status = blocked_status(st, true);
      r.output = to_prefix(st.out);
      r.steps_used = st.steps;
      r.bits_consumed = static_cast<std::uint32_t>(pos);
      return r;
    }
    if (st.steps == budget) break;
    apply_consume(st, stream[pos++], cfg);
    ++st.steps;
    note_growth();
  }
  r.status = blocked_status(st, false);
  r.output = to_prefix(st.out);
  r.steps_used = st.steps;
  r.bits_consumed = static_cast<std::uint32_t>(pos);
  return r;
}

namespace {

struct Walker {
  std::uint32_t max_len;
  std::uint64_t budget;
  const MachineConfig& cfg;
  WalkVisitor& visitor;
  bool prune_diverged;
  Prefix path;

  // `st` has just consumed path's last bit (or is fresh at the root).
  void node(VmState st) {
    settle(st, budget, cfg);
    RunOutcome::Status status;
    bool expand = false;
    if (st.phase == Phase::Done) {
      status = RunOutcome::Status::Halted;
    } else if (internal_pending(st.phase)) {
      status = RunOutcome::Status::OutOfBudget;
    } else {
      bool streaming = st.phase == Phase::StreamLoop;
      if (path.size() == max_len) {
        status = streaming ? RunOutcome::Status::Diverged : RunOutcome::Status::NeedsMoreInput;
      } else if (st.steps == budget) {
        status = streaming ? RunOutcome::Status::Diverged : RunOutcome::Status::OutOfBudget;
      } else {
        status = streaming ? RunOutcome::Status::Diverged : RunOutcome::Status::NeedsMoreInput;
        expand = !(streaming && prune_diverged);
      }
    }
    NodeView view{status, st.out, st.steps};
    bool allowed = visitor.enter(path, view);
    if (expand && allowed) {
      for (std::uint8_t b = 0; b < 2; ++b) {
        VmState child = (b == 1) ? std::move(st) : st;
        apply_consume(child, b, cfg);
        ++child.steps;
        path.push_back(b);
        node(std::move(child));
        path.pop_back();
      }
    }
    visitor.leave(path);
  }
};

}  // namespace

bool walk_programs(std::uint32_t max_len, std::uint64_t budget, const MachineConfig& cfg,
                   WalkVisitor& visitor, const Prefix& root) {
  if (max_len > kMaxProgramLen) throw std::invalid_argument("walk_programs: max_len too large");
  if (root.size() > max_len) throw std::invalid_argument("walk_programs: root longer than max_len");
  VmState st;
  for (std::size_t i = 0; i < root.size(); ++i) {
    settle(st, budget, cfg);
    if (st.phase == Phase::Done || internal_pending(st.phase)) return false;
    if (st.steps == budget) return false;
    if (st.phase == Phase::StreamLoop && cfg.variant != Variant::MonotoneContinuous)
      return false;
    apply_consume(st, root[i], cfg);
    ++st.steps;
  }
  Walker w{max_len, budget, cfg, visitor, cfg.variant != Variant::MonotoneContinuous, root};
  w.node(std::move(st));
  return true;
}

namespace {

struct CollectVisitor : WalkVisitor {
  std::vector<ProgramRecord>* records;
  bool enter(const Prefix& program, const NodeView& view) override {
    records->push_back({program,
                        {view.status, Prefix(view.output), view.steps_used,
                         static_cast<std::uint32_t>(program.size())}});
    return true;
  }
};

}  // namespace

std::vector<ProgramRecord> enumerate_programs(std::uint32_t max_len, std::uint64_t budget,
                                              const MachineConfig& cfg) {
  std::vector<ProgramRecord> records;
  CollectVisitor v;
  v.records = &records;
  walk_programs(max_len, budget, cfg, v);
  std::sort(records.begin(), records.end(), [](const ProgramRecord& a, const ProgramRecord& b) {
    return LengthLexLess{}(a.program, b.program);
  });
  return records;
}

std::vector<std::string> trace_run(const Prefix& program, std::uint64_t budget,
                                   const MachineConfig& cfg) {
  static constexpr const char* phase_names[] = {
      "fetch", "len-field", "payload", "read-bit", "stream", "dub-header",
      "dub-second", "y-emit", "done"};
  std::vector<std::string> lines;
  VmState st;
  std::size_t pos = 0;
  auto log = [&](const std::string& what) {
    lines.push_back("step " + std::to_string(st.steps) + ": " + what + " -> " +
                    phase_names[static_cast<int>(st.phase)] +
                    (st.skipping ? " (skipping)" : "") + ", out=" +
                    to_prefix(st.out).to_string());
  };
  while (true) {
    while (internal_pending(st.phase) && st.steps < budget) {
      apply_internal(st, cfg);
      ++st.steps;
      log("emit");
    }
    if (st.phase == Phase::Done || internal_pending(st.phase)) break;
    if (pos == program.size() || st.steps == budget) break;
    std::uint8_t b = program[pos++];
    apply_consume(st, b, cfg);
    ++st.steps;
    log("consume " + std::string(1, static_cast<char>('0' + b)));
  }
  lines.push_back(std::string("status: ") +
                  to_string(blocked_status(st, pos == program.size())));
  return lines;
}

}  // namespace enumdist
