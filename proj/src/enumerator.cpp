#include "enumdist/enumerator.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace enumdist {

std::string EnumConfig::describe() const {
  // workers and split_depth are deliberately absent: they may never change
  // results, so they may not change the config identity either. The walk
  // variant is likewise derived, so only the conditional tape survives from
  // the machine config.
  std::string s = std::string(kIsaVersion) + ";depth=" + std::to_string(tree_depth);
  if (machine.variant == Variant::ConditionalPrefix)
    s += ";y=" + machine.conditional.to_string();
  return s;
}

MachineConfig discrete_machine(const EnumConfig& cfg) {
  if (cfg.machine.variant == Variant::ConditionalPrefix) return cfg.machine;
  return {Variant::PrefixDiscrete, {}};
}

MachineConfig continuous_machine(const EnumConfig& cfg) {
  if (cfg.machine.variant == Variant::ConditionalPrefix)
    throw std::invalid_argument("continuous bounds do not support conditional tapes");
  return {Variant::MonotoneContinuous, {}};
}

Dyadic DiscreteBound::kraft_sum() const {
  Dyadic sum;
  for (const auto& [x, m] : mass) sum += m;
  return sum;
}

std::optional<std::int64_t> DiscreteBound::complexity(const Prefix& x) const {
  auto it = mass.find(x);
  if (it == mass.end() || it->second.is_zero()) return std::nullopt;
  return lognorm(it->second);
}

std::optional<std::int64_t> ContinuousBound::complexity(const Prefix& x) const {
  const Dyadic& m = tree.at(x);  // throws beyond the table depth
  if (m.is_zero()) return std::nullopt;
  return lognorm(m);
}

namespace {

void check_stage(Stage stage) {
  if (stage.max_len() > kMaxProgramLen)
    throw std::invalid_argument("stage " + std::to_string(stage.t) +
                                " exceeds the enumeration cap of " +
                                std::to_string(kMaxProgramLen));
}

// Collects the discrete bound: one mass contribution per halted leaf.
struct DiscreteAccum : WalkVisitor {
  MassMap mass;
  std::vector<ProgramRecord> halted;

  bool enter(const Prefix& program, const NodeView& view) override {
    if (view.status == RunOutcome::Status::Halted) {
      Prefix out{view.output};
      mass[out] += Dyadic::pow2(-static_cast<std::int64_t>(program.size()));
      halted.push_back({program,
                        {view.status, out, view.steps_used,
                         static_cast<std::uint32_t>(program.size())}});
    }
    return true;
  }

  void merge_from(DiscreteAccum&& other) {
    for (auto& [x, m] : other.mass) mass[x] += m;
    halted.insert(halted.end(), std::make_move_iterator(other.halted.begin()),
                  std::make_move_iterator(other.halted.end()));
  }
};

// Collects the continuous bound. A consumed prefix q is the minimal program
// of every output node its output reached and its parent's had not; those
// nodes each gain 2^-|q|.
struct ContinAccum : WalkVisitor {
  SemimeasureTable tree;
  std::vector<std::int64_t> out_len_stack;
  std::int64_t root_parent_len = -1;  // output length just above this walk's root

  explicit ContinAccum(std::uint32_t depth) : tree(depth) {}

  bool enter(const Prefix& program, const NodeView& view) override {
    std::int64_t parent =
        out_len_stack.empty() ? root_parent_len : out_len_stack.back();
    std::int64_t out_len = static_cast<std::int64_t>(view.output.size());
    std::int64_t top = std::min<std::int64_t>(out_len, tree.depth());
    if (parent < top || parent < 0) {
      Dyadic w = Dyadic::pow2(-static_cast<std::int64_t>(program.size()));
      std::uint64_t index = 0;
      for (std::int64_t k = 0; k <= top; ++k) {
        if (k > 0) index = (index << 1) | view.output[k - 1];
        if (k > parent) tree.add_at(static_cast<std::uint32_t>(k), index, w);
      }
    }
    out_len_stack.push_back(out_len);
    return true;
  }

  void leave(const Prefix&) override { out_len_stack.pop_back(); }

  void merge_from(const ContinAccum& other) {
    for (std::uint32_t len = 0; len <= tree.depth(); ++len)
      for (std::uint64_t i = 0; i < (std::uint64_t{1} << len); ++i) {
        const Dyadic& v = other.tree.at(len, i);
        if (!v.is_zero()) tree.add_at(len, i, v);
      }
  }
};

struct FrontierRoot {
  Prefix path;
  std::int64_t parent_out_len;
};

// Wraps an inner visitor: nodes above the split depth pass through, nodes at
// the split depth become worker roots and are vetoed here (the worker's own
// walk revisits them, so each node is accounted exactly once).
struct SplitCollector : WalkVisitor {
  WalkVisitor& inner;
  std::uint32_t split;
  std::vector<FrontierRoot> frontier;
  std::vector<std::int64_t> out_len_stack;

  SplitCollector(WalkVisitor& inner_vis, std::uint32_t split_depth)
      : inner(inner_vis), split(split_depth) {}

  bool enter(const Prefix& program, const NodeView& view) override {
    if (program.size() == split) {
      frontier.push_back(
          {program, out_len_stack.empty() ? -1 : out_len_stack.back()});
      return false;
    }
    out_len_stack.push_back(static_cast<std::int64_t>(view.output.size()));
    return inner.enter(program, view);
  }

  void leave(const Prefix& program) override {
    if (program.size() == split) return;
    out_len_stack.pop_back();
    inner.leave(program);
  }
};

// Runs `make_task(root)` over all frontier roots on `workers` threads. Tasks
// land in per-worker accumulators of type Accum; exact arithmetic makes the
// final merge independent of scheduling.
template <typename Accum, typename Task>
std::vector<Accum> run_frontier(const std::vector<FrontierRoot>& frontier,
                                std::uint32_t workers, Accum make_blank, Task task) {
  std::vector<Accum> per_worker(workers, make_blank);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mx;
  auto body = [&](std::uint32_t w) {
    try {
      while (true) {
        std::size_t i = next.fetch_add(1);
        if (i >= frontier.size()) break;
        task(frontier[i], per_worker[w]);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mx);
      if (!failure) failure = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (std::uint32_t w = 1; w < workers; ++w) pool.emplace_back(body, w);
  body(0);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return per_worker;
}

}  // namespace

DiscreteBound compute_discrete(Stage stage, const EnumConfig& cfg) {
  check_stage(stage);
  MachineConfig mc = discrete_machine(cfg);
  DiscreteBound b;
  b.stage = stage;
  b.machine = mc;
  if (stage.t == 0) return b;

  std::uint32_t workers = std::max<std::uint32_t>(1, cfg.workers);
  DiscreteAccum total;
  if (workers == 1) {
    walk_programs(stage.max_len(), stage.budget(), mc, total);
  } else {
    std::uint32_t split = std::min(cfg.split_depth, stage.max_len());
    SplitCollector collector(total, split);
    walk_programs(stage.max_len(), stage.budget(), mc, collector);
    auto parts = run_frontier<DiscreteAccum>(
        collector.frontier, workers, DiscreteAccum{},
        [&](const FrontierRoot& root, DiscreteAccum& acc) {
          walk_programs(stage.max_len(), stage.budget(), mc, acc, root.path);
        });
    for (auto& part : parts) total.merge_from(std::move(part));
  }

  std::sort(total.halted.begin(), total.halted.end(),
            [](const ProgramRecord& a, const ProgramRecord& b) {
              return LengthLexLess{}(a.program, b.program);
            });
  b.mass = std::move(total.mass);
  b.halted = std::move(total.halted);
  if (b.kraft_sum() > Dyadic(1))
    throw std::logic_error("Kraft sum exceeded 1: machine is not prefix-free");
  return b;
}

ContinuousBound compute_continuous(Stage stage, const EnumConfig& cfg) {
  check_stage(stage);
  MachineConfig mc = continuous_machine(cfg);
  ContinuousBound b;
  b.stage = stage;
  b.machine = mc;
  b.tree = SemimeasureTable(cfg.tree_depth);
  if (stage.t == 0) return b;

  std::uint32_t workers = std::max<std::uint32_t>(1, cfg.workers);
  ContinAccum total(cfg.tree_depth);
  if (workers == 1) {
    walk_programs(stage.max_len(), stage.budget(), mc, total);
  } else {
    std::uint32_t split = std::min(cfg.split_depth, stage.max_len());
    SplitCollector collector(total, split);
    walk_programs(stage.max_len(), stage.budget(), mc, collector);
    auto parts = run_frontier<ContinAccum>(
        collector.frontier, workers, ContinAccum{cfg.tree_depth},
        [&](const FrontierRoot& root, ContinAccum& acc) {
          acc.root_parent_len = root.parent_out_len;
          walk_programs(stage.max_len(), stage.budget(), mc, acc, root.path);
        });
    for (const auto& part : parts) total.merge_from(part);
  }

  b.tree = std::move(total.tree);
  if (!b.tree.semimeasure_ok())
    throw std::logic_error("continuous bound broke the semimeasure inequality");
  return b;
}

DiscreteBound advance_discrete(const DiscreteBound& b, const EnumConfig& cfg) {
  if (discrete_machine(cfg).describe() != b.machine.describe())
    throw std::invalid_argument("advance_discrete: machine config changed");
  DiscreteBound next = compute_discrete({b.stage.t + 1}, cfg);
  for (const auto& [x, m] : b.mass) {
    auto it = next.mass.find(x);
    if (it == next.mass.end() || it->second < m)
      throw std::logic_error("discrete mass decreased from stage " +
                             std::to_string(b.stage.t));
  }
  return next;
}

ContinuousBound advance_continuous(const ContinuousBound& b, const EnumConfig& cfg) {
  if (continuous_machine(cfg).describe() != b.machine.describe())
    throw std::invalid_argument("advance_continuous: machine config changed");
  if (b.tree.depth() != cfg.tree_depth)
    throw std::invalid_argument("advance_continuous: tree depth changed");
  ContinuousBound next = compute_continuous({b.stage.t + 1}, cfg);
  if (!next.tree.dominates(b.tree))
    throw std::logic_error("continuous mass decreased from stage " +
                           std::to_string(b.stage.t));
  return next;
}

SemimeasureTable mixture_semimeasure(
    const std::vector<std::pair<Dyadic, SemimeasureTable>>& components) {
  if (components.empty()) throw std::invalid_argument("mixture of nothing");
  Dyadic weight_sum;
  std::uint32_t depth = 0;
  for (const auto& [w, table] : components) {
    weight_sum += w;
    depth = std::max(depth, table.depth());
    if (!table.semimeasure_ok())
      throw std::invalid_argument("mixture component is not a semimeasure");
  }
  if (weight_sum > Dyadic(1)) throw std::invalid_argument("mixture weights exceed 1");

  SemimeasureTable out(depth);
  for (const auto& [w, table] : components) {
    if (w.is_zero()) continue;
    for (std::uint32_t len = 0; len <= table.depth(); ++len)
      for (std::uint64_t i = 0; i < (std::uint64_t{1} << len); ++i) {
        const Dyadic& v = table.at(len, i);
        if (!v.is_zero()) out.add_at(len, i, w * v);
      }
  }
  return out;
}

Dyadic default_mixture_weight(std::size_t i) {
  std::uint64_t n = i + 2;
  std::int64_t e = 0;
  while ((std::uint64_t{1} << e) < n) ++e;  // e = ceil(log2(n))
  return Dyadic::pow2(-2 * e);
}

}  // namespace enumdist
