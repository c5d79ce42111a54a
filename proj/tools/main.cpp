// Batch workbench driver: every command loads or advances an enumerator
// snapshot and emits one deterministic table. Exit codes: 0 success, 2 bad
// configuration, 3 snapshot stage below what the report needs, 4 snapshot
// corruption.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "enumdist/enumerator.hpp"
#include "enumdist/information.hpp"
#include "enumdist/machine.hpp"
#include "enumdist/randomness.hpp"
#include "enumdist/reporting.hpp"
#include "enumdist/snapshot.hpp"

namespace {

using namespace enumdist;

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kStageShortfall = 3;
constexpr int kSnapshotError = 4;

struct CliConfig {
  std::string command;
  std::uint32_t stage = 0;  // report floor, or enumerate target
  bool stage_given = false;
  std::uint32_t depth = 16;
  std::int64_t grid_exponent = 6;
  std::uint32_t cap = 10;
  std::uint32_t lattice = 3;
  std::string corpus;
  std::string snapshot;
  std::string format = "csv";
  std::uint64_t seed = 7;
  std::uint32_t samples = 0;  // 0 = per-command default
  std::uint32_t workers = 1;
  std::uint32_t split_depth = 6;
  std::string out = "-";
  std::string subject = "0101";  // demo-occam
  std::uint32_t bits = 32;       // demo-chi
};

EnumConfig enum_config(const CliConfig& c) {
  EnumConfig cfg;
  cfg.tree_depth = c.depth;
  cfg.workers = c.workers;
  cfg.split_depth = c.split_depth;
  return cfg;
}

std::filesystem::path snapshot_path(const CliConfig& c) {
  std::filesystem::path p(c.snapshot);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("ENUMDIST_SNAPSHOT_DIR")) p = dir / p;
  }
  return p;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string basename_or_dash(const std::string& path) {
  if (path.empty()) return "-";
  return std::filesystem::path(path).filename().string();
}

// The serialized run configuration every output leads with; workers and
// split depth are absent on purpose (wall time only, never values).
void put_meta(ReportTable& t, const CliConfig& c, const EnumConfig& cfg,
              Stage stage) {
  t.meta.emplace_back("command", c.command);
  t.meta.emplace_back("format", c.format);
  t.meta.emplace_back("stage", std::to_string(stage.t));
  t.meta.emplace_back("depth", std::to_string(c.depth));
  t.meta.emplace_back("grid_exponent", std::to_string(c.grid_exponent));
  t.meta.emplace_back("cap", std::to_string(c.cap));
  t.meta.emplace_back("lattice", std::to_string(c.lattice));
  t.meta.emplace_back("seed", std::to_string(c.seed));
  t.meta.emplace_back("corpus", basename_or_dash(c.corpus));
  t.meta.emplace_back("snapshot", basename_or_dash(c.snapshot));
  t.meta.emplace_back("config", cfg.describe());
  t.meta.emplace_back("config_hash", hash_hex(config_hash(cfg)));
  t.meta.emplace_back("isa", kIsaVersion);
}

int emit(const ReportTable& t, const CliConfig& c) {
  std::string body = c.format == "json" ? to_json(t) : to_csv(t);
  if (c.out == "-") {
    std::cout << body;
    return kOk;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot write " << c.out << "\n";
    return kConfigError;
  }
  f << body;
  return kOk;
}

EnumeratorState fresh_state(const EnumConfig& cfg) {
  return EnumeratorState{Stage{0}, compute_discrete(Stage{0}, cfg),
                         compute_continuous(Stage{0}, cfg)};
}

// Loads the snapshot for a report command; distinguishes "not there" (a
// configuration problem) from "there but unreadable" (corruption).
int load_for_report(const CliConfig& c, EnumConfig& cfg, EnumeratorState& state) {
  if (c.snapshot.empty()) {
    std::cerr << "error: --snapshot is required\n";
    return kConfigError;
  }
  auto path = snapshot_path(c);
  if (!std::filesystem::exists(path)) {
    std::cerr << "error: snapshot not found: " << path.string() << "\n";
    return kConfigError;
  }
  state = load_snapshot(path.string(), cfg);
  if (c.stage_given && state.stage.t < c.stage) {
    std::cerr << "error: insufficient stage: snapshot is at stage "
              << state.stage.t << ", report needs stage " << c.stage
              << " (short by " << (c.stage - state.stage.t) << ")\n";
    return kStageShortfall;
  }
  return kOk;
}

std::string dyadic_or_dash(const SemimeasureTable& tree, const Prefix& x) {
  if (x.size() > tree.depth()) return "-";
  return tree.at(x).to_string();
}

int cmd_enumerate(const CliConfig& c) {
  if (c.snapshot.empty()) {
    std::cerr << "error: --snapshot is required\n";
    return kConfigError;
  }
  if (!c.stage_given) {
    std::cerr << "error: --stage is required for enumerate\n";
    return kConfigError;
  }
  EnumConfig cfg = enum_config(c);
  auto path = snapshot_path(c);
  EnumeratorState state =
      std::filesystem::exists(path) ? load_snapshot(path.string(), cfg)
                                    : fresh_state(cfg);
  if (state.stage.t > c.stage) {
    std::cerr << "error: snapshot already at stage " << state.stage.t
              << ", beyond target " << c.stage << "\n";
    return kConfigError;
  }
  while (state.stage.t < c.stage) {
    state.discrete = advance_discrete(state.discrete, cfg);
    state.continuous = advance_continuous(state.continuous, cfg);
    state.stage = state.discrete.stage;
    std::cerr << "stage " << state.stage.t << ": "
              << state.discrete.mass.size() << " outputs, kraft "
              << state.discrete.kraft_sum().to_string()
              << "\n";
  }
  save_snapshot(path.string(), state);

  ReportTable t;
  put_meta(t, c, cfg, state.stage);
  t.columns = {"key", "value"};
  t.rows.push_back({"kraft_sum", state.discrete.kraft_sum().to_string()});
  t.rows.push_back({"outputs", std::to_string(state.discrete.mass.size())});
  t.rows.push_back({"halted_programs", std::to_string(state.discrete.halted.size())});
  t.rows.push_back({"m_empty", [&] {
                      auto it = state.discrete.mass.find(Prefix());
                      return it == state.discrete.mass.end() ? std::string("0")
                                                             : it->second.to_string();
                    }()});
  t.rows.push_back({"M_empty", state.continuous.tree.at(Prefix()).to_string()});
  std::map<std::int64_t, std::size_t> hist;
  for (const auto& [x, mass] : state.discrete.mass) {
    (void)x;
    ++hist[lognorm(mass)];
  }
  for (const auto& [k, n] : hist)
    t.rows.push_back({"K_hist_" + std::to_string(k), std::to_string(n)});
  return emit(t, c);
}

int cmd_report_complexity(const CliConfig& c) {
  EnumConfig cfg = enum_config(c);
  EnumeratorState state = fresh_state(cfg);
  if (int rc = load_for_report(c, cfg, state); rc != kOk) return rc;

  ReportTable t;
  put_meta(t, c, cfg, state.stage);
  t.columns = {"x", "m", "K", "M", "KM"};
  for (const auto& [x, mass] : state.discrete.mass) {
    std::string km = "-";
    if (x.size() <= state.continuous.tree.depth())
      km = fmt_opt(state.continuous.complexity(x));
    t.rows.push_back({x.to_string(), mass.to_string(),
                      fmt_opt(state.discrete.complexity(x)),
                      dyadic_or_dash(state.continuous.tree, x), km});
  }
  return emit(t, c);
}

int cmd_report_deficiency(const CliConfig& c) {
  EnumConfig cfg = enum_config(c);
  EnumeratorState state = fresh_state(cfg);
  if (int rc = load_for_report(c, cfg, state); rc != kOk) return rc;

  std::uint32_t samples = c.samples == 0 ? 40 : c.samples;
  SemimeasureTable lam = SemimeasureTable::lambda(12);
  std::mt19937_64 rng(c.seed);

  ReportTable t;
  put_meta(t, c, cfg, state.stage);
  t.columns = {"prefix", "stage", "test_value", "formula_d", "gap_d",
               "lattice_depth"};
  for (std::uint32_t n = 0; n < samples; ++n) {
    std::size_t len = static_cast<std::size_t>(rng() % 13);
    Prefix x;
    for (std::size_t i = 0; i < len; ++i)
      x.push_back(static_cast<std::uint8_t>(rng() & 1));
    TestValue tv = ml_test(lam, x, state.discrete);
    Deficiency d = deficiency(tv, x);
    std::string gap = "-";
    if (state.stage.t > 0)
      gap = fmt_int(deficiency_gap(lam, x, state.discrete));
    t.rows.push_back({x.to_string(), std::to_string(state.stage.t),
                      to_string(tv.value), fmt_int(d.value), gap,
                      std::to_string(c.lattice)});
  }
  if (state.stage.t > 0) {
    auto op = machine_operator(state.stage, cfg, state.stage.max_len(),
                               cfg.tree_depth);
    auto reg = regularize(state.continuous.tree, {op});
    auto d = deficiency_semimeasure(reg.result, reg, Lattice{c.lattice},
                                    dyadic_grid(c.grid_exponent), state.discrete);
    t.rows.push_back({"<ubar|ubar>", std::to_string(state.stage.t), "-",
                      fmt_int(d.value), "-", std::to_string(c.lattice)});
  }
  return emit(t, c);
}

std::optional<std::vector<std::pair<Prefix, Prefix>>> read_corpus(
    const std::string& path) {
  std::ifstream f(path);
  if (!f) return std::nullopt;
  std::vector<std::pair<Prefix, Prefix>> corpus;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) return std::nullopt;
    for (char ch : line)
      if (ch != ',' && ch != '0' && ch != '1') return std::nullopt;
    corpus.emplace_back(Prefix::from_string(line.substr(0, comma)),
                        Prefix::from_string(line.substr(comma + 1)));
  }
  return corpus;
}

int get_corpus(const CliConfig& c, const EnumeratorState& state,
               std::size_t fallback_samples,
               std::vector<std::pair<Prefix, Prefix>>& corpus) {
  if (!c.corpus.empty()) {
    auto loaded = read_corpus(c.corpus);
    if (!loaded) {
      std::cerr << "error: cannot read corpus " << c.corpus
                << " (expected lines of the form 01,0110)\n";
      return kConfigError;
    }
    corpus = std::move(*loaded);
    return kOk;
  }
  std::size_t n = c.samples == 0 ? fallback_samples : c.samples;
  corpus = sample_pair_corpus(state.discrete, n, c.seed);
  return kOk;
}

int cmd_report_info(const CliConfig& c) {
  EnumConfig cfg = enum_config(c);
  EnumeratorState state = fresh_state(cfg);
  if (int rc = load_for_report(c, cfg, state); rc != kOk) return rc;
  std::vector<std::pair<Prefix, Prefix>> corpus;
  if (int rc = get_corpus(c, state, 40, corpus); rc != kOk) return rc;

  ConditionalRegistry cond(cfg);
  ReportTable t;
  put_meta(t, c, cfg, state.stage);
  t.columns = {"a", "b", "stage", "K_a", "K_b", "K_pair", "I", "i_bound",
               "sup_bound", "sup_witness"};
  for (const auto& [a, b] : corpus) {
    InfoReport r = info_finite(a, b, state.discrete);
    r.i_bound = info_lower_bound(a, b, cond, state.discrete, c.cap);
    SupBound sup = info_sup_bound(a, b, cond, state.discrete);
    t.rows.push_back({a.to_string(), b.to_string(), std::to_string(r.stage.t),
                      fmt_opt(r.k_a), fmt_opt(r.k_b), fmt_opt(r.k_pair),
                      fmt_opt(r.i_estimate), fmt_opt(r.i_bound),
                      fmt_opt(sup.value),
                      sup.value ? sup.witness.to_string() : "-"});
  }
  return emit(t, c);
}

int cmd_run_conservation(const CliConfig& c) {
  EnumConfig cfg = enum_config(c);
  EnumeratorState state = fresh_state(cfg);
  if (int rc = load_for_report(c, cfg, state); rc != kOk) return rc;
  std::vector<std::pair<Prefix, Prefix>> corpus;
  if (int rc = get_corpus(c, state, 500, corpus); rc != kOk) return rc;

  ReportTable t;
  put_meta(t, c, cfg, state.stage);
  t.meta.emplace_back("samples", std::to_string(corpus.size()));
  t.columns = {"transform", "a", "b", "image", "i_before", "i_after", "slack",
               "note"};
  for (const auto& tf : standard_transformations()) {
    auto records = conservation_harness(tf, corpus, state.discrete);
    auto summary = summarize_conservation(tf.name, records);
    t.meta.emplace_back("c_" + tf.name,
                        summary.finite ? fmt_int(summary.max_violation) : "-");
    t.meta.emplace_back("finite_" + tf.name, std::to_string(summary.finite));
    for (const auto& rec : records)
      t.rows.push_back({rec.transform, rec.a.to_string(), rec.b.to_string(),
                        rec.image ? rec.image->to_string() : "-",
                        fmt_opt(rec.i_before), fmt_opt(rec.i_after),
                        fmt_opt(rec.slack),
                        rec.note.empty() ? "-" : rec.note});
  }
  auto adj = randomized_adjunction(Prefix::from_string("0"),
                                   Prefix::from_string("1"), 2, 100, c.seed,
                                   state.discrete);
  t.meta.emplace_back("adjunction_finite", std::to_string(adj.finite));
  t.meta.emplace_back("adjunction_mean", to_string(adj.mean_excess));
  t.meta.emplace_back("adjunction_max", fmt_int(adj.max_excess));
  if (state.stage.t > 0) {
    auto op = machine_operator(state.stage, cfg, state.stage.max_len(),
                               cfg.tree_depth);
    auto reg = regularize(state.continuous.tree, {op});
    std::vector<SemimeasureTable> phis = {
        SemimeasureTable::lambda(cfg.tree_depth), reg.result};
    auto ops = std::vector<OperatorSpec>{op};
    auto recs = operator_conservation(ops, phis, reg, Lattice{c.lattice},
                                      dyadic_grid(c.grid_exponent),
                                      state.discrete);
    std::int64_t worst = 0;
    for (const auto& r : recs) worst = std::max(worst, r.d_after - r.d_before);
    t.meta.emplace_back("semimeasure_max_increase", fmt_int(worst));
  }
  return emit(t, c);
}

int cmd_demo_occam(const CliConfig& c) {
  EnumConfig cfg = enum_config(c);
  EnumeratorState state = fresh_state(cfg);
  if (int rc = load_for_report(c, cfg, state); rc != kOk) return rc;
  for (char ch : c.subject)
    if (ch != '0' && ch != '1') {
      std::cerr << "error: --x must be a 01-string\n";
      return kConfigError;
    }
  Prefix x = Prefix::from_string(c.subject);
  auto k = state.discrete.complexity(x);

  ReportTable t;
  put_meta(t, c, cfg, state.stage);
  t.meta.emplace_back("note", "display-only demo of an asymptotic claim");
  t.columns = {"x", "K_x", "k_repr", "K_repr", "I_x_repr"};
  if (!k) {
    t.rows.push_back({x.to_string(), "inf", "-", "-", "-"});
    return emit(t, c);
  }
  Prefix repr;
  for (std::int64_t v = *k; v > 0; v /= 2)
    repr.push_back(static_cast<std::uint8_t>(v & 1));
  if (repr.empty()) repr.push_back(0);
  // bits came out LSB-first; the demo wants the usual MSB-first reading
  Prefix msb;
  for (std::size_t i = repr.size(); i-- > 0;) msb.push_back(repr[i]);
  InfoReport r = info_finite(x, msb, state.discrete);
  t.rows.push_back({x.to_string(), fmt_int(*k), msb.to_string(),
                    fmt_opt(r.k_b), fmt_opt(r.i_estimate)});
  return emit(t, c);
}

int cmd_demo_chi(const CliConfig& c) {
  EnumConfig cfg = enum_config(c);
  EnumeratorState state = fresh_state(cfg);
  if (int rc = load_for_report(c, cfg, state); rc != kOk) return rc;

  ReportTable t;
  put_meta(t, c, cfg, state.stage);
  t.meta.emplace_back(
      "note", "halting bits of the step-bounded machine only; not a limit");
  t.columns = {"index", "program", "halts"};
  Prefix chi;
  std::uint64_t emitted = 0;
  for (std::size_t len = 0; emitted < c.bits && len <= kMaxProgramLen; ++len) {
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << len) && emitted < c.bits;
         ++i, ++emitted) {
      Prefix p = Prefix::from_index(len, i);
      RunOutcome r =
          run_prefix(p, state.stage.budget(), discrete_machine(cfg));
      bool halts = r.status == RunOutcome::Status::Halted &&
                   r.bits_consumed == p.size();
      chi.push_back(halts ? 1 : 0);
      t.rows.push_back({std::to_string(emitted), p.to_string(),
                        halts ? "1" : "0"});
    }
  }
  t.meta.emplace_back("chi_prefix", chi.to_string());
  return emit(t, c);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "enumdist: staged universal-distribution tables, randomness tests, and "
      "information bounds on a decidable toy machine"};
  app.require_subcommand(1);

  CliConfig c;
  app.add_option("--stage", c.stage,
                 "target stage for enumerate; minimum stage for reports")
      ->check(CLI::Range(0u, 24u));
  app.add_option("--depth", c.depth, "continuous table depth")
      ->check(CLI::Range(0u, 20u));
  app.add_option("--grid-exponent", c.grid_exponent,
                 "surrogate grid spans 2^-g .. 2^g");
  app.add_option("--cap", c.cap, "length cap for the i-bound double sum");
  app.add_option("--lattice", c.lattice, "lattice depth for surrogate tests")
      ->check(CLI::Range(0u, 8u));
  app.add_option("--corpus", c.corpus, "pair corpus file (lines: 01,0110)");
  app.add_option("--snapshot", c.snapshot,
                 "snapshot file; relative paths resolve against "
                 "ENUMDIST_SNAPSHOT_DIR");
  app.add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", c.seed, "seed for sampled corpora");
  app.add_option("--samples", c.samples, "sample count where a corpus is drawn");
  app.add_option("--workers", c.workers, "worker threads (wall time only)")
      ->check(CLI::Range(1u, 64u));
  app.add_option("--split-depth", c.split_depth, "worker fan-out depth")
      ->check(CLI::Range(1u, 12u));
  app.add_option("--out", c.out, "output file, - for stdout");
  app.add_option("--x", c.subject, "subject string for demo-occam");
  app.add_option("--bits", c.bits, "halting bits for demo-chi")
      ->check(CLI::Range(1u, 4096u));

  std::map<std::string, int (*)(const CliConfig&)> commands = {
      {"enumerate", cmd_enumerate},
      {"report-complexity", cmd_report_complexity},
      {"report-deficiency", cmd_report_deficiency},
      {"report-info", cmd_report_info},
      {"run-conservation", cmd_run_conservation},
      {"demo-occam", cmd_demo_occam},
      {"demo-chi", cmd_demo_chi},
  };
  std::map<std::string, std::string> blurbs = {
      {"enumerate", "advance the enumerator to --stage and persist a snapshot"},
      {"report-complexity", "table of m, K, M, KM over the discrete support"},
      {"report-deficiency", "rarity of seeded uniform samples, both forms"},
      {"report-info", "K-triples, I, i-bound, sup-bound over a pair corpus"},
      {"run-conservation", "conservation inequalities over a pair corpus"},
      {"demo-occam", "complexity of the complexity value itself"},
      {"demo-chi", "halting bits of the step-bounded machine"},
  };
  for (auto& [name, fn] : commands) {
    auto* sub = app.add_subcommand(name, blurbs[name]);
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  c.command = name;
  c.stage_given = app.count("--stage") > 0;
  try {
    return commands.at(name)(c);
  } catch (const SnapshotError& e) {
    std::cerr << "snapshot error: " << e.what() << "\n";
    return kSnapshotError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::logic_error& e) {
    std::cerr << "internal audit failure: " << e.what() << "\n";
    return kSnapshotError;
  }
}
