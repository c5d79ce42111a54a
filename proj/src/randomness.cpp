#include "enumdist/randomness.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>

namespace enumdist {

namespace {

const Dyadic& mass_at(const DiscreteBound& m, const Prefix& x) {
  static const Dyadic kZero;
  auto it = m.mass.find(x);
  return it == m.mass.end() ? kZero : it->second;
}

BigInt ceil_positive(const Rational& r) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  return (num + den - 1) / den;
}

Rational pow2_rational(std::uint64_t k) { return Rational(BigInt(1) << k); }

}  // namespace

TestValue ml_test(const SemimeasureTable& mu, const Prefix& x,
                  const DiscreteBound& m) {
  if (x.size() > mu.depth())
    throw std::invalid_argument("ml_test: prefix deeper than the measure table");
  Rational total(0);
  for (std::size_t i = 0; i <= x.size(); ++i) {
    Prefix xi = x.first(i);
    const Dyadic& mui = mu.at(xi);
    if (mui.is_zero()) return TestValue{Rational(0), m.stage, true};
    const Dyadic& mi = mass_at(m, xi);
    if (!mi.is_zero()) total += mi.to_rational() / mui.to_rational();
  }
  return TestValue{std::move(total), m.stage, false};
}

ElemFn ml_test_lambda(const DiscreteBound& m, std::uint32_t depth) {
  ElemFn f(depth, Rational(0));
  Prefix node;
  std::function<void(const Rational&)> descend = [&](const Rational& above) {
    Rational acc = above;
    auto it = m.mass.find(node);
    if (it != m.mass.end())
      acc += it->second.to_rational() * pow2_rational(node.size());
    if (node.size() == depth) {
      f.at_index(node.index()) = std::move(acc);
      return;
    }
    for (std::uint8_t b = 0; b < 2; ++b) {
      node.push_back(b);
      descend(acc);
      node.pop_back();
    }
  };
  descend(Rational(0));
  return f;
}

Deficiency deficiency(const TestValue& t, const Prefix& x) {
  Deficiency d;
  d.prefix = x;
  d.stage = t.stage;
  if (t.infinite) {
    d.infinite = true;
    return d;
  }
  if (t.value < 0)
    throw std::invalid_argument("deficiency: negative test value");
  if (t.value == 0) {
    d.value = -2;
    return d;
  }
  d.value = lognorm(ceil_positive(t.value)) - 2;
  return d;
}

std::int64_t deficiency_gap(const SemimeasureTable& mu, const Prefix& x,
                            const DiscreteBound& m) {
  if (x.size() > mu.depth())
    throw std::invalid_argument(
        "deficiency_gap: prefix deeper than the measure table");
  std::optional<std::int64_t> best;
  for (std::size_t i = 0; i <= x.size(); ++i) {
    Prefix xi = x.first(i);
    auto k = m.complexity(xi);
    if (!k) continue;
    const Dyadic& mui = mu.at(xi);
    if (mui.is_zero())
      throw std::domain_error("deficiency_gap: zero-mass prefix under mu");
    std::int64_t gap = lognorm(mui) - *k;
    if (!best || gap > *best) best = gap;
  }
  if (!best)
    throw std::invalid_argument("deficiency_gap: no halted program on any prefix");
  return *best;
}

std::vector<Dyadic> dyadic_grid(std::int64_t g) {
  if (g < 0) throw std::invalid_argument("dyadic_grid: negative exponent range");
  std::vector<Dyadic> grid;
  grid.reserve(static_cast<std::size_t>(2 * g) + 2);
  grid.push_back(Dyadic());
  for (std::int64_t j = -g; j <= g; ++j) grid.push_back(Dyadic::pow2(j));
  return grid;
}

ElemFn surrogate_test(const OperatorSpec& A, const Lattice& E,
                      const std::vector<Dyadic>& grid, const ElemFn& t_lambda) {
  if (t_lambda.depth() != A.input_depth())
    throw std::invalid_argument(
        "surrogate_test: test table depth differs from the operator's input depth");
  if (!t_lambda.nonnegative())
    throw std::invalid_argument("surrogate_test: negative test table");
  if (grid.empty()) return ElemFn(E.depth, Rational(0));

  std::vector<Dyadic> levels = grid;
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  // Tightest constraint per depth-E node v: any f in the candidate set has
  // f(v) forced below every bound recorded here, and the cylinder singleton
  // g * 1_v meets every other constraint for free, so the per-node sup is
  // just the largest grid value under the recorded bound.
  std::vector<std::optional<Rational>> bound(std::size_t{1} << E.depth);
  std::uint64_t cells = std::uint64_t{1} << A.input_depth();
  for (std::uint64_t ui = 0; ui < cells; ++ui) {
    Prefix u = Prefix::from_index(A.input_depth(), ui);
    const Rational& cap = t_lambda.at_index(ui);
    if (A.kind() == OperatorSpec::Kind::PCTDual) {
      Prefix v;
      if (!A.reach_in_single_cylinder(u, E.depth, &v)) continue;
      auto& b = bound[v.index()];
      if (!b || cap < *b) b = cap;
    } else {
      const SemimeasureTable& k = A.kernel(u);
      if (k.depth() < E.depth)
        throw std::invalid_argument(
            "surrogate_test: lattice deeper than a kernel table");
      for (std::uint64_t vi = 0; vi < bound.size(); ++vi) {
        const Dyadic& kv = k.at(E.depth, vi);
        if (kv.is_zero()) continue;
        Rational b = cap / kv.to_rational();
        if (!bound[vi] || b < *bound[vi]) bound[vi] = std::move(b);
      }
    }
  }

  ElemFn s(E.depth, Rational(0));
  for (std::uint64_t vi = 0; vi < bound.size(); ++vi) {
    if (!bound[vi]) {
      s.at_index(vi) = levels.back().to_rational();
      continue;
    }
    // largest grid value <= bound; none fits -> 0, the lattice bottom
    Rational best(0);
    for (const Dyadic& g : levels) {
      if (g.to_rational() <= *bound[vi]) best = g.to_rational();
      else break;
    }
    s.at_index(vi) = std::move(best);
  }
  return s;
}

namespace {

// Records a reach entry at every node whose truncated output extends the
// parent's; inherited entries cover the rest of the walk tree.
class ReachBuilder final : public WalkVisitor {
 public:
  ReachBuilder(std::uint32_t out_depth) : out_depth_(out_depth) {}

  bool enter(const Prefix& program, const NodeView& view) override {
    std::size_t keep = std::min<std::size_t>(view.output.size(), out_depth_);
    Prefix trunc(std::vector<std::uint8_t>(view.output.begin(),
                                           view.output.begin() + keep));
    if (stack_.empty() || trunc != stack_.back())
      entries_[program] = {trunc};
    stack_.push_back(std::move(trunc));
    return true;
  }

  void leave(const Prefix&) override { stack_.pop_back(); }

  std::map<Prefix, std::vector<Prefix>, LengthLexLess> take() {
    return std::move(entries_);
  }

 private:
  std::uint32_t out_depth_;
  std::vector<Prefix> stack_;
  std::map<Prefix, std::vector<Prefix>, LengthLexLess> entries_;
};

}  // namespace

OperatorSpec machine_operator(Stage stage, const EnumConfig& cfg,
                              std::uint32_t in_depth, std::uint32_t out_depth) {
  ReachBuilder builder(out_depth);
  walk_programs(in_depth, stage.budget(), continuous_machine(cfg), builder);
  return OperatorSpec::pct(in_depth, out_depth, builder.take());
}

OperatorSpec dispatch_operator(const std::vector<OperatorSpec>& library) {
  if (library.empty())
    throw std::invalid_argument("dispatch_operator: empty library");
  if (library.size() == 1) return library.front();

  std::uint32_t in_depth = 0;
  std::uint32_t out_depth = 0;
  std::map<Prefix, std::vector<Prefix>, LengthLexLess> entries;
  entries[Prefix()] = {Prefix()};
  for (std::size_t i = 0; i < library.size(); ++i) {
    const OperatorSpec& a = library[i];
    if (a.kind() != OperatorSpec::Kind::PCTDual)
      throw std::invalid_argument(
          "dispatch_operator: kernel operators do not compose by input routing");
    Prefix code = encode_count(i);
    in_depth = std::max<std::uint32_t>(
        in_depth, static_cast<std::uint32_t>(code.size()) + a.input_depth());
    out_depth = std::max(out_depth, a.output_depth());
    for (const auto& [node, set] : a.set_table()) {
      Prefix key = code;
      key.append(node);
      entries[std::move(key)] = set;
    }
  }
  return OperatorSpec::pct(in_depth, out_depth, std::move(entries));
}

namespace {

std::optional<Prefix> first_excess(const SemimeasureTable& cap,
                                   const SemimeasureTable& table) {
  std::uint32_t depth = std::min(cap.depth(), table.depth());
  for (std::uint32_t len = 0; len <= depth; ++len)
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << len); ++i)
      if (table.at(len, i) > cap.at(len, i)) return Prefix::from_index(len, i);
  return std::nullopt;
}

}  // namespace

RegularizedSM regularize(const SemimeasureTable& mu,
                         const std::vector<OperatorSpec>& library) {
  if (library.empty())
    throw std::invalid_argument("regularize: empty library");

  std::vector<OperatorSpec> kept;
  std::vector<std::size_t> evicted;
  std::vector<std::string> log;
  for (std::size_t i = 0; i < library.size(); ++i) {
    SemimeasureTable push = push_distribution(
        library[i], SemimeasureTable::lambda(library[i].input_depth()));
    if (auto node = first_excess(mu, push)) {
      evicted.push_back(i);
      log.push_back("operator " + std::to_string(i) +
                    " evicted: pushforward exceeds the source at node \"" +
                    node->to_string() + "\"");
      continue;
    }
    kept.push_back(library[i]);
  }
  if (kept.empty())
    throw std::invalid_argument("regularize: every operator failed its certificate");

  OperatorSpec combined = dispatch_operator(kept);
  SemimeasureTable ubar = push_distribution(
      combined, SemimeasureTable::lambda(combined.input_depth()));

  bool factor_two = true;
  std::uint32_t depth = std::min(mu.depth(), ubar.depth());
  for (std::uint32_t len = 0; len <= depth && factor_two; ++len)
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << len); ++i)
      if (mu.at(len, i) > ubar.at(len, i) + ubar.at(len, i)) {
        factor_two = false;
        break;
      }

  return RegularizedSM{mu,
                       std::move(combined),
                       std::move(ubar),
                       std::move(evicted),
                       std::move(log),
                       factor_two};
}

Deficiency deficiency_semimeasure(const SemimeasureTable& phi,
                                  const RegularizedSM& mu_reg, const Lattice& E,
                                  const std::vector<Dyadic>& grid,
                                  const DiscreteBound& m) {
  ElemFn t_lambda = ml_test_lambda(m, mu_reg.combined.input_depth());
  ElemFn s = surrogate_test(mu_reg.combined, E, grid, t_lambda);
  SemimeasureTable nu = coarse_grain(phi, E);
  TestValue t{mean(nu, s), m.stage, false};
  return deficiency(t, Prefix());
}

}  // namespace enumdist
