#include "enumdist/semimeasure.hpp"

#include <algorithm>
#include <stdexcept>

namespace enumdist {

namespace {

constexpr std::uint32_t kMaxTableDepth = 20;

void check_table_depth(std::uint32_t depth) {
  if (depth > kMaxTableDepth)
    throw std::invalid_argument("semimeasure table depth exceeds " +
                                std::to_string(kMaxTableDepth));
}

}  // namespace

SemimeasureTable::SemimeasureTable(std::uint32_t depth) : depth_(depth) {
  check_table_depth(depth);
  levels_.resize(depth + 1);
  for (std::uint32_t len = 0; len <= depth; ++len)
    levels_[len].assign(std::size_t{1} << len, Dyadic{});
}

SemimeasureTable SemimeasureTable::lambda(std::uint32_t depth) {
  SemimeasureTable t(depth);
  for (std::uint32_t len = 0; len <= depth; ++len) {
    Dyadic v = Dyadic::pow2(-static_cast<std::int64_t>(len));
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << len); ++i)
      t.levels_[len][i] = v;
  }
  return t;
}

SemimeasureTable SemimeasureTable::path_mass(const Prefix& path, std::uint32_t depth,
                                             const Dyadic& mass) {
  SemimeasureTable t(depth);
  Prefix node;
  t.set(node, mass);
  for (std::uint32_t len = 1; len <= depth; ++len) {
    node.push_back(len <= path.size() ? path[len - 1] : 0);
    t.set(node, mass);
  }
  return t;
}

const Dyadic& SemimeasureTable::at(const Prefix& node) const {
  if (node.size() > depth_) throw std::invalid_argument("node below table depth");
  return levels_[node.size()][node.index()];
}

const Dyadic& SemimeasureTable::at(std::uint32_t len, std::uint64_t index) const {
  return levels_[len][index];
}

void SemimeasureTable::set(const Prefix& node, const Dyadic& v) {
  if (node.size() > depth_) throw std::invalid_argument("node below table depth");
  levels_[node.size()][node.index()] = v;
}

void SemimeasureTable::add_at(std::uint32_t len, std::uint64_t index, const Dyadic& v) {
  levels_[len][index] += v;
}

bool SemimeasureTable::semimeasure_ok() const {
  if (levels_[0][0] > Dyadic(1)) return false;
  for (std::uint32_t len = 0; len < depth_; ++len)
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << len); ++i)
      if (levels_[len][i] < levels_[len + 1][2 * i] + levels_[len + 1][2 * i + 1])
        return false;
  return true;
}

bool SemimeasureTable::is_measure() const {
  for (std::uint32_t len = 0; len < depth_; ++len)
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << len); ++i)
      if (levels_[len][i] != levels_[len + 1][2 * i] + levels_[len + 1][2 * i + 1])
        return false;
  return true;
}

bool SemimeasureTable::dominates(const SemimeasureTable& other) const {
  std::uint32_t d = std::min(depth_, other.depth_);
  for (std::uint32_t len = 0; len <= d; ++len)
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << len); ++i)
      if (levels_[len][i] < other.levels_[len][i]) return false;
  return true;
}

SemimeasureTable SemimeasureTable::truncated(std::uint32_t new_depth) const {
  SemimeasureTable t(std::min(new_depth, depth_));
  for (std::uint32_t len = 0; len <= t.depth_; ++len) t.levels_[len] = levels_[len];
  return t;
}

SemimeasureTable SemimeasureTable::zero_extended(std::uint32_t new_depth) const {
  if (new_depth <= depth_) return truncated(new_depth);
  SemimeasureTable t(new_depth);
  for (std::uint32_t len = 0; len <= depth_; ++len) t.levels_[len] = levels_[len];
  return t;
}

PairTable::PairTable(std::uint32_t depth1, std::uint32_t depth2)
    : depth1_(depth1), depth2_(depth2) {
  if (depth1 + depth2 > 22) throw std::invalid_argument("pair table too large");
  grids_.resize(std::size_t{depth1 + 1} * (depth2 + 1));
  for (std::uint32_t l1 = 0; l1 <= depth1; ++l1)
    for (std::uint32_t l2 = 0; l2 <= depth2; ++l2)
      grids_[slot(l1, l2)].assign(std::size_t{1} << (l1 + l2), Dyadic{});
}

std::size_t PairTable::slot(std::uint32_t l1, std::uint32_t l2) const {
  return std::size_t{l1} * (depth2_ + 1) + l2;
}

const Dyadic& PairTable::at(const Prefix& x, const Prefix& y) const {
  if (x.size() > depth1_ || y.size() > depth2_)
    throw std::invalid_argument("pair node out of range");
  return grids_[slot(x.size(), y.size())][(x.index() << y.size()) | y.index()];
}

void PairTable::set(const Prefix& x, const Prefix& y, const Dyadic& v) {
  if (x.size() > depth1_ || y.size() > depth2_)
    throw std::invalid_argument("pair node out of range");
  grids_[slot(x.size(), y.size())][(x.index() << y.size()) | y.index()] = v;
}

bool PairTable::semimeasure_ok() const {
  if (grids_[slot(0, 0)][0] > Dyadic(1)) return false;
  for (std::uint32_t l1 = 0; l1 <= depth1_; ++l1)
    for (std::uint32_t l2 = 0; l2 <= depth2_; ++l2) {
      const auto& g = grids_[slot(l1, l2)];
      for (std::uint64_t i = 0; i < g.size(); ++i) {
        if (l1 < depth1_) {
          const auto& gx = grids_[slot(l1 + 1, l2)];
          std::uint64_t i1 = i >> l2, i2 = i & ((std::uint64_t{1} << l2) - 1);
          std::uint64_t base = (i1 << (l2 + 1)) | i2;
          if (g[i] < gx[base] + gx[base + (std::uint64_t{1} << l2)]) return false;
        }
        if (l2 < depth2_ && g[i] < grids_[slot(l1, l2 + 1)][2 * i] +
                                        grids_[slot(l1, l2 + 1)][2 * i + 1])
          return false;
      }
    }
  return true;
}

bool PairTable::is_measure() const {
  for (std::uint32_t l1 = 0; l1 <= depth1_; ++l1)
    for (std::uint32_t l2 = 0; l2 <= depth2_; ++l2) {
      const auto& g = grids_[slot(l1, l2)];
      for (std::uint64_t i = 0; i < g.size(); ++i) {
        if (l1 < depth1_) {
          const auto& gx = grids_[slot(l1 + 1, l2)];
          std::uint64_t i1 = i >> l2, i2 = i & ((std::uint64_t{1} << l2) - 1);
          std::uint64_t base = (i1 << (l2 + 1)) | i2;
          if (g[i] != gx[base] + gx[base + (std::uint64_t{1} << l2)]) return false;
        }
        if (l2 < depth2_ && g[i] != grids_[slot(l1, l2 + 1)][2 * i] +
                                        grids_[slot(l1, l2 + 1)][2 * i + 1])
          return false;
      }
    }
  return true;
}

Dyadic PairTable::marginal_first(const Prefix& x, std::uint32_t len2) const {
  if (x.size() > depth1_ || len2 > depth2_)
    throw std::invalid_argument("pair node out of range");
  const auto& g = grids_[slot(x.size(), len2)];
  Dyadic sum;
  for (std::uint64_t i2 = 0; i2 < (std::uint64_t{1} << len2); ++i2)
    sum += g[(x.index() << len2) | i2];
  return sum;
}

Rational mean(const SemimeasureTable& mu, const ElemFn& f) {
  if (f.depth() > mu.depth())
    throw std::invalid_argument("mean: function deeper than the table");
  if (!f.nonnegative() && !mu.is_measure())
    throw std::invalid_argument("mean: mixed-sign function against a strict semimeasure");
  Rational sum = 0;
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << f.depth()); ++i)
    sum += mu.at(f.depth(), i).to_rational() * f.at_index(i);
  return sum;
}

PairTable product(const SemimeasureTable& mu, const SemimeasureTable& phi) {
  PairTable nu(mu.depth(), phi.depth());
  for (std::uint32_t l1 = 0; l1 <= mu.depth(); ++l1)
    for (std::uint64_t i1 = 0; i1 < (std::uint64_t{1} << l1); ++i1) {
      const Dyadic& a = mu.at(l1, i1);
      if (a.is_zero()) continue;
      for (std::uint32_t l2 = 0; l2 <= phi.depth(); ++l2)
        for (std::uint64_t i2 = 0; i2 < (std::uint64_t{1} << l2); ++i2) {
          Prefix x = Prefix::from_index(l1, i1);
          Prefix y = Prefix::from_index(l2, i2);
          nu.set(x, y, a * phi.at(l2, i2));
        }
    }
  return nu;
}

Rational mean_rectangle(const PairTable& nu, const ElemFn& f, const ElemFn& g) {
  if (f.depth() > nu.depth1() || g.depth() > nu.depth2())
    throw std::invalid_argument("mean_rectangle: function deeper than the table");
  Rational sum = 0;
  for (std::uint64_t i1 = 0; i1 < (std::uint64_t{1} << f.depth()); ++i1)
    for (std::uint64_t i2 = 0; i2 < (std::uint64_t{1} << g.depth()); ++i2) {
      const Dyadic& m =
          nu.at(Prefix::from_index(f.depth(), i1), Prefix::from_index(g.depth(), i2));
      if (m.is_zero()) continue;
      sum += m.to_rational() * f.at_index(i1) * g.at_index(i2);
    }
  return sum;
}

SemimeasureTable coarse_grain(const SemimeasureTable& mu, const Lattice& E) {
  if (E.depth > mu.depth())
    throw std::invalid_argument("coarse_grain: lattice deeper than the table");
  SemimeasureTable nu(mu.depth());
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << E.depth); ++i)
    nu.add_at(E.depth, i, mu.at(E.depth, i));
  for (std::uint32_t len = E.depth; len-- > 0;)
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << len); ++i)
      nu.add_at(len, i, nu.at(len + 1, 2 * i) + nu.at(len + 1, 2 * i + 1));
  return nu;  // nodes below E.depth stay zero
}

namespace {

// Canonical antichain: drop elements inside another element's cylinder, then
// merge complete sibling pairs bottom-up. Result is shortlex-sorted.
std::vector<Prefix> canonical_antichain(std::vector<Prefix> set) {
  std::sort(set.begin(), set.end(),
            [](const Prefix& a, const Prefix& b) { return LengthLexLess{}(a, b); });
  std::vector<Prefix> kept;
  for (const auto& s : set) {
    bool covered = false;
    for (const auto& k : kept)
      if (k.is_prefix_of(s)) {
        covered = true;
        break;
      }
    if (!covered) kept.push_back(s);
  }
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t a = 0; a < kept.size() && !merged; ++a)
      for (std::size_t b = a + 1; b < kept.size() && !merged; ++b) {
        if (kept[a].size() != kept[b].size() || kept[a].empty()) continue;
        if (kept[a].first(kept[a].size() - 1) != kept[b].first(kept[b].size() - 1))
          continue;
        Prefix parent = kept[a].first(kept[a].size() - 1);
        kept.erase(kept.begin() + b);
        kept.erase(kept.begin() + a);
        kept.push_back(parent);
        merged = true;
      }
  }
  std::sort(kept.begin(), kept.end(),
            [](const Prefix& a, const Prefix& b) { return LengthLexLess{}(a, b); });
  return kept;
}

// Whether cyl(s) is contained in the union of cylinders of `cover`.
bool cylinder_covered(const Prefix& s, const std::vector<Prefix>& cover) {
  for (const auto& t : cover)
    if (t.is_prefix_of(s)) return true;
  bool any_below = false;
  for (const auto& t : cover)
    if (s.is_prefix_of(t)) {
      any_below = true;
      break;
    }
  if (!any_below) return false;
  Prefix s0 = s, s1 = s;
  s0.push_back(0);
  s1.push_back(1);
  return cylinder_covered(s0, cover) && cylinder_covered(s1, cover);
}

bool contained_in(const std::vector<Prefix>& inner, const std::vector<Prefix>& outer) {
  for (const auto& s : inner)
    if (!cylinder_covered(s, outer)) return false;
  return true;
}

}  // namespace

OperatorSpec OperatorSpec::pct(std::uint32_t input_depth, std::uint32_t output_depth,
                               std::map<Prefix, std::vector<Prefix>, LengthLexLess> sets) {
  if (sets.find(Prefix{}) == sets.end())
    throw std::invalid_argument("pct: missing root output set");
  for (auto& [input, set] : sets) {
    if (input.size() > input_depth)
      throw std::invalid_argument("pct: input node deeper than input_depth");
    if (set.empty()) throw std::invalid_argument("pct: empty output set");
    for (const auto& s : set)
      if (s.size() > output_depth)
        throw std::invalid_argument("pct: output node deeper than output_depth");
    set = canonical_antichain(std::move(set));
  }
  for (auto it = sets.begin(); it != sets.end(); ++it) {
    const Prefix& input = it->first;
    if (input.empty()) continue;
    // nearest proper ancestor with an entry always exists (the root)
    Prefix anc = input.first(input.size() - 1);
    while (sets.find(anc) == sets.end()) anc = anc.first(anc.size() - 1);
    if (!contained_in(it->second, sets.at(anc)))
      throw std::invalid_argument("pct: output sets not nested under input extension");
  }
  OperatorSpec a;
  a.kind_ = Kind::PCTDual;
  a.input_depth_ = input_depth;
  a.output_depth_ = output_depth;
  a.sets_ = std::move(sets);
  return a;
}

OperatorSpec OperatorSpec::identity_pct(std::uint32_t depth) {
  if (depth > 12) throw std::invalid_argument("identity_pct: depth too large");
  std::map<Prefix, std::vector<Prefix>, LengthLexLess> sets;
  for (std::uint32_t len = 0; len <= depth; ++len)
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << len); ++i) {
      Prefix node = Prefix::from_index(len, i);
      sets[node] = {node};
    }
  return pct(depth, depth, std::move(sets));
}

OperatorSpec OperatorSpec::constant_pct(std::uint32_t input_depth, const Prefix& target) {
  std::map<Prefix, std::vector<Prefix>, LengthLexLess> sets;
  sets[Prefix{}] = {target};
  return pct(input_depth, static_cast<std::uint32_t>(target.size()), std::move(sets));
}

OperatorSpec OperatorSpec::concave(std::uint32_t input_depth,
                                   std::map<Prefix, SemimeasureTable, LengthLexLess> kernels) {
  if (kernels.find(Prefix{}) == kernels.end())
    throw std::invalid_argument("concave: missing root kernel");
  std::uint32_t out_depth = kernels.begin()->second.depth();
  for (const auto& [input, kernel] : kernels) {
    if (input.size() > input_depth)
      throw std::invalid_argument("concave: input node deeper than input_depth");
    if (kernel.depth() != out_depth)
      throw std::invalid_argument("concave: kernels must share one depth");
    if (!kernel.semimeasure_ok())
      throw std::invalid_argument("concave: kernel is not a semimeasure");
  }
  OperatorSpec a;
  a.kind_ = Kind::Concave;
  a.input_depth_ = input_depth;
  a.output_depth_ = out_depth;
  a.kernels_ = std::move(kernels);
  return a;
}

const std::vector<Prefix>& OperatorSpec::reach(const Prefix& input) const {
  Prefix key = input;
  while (true) {
    auto it = sets_.find(key);
    if (it != sets_.end()) return it->second;
    key = key.first(key.size() - 1);  // root entry guarantees termination
  }
}

const SemimeasureTable& OperatorSpec::kernel(const Prefix& input) const {
  Prefix key = input;
  while (true) {
    auto it = kernels_.find(key);
    if (it != kernels_.end()) return it->second;
    key = key.first(key.size() - 1);
  }
}

bool OperatorSpec::reach_in_single_cylinder(const Prefix& input, std::uint32_t d,
                                            Prefix* out) const {
  const auto& set = reach(input);
  // the common prefix of the antichain bounds every cylinder that can
  // contain the whole reachable set
  const Prefix& first = set.front();
  std::size_t lcp = first.size();
  for (std::size_t k = 1; k < set.size(); ++k) {
    const Prefix& s = set[k];
    std::size_t i = 0;
    while (i < lcp && i < s.size() && first[i] == s[i]) ++i;
    lcp = i;
  }
  if (lcp < d) return false;
  *out = first.first(d);
  return true;
}

ElemFn apply_operator(const OperatorSpec& A, const ElemFn& f) {
  if (A.kind() == OperatorSpec::Kind::Concave && f.depth() > A.output_depth())
    throw std::invalid_argument("apply_operator: function deeper than the kernels");

  ElemFn g(A.input_depth(), Rational(0));
  if (A.kind() == OperatorSpec::Kind::Concave) {
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << A.input_depth()); ++i) {
      Prefix u = Prefix::from_index(A.input_depth(), i);
      g.at_index(i) = mean(A.kernel(u), f);
    }
    return g;
  }

  // subtree minima of f at every node above its depth
  std::vector<std::vector<Rational>> minf(f.depth() + 1);
  minf[f.depth()].resize(std::size_t{1} << f.depth());
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << f.depth()); ++i)
    minf[f.depth()][i] = f.at_index(i);
  for (std::uint32_t len = f.depth(); len-- > 0;) {
    minf[len].resize(std::size_t{1} << len);
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << len); ++i)
      minf[len][i] = std::min(minf[len + 1][2 * i], minf[len + 1][2 * i + 1]);
  }
  auto value_over = [&](const Prefix& s) -> Rational {
    if (s.size() <= f.depth()) return minf[s.size()][s.index()];
    return f.at(s);
  };

  for (std::uint64_t i = 0; i < (std::uint64_t{1} << A.input_depth()); ++i) {
    Prefix u = Prefix::from_index(A.input_depth(), i);
    const auto& set = A.reach(u);
    Rational v = value_over(set.front());
    for (std::size_t k = 1; k < set.size(); ++k) v = std::min(v, value_over(set[k]));
    g.at_index(i) = v;
  }
  return g;
}

SemimeasureTable push_distribution(const OperatorSpec& A, const SemimeasureTable& phi) {
  if (phi.depth() < A.input_depth())
    throw std::invalid_argument("push_distribution: phi shallower than input_depth");
  SemimeasureTable out(A.output_depth());

  if (A.kind() == OperatorSpec::Kind::PCTDual) {
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << A.input_depth()); ++i) {
      const Dyadic& m = phi.at(A.input_depth(), i);
      if (m.is_zero()) continue;
      Prefix u = Prefix::from_index(A.input_depth(), i);
      Prefix cover;
      // deepest cylinder containing the whole reachable set; mass lands on
      // it and all its ancestors
      std::uint32_t d = A.output_depth();
      while (!A.reach_in_single_cylinder(u, d, &cover)) --d;  // d = 0 always works
      for (std::uint32_t len = 0; len <= cover.size(); ++len)
        out.add_at(len, cover.first(len).index(), m);
    }
    return out;
  }

  for (std::uint64_t i = 0; i < (std::uint64_t{1} << A.input_depth()); ++i) {
    const Dyadic& m = phi.at(A.input_depth(), i);
    if (m.is_zero()) continue;
    const SemimeasureTable& k = A.kernel(Prefix::from_index(A.input_depth(), i));
    for (std::uint32_t len = 0; len <= out.depth(); ++len)
      for (std::uint64_t j = 0; j < (std::uint64_t{1} << len); ++j)
        out.add_at(len, j, m * k.at(len, j));
  }
  return out;
}

}  // namespace enumdist
