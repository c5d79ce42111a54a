#include "enumdist/information.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace enumdist {

namespace {

std::optional<std::int64_t> sum3(std::optional<std::int64_t> a,
                                 std::optional<std::int64_t> b,
                                 std::optional<std::int64_t> c) {
  if (!a || !b || !c) return std::nullopt;
  return *a + *b - *c;
}

}  // namespace

InfoReport info_finite(const Prefix& a, const Prefix& b, const DiscreteBound& m) {
  InfoReport r;
  r.a = a;
  r.b = b;
  r.stage = m.stage;
  r.k_a = m.complexity(a);
  r.k_b = m.complexity(b);
  r.k_pair = m.complexity(pair_encode(a, b));
  r.i_estimate = sum3(r.k_a, r.k_b, r.k_pair);
  return r;
}

ConditionalRegistry::ConditionalRegistry(EnumConfig base, std::size_t capacity)
    : base_(std::move(base)), capacity_(capacity == 0 ? 1 : capacity) {}

const DiscreteBound& ConditionalRegistry::bound(const Prefix& y, Stage stage) {
  Key key{stage.t, y};
  auto hit = index_.find(key);
  if (hit != index_.end()) {
    order_.splice(order_.begin(), order_, hit->second);
    return hit->second->second;
  }
  EnumConfig cfg = base_;
  cfg.machine = MachineConfig{Variant::ConditionalPrefix, y};
  order_.emplace_front(key, compute_discrete(stage, cfg));
  index_[key] = order_.begin();
  if (index_.size() > capacity_) {
    index_.erase(order_.back().first);
    order_.pop_back();
  }
  return order_.front().second;
}

std::int64_t info_lower_bound(const Prefix& a, const Prefix& b,
                              ConditionalRegistry& cond, const DiscreteBound& m,
                              std::uint32_t cap) {
  const DiscreteBound& ma = cond.bound(a, m.stage);
  const DiscreteBound& mb = cond.bound(b, m.stage);
  Dyadic total;
  for (const auto& [z, zmass] : m.mass) {
    (void)zmass;
    auto xy = pair_decode(z);
    if (!xy) continue;
    const auto& [x, y] = *xy;
    if (x.size() > cap || y.size() > cap) continue;
    auto ita = ma.mass.find(x);
    if (ita == ma.mass.end()) continue;
    auto itb = mb.mass.find(y);
    if (itb == mb.mass.end()) continue;
    InfoReport info = info_finite(x, y, m);
    if (!info.i_estimate) continue;
    total += ita->second * itb->second * Dyadic::pow2(*info.i_estimate);
  }
  if (total.is_zero()) return -2;
  return lognorm(total.ceil_int()) - 2;
}

SupBound info_sup_bound(const Prefix& a, const Prefix& b,
                        ConditionalRegistry& cond, const DiscreteBound& m) {
  const DiscreteBound& ma = cond.bound(a, m.stage);
  const DiscreteBound& mb = cond.bound(b, m.stage);
  SupBound best;
  for (const auto& [x, xmass] : m.mass) {
    auto ka = ma.complexity(x);
    if (!ka) continue;
    auto kb = mb.complexity(x);
    if (!kb) continue;
    std::int64_t v = lognorm(xmass) - *ka - *kb;
    if (!best.value || v > *best.value) {
      best.value = v;
      best.witness = x;
    }
  }
  return best;
}

std::vector<StringMap> standard_transformations() {
  std::vector<StringMap> maps;
  maps.push_back({"identity", [](const Prefix& a) -> std::optional<Prefix> {
                    return a;
                  }});
  maps.push_back({"drop-last-bit", [](const Prefix& a) -> std::optional<Prefix> {
                    if (a.empty()) return std::nullopt;
                    return a.first(a.size() - 1);
                  }});
  maps.push_back({"duplicate", [](const Prefix& a) -> std::optional<Prefix> {
                    Prefix out = a;
                    out.append(a);
                    return out;
                  }});
  maps.push_back({"xor-halves", [](const Prefix& a) -> std::optional<Prefix> {
                    if (a.size() % 2 != 0) return std::nullopt;
                    std::size_t h = a.size() / 2;
                    Prefix out;
                    for (std::size_t i = 0; i < h; ++i)
                      out.push_back(static_cast<std::uint8_t>(a[i] ^ a[h + i]));
                    return out;
                  }});
  return maps;
}

std::vector<ConservationRecord> conservation_harness(
    const StringMap& A, const std::vector<std::pair<Prefix, Prefix>>& corpus,
    const DiscreteBound& m) {
  std::vector<ConservationRecord> records;
  records.reserve(corpus.size());
  for (const auto& [a, b] : corpus) {
    ConservationRecord rec;
    rec.transform = A.name;
    rec.a = a;
    rec.b = b;
    rec.image = A.apply(a);
    if (!rec.image) {
      rec.skipped = true;
      rec.note = "map undefined at a";
      records.push_back(std::move(rec));
      continue;
    }
    rec.i_before = info_finite(a, b, m).i_estimate;
    rec.i_after = info_finite(*rec.image, b, m).i_estimate;
    if (rec.i_before && rec.i_after)
      rec.slack = *rec.i_before - *rec.i_after;
    else
      rec.note = "infinite component";
    records.push_back(std::move(rec));
  }
  return records;
}

ConservationSummary summarize_conservation(
    const std::string& transform, const std::vector<ConservationRecord>& records) {
  ConservationSummary s;
  s.transform = transform;
  for (const auto& rec : records) {
    if (rec.transform != transform) continue;
    ++s.samples;
    if (rec.skipped) ++s.skipped;
    if (!rec.slack) continue;
    std::int64_t violation = -*rec.slack;
    if (s.finite == 0 || violation > s.max_violation) s.max_violation = violation;
    ++s.finite;
  }
  return s;
}

std::vector<std::pair<Prefix, Prefix>> sample_pair_corpus(const DiscreteBound& m,
                                                          std::size_t count,
                                                          std::uint64_t seed) {
  std::vector<std::pair<Prefix, Prefix>> pool;
  for (const auto& [z, zmass] : m.mass) {
    (void)zmass;
    if (auto xy = pair_decode(z)) pool.push_back(*xy);
  }
  if (pool.empty()) return {};
  std::mt19937_64 rng(seed);
  std::vector<std::pair<Prefix, Prefix>> corpus;
  corpus.reserve(count);
  if (pool.size() >= count) {
    // seeded partial Fisher-Yates; the modulo step is pinned, unlike
    // std::uniform_int_distribution, so corpora are toolchain-stable
    for (std::size_t i = 0; i < count; ++i) {
      std::size_t j = i + static_cast<std::size_t>(rng() % (pool.size() - i));
      std::swap(pool[i], pool[j]);
      corpus.push_back(pool[i]);
    }
  } else {
    for (std::size_t i = 0; i < count; ++i)
      corpus.push_back(pool[static_cast<std::size_t>(rng() % pool.size())]);
  }
  return corpus;
}

AdjunctionResult randomized_adjunction(const Prefix& a, const Prefix& b,
                                       std::uint32_t w_len, std::size_t draws,
                                       std::uint64_t seed, const DiscreteBound& m) {
  AdjunctionResult out;
  out.draws = draws;
  std::mt19937_64 rng(seed);
  SemimeasureTable lam = SemimeasureTable::lambda(w_len);
  std::optional<std::int64_t> base = info_finite(a, b, m).i_estimate;
  Rational sum(0);
  for (std::size_t n = 0; n < draws; ++n) {
    Prefix w;
    for (std::uint32_t i = 0; i < w_len; ++i)
      w.push_back(static_cast<std::uint8_t>(rng() & 1));
    if (!base) continue;
    auto adjoined = info_finite(pair_encode(a, w), b, m).i_estimate;
    if (!adjoined) continue;
    Deficiency rarity = deficiency(ml_test(lam, w, m), w);
    std::int64_t excess = *adjoined - *base - rarity.value;
    if (out.finite == 0 || excess > out.max_excess) out.max_excess = excess;
    ++out.finite;
    sum += Rational(excess);
  }
  if (out.finite > 0) out.mean_excess = sum / Rational(out.finite);
  return out;
}

std::vector<OperatorConservationRecord> operator_conservation(
    const std::vector<OperatorSpec>& ops,
    const std::vector<SemimeasureTable>& phis, const RegularizedSM& mu_reg,
    const Lattice& E, const std::vector<Dyadic>& grid, const DiscreteBound& m) {
  std::vector<OperatorConservationRecord> records;
  records.reserve(ops.size() * phis.size());
  for (std::size_t oi = 0; oi < ops.size(); ++oi) {
    for (std::size_t pi = 0; pi < phis.size(); ++pi) {
      OperatorConservationRecord rec;
      rec.op_index = oi;
      rec.phi_index = pi;
      rec.d_before =
          deficiency_semimeasure(phis[pi], mu_reg, E, grid, m).value;
      SemimeasureTable pushed = push_distribution(ops[oi], phis[pi]);
      rec.d_after = deficiency_semimeasure(pushed, mu_reg, E, grid, m).value;
      records.push_back(rec);
    }
  }
  return records;
}

}  // namespace enumdist
