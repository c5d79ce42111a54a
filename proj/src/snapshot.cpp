#include "enumdist/snapshot.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <fstream>
#include <iterator>

namespace enumdist {

namespace {

constexpr char kMagic[4] = {'E', 'D', 'S', 'N'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int s = 56; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

void put_prefix(std::vector<std::uint8_t>& out, const Prefix& p) {
  put_u32(out, static_cast<std::uint32_t>(p.size()));
  std::uint8_t byte = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    byte |= static_cast<std::uint8_t>(p[i] << (7 - (i & 7)));
    if ((i & 7) == 7) {
      out.push_back(byte);
      byte = 0;
    }
  }
  if (p.size() & 7) out.push_back(byte);
}

void put_dyadic(std::vector<std::uint8_t>& out, const Dyadic& d) {
  std::vector<std::uint8_t> digits;
  if (!d.num().is_zero()) export_bits(d.num(), std::back_inserter(digits), 8);
  put_u32(out, static_cast<std::uint32_t>(digits.size()));
  out.insert(out.end(), digits.begin(), digits.end());
  put_u32(out, d.exp());
}

struct Reader {
  const std::vector<std::uint8_t>& bytes;
  std::size_t pos = 0;

  void need(std::size_t n) const {
    if (pos + n > bytes.size())
      throw SnapshotError("truncated snapshot at byte " + std::to_string(pos));
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | bytes[pos++];
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | bytes[pos++];
    return v;
  }
  Prefix prefix() {
    std::uint32_t len = u32();
    if (len > kMaxProgramLen + 64)
      throw SnapshotError("implausible prefix length " + std::to_string(len));
    need((len + 7) / 8);
    std::vector<std::uint8_t> bits(len);
    for (std::uint32_t i = 0; i < len; ++i)
      bits[i] = (bytes[pos + (i >> 3)] >> (7 - (i & 7))) & 1;
    pos += (len + 7) / 8;
    return Prefix(bits);
  }
  Dyadic dyadic() {
    std::uint32_t digits = u32();
    if (digits > 1 << 20) throw SnapshotError("implausible numerator size");
    need(digits);
    BigInt num = 0;
    if (digits > 0)
      import_bits(num, bytes.begin() + pos, bytes.begin() + pos + digits, 8);
    pos += digits;
    std::uint32_t exp = u32();
    return Dyadic::scaled(num, exp);
  }
};

}  // namespace

std::uint64_t config_hash(const EnumConfig& cfg) {
  std::uint64_t h = 1469598103934665603ull;
  for (char c : cfg.describe()) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<std::uint8_t> serialize_state(const EnumeratorState& s) {
  if (!(s.discrete.stage == s.stage) || !(s.continuous.stage == s.stage))
    throw std::logic_error("snapshot bounds disagree on the stage");
  EnumConfig cfg;
  cfg.machine = s.discrete.machine;
  cfg.tree_depth = s.continuous.tree.depth();

  std::vector<std::uint8_t> out;
  out.insert(out.end(), kMagic, kMagic + 4);
  put_u32(out, kSnapshotVersion);
  put_u64(out, config_hash(cfg));
  put_u32(out, s.stage.t);

  put_u64(out, s.discrete.halted.size());
  for (const auto& rec : s.discrete.halted) {
    put_prefix(out, rec.program);
    put_prefix(out, rec.outcome.output);
    put_u64(out, rec.outcome.steps_used);
  }
  put_u64(out, s.discrete.mass.size());
  for (const auto& [x, m] : s.discrete.mass) {
    put_prefix(out, x);
    put_dyadic(out, m);
  }

  put_u32(out, s.continuous.tree.depth());
  for (std::uint32_t len = 0; len <= s.continuous.tree.depth(); ++len)
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << len); ++i)
      put_dyadic(out, s.continuous.tree.at(len, i));
  return out;
}

EnumeratorState parse_state(const std::vector<std::uint8_t>& bytes, const EnumConfig& cfg) {
  Reader r{bytes};
  r.need(4);
  for (int i = 0; i < 4; ++i)
    if (bytes[r.pos + i] != static_cast<std::uint8_t>(kMagic[i]))
      throw SnapshotError("bad magic: not a snapshot file");
  r.pos += 4;

  std::uint32_t version = r.u32();
  if (version != kSnapshotVersion)
    throw SnapshotError("snapshot format version " + std::to_string(version) +
                        ", this build reads version " + std::to_string(kSnapshotVersion));
  std::uint64_t hash = r.u64();
  std::uint64_t want = config_hash(cfg);
  if (hash != want)
    throw SnapshotError("snapshot config hash " + std::to_string(hash) +
                        " does not match the active config hash " + std::to_string(want) +
                        " (" + cfg.describe() + ")");

  EnumeratorState s;
  s.stage = Stage{r.u32()};
  s.discrete.stage = s.stage;
  s.discrete.machine = discrete_machine(cfg);
  s.continuous.stage = s.stage;
  s.continuous.machine = continuous_machine(cfg);

  std::uint64_t halted_count = r.u64();
  MassMap rebuilt;
  for (std::uint64_t i = 0; i < halted_count; ++i) {
    ProgramRecord rec;
    rec.program = r.prefix();
    rec.outcome.status = RunOutcome::Status::Halted;
    rec.outcome.output = r.prefix();
    rec.outcome.steps_used = r.u64();
    rec.outcome.bits_consumed = static_cast<std::uint32_t>(rec.program.size());
    if (i > 0 && !LengthLexLess{}(s.discrete.halted.back().program, rec.program))
      throw SnapshotError("program records out of order");
    rebuilt[rec.outcome.output] += Dyadic::pow2(-static_cast<std::int64_t>(rec.program.size()));
    s.discrete.halted.push_back(std::move(rec));
  }

  std::uint64_t mass_count = r.u64();
  for (std::uint64_t i = 0; i < mass_count; ++i) {
    Prefix x = r.prefix();
    Dyadic m = r.dyadic();
    if (!s.discrete.mass.emplace(std::move(x), std::move(m)).second)
      throw SnapshotError("duplicate mass entry");
  }
  if (s.discrete.mass != rebuilt)
    throw SnapshotError("mass table disagrees with its program records");
  if (s.discrete.kraft_sum() > Dyadic(1))
    throw SnapshotError("mass table fails the Kraft audit");

  std::uint32_t depth = r.u32();
  if (depth != cfg.tree_depth)
    throw SnapshotError("snapshot tree depth " + std::to_string(depth) +
                        ", config wants " + std::to_string(cfg.tree_depth));
  s.continuous.tree = SemimeasureTable(depth);
  for (std::uint32_t len = 0; len <= depth; ++len)
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << len); ++i)
      s.continuous.tree.add_at(len, i, r.dyadic());
  if (!s.continuous.tree.semimeasure_ok())
    throw SnapshotError("tree table fails the semimeasure audit");

  if (r.pos != bytes.size())
    throw SnapshotError("trailing bytes after the snapshot payload");
  return s;
}

void save_snapshot(const std::string& path, const EnumeratorState& s) {
  auto bytes = serialize_state(s);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("short write to " + path);
}

EnumeratorState load_snapshot(const std::string& path, const EnumConfig& cfg) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw SnapshotError("cannot open snapshot " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
  return parse_state(bytes, cfg);
}

}  // namespace enumdist
