#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "enumdist/enumerator.hpp"

namespace enumdist {

// Raised on malformed or mismatched snapshot bytes. The message carries the
// version/hash diagnostic the CLI surfaces with exit code 4.
struct SnapshotError : std::runtime_error {
  explicit SnapshotError(const std::string& msg) : std::runtime_error(msg) {}
};

inline constexpr std::uint32_t kSnapshotVersion = 1;

// One enumeration state: both staged bounds of an unconditional machine pair.
struct EnumeratorState {
  Stage stage;
  DiscreteBound discrete;
  ContinuousBound continuous;
};

// FNV-1a over the canonical config description; stored in snapshots so a
// reload against a different machine or depth is refused loudly.
std::uint64_t config_hash(const EnumConfig& cfg);

// Fixed-width big-endian encoding, fully deterministic: equal states produce
// equal bytes. Parsing revalidates the Kraft sum, the semimeasure
// inequality, and the mass-versus-records consistency, so corruption that
// happens to keep the framing intact is still refused.
std::vector<std::uint8_t> serialize_state(const EnumeratorState& s);
EnumeratorState parse_state(const std::vector<std::uint8_t>& bytes, const EnumConfig& cfg);

void save_snapshot(const std::string& path, const EnumeratorState& s);
EnumeratorState load_snapshot(const std::string& path, const EnumConfig& cfg);

}  // namespace enumdist
