#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace enumdist {

// Finite bit string; a node of the binary tree. Also doubles as raw program
// text and machine output. Bits stored one per byte for simplicity; all
// strings at desk scale are short.
class Prefix {
 public:
  Prefix() = default;
  explicit Prefix(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {}

  // Parses "0101"; empty string gives the empty prefix.
  static Prefix from_string(const std::string& s);
  // Inverse of code(): 0 -> empty, 1 -> "0", 2 -> "1", 3 -> "00", ...
  static Prefix from_index(std::size_t len, std::uint64_t index);

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  void push_back(std::uint8_t bit) { bits_.push_back(bit & 1); }
  void pop_back() { bits_.pop_back(); }
  void truncate(std::size_t len) { bits_.resize(len); }
  Prefix& append(const Prefix& o);

  // First n bits; n must not exceed size().
  Prefix first(std::size_t n) const;
  bool is_prefix_of(const Prefix& o) const;

  // Value of the bits as a binary number, MSB first. Only for size() <= 63.
  std::uint64_t index() const;
  // Canonical string<->integer bijection: (1 << size) | index.
  // empty -> 1 is shifted down so empty -> 0, "0" -> 1, "1" -> 2, "00" -> 3.
  std::uint64_t code() const { return ((1ull << size()) | index()) - 1; }

  std::string to_string() const;

  friend bool operator==(const Prefix& a, const Prefix& b) { return a.bits_ == b.bits_; }
  friend bool operator!=(const Prefix& a, const Prefix& b) { return !(a == b); }

 private:
  std::vector<std::uint8_t> bits_;
};

// Shortlex: by length, then lexicographically. The canonical enumeration and
// serialization order everywhere in this project.
struct LengthLexLess {
  bool operator()(const Prefix& a, const Prefix& b) const;
};

struct PrefixHash {
  std::size_t operator()(const Prefix& p) const;
};

// Self-delimiting count code for n >= 0: k ones, a zero, then k bits b with
// n = 2^k - 1 + value(b). "0" -> 0, "10b" -> 1..2, "110bb" -> 3..6, ...
Prefix encode_count(std::uint64_t n);
// Decodes starting at pos; nullopt if the code is malformed or runs past the
// end. Returns (n, position after the code).
std::optional<std::pair<std::uint64_t, std::size_t>> decode_count(const Prefix& p,
                                                                  std::size_t pos);

// Pair code: count code of |a|, then a, then b. Total and injective;
// pair_decode recognizes exactly the well-formed codes.
Prefix pair_encode(const Prefix& a, const Prefix& b);
std::optional<std::pair<Prefix, Prefix>> pair_decode(const Prefix& z);

}  // namespace enumdist
