#include "enumdist/prefix.hpp"

#include <stdexcept>

namespace enumdist {

Prefix Prefix::from_string(const std::string& s) {
  Prefix p;
  p.bits_.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') throw std::invalid_argument("Prefix: expected 0/1");
    p.bits_.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return p;
}

Prefix Prefix::from_index(std::size_t len, std::uint64_t index) {
  if (len > 63) throw std::invalid_argument("Prefix: index form limited to 63 bits");
  Prefix p;
  p.bits_.resize(len);
  for (std::size_t i = 0; i < len; ++i)
    p.bits_[i] = static_cast<std::uint8_t>((index >> (len - 1 - i)) & 1);
  return p;
}

Prefix& Prefix::append(const Prefix& o) {
  bits_.insert(bits_.end(), o.bits_.begin(), o.bits_.end());
  return *this;
}

Prefix Prefix::first(std::size_t n) const {
  if (n > size()) throw std::out_of_range("Prefix::first");
  Prefix p;
  p.bits_.assign(bits_.begin(), bits_.begin() + static_cast<std::ptrdiff_t>(n));
  return p;
}

bool Prefix::is_prefix_of(const Prefix& o) const {
  if (size() > o.size()) return false;
  for (std::size_t i = 0; i < size(); ++i)
    if (bits_[i] != o.bits_[i]) return false;
  return true;
}

std::uint64_t Prefix::index() const {
  if (size() > 63) throw std::out_of_range("Prefix::index: too long");
  std::uint64_t v = 0;
  for (std::uint8_t b : bits_) v = (v << 1) | b;
  return v;
}

std::string Prefix::to_string() const {
  std::string s;
  s.reserve(size());
  for (std::uint8_t b : bits_) s.push_back(static_cast<char>('0' + b));
  return s;
}

bool LengthLexLess::operator()(const Prefix& a, const Prefix& b) const {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.bits() < b.bits();
}

std::size_t PrefixHash::operator()(const Prefix& p) const {
  // FNV-1a over the bits plus a length terminator.
  std::uint64_t h = 14695981039346656037ull;
  for (std::uint8_t b : p.bits()) {
    h ^= b;
    h *= 1099511628211ull;
  }
  h ^= p.size() + 0x9e3779b97f4a7c15ull;
  h *= 1099511628211ull;
  return static_cast<std::size_t>(h);
}

Prefix encode_count(std::uint64_t n) {
  // Find k with n in [2^k - 1, 2^(k+1) - 2].
  std::uint32_t k = 0;
  while (((1ull << (k + 1)) - 2) < n) ++k;
  std::uint64_t payload = n - ((1ull << k) - 1);
  Prefix p;
  for (std::uint32_t i = 0; i < k; ++i) p.push_back(1);
  p.push_back(0);
  for (std::uint32_t i = 0; i < k; ++i)
    p.push_back(static_cast<std::uint8_t>((payload >> (k - 1 - i)) & 1));
  return p;
}

std::optional<std::pair<std::uint64_t, std::size_t>> decode_count(const Prefix& p,
                                                                  std::size_t pos) {
  std::size_t i = pos;
  std::uint32_t k = 0;
  while (i < p.size() && p[i] == 1) {
    ++k;
    ++i;
    if (k > 60) return std::nullopt;
  }
  if (i >= p.size()) return std::nullopt;  // missing terminating zero
  ++i;
  if (i + k > p.size()) return std::nullopt;
  std::uint64_t payload = 0;
  for (std::uint32_t j = 0; j < k; ++j) payload = (payload << 1) | p[i + j];
  return std::make_pair(((1ull << k) - 1) + payload, i + k);
}

Prefix pair_encode(const Prefix& a, const Prefix& b) {
  Prefix z = encode_count(a.size());
  z.append(a).append(b);
  return z;
}

std::optional<std::pair<Prefix, Prefix>> pair_decode(const Prefix& z) {
  auto head = decode_count(z, 0);
  if (!head) return std::nullopt;
  auto [alen, pos] = *head;
  if (pos + alen > z.size()) return std::nullopt;
  Prefix a, b;
  for (std::size_t i = pos; i < pos + alen; ++i) a.push_back(z[i]);
  for (std::size_t i = pos + alen; i < z.size(); ++i) b.push_back(z[i]);
  return std::make_pair(a, b);
}

}  // namespace enumdist
