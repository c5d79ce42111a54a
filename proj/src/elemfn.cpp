#include "enumdist/elemfn.hpp"

#include <algorithm>
#include <stdexcept>

namespace enumdist {

namespace {
constexpr std::uint32_t kMaxDepth = 26;

void check_depth(std::uint32_t depth) {
  if (depth > kMaxDepth) throw std::invalid_argument("ElemFn: depth too large");
}
}  // namespace

ElemFn::ElemFn(std::uint32_t depth, Rational fill) : depth_(depth) {
  check_depth(depth);
  values_.assign(std::size_t{1} << depth, fill);
}

ElemFn::ElemFn(std::uint32_t depth, std::vector<Rational> values)
    : depth_(depth), values_(std::move(values)) {
  check_depth(depth);
  if (values_.size() != (std::size_t{1} << depth))
    throw std::invalid_argument("ElemFn: value count must be 2^depth");
}

ElemFn ElemFn::indicator(const Prefix& node) {
  ElemFn f(static_cast<std::uint32_t>(node.size()), Rational(0));
  f.values_[node.index()] = 1;
  return f;
}

const Rational& ElemFn::at(const Prefix& node) const {
  if (node.size() < depth_)
    throw std::invalid_argument("ElemFn::at: node above function depth");
  return values_[node.first(depth_).index()];
}

bool ElemFn::nonnegative() const {
  for (const auto& v : values_)
    if (v < 0) return false;
  return true;
}

ElemFn elemfn_lift(const ElemFn& f, std::uint32_t new_depth) {
  if (new_depth < f.depth())
    throw std::invalid_argument("elemfn_lift: cannot coarsen exactly");
  check_depth(new_depth);
  ElemFn g(new_depth, Rational(0));
  std::uint32_t shift = new_depth - f.depth();
  for (std::uint64_t i = 0; i < g.node_count(); ++i)
    g.at_index(i) = f.at_index(i >> shift);
  return g;
}

namespace {
template <typename Op>
ElemFn zip(const ElemFn& f, const ElemFn& g, Op op) {
  std::uint32_t d = std::max(f.depth(), g.depth());
  ElemFn a = elemfn_lift(f, d);
  ElemFn b = elemfn_lift(g, d);
  ElemFn out(d, Rational(0));
  for (std::uint64_t i = 0; i < out.node_count(); ++i)
    out.at_index(i) = op(a.at_index(i), b.at_index(i));
  return out;
}
}  // namespace

ElemFn elemfn_min(const ElemFn& f, const ElemFn& g) {
  return zip(f, g, [](const Rational& x, const Rational& y) { return x < y ? x : y; });
}

ElemFn elemfn_max(const ElemFn& f, const ElemFn& g) {
  return zip(f, g, [](const Rational& x, const Rational& y) { return x > y ? x : y; });
}

ElemFn elemfn_add(const ElemFn& f, const ElemFn& g) {
  return zip(f, g, [](const Rational& x, const Rational& y) { return x + y; });
}

ElemFn elemfn_scale(const ElemFn& f, const Rational& c) {
  ElemFn out(f.depth(), Rational(0));
  for (std::uint64_t i = 0; i < out.node_count(); ++i) out.at_index(i) = c * f.at_index(i);
  return out;
}

bool extensionally_equal(const ElemFn& f, const ElemFn& g) {
  std::uint32_t d = std::max(f.depth(), g.depth());
  ElemFn a = elemfn_lift(f, d);
  ElemFn b = elemfn_lift(g, d);
  for (std::uint64_t i = 0; i < a.node_count(); ++i)
    if (a.at_index(i) != b.at_index(i)) return false;
  return true;
}

}  // namespace enumdist
