#pragma once

#include <concepts>
#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

#include "decforest/core/error.hpp"

namespace decforest {

/// A commutative group as seen by the structures: a zero constructor and
/// add/sub on opaque values. Structures never compare values.
template <class G>
concept CommutativeGroup = requires(const G& g, const typename G::value_type& a) {
  typename G::value_type;
  { g.zero() } -> std::convertible_to<typename G::value_type>;
  { g.add(a, a) } -> std::convertible_to<typename G::value_type>;
  { g.sub(a, a) } -> std::convertible_to<typename G::value_type>;
};

/// Opaque 64-bit integer element. There is deliberately no operator== here;
/// tests compare through `testing::GroupEquality`.
class IntValue {
 public:
  IntValue() = default;
  explicit IntValue(std::int64_t v) : v_(v) {}
  std::int64_t get() const noexcept { return v_; }

 private:
  std::int64_t v_ = 0;
};

/// Integers with two's-complement wrap-around (Z mod 2^64).
struct IntGroup {
  using value_type = IntValue;
  IntValue zero() const noexcept { return IntValue{}; }
  IntValue add(IntValue a, IntValue b) const noexcept {
    return IntValue(static_cast<std::int64_t>(static_cast<std::uint64_t>(a.get()) +
                                              static_cast<std::uint64_t>(b.get())));
  }
  IntValue sub(IntValue a, IntValue b) const noexcept {
    return IntValue(static_cast<std::int64_t>(static_cast<std::uint64_t>(a.get()) -
                                              static_cast<std::uint64_t>(b.get())));
  }
  IntValue make(std::int64_t v) const noexcept { return IntValue(v); }
  std::int64_t unwrap(IntValue v) const noexcept { return v.get(); }
};

/// Integers modulo p, 1 <= p < 2^62.
class ModGroup {
 public:
  struct value_type {
    std::uint64_t v = 0;
  };

  explicit ModGroup(std::uint64_t p) : p_(p) {
    if (p == 0 || p >= (std::uint64_t{1} << 62)) {
      throw Error(ErrorKind::ValueOutOfRange, "modulus");
    }
  }
  std::uint64_t modulus() const noexcept { return p_; }
  value_type zero() const noexcept { return {}; }
  value_type add(value_type a, value_type b) const noexcept {
    std::uint64_t s = a.v + b.v;
    return {s >= p_ ? s - p_ : s};
  }
  value_type sub(value_type a, value_type b) const noexcept {
    return {a.v >= b.v ? a.v - b.v : a.v + p_ - b.v};
  }
  value_type make(std::int64_t x) const noexcept {
    auto p = static_cast<std::int64_t>(p_);
    auto r = x % p;
    return {static_cast<std::uint64_t>(r < 0 ? r + p : r)};
  }

 private:
  std::uint64_t p_;
};

/// Z^d with a run-time dimension.
class VectorGroup {
 public:
  using value_type = std::vector<std::int64_t>;

  explicit VectorGroup(std::size_t dim) : dim_(dim) {}
  std::size_t dim() const noexcept { return dim_; }
  value_type zero() const { return value_type(dim_, 0); }
  value_type add(const value_type& a, const value_type& b) const {
    value_type r(dim_);
    for (std::size_t i = 0; i < dim_; ++i) r[i] = a[i] + b[i];
    return r;
  }
  value_type sub(const value_type& a, const value_type& b) const {
    value_type r(dim_);
    for (std::size_t i = 0; i < dim_; ++i) r[i] = a[i] - b[i];
    return r;
  }
  value_type basis(std::size_t i) const {
    value_type r(dim_, 0);
    r.at(i) = 1;
    return r;
  }

 private:
  std::size_t dim_;
};

/// Plain machine integers. Used by the table-driven structures, which work
/// on materialized counts and are outside the group model.
struct PlainInt {
  using value_type = std::int64_t;
  std::int64_t zero() const noexcept { return 0; }
  std::int64_t add(std::int64_t a, std::int64_t b) const noexcept { return a + b; }
  std::int64_t sub(std::int64_t a, std::int64_t b) const noexcept { return a - b; }
};

struct OpCounts {
  std::uint64_t adds = 0;
  std::uint64_t subs = 0;
  std::uint64_t total() const noexcept { return adds + subs; }
};

/// Forwards to `Inner` and counts every add/sub in a shared `OpCounts`.
/// Copies of the group share the counters.
template <CommutativeGroup Inner>
class InstrumentedGroup {
 public:
  using value_type = typename Inner::value_type;

  explicit InstrumentedGroup(Inner inner = Inner{}, std::shared_ptr<OpCounts> counts = nullptr)
      : inner_(std::move(inner)), counts_(counts ? std::move(counts) : std::make_shared<OpCounts>()) {}

  value_type zero() const { return inner_.zero(); }
  value_type add(const value_type& a, const value_type& b) const {
    bump(counts_->adds);
    return inner_.add(a, b);
  }
  value_type sub(const value_type& a, const value_type& b) const {
    bump(counts_->subs);
    return inner_.sub(a, b);
  }

  const Inner& inner() const noexcept { return inner_; }
  OpCounts counts() const noexcept { return *counts_; }
  const std::shared_ptr<OpCounts>& counts_handle() const noexcept { return counts_; }
  void reset_counts() const noexcept { *counts_ = OpCounts{}; }

 private:
  static void bump(std::uint64_t& c) noexcept {
    if (c != std::numeric_limits<std::uint64_t>::max()) ++c;
  }

  Inner inner_;
  std::shared_ptr<OpCounts> counts_;
};

using CountingIntGroup = InstrumentedGroup<IntGroup>;

}  // namespace decforest
