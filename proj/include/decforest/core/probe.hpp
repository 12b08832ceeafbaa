#pragma once

#include <cstdint>

namespace decforest::probe {

// Per-thread word-probe counter. Structures tick it once per constant-time
// memory step (vertex visit, table lookup, per-level dispatch), so totals are
// comparable across structures and input sizes.
inline std::uint64_t& counter() noexcept {
  thread_local std::uint64_t probes = 0;
  return probes;
}

inline void tick(std::uint64_t k = 1) noexcept { counter() += k; }

inline std::uint64_t read() noexcept { return counter(); }

inline void reset() noexcept { counter() = 0; }

}  // namespace decforest::probe
