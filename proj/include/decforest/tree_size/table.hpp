#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "decforest/core/forest.hpp"

namespace decforest {

/// Bit layout of a forest code for micro trees of at most `ell` vertices.
///
/// Vertex i (0-based) owns bits [i(p+1), (i+1)(p+1)) with p = ceil(log2(ell+1)).
/// The low p bits hold the parent field (0 for a root, parent index + 1
/// otherwise) and the top bit holds the 0/1 weight.
struct CodeLayout {
  unsigned ell = 1;
  unsigned parent_bits = 1;
  unsigned field_bits = 2;
  unsigned bits = 2;

  /// Throws `WordOverflow` if the code does not fit a 64-bit word.
  static CodeLayout of(unsigned ell);

  unsigned parent_field(std::uint64_t code, unsigned v) const {
    return static_cast<unsigned>((code >> (v * field_bits)) & ((1u << parent_bits) - 1));
  }
  unsigned weight_bit(std::uint64_t code, unsigned v) const {
    return static_cast<unsigned>((code >> (v * field_bits + parent_bits)) & 1u);
  }
};

/// Local forest of a micro tree: parents (kNoVertex for roots) and 0/1 weights.
struct MicroForest {
  std::vector<Vertex> parents;
  std::vector<std::uint8_t> weights;
};

/// Encodes up to `ell` vertices; missing vertices are isolated with weight 0.
std::uint64_t encode_forest(const CodeLayout& layout, std::span<const Vertex> parents,
                            std::span<const std::uint8_t> weights);
/// Decodes all `ell` vertex fields. Does not check acyclicity.
MicroForest decode_forest(const CodeLayout& layout, std::uint64_t code);

/// Answers for every code of a given `ell`: per vertex the tree sum (S), the
/// successor code after setting its weight to 0 or 1 (U0, U1) and after
/// cutting it from its parent (C). Codes whose parent fields do not describe
/// a forest are marked invalid.
class GlobalSizeTable {
 public:
  static constexpr std::uint32_t kNoCode = 0xffffffffu;
  /// Largest number of per-vertex entries (codes x ell) a table may hold.
  static constexpr std::uint64_t kMaxEntries = std::uint64_t{1} << 24;

  /// Throws `WordOverflow` if the code exceeds 64 bits and `CapExceeded`
  /// if the table would exceed `kMaxEntries`.
  static GlobalSizeTable build(unsigned ell);

  unsigned ell() const noexcept { return layout_.ell; }
  const CodeLayout& layout() const noexcept { return layout_; }
  std::uint64_t code_count() const noexcept { return std::uint64_t{1} << layout_.bits; }
  bool valid(std::uint64_t code) const;
  std::size_t valid_count() const;
  /// Probes spent by `build`.
  std::uint64_t build_probes() const noexcept { return build_probes_; }

  /// Micro operations on a code. Each is one table probe; an invalid code or
  /// illegal argument throws `IllegalOperation`.
  std::uint32_t tree_sum(std::uint64_t code, unsigned v) const;
  std::uint64_t update(std::uint64_t code, unsigned v, unsigned bit) const;
  std::uint64_t cut(std::uint64_t code, unsigned v) const;

  /// Binary format: magic "DFSZTBL1", u32 ell, validity bitmap, then the S,
  /// U0, U1 and C arrays as raw little-endian dumps.
  void save(std::ostream& out) const;
  static GlobalSizeTable load(std::istream& in);
  void save_file(const std::string& path) const;
  static GlobalSizeTable load_file(const std::string& path);

  bool operator==(const GlobalSizeTable&) const = default;

 private:
  std::size_t slot(std::uint64_t code, unsigned v) const;

  CodeLayout layout_;
  std::vector<std::uint8_t> valid_;
  std::vector<std::uint8_t> S_;
  std::vector<std::uint32_t> U0_;
  std::vector<std::uint32_t> U1_;
  std::vector<std::uint32_t> C_;
  std::uint64_t build_probes_ = 0;
};

/// Process-wide table for `ell`, built on first use.
std::shared_ptr<const GlobalSizeTable> shared_size_table(unsigned ell);

}  // namespace decforest
