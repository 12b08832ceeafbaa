#include "decforest/tree_size/linear.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace decforest {

namespace {

void require_binary_weight(std::int64_t x) {
  if (x != 0 && x != 1) throw Error(ErrorKind::NonBinaryWeight, "weight " + std::to_string(x));
}

}  // namespace

MicroTreeSize::MicroTreeSize(const RootedForest& f, const std::vector<std::int64_t>& w,
                             std::shared_ptr<const GlobalSizeTable> table)
    : table_(std::move(table)), n_(f.size()), aux_(f.aux_flags()) {
  if (n_ > table_->ell()) throw Error(ErrorKind::TooLarge, "micro tree exceeds ell");
  std::vector<std::uint8_t> bits(n_, 0);
  for (std::size_t v = 0; v < n_; ++v) {
    std::int64_t x = v < w.size() ? w[v] : 0;
    require_binary_weight(x);
    bits[v] = static_cast<std::uint8_t>(x);
  }
  code_ = encode_forest(table_->layout(), f.parents(), bits);
}

unsigned MicroTreeSize::check(Vertex v) const {
  if (v < 0 || static_cast<std::size_t>(v) >= n_) throw Error(ErrorKind::IndexOutOfRange, "vertex " + std::to_string(v));
  if (aux_[static_cast<std::size_t>(v)]) throw Error(ErrorKind::AuxiliaryVertex, "vertex " + std::to_string(v));
  return static_cast<unsigned>(v);
}

std::int64_t MicroTreeSize::tree_sum(Vertex v) { return table_->tree_sum(code_, check(v)); }

void MicroTreeSize::update_weight(Vertex v, std::int64_t x) {
  require_binary_weight(x);
  code_ = table_->update(code_, check(v), static_cast<unsigned>(x));
}

std::pair<std::int64_t, std::int64_t> MicroTreeSize::cut_report(Vertex v) {
  const unsigned vi = check(v);
  const unsigned field = table_->layout().parent_field(code_, vi);
  if (field == 0) throw Error(ErrorKind::NoParent, "cut(" + std::to_string(v) + ")");
  code_ = table_->cut(code_, vi);
  return {table_->tree_sum(code_, vi), table_->tree_sum(code_, field - 1)};
}

LeafFactory<PlainInt> micro_leaf_factory(std::shared_ptr<const GlobalSizeTable> table) {
  return [table](const RootedForest& f, std::vector<std::int64_t> w, const PlainInt&) {
    return std::unique_ptr<TreeSumBase<PlainInt>>(new MicroTreeSize(f, w, table));
  };
}

unsigned Linear01TreeSize::default_ell(std::size_t n) {
  if (n < 4) return 1;
  const double ll = std::log2(std::log2(static_cast<double>(n)));
  auto ell = static_cast<unsigned>(std::floor(ll));
  return std::clamp(ell, 1u, kMaxEll);
}

Linear01TreeSize::Linear01TreeSize(const RootedForest& f, const std::vector<std::int64_t>& weights, unsigned ell)
    : n_(f.size()), ell_(ell == 0 ? default_ell(f.size()) : ell) {
  for (std::size_t v = 0; v < n_; ++v) require_binary_weight(v < weights.size() ? weights[v] : 0);
  auto b = binarize<std::int64_t>(f, weights, 0);
  LevelSpec<PlainInt> spec;
  spec.levels = 3;
  spec.leaf = micro_leaf_factory(shared_size_table(ell_));
  spec.leaf_capacity = ell_;
  impl_ = std::make_unique<ComponentTreeSum<PlainInt>>(b.forest, b.weights, PlainInt{}, spec);
}

void Linear01TreeSize::check(Vertex v) const {
  if (v < 0 || static_cast<std::size_t>(v) >= n_) throw Error(ErrorKind::IndexOutOfRange, "vertex " + std::to_string(v));
}

std::int64_t Linear01TreeSize::tree_sum(Vertex v) {
  check(v);
  return impl_->tree_sum(v);
}

void Linear01TreeSize::update_weight(Vertex v, std::int64_t x) {
  check(v);
  require_binary_weight(x);
  impl_->update_weight(v, x);
}

std::pair<std::int64_t, std::int64_t> Linear01TreeSize::cut_report(Vertex v) {
  check(v);
  return impl_->cut_report(v);
}

}  // namespace decforest
