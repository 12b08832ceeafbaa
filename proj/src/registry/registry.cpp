#include "decforest/registry/registry.hpp"

#include <charconv>

#include "decforest/clustering/binarize.hpp"
#include "decforest/optimal/adaptive.hpp"
#include "decforest/oracle/naive.hpp"
#include "decforest/subtree/subtree.hpp"
#include "decforest/tree_size/linear.hpp"
#include "decforest/tree_sum/iterated.hpp"
#include "decforest/tree_sum/simple.hpp"

namespace decforest {

namespace {

std::vector<IntValue> wrap(const std::vector<std::int64_t>& w) {
  std::vector<IntValue> out;
  out.reserve(w.size());
  for (std::int64_t x : w) out.emplace_back(x);
  return out;
}

/// Any `TreeSumBase<CountingIntGroup>`-like object with tree_sum, update_weight and cut.
template <class S>
class CountingAdapter final : public ForestStructure {
 public:
  CountingAdapter(std::string name, std::unique_ptr<S> s, CountingIntGroup g)
      : name_(std::move(name)), s_(std::move(s)), g_(std::move(g)) {}

  std::string name() const override { return name_; }
  bool supports(OpKind k) const override { return k != OpKind::SubtreeSum; }
  void cut(Vertex v) override { s_->cut(v); }
  void update_weight(Vertex v, std::int64_t x) override { s_->update_weight(v, IntValue(x)); }
  std::int64_t tree_sum(Vertex v) override { return s_->tree_sum(v).get(); }
  OpCounts group_counts() const override { return g_.counts(); }

 protected:
  std::string name_;
  std::unique_ptr<S> s_;
  CountingIntGroup g_;
};

class Linear01Adapter final : public ForestStructure {
 public:
  explicit Linear01Adapter(const OperationTrace& t) : s_(t.forest(), t.weights) {}

  std::string name() const override { return "linear01"; }
  bool supports(OpKind k) const override { return k != OpKind::SubtreeSum; }
  void cut(Vertex v) override { s_.cut(v); }
  void update_weight(Vertex v, std::int64_t x) override { s_.update_weight(v, x); }
  std::int64_t tree_sum(Vertex v) override { return s_.tree_sum(v); }

 private:
  Linear01TreeSize s_;
};

class SubtreeAdapter final : public ForestStructure {
 public:
  explicit SubtreeAdapter(const OperationTrace& t) : s_(t.forest(), t.weights) {}

  std::string name() const override { return "subtree"; }
  bool supports(OpKind k) const override { return k == OpKind::Cut || k == OpKind::SubtreeSum; }
  void cut(Vertex v) override { s_.cut(v); }
  std::int64_t subtree_sum(Vertex v) override { return s_.subtree_sum(v); }

 private:
  SubtreeSum01 s_;
};

/// Deliberately wrong: once the last vertex has been updated, every tree-sum
/// of its component is one too large. Used to check that fuzzing finds bugs.
class FaultySimple final : public ForestStructure {
 public:
  FaultySimple(const OperationTrace& t, CountingIntGroup g)
      : s_(t.forest(), wrap(t.weights), g), g_(std::move(g)), n_(t.size()) {}

  std::string name() const override { return "faulty-simple"; }
  bool supports(OpKind k) const override { return k != OpKind::SubtreeSum; }
  void cut(Vertex v) override { s_.cut(v); }
  void update_weight(Vertex v, std::int64_t x) override {
    if (static_cast<std::size_t>(v) + 1 == n_) touched_ = true;
    s_.update_weight(v, IntValue(x));
  }
  std::int64_t tree_sum(Vertex v) override {
    const std::int64_t r = s_.tree_sum(v).get();
    const auto last = static_cast<Vertex>(n_ - 1);
    const bool hit = touched_ && s_.connectivity().root(v) == s_.connectivity().root(last);
    return hit ? r + 1 : r;
  }
  OpCounts group_counts() const override { return g_.counts(); }

 private:
  SimpleTreeSum<CountingIntGroup> s_;
  CountingIntGroup g_;
  std::size_t n_;
  bool touched_ = false;
};

/// Parses "iterated:<t>" with t in [1, 8]; nullopt if the name is not of
/// that form.
std::optional<std::size_t> iterated_levels(std::string_view name) {
  constexpr std::string_view prefix = "iterated:";
  if (name.substr(0, prefix.size()) != prefix) return std::nullopt;
  std::string_view digits = name.substr(prefix.size());
  std::size_t t = 0;
  auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), t);
  if (ec != std::errc{} || end != digits.data() + digits.size() || t < 1 || t > 8) {
    throw Error(ErrorKind::UnknownStructure, "iterated:<t> needs t in 1..8, got '" + std::string(name) + "'");
  }
  return t;
}

[[noreturn]] void unknown(std::string_view name) {
  throw Error(ErrorKind::UnknownStructure, "'" + std::string(name) + "'");
}

}  // namespace

std::vector<std::string> structure_names() {
  return {"simple", "iterated:1", "iterated:2", "iterated:3", "iterated:4", "linear01", "subtree", "universal",
          "oracle", "faulty-simple"};
}

StructureTraits structure_traits(std::string_view name) {
  if (name == "simple" || name == "universal" || name == "faulty-simple" || iterated_levels(name)) {
    return {true, false, true, false};
  }
  if (name == "linear01") return {true, false, true, true};
  if (name == "subtree") return {false, true, false, true};
  if (name == "oracle") return {true, true, true, false};
  unknown(name);
}

std::unique_ptr<ForestStructure> make_structure(std::string_view name, const OperationTrace& initial) {
  CountingIntGroup g;
  const RootedForest f = initial.forest();
  if (name == "simple") {
    auto s = std::make_unique<SimpleTreeSum<CountingIntGroup>>(f, wrap(initial.weights), g);
    return std::make_unique<CountingAdapter<SimpleTreeSum<CountingIntGroup>>>("simple", std::move(s), g);
  }
  if (auto t = iterated_levels(name)) {
    auto b = binarize<IntValue>(f, wrap(initial.weights), g.zero());
    auto s = std::make_unique<IteratedTreeSum<CountingIntGroup>>(b.forest, b.weights, *t, g);
    return std::make_unique<CountingAdapter<IteratedTreeSum<CountingIntGroup>>>(std::string(name), std::move(s), g);
  }
  if (name == "universal") {
    auto s = std::make_unique<UniversalTreeSum<CountingIntGroup>>(f, wrap(initial.weights), g);
    return std::make_unique<CountingAdapter<UniversalTreeSum<CountingIntGroup>>>("universal", std::move(s), g);
  }
  if (name == "linear01") return std::make_unique<Linear01Adapter>(initial);
  if (name == "subtree") return std::make_unique<SubtreeAdapter>(initial);
  if (name == "oracle") return std::make_unique<NaiveStructure>(NaiveForest(initial));
  if (name == "faulty-simple") return std::make_unique<FaultySimple>(initial, g);
  unknown(name);
}

OpMix default_mix(const StructureTraits& t) {
  OpMix m;
  m.cut = 1.0;
  m.update = t.update ? 1.0 : 0.0;
  m.tree_sum = t.tree_sum ? 2.0 : 0.0;
  m.subtree_sum = t.subtree_sum && !t.tree_sum ? 2.0 : 0.0;
  return m;
}

ValueRange default_range(const StructureTraits& t) {
  ValueRange r;
  r.binary = t.binary;
  return r;
}

}  // namespace decforest
