#include <algorithm>
#include <cmath>

#include "decforest/oracle/generators.hpp"
#include "decforest/oracle/naive.hpp"

namespace decforest {

NaiveForest::NaiveForest(std::vector<Vertex> parents, std::vector<bool> aux, std::vector<std::int64_t> weights)
    : parent_(std::move(parents)), aux_(std::move(aux)), w_(std::move(weights)) {
  const std::size_t n = parent_.size();
  aux_.resize(n, false);
  w_.resize(n, 0);
  children_.assign(n, {});
  (void)RootedForest::build(parent_, aux_);  // validates the shape
  for (std::size_t v = 0; v < n; ++v) {
    if (parent_[v] != kNoVertex) children_[static_cast<std::size_t>(parent_[v])].push_back(static_cast<Vertex>(v));
  }
}

void NaiveForest::check(Vertex v) const {
  if (v < 0 || static_cast<std::size_t>(v) >= parent_.size()) {
    throw Error(ErrorKind::IndexOutOfRange, "vertex " + std::to_string(v));
  }
  if (aux_[static_cast<std::size_t>(v)]) throw Error(ErrorKind::AuxiliaryVertex, "vertex " + std::to_string(v));
}

void NaiveForest::cut(Vertex v) {
  check(v);
  const Vertex u = parent_[static_cast<std::size_t>(v)];
  if (u == kNoVertex) throw Error(ErrorKind::NoParent, "cut(" + std::to_string(v) + ")");
  auto& ch = children_[static_cast<std::size_t>(u)];
  ch.erase(std::find(ch.begin(), ch.end(), v));
  parent_[static_cast<std::size_t>(v)] = kNoVertex;
}

void NaiveForest::update_weight(Vertex v, std::int64_t x) {
  check(v);
  w_[static_cast<std::size_t>(v)] = x;
}

Vertex NaiveForest::root(Vertex v) const {
  while (parent_.at(static_cast<std::size_t>(v)) != kNoVertex) v = parent_[static_cast<std::size_t>(v)];
  return v;
}

bool NaiveForest::ancestor(Vertex u, Vertex v) const {
  for (Vertex x = v; x != kNoVertex; x = parent_.at(static_cast<std::size_t>(x))) {
    if (x == u) return true;
  }
  return false;
}

std::int64_t NaiveForest::sum_below(Vertex r) const {
  std::int64_t s = 0;
  std::vector<Vertex> stack{r};
  while (!stack.empty()) {
    Vertex x = stack.back();
    stack.pop_back();
    s += w_[static_cast<std::size_t>(x)];
    for (Vertex c : children_[static_cast<std::size_t>(x)]) stack.push_back(c);
  }
  return s;
}

std::int64_t NaiveForest::tree_sum(Vertex v) const {
  check(v);
  return sum_below(root(v));
}

std::int64_t NaiveForest::subtree_sum(Vertex v) const {
  check(v);
  return sum_below(v);
}

ReplayReport replay_with_oracle(const OperationTrace& trace, ForestStructure& s, bool record_per_op) {
  NaiveStructure ref{NaiveForest(trace)};
  ReplayOptions opts;
  opts.reference = &ref;
  opts.record_per_op = record_per_op;
  return replay(trace, s, opts);
}

// ---------------------------------------------------------------------------

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound <= 1) return 0;
  // Lemire's nearly-divisionless method.
  unsigned __int128 m = static_cast<unsigned __int128>(eng_()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(eng_()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
  if (hi <= lo) return lo;
  auto span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(eng_());
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + below(span));
}

std::string_view shape_name(Shape s) noexcept {
  switch (s) {
    case Shape::UniformAttachment: return "uniform";
    case Shape::Path: return "path";
    case Shape::Star: return "star";
    case Shape::Caterpillar: return "caterpillar";
    case Shape::Balanced: return "balanced";
  }
  return "?";
}

std::optional<Shape> parse_shape(std::string_view s) noexcept {
  for (Shape x : {Shape::UniformAttachment, Shape::Path, Shape::Star, Shape::Caterpillar, Shape::Balanced}) {
    if (shape_name(x) == s) return x;
  }
  if (s == "uniform-attachment") return Shape::UniformAttachment;
  return std::nullopt;
}

std::vector<Vertex> gen_random_parents(std::size_t n, std::uint64_t seed, Shape shape) {
  Rng rng(seed);
  std::vector<Vertex> p(n, kNoVertex);
  switch (shape) {
    case Shape::UniformAttachment: {
      std::vector<Vertex> raw(n, kNoVertex);
      for (std::size_t i = 1; i < n; ++i) raw[i] = static_cast<Vertex>(rng.below(i));
      std::vector<Vertex> label(n);
      for (std::size_t i = 0; i < n; ++i) label[i] = static_cast<Vertex>(i);
      rng.shuffle(label);
      for (std::size_t i = 0; i < n; ++i) {
        p[static_cast<std::size_t>(label[i])] = raw[i] == kNoVertex ? kNoVertex : label[static_cast<std::size_t>(raw[i])];
      }
      break;
    }
    case Shape::Path:
      for (std::size_t i = 1; i < n; ++i) p[i] = static_cast<Vertex>(i - 1);
      break;
    case Shape::Star:
      for (std::size_t i = 1; i < n; ++i) p[i] = 0;
      break;
    case Shape::Caterpillar: {
      const std::size_t spine = (n + 1) / 2;
      for (std::size_t i = 1; i < spine; ++i) p[i] = static_cast<Vertex>(i - 1);
      for (std::size_t i = spine; i < n; ++i) p[i] = static_cast<Vertex>(rng.below(spine));
      break;
    }
    case Shape::Balanced:
      for (std::size_t i = 1; i < n; ++i) p[i] = static_cast<Vertex>((i - 1) / 2);
      break;
  }
  return p;
}

RootedForest gen_random_tree(std::size_t n, std::uint64_t seed, Shape shape) {
  return RootedForest::build(gen_random_parents(n, seed, shape));
}

std::vector<Vertex> gen_random_forest_parents(std::size_t n, std::uint64_t seed, Shape shape, double cut_fraction) {
  auto p = gen_random_parents(n, seed, shape);
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (auto& x : p) {
    if (x != kNoVertex && rng.unit() < cut_fraction) x = kNoVertex;
  }
  return p;
}

std::vector<std::int64_t> gen_weights(std::size_t n, std::uint64_t seed, const ValueRange& range,
                                      const std::vector<bool>& aux) {
  Rng rng(seed ^ 0x5bd1e995ULL);
  std::vector<std::int64_t> w(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    if (v < aux.size() && aux[v]) continue;
    w[v] = range.binary ? rng.uniform(0, 1) : rng.uniform(range.lo, range.hi);
  }
  return w;
}

namespace {

/// Vertices with a live parent, with O(1) removal.
class CutPool {
 public:
  CutPool(const std::vector<Vertex>& parents, const std::vector<bool>& aux) : pos_(parents.size(), -1) {
    for (std::size_t v = 0; v < parents.size(); ++v) {
      if (parents[v] != kNoVertex && !(v < aux.size() && aux[v])) {
        pos_[v] = static_cast<std::int64_t>(items_.size());
        items_.push_back(static_cast<Vertex>(v));
      }
    }
  }
  bool empty() const noexcept { return items_.empty(); }
  Vertex take(Rng& rng) {
    std::size_t i = rng.below(items_.size());
    Vertex v = items_[i];
    items_[i] = items_.back();
    pos_[static_cast<std::size_t>(items_[i])] = static_cast<std::int64_t>(i);
    items_.pop_back();
    pos_[static_cast<std::size_t>(v)] = -1;
    return v;
  }

 private:
  std::vector<Vertex> items_;
  std::vector<std::int64_t> pos_;
};

}  // namespace

OperationTrace gen_random_trace(std::vector<Vertex> parents, std::vector<bool> aux, std::vector<std::int64_t> weights,
                                std::size_t m, const OpMix& mix, std::uint64_t seed, const ValueRange& range) {
  OperationTrace t;
  const std::size_t n = parents.size();
  aux.resize(n, false);
  weights.resize(n, 0);
  t.parents = parents;
  t.aux = aux;
  t.weights = weights;
  Rng rng(seed);
  NaiveForest oracle(parents, aux, weights);
  CutPool cuts(parents, aux);
  std::vector<Vertex> regular;
  for (std::size_t v = 0; v < n; ++v) {
    if (!aux[v]) regular.push_back(static_cast<Vertex>(v));
  }
  for (std::size_t i = 0; i < m; ++i) {
    const double wc = cuts.empty() ? 0.0 : mix.cut;
    const double wr = regular.empty() ? 0.0 : 1.0;
    const double wu = mix.update * wr;
    const double wt = mix.tree_sum * wr;
    const double ws = mix.subtree_sum * wr;
    const double total = wc + wu + wt + ws;
    if (total <= 0.0) {
      t.exhausted = true;
      break;
    }
    double x = rng.unit() * total;
    if (x < wc) {
      Vertex v = cuts.take(rng);
      oracle.cut(v);
      t.ops.push_back(TraceOp::cut(v));
      continue;
    }
    x -= wc;
    Vertex v = regular[rng.below(regular.size())];
    if (x < wu) {
      std::int64_t val = range.binary ? rng.uniform(0, 1) : rng.uniform(range.lo, range.hi);
      oracle.update_weight(v, val);
      t.ops.push_back(TraceOp::update(v, val));
    } else if (x < wu + wt) {
      t.ops.push_back(TraceOp::tree_sum(v, oracle.tree_sum(v)));
    } else {
      t.ops.push_back(TraceOp::subtree_sum(v, oracle.subtree_sum(v)));
    }
  }
  return t;
}

OperationTrace gen_random_instance(std::size_t n, std::size_t m, Shape shape, const OpMix& mix, std::uint64_t seed,
                                   const ValueRange& range) {
  auto parents = gen_random_parents(n, seed, shape);
  auto weights = gen_weights(n, seed, range);
  return gen_random_trace(std::move(parents), std::vector<bool>(n, false), std::move(weights), m, mix,
                          seed * 0x2545f4914f6cdd1dULL + 1, range);
}

OperationTrace gen_teardown(std::vector<Vertex> parents, std::vector<std::int64_t> weights, std::uint64_t seed,
                            bool subtree_queries, bool with_expected) {
  OperationTrace t;
  const std::size_t n = parents.size();
  weights.resize(n, 0);
  t.parents = parents;
  t.aux.assign(n, false);
  t.weights = weights;
  Rng rng(seed);
  std::vector<Vertex> order;
  for (std::size_t v = 0; v < n; ++v) {
    if (parents[v] != kNoVertex) order.push_back(static_cast<Vertex>(v));
  }
  rng.shuffle(order);
  std::optional<NaiveForest> oracle;
  if (with_expected) oracle.emplace(parents, t.aux, weights);
  auto query = [&]() {
    if (n == 0) return;
    auto v = static_cast<Vertex>(rng.below(n));
    std::optional<std::int64_t> e;
    if (oracle) e = subtree_queries ? oracle->subtree_sum(v) : oracle->tree_sum(v);
    t.ops.push_back(subtree_queries ? TraceOp::subtree_sum(v, e) : TraceOp::tree_sum(v, e));
  };
  for (Vertex v : order) {
    t.ops.push_back(TraceOp::cut(v));
    if (oracle) oracle->cut(v);
    query();
  }
  while (t.ops.size() < order.size() + n) query();
  return t;
}

}  // namespace decforest
