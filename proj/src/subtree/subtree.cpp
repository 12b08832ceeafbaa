#include "decforest/subtree/subtree.hpp"

#include <bit>
#include <cstring>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>

#include "decforest/clustering/binarize.hpp"
#include "decforest/core/probe.hpp"

namespace decforest {

// ---------------------------------------------------------------------------
// QTable

QTable QTable::build(unsigned k) {
  if (k == 0 || !std::has_single_bit(k)) throw Error(ErrorKind::CapExceeded, "k must be a power of two");
  std::uint64_t codes = 1;
  for (unsigned i = 0; i < k; ++i) {
    codes *= k + 1;
    if (codes > kMaxEntries) break;
  }
  if (k > 24 || codes * (std::uint64_t{1} << k) > kMaxEntries) {
    throw Error(ErrorKind::CapExceeded, "Q table for k=" + std::to_string(k) + " exceeds the entry cap");
  }
  QTable t;
  t.k_ = k;
  t.q_.assign(static_cast<std::size_t>(codes) << k, 0);
  std::vector<unsigned> digit(k, 0);
  for (std::size_t code = 0; code < codes; ++code) {
    for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
      unsigned s = 0;
      for (unsigned i = 0; i < k; ++i) {
        if (mask >> i & 1u) s += digit[i];
      }
      t.q_[(code << k) | mask] = static_cast<std::uint8_t>(s);
    }
    for (unsigned i = 0; i < k; ++i) {  // next base-(k+1) number
      if (++digit[i] <= k) break;
      digit[i] = 0;
    }
  }
  return t;
}

namespace {
constexpr char kQMagic[8] = {'D', 'F', 'Q', 'T', 'B', 'L', '0', '1'};
}  // namespace

void QTable::save(std::ostream& out) const {
  out.write(kQMagic, sizeof kQMagic);
  const std::uint32_t k = k_;
  out.write(reinterpret_cast<const char*>(&k), sizeof k);
  out.write(reinterpret_cast<const char*>(q_.data()), static_cast<std::streamsize>(q_.size()));
}

QTable QTable::load(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kQMagic, sizeof magic) != 0) throw Error(ErrorKind::ParseError, "bad Q table magic");
  std::uint32_t k = 0;
  in.read(reinterpret_cast<char*>(&k), sizeof k);
  if (!in) throw Error(ErrorKind::ParseError, "truncated Q table");
  QTable t = build(k);
  std::vector<std::uint8_t> q(t.q_.size());
  in.read(reinterpret_cast<char*>(q.data()), static_cast<std::streamsize>(q.size()));
  if (!in) throw Error(ErrorKind::ParseError, "truncated Q table");
  if (q != t.q_) throw Error(ErrorKind::ParseError, "Q table entries disagree with their definition");
  return t;
}

std::size_t QTable::code_of(std::span<const std::uint8_t> counters) const {
  if (counters.size() > k_) throw Error(ErrorKind::IndexOutOfRange, "too many counters");
  std::size_t code = 0;
  for (std::size_t i = counters.size(); i-- > 0;) {
    if (counters[i] > k_) throw Error(ErrorKind::ValueOutOfRange, "counter exceeds k");
    code = code * radix() + counters[i];
  }
  return code;
}

std::uint8_t QTable::operator()(std::span<const std::uint8_t> counters, std::uint32_t mask) const {
  return at(code_of(counters), mask);
}

std::shared_ptr<const QTable> shared_q_table(unsigned k) {
  static std::mutex mu;
  static std::map<unsigned, std::shared_ptr<const QTable>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[k];
  if (!slot) slot = std::make_shared<const QTable>(QTable::build(k));
  return slot;
}

// ---------------------------------------------------------------------------
// PackedCounters

PackedCounters::PackedCounters(std::size_t n, unsigned q) : n_(n), q_(q) {
  pow_.assign(q, 1);
  for (unsigned i = 1; i < q; ++i) pow_[i] = static_cast<std::uint16_t>(pow_[i - 1] * (q + 1));
  code_.assign((n + q - 1) / q, 0);
}

unsigned PackedCounters::get(std::size_t i) const {
  if (i >= n_) throw Error(ErrorKind::IndexOutOfRange, "counter " + std::to_string(i));
  return static_cast<unsigned>(code_[i / q_] / pow_[i % q_] % (q_ + 1));
}

void PackedCounters::clear() { std::fill(code_.begin(), code_.end(), 0); }

PackedCounters PackedCounters::pack(std::span<const std::uint8_t> values, unsigned q) {
  PackedCounters p(values.size(), q);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > q) throw Error(ErrorKind::ValueOutOfRange, "counter exceeds its group size");
    p.code_[i / q] = static_cast<std::uint16_t>(p.code_[i / q] + values[i] * p.pow_[i % q]);
  }
  return p;
}

std::vector<std::uint8_t> PackedCounters::unpack() const {
  std::vector<std::uint8_t> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = static_cast<std::uint8_t>(get(i));
  return out;
}

// ---------------------------------------------------------------------------
// SmallSubtreeSum

SmallSubtreeSum::SmallSubtreeSum(const RootedForest& f, const std::vector<std::int64_t>& w,
                                 std::shared_ptr<const QTable> q)
    : n_(f.size()), q_(q ? std::move(q) : shared_q_table(kChunk)) {
  if (n_ > kMaxVertices) throw Error(ErrorKind::TooLarge, "small structure holds at most 64 vertices");
  if (q_->k() != kChunk) throw Error(ErrorKind::InvariantBroken, "Q table must have k = 4");
  order_.assign(f.preorder().begin(), f.preorder().end());
  parent_.assign(f.parents().begin(), f.parents().end());
  w_.assign(n_, 0);
  for (std::size_t v = 0; v < n_; ++v) {
    w_[v] = v < w.size() ? w[v] : 0;
    if (w_[v] < 0) throw Error(ErrorKind::NegativeWeight, "vertex " + std::to_string(v));
  }
  root0_ = f.roots().empty() ? 0 : f.roots().front();
  B_ = PackedCounters(n_, kChunk);
  rebuild();
}

Vertex SmallSubtreeSum::check(Vertex v) const {
  if (v < 0 || static_cast<std::size_t>(v) >= n_) throw Error(ErrorKind::IndexOutOfRange, "vertex " + std::to_string(v));
  return v;
}

std::int64_t SmallSubtreeSum::subtree_sum(Vertex v) const {
  const auto vi = static_cast<std::size_t>(check(v));
  std::int64_t s = A_[vi];
  const std::uint64_t c = C_[vi];
  for (std::size_t j = 0; j < B_.chunks(); ++j) {
    probe::tick();
    s -= q_->at(B_.chunk_code(j), static_cast<std::uint32_t>(c >> (kChunk * j)) & 0xfu);
  }
  return s;
}

void SmallSubtreeSum::decrement_weight(Vertex v) {
  const auto vi = static_cast<std::size_t>(check(v));
  if (w_[vi] <= 0) throw Error(ErrorKind::NegativeWeight, "decrement below zero at " + std::to_string(v));
  probe::tick();
  --w_[vi];
  B_.increment(vi);
  if (++pending_ == kChunk) flush();
}

void SmallSubtreeSum::flush() {
  for (std::size_t v = 0; v < n_; ++v) {
    A_[v] = subtree_sum(static_cast<Vertex>(v));
  }
  B_.clear();
  pending_ = 0;
  ++flushes_;
}

void SmallSubtreeSum::rebuild() {
  A_.assign(n_, 0);
  C_.assign(n_, 0);
  for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
    probe::tick();
    const auto v = static_cast<std::size_t>(*it);
    A_[v] += w_[v];
    C_[v] |= std::uint64_t{1} << v;
    const Vertex p = parent_[v];
    if (p != kNoVertex) {
      A_[static_cast<std::size_t>(p)] += A_[v];
      C_[static_cast<std::size_t>(p)] |= C_[v];
    }
  }
}

void SmallSubtreeSum::cut(Vertex v) {
  const auto vi = static_cast<std::size_t>(check(v));
  if (parent_[vi] == kNoVertex) throw Error(ErrorKind::NoParent, "cut(" + std::to_string(v) + ")");
  flush();
  // Recover weights: w(x) = A[x] minus the A of its live children.
  std::vector<std::int64_t> rec(A_);
  for (std::size_t x = 0; x < n_; ++x) {
    probe::tick();
    if (parent_[x] != kNoVertex) rec[static_cast<std::size_t>(parent_[x])] -= A_[x];
  }
  w_ = std::move(rec);
  parent_[vi] = kNoVertex;
  rebuild();
}

void SmallSubtreeSum::check_invariants() const {
  if (pending_ >= kChunk) throw Error(ErrorKind::InvariantBroken, "flush overdue");
  for (std::size_t v = 0; v < n_; ++v) {
    std::int64_t s = 0;
    std::uint64_t mask = 0;
    for (std::size_t x = 0; x < n_; ++x) {
      for (Vertex y = static_cast<Vertex>(x); y != kNoVertex; y = parent_[static_cast<std::size_t>(y)]) {
        if (static_cast<std::size_t>(y) == v) {
          s += w_[x];
          mask |= std::uint64_t{1} << x;
          break;
        }
      }
    }
    if (mask != C_[v] || s != subtree_sum(static_cast<Vertex>(v))) {
      throw Error(ErrorKind::InvariantBroken, "subtree sum of " + std::to_string(v));
    }
  }
}

// ---------------------------------------------------------------------------
// RecursiveSubtreeSum

std::size_t RecursiveSubtreeSum::levels_for(std::size_t n, unsigned ell) {
  std::size_t t = 1;
  std::size_t cap = ell;
  while (cap < n) {
    cap *= ell;
    ++t;
  }
  return t;
}

RecursiveSubtreeSum::RecursiveSubtreeSum(const RootedForest& tree, const std::vector<std::int64_t>& w, std::size_t t,
                                         std::shared_ptr<SubtreeContext> ctx, std::vector<Vertex> global)
    : t_(std::max<std::size_t>(t, 1)), ctx_(std::move(ctx)), global_(std::move(global)) {
  const std::size_t n = tree.size();
  if (!tree.is_binary()) throw Error(ErrorKind::NotBinary, "subtree structure expects a binary tree");
  std::size_t cap = 1;
  for (std::size_t i = 0; i < t_ && cap < n; ++i) cap *= ctx_->ell;
  if (n > cap) throw Error(ErrorKind::TooLarge, "tree exceeds ell^t vertices");
  parent_.assign(tree.parents().begin(), tree.parents().end());

  if (t_ == 1) {
    D_ = std::make_unique<SmallSubtreeSum>(tree, w, ctx_->q);
    return;
  }

  const std::size_t k = (n + ctx_->ell - 1) / ctx_->ell;
  dec_ = std::make_shared<const ClusterDecomposition>(ClusterDecomposition::decompose(tree, std::max<std::size_t>(k, 1)));
  const auto& clusters = dec_->clusters();
  std::vector<std::int64_t> wprime(dec_->boundary().size(), 0);
  xlocal_.assign(n, kNoVertex);
  X_.resize(clusters.size());
  linked_.assign(clusters.size(), 0);
  ub_weight_.assign(clusters.size(), 0);
  for (const Cluster& c : clusters) {
    std::vector<Vertex> rest;
    std::vector<std::int64_t> rw;
    std::vector<Vertex> rg;
    for (Vertex v : c.members) {
      if (c.has_lb() && v == c.lb) continue;
      xlocal_[static_cast<std::size_t>(v)] = static_cast<Vertex>(rest.size());
      rest.push_back(v);
      rw.push_back(w[static_cast<std::size_t>(v)]);
      rg.push_back(g(v));
    }
    std::int64_t sum = 0;
    for (auto x : rw) sum += x;
    if (c.is_point()) {
      wprime[static_cast<std::size_t>(dec_->s_id(c.ub))] = w[static_cast<std::size_t>(c.ub)];
      continue;
    }
    wprime[static_cast<std::size_t>(dec_->s_id(c.ub))] = sum;
    ub_weight_[c.id] = sum;
    if (c.has_lb()) {
      wprime[static_cast<std::size_t>(dec_->s_id(c.lb))] = w[static_cast<std::size_t>(c.lb)];
      linked_[c.id] = 1;
    }
    RootedForest sub = induced_subforest(tree, rest);
    X_[c.id] = std::make_unique<RecursiveSubtreeSum>(sub, rw, levels_for(rest.size(), ctx_->ell), ctx_, std::move(rg));
  }
  D_ = std::make_unique<SmallSubtreeSum>(dec_->cluster_tree(), wprime, ctx_->q);
}

std::int64_t RecursiveSubtreeSum::subtree_sum(Vertex v) const {
  probe::tick();
  if (!dec_) return D_->subtree_sum(v);
  const Cluster& c = dec_->cluster(dec_->cluster_of(v));
  if (is_boundary_of(v, c)) return D_->subtree_sum(dec_->s_id(v));
  const std::int64_t inside = X_[c.id]->subtree_sum(xlocal_[static_cast<std::size_t>(v)]);
  if (c.has_lb() && ctx_->conn->ancestor(g(v), g(c.lb))) return inside + D_->subtree_sum(dec_->s_id(c.lb));
  return inside;
}

std::int64_t RecursiveSubtreeSum::root_sum() const {
  probe::tick();
  if (!dec_) return D_->root_sum();
  return D_->root_sum();
}

void RecursiveSubtreeSum::cut(Vertex v) {
  probe::tick();
  if (!dec_) {
    D_->cut(v);
    return;
  }
  const Vertex u = parent_.at(static_cast<std::size_t>(v));
  if (u == kNoVertex) throw Error(ErrorKind::NoParent, "cut(" + std::to_string(v) + ")");
  const Cluster& c = dec_->cluster(dec_->cluster_of(v));
  if (dec_->cluster_of(u) != c.id) {
    D_->cut(dec_->s_id(v));
    return;
  }
  if (v != c.lb) {
    RecursiveSubtreeSum& x = *X_[c.id];
    x.cut(xlocal_[static_cast<std::size_t>(v)]);
    const std::int64_t now = x.root_sum();
    const Vertex s = dec_->s_id(c.ub);
    for (auto& cur = ub_weight_[c.id]; cur > now; --cur) D_->decrement_weight(s);
  }
  if (linked_[c.id] && !ctx_->conn->connected(g(c.ub), g(c.lb))) {
    linked_[c.id] = 0;
    D_->cut(dec_->s_id(c.lb));
  }
}

// ---------------------------------------------------------------------------
// SubtreeSum01

SubtreeSum01::SubtreeSum01(const RootedForest& f, const std::vector<std::int64_t>& weights, unsigned ell)
    : n_(f.size()), aux_(f.aux_flags()) {
  if (ell != 2 && ell != 4) throw Error(ErrorKind::ValueOutOfRange, "ell must be 2 or 4");
  for (std::size_t v = 0; v < n_; ++v) {
    std::int64_t x = v < weights.size() ? weights[v] : 0;
    if (x != 0 && x != 1) throw Error(ErrorKind::NonBinaryWeight, "weight " + std::to_string(x));
  }
  auto b = binarize<std::int64_t>(f, weights, 0);
  ctx_ = std::make_shared<SubtreeContext>();
  ctx_->ell = ell;
  ctx_->q = shared_q_table(SmallSubtreeSum::kChunk);
  ctx_->conn = std::make_shared<DecrementalConnectivity>(b.forest);
  t_ = RecursiveSubtreeSum::levels_for(std::max<std::size_t>(2 * n_, 1), ell);

  ComponentSplit split = split_components(b.forest);
  comp_ = std::move(split.component);
  local_ = std::move(split.local);
  for (std::size_t i = 0; i < split.trees.size(); ++i) {
    std::vector<std::int64_t> cw;
    for (Vertex v : split.members[i]) cw.push_back(b.weights[static_cast<std::size_t>(v)]);
    parts_.push_back(std::make_unique<RecursiveSubtreeSum>(split.trees[i], cw, t_, ctx_, split.members[i]));
  }
}

void SubtreeSum01::check(Vertex v) const {
  if (v < 0 || static_cast<std::size_t>(v) >= n_) throw Error(ErrorKind::IndexOutOfRange, "vertex " + std::to_string(v));
  if (aux_[static_cast<std::size_t>(v)]) throw Error(ErrorKind::AuxiliaryVertex, "vertex " + std::to_string(v));
}

std::int64_t SubtreeSum01::subtree_sum(Vertex v) const {
  check(v);
  const auto vi = static_cast<std::size_t>(v);
  return parts_[comp_[vi]]->subtree_sum(local_[vi]);
}

void SubtreeSum01::cut(Vertex v) {
  check(v);
  ctx_->conn->cut(v);
  const auto vi = static_cast<std::size_t>(v);
  parts_[comp_[vi]]->cut(local_[vi]);
}

}  // namespace decforest
