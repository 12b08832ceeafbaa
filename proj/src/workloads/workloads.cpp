#include "decforest/workloads/workloads.hpp"

#include <numeric>

#include "decforest/oracle/naive.hpp"

namespace decforest {

namespace {

void check_index(std::size_t i, std::size_t hi, const char* what) {
  if (i < 1 || i > hi) throw Error(ErrorKind::IndexOutOfRange, std::string(what) + " " + std::to_string(i));
}

}  // namespace

SpineInstance::SpineInstance(std::size_t n_prime, std::vector<std::int64_t> A, bool unary)
    : np_(n_prime), unary_(unary), A_(std::move(A)) {
  if (np_ == 0) throw Error(ErrorKind::ValueOutOfRange, "n' must be positive");
  if (A_.size() != np_) throw Error(ErrorKind::ValueOutOfRange, "array length must equal n'");
  const auto top = static_cast<std::int64_t>(np_) - 1;
  for (std::int64_t a : A_) {
    if (a < 0 || a > top) throw Error(ErrorKind::ValueOutOfRange, "value " + std::to_string(a) + " outside [0, n'-1]");
  }

  const std::size_t n = plus_size() + minus_size();
  parents_.assign(n, kNoVertex);
  weights_.assign(n, 0);
  for (std::size_t i = 1; i <= np_; ++i) {
    if (i < np_) {
      parents_[static_cast<std::size_t>(v_plus(i))] = v_plus(i + 1);
      parents_[static_cast<std::size_t>(v_minus(i))] = v_minus(i + 1);
    }
    for (std::size_t j = 1; j <= 8 * np_; ++j) {
      const auto x = static_cast<std::size_t>(u(i, j));
      parents_[x] = v_plus(i);
      weights_[x] = unary ? 1 : static_cast<std::int64_t>(j);
    }
    for (std::size_t p = 1; p <= np_; ++p) {
      const auto x = static_cast<std::size_t>(w(i, p));
      parents_[x] = v_minus(i);
      weights_[x] = 1;
    }
  }
  if (unary) {
    for (std::size_t i = 1; i <= np_; ++i) {
      for (std::size_t j = 2; j <= 8 * np_; ++j) {
        for (std::size_t e = 1; e < j; ++e) {
          parents_.push_back(u(i, j));
          weights_.push_back(1);
        }
      }
    }
  }

  // Initially subtree-sum(v+_k) = 4kn'(8n'+1) and subtree-sum(v-_k) = kn'.
  const auto m = static_cast<std::int64_t>(np_);
  B_.resize(np_);
  std::int64_t prefix = 0;
  for (std::size_t k = 1; k <= np_; ++k) {
    const auto kk = static_cast<std::int64_t>(k);
    prefix += A_[k - 1];
    B_[k - 1] = prefix - 4 * kk * m * (8 * m + 1) + 7 * m * kk * m;
  }
  u_cut_.assign(np_ * 8 * np_, 0);
  w_cut_.assign(np_ * np_, 0);
  updates_.assign(np_, 0);
}

std::size_t SpineInstance::idx_u(std::size_t i, std::size_t j) const {
  check_index(i, np_, "spine index");
  check_index(j, 8 * np_, "leaf index");
  return (i - 1) * 8 * np_ + (j - 1);
}

std::size_t SpineInstance::idx_w(std::size_t i, std::size_t p) const {
  check_index(i, np_, "spine index");
  check_index(p, np_, "epoch");
  return (i - 1) * np_ + (p - 1);
}

Vertex SpineInstance::v_plus(std::size_t i) const {
  check_index(i, np_, "spine index");
  return static_cast<Vertex>(i - 1);
}

Vertex SpineInstance::v_minus(std::size_t i) const {
  check_index(i, np_, "spine index");
  return static_cast<Vertex>(plus_size() + i - 1);
}

Vertex SpineInstance::u(std::size_t i, std::size_t j) const { return static_cast<Vertex>(np_ + idx_u(i, j)); }

Vertex SpineInstance::w(std::size_t i, std::size_t p) const {
  return static_cast<Vertex>(plus_size() + np_ + idx_w(i, p));
}

OperationTrace SpineInstance::prologue() const {
  OperationTrace t;
  t.parents = parents_;
  t.aux.assign(parents_.size(), false);
  t.weights = weights_;
  return t;
}

std::int64_t SpineInstance::prefix_from(std::size_t k, std::int64_t ssum_plus, std::int64_t ssum_minus) const {
  check_index(k, np_, "prefix");
  return ssum_plus - 7 * static_cast<std::int64_t>(np_) * ssum_minus + B_[k - 1];
}

SpineInstance build_spine(std::size_t n_prime, std::vector<std::int64_t> A, bool unary) {
  return SpineInstance(n_prime, std::move(A), unary);
}

SpineUpdate translate_update(SpineInstance& inst, std::size_t p, std::size_t i, std::int64_t x, Rng& rng) {
  const std::size_t np = inst.np_;
  check_index(i, np, "spine index");
  check_index(p, np, "epoch");
  if (x < 0 || x > static_cast<std::int64_t>(np) - 1) {
    throw Error(ErrorKind::ValueOutOfRange, "value " + std::to_string(x) + " outside [0, n'-1]");
  }
  if (inst.updates_[i - 1] + 1 != p) {
    throw Error(ErrorKind::OutOfOrderUpdate, "element " + std::to_string(i) + " already has " +
                                                 std::to_string(inst.updates_[i - 1]) + " updates, epoch " +
                                                 std::to_string(p));
  }
  const std::int64_t delta = x - inst.A_[i - 1];
  const auto s = static_cast<std::size_t>(7 * static_cast<std::int64_t>(np) - delta);
  auto fresh = [&](std::size_t j) { return inst.u_attached(i, j) && inst.u_attached(i, s - j); };

  SpineUpdate r;
  // At least n' of the 3n' pairs are valid, so 64n' misses are astronomically
  // unlikely; the scan keeps the answer deterministic in that case.
  const std::size_t limit = 64 * np;
  for (; r.tries < limit; ++r.tries) {
    const std::size_t j = 1 + rng.below(3 * np);
    if (fresh(j)) {
      r.j1 = j;
      break;
    }
  }
  if (r.j1 == 0) {
    for (std::size_t j = 1; j <= 3 * np && r.j1 == 0; ++j) {
      if (fresh(j)) r.j1 = j;
    }
  }
  if (r.j1 == 0) throw Error(ErrorKind::InvariantBroken, "no free leaf pair summing to " + std::to_string(s));
  ++r.tries;
  r.j2 = s - r.j1;

  inst.u_cut_[inst.idx_u(i, r.j1)] = 1;
  inst.u_cut_[inst.idx_u(i, r.j2)] = 1;
  inst.w_cut_[inst.idx_w(i, p)] = 1;
  inst.updates_[i - 1] = p;
  inst.A_[i - 1] = x;
  r.cuts = {TraceOp::cut(inst.u(i, r.j1)), TraceOp::cut(inst.u(i, r.j2)), TraceOp::cut(inst.w(i, p))};
  return r;
}

OperationTrace spine_trace(std::size_t n_prime, std::uint64_t seed, bool unary) {
  Rng rng(seed);
  std::vector<std::int64_t> A(n_prime);
  for (auto& a : A) a = rng.uniform(0, static_cast<std::int64_t>(n_prime) - 1);
  SpineInstance inst(n_prime, A, unary);
  OperationTrace t = inst.prologue();
  NaiveForest oracle(t.parents, t.aux, t.weights);

  // Event e < n' updates element e+1; otherwise it queries prefix e-n'+1.
  std::vector<std::size_t> events(2 * n_prime);
  for (std::size_t p = 1; p <= n_prime; ++p) {
    std::iota(events.begin(), events.end(), std::size_t{0});
    rng.shuffle(events);
    for (std::size_t e : events) {
      if (e < n_prime) {
        const auto x = rng.uniform(0, static_cast<std::int64_t>(n_prime) - 1);
        for (const TraceOp& op : translate_update(inst, p, e + 1, x, rng).cuts) {
          oracle.cut(op.v);
          t.ops.push_back(op);
        }
      } else {
        const std::size_t k = e - n_prime + 1;
        for (Vertex v : {inst.v_plus(k), inst.v_minus(k)}) t.ops.push_back(TraceOp::subtree_sum(v, oracle.subtree_sum(v)));
      }
    }
  }
  return t;
}

ParityInstance::ParityInstance(std::vector<std::uint8_t> A) : A_(std::move(A)) {
  const std::size_t np = A_.size();
  for (std::uint8_t a : A_) {
    if (a > 1) throw Error(ErrorKind::ValueOutOfRange, "parity array holds bits");
  }
  parents_.assign(np, kNoVertex);
  for (std::size_t i = 1; i < np; ++i) parents_[i - 1] = static_cast<Vertex>(i);
  for (std::size_t i = 0; i < np; ++i) {
    u1_.push_back(static_cast<Vertex>(parents_.size()));
    for (int e = 0; e <= A_[i]; ++e) parents_.push_back(static_cast<Vertex>(i));
  }
  flipped_.assign(np, 0);
}

Vertex ParityInstance::v(std::size_t k) const {
  check_index(k, A_.size(), "prefix");
  return static_cast<Vertex>(k - 1);
}

Vertex ParityInstance::u1(std::size_t i) const {
  check_index(i, A_.size(), "index");
  return u1_[i - 1];
}

OperationTrace ParityInstance::prologue() const {
  OperationTrace t;
  t.parents = parents_;
  t.aux.assign(parents_.size(), false);
  t.weights.assign(parents_.size(), 1);
  return t;
}

TraceOp ParityInstance::flip(std::size_t i) {
  check_index(i, A_.size(), "index");
  if (flipped_[i - 1]) throw Error(ErrorKind::DoubleFlip, "index " + std::to_string(i) + " was already flipped");
  flipped_[i - 1] = 1;
  A_[i - 1] ^= 1;
  return TraceOp::cut(u1_[i - 1]);
}

int ParityInstance::parity(std::size_t k) const {
  check_index(k, A_.size(), "prefix");
  int s = 0;
  for (std::size_t j = 0; j < k; ++j) s ^= A_[j];
  return s;
}

ParityInstance build_parity(std::vector<std::uint8_t> A) { return ParityInstance(std::move(A)); }

OperationTrace parity_trace(std::size_t n_prime, std::size_t flips, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::uint8_t> A(n_prime);
  for (auto& a : A) a = static_cast<std::uint8_t>(rng.below(2));
  ParityInstance inst(A);
  OperationTrace t = inst.prologue();
  NaiveForest oracle(t.parents, t.aux, t.weights);
  std::vector<std::size_t> order(n_prime);
  std::iota(order.begin(), order.end(), std::size_t{1});
  rng.shuffle(order);
  order.resize(std::min(flips, n_prime));
  auto query = [&] {
    const Vertex v = inst.v(1 + rng.below(n_prime));
    t.ops.push_back(TraceOp::subtree_sum(v, oracle.subtree_sum(v)));
  };
  for (std::size_t i : order) {
    TraceOp op = inst.flip(i);
    oracle.cut(op.v);
    t.ops.push_back(op);
    query();
  }
  if (n_prime) query();
  return t;
}

BlockPartialSum::BlockPartialSum(const std::vector<std::int64_t>& B0) : P0_(B0.size() + 1, 0), P1_{0} {
  std::partial_sum(B0.begin(), B0.end(), P0_.begin() + 1);
}

void BlockPartialSum::update(std::size_t p, std::int64_t x) {
  if (p != updated() + 1 || p > size()) {
    throw Error(ErrorKind::OutOfOrderUpdate, "expected position " + std::to_string(updated() + 1) + ", got " +
                                                 std::to_string(p));
  }
  P1_.push_back(P1_.back() + x);
}

std::int64_t BlockPartialSum::query(std::size_t i) const {
  if (i > size()) throw Error(ErrorKind::IndexOutOfRange, "prefix " + std::to_string(i));
  const std::size_t p = updated();
  if (i <= p) return P1_[i];
  return P1_[p] + P0_[i] - P0_[p];
}

}  // namespace decforest
