#include "decforest/optimal/search.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <unordered_map>

namespace decforest {

std::string forest_fingerprint(const RootedForest& f) {
  std::string s = std::to_string(f.size()) + ":";
  for (std::size_t v = 0; v < f.size(); ++v) {
    if (v) s += ',';
    s += std::to_string(f.parent(static_cast<Vertex>(v)));
  }
  s += ':';
  for (bool a : f.aux_flags()) s += a ? '1' : '0';
  return s;
}

namespace {

using Vec = std::vector<std::int16_t>;

struct Step {
  Vec a;
  Vec b;
  bool subtract = false;
};

struct NodeInfo {
  std::vector<Vec> w;  // per vertex; zero for auxiliary vertices
  std::optional<Vec> target;
};

Vec combine(const Vec& a, const Vec& b, bool subtract) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = static_cast<std::int16_t>(subtract ? a[i] - b[i] : a[i] + b[i]);
  return r;
}

bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](std::int16_t x) { return x == 0; });
}

class Searcher {
 public:
  Searcher(ComputationTree& tree, const RootedForest& f) : c_(tree), f_(f) {
    std::size_t np = 0;
    for (Vertex v = 0; v < static_cast<Vertex>(f.size()); ++v) np += f.is_aux(v) ? 0 : 1;
    dim_ = np + tree.height();
    info_.resize(tree.node_count());
    std::vector<std::vector<Vertex>> parent(tree.node_count());
    for (std::size_t x = 0; x < tree.node_count(); ++x) {
      const CtNode& node = tree.node(x);
      NodeInfo& in = info_[x];
      if (x == 0) {
        parent[0].assign(f.parents().begin(), f.parents().end());
        std::size_t i = 0;
        for (Vertex v = 0; v < static_cast<Vertex>(f.size()); ++v) {
          Vec e(dim_, 0);
          if (!f.is_aux(v)) e[i++] = 1;
          in.w.push_back(std::move(e));
        }
      } else {
        const auto p = static_cast<std::size_t>(node.parent);
        parent[x] = parent[p];
        in.w = info_[p].w;
        const auto v = static_cast<std::size_t>(node.label.v);
        if (node.label.kind == OpKind::Cut) parent[x][v] = kNoVertex;
        if (node.label.kind == OpKind::Update) {
          Vec e(dim_, 0);
          e[np + node.depth - 1] = 1;
          in.w[v] = std::move(e);
        }
        if (node.label.kind == OpKind::TreeSum) {
          auto root_of = [&](Vertex u) {
            while (parent[x][static_cast<std::size_t>(u)] != kNoVertex) u = parent[x][static_cast<std::size_t>(u)];
            return u;
          };
          Vec t(dim_, 0);
          const Vertex r = root_of(node.label.v);
          for (Vertex u = 0; u < static_cast<Vertex>(f.size()); ++u) {
            if (root_of(u) == r) t = combine(t, in.w[static_cast<std::size_t>(u)], false);
          }
          in.target = std::move(t);
        }
      }
    }
  }

  bool solve(std::int32_t x, const std::vector<Vec>& regs, std::size_t budget) {
    const std::string key = make_key(x, regs, budget);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool found = false;
    const NodeInfo& in = info_[static_cast<std::size_t>(x)];

    std::vector<Vec> base{Vec(dim_, 0)};
    for (Vertex v = 0; v < static_cast<Vertex>(f_.size()); ++v) {
      if (!f_.is_aux(v)) base.push_back(in.w[static_cast<std::size_t>(v)]);
    }
    base.insert(base.end(), regs.begin(), regs.end());

    // Layer k: distinct sets of k new register values, each with one program.
    std::map<std::vector<Vec>, std::vector<Step>> layer{{{}, {}}};
    for (std::size_t k = 0; k <= budget && !found; ++k) {
      for (const auto& [added, prog] : layer) {
        std::vector<Vec> next_regs = regs;
        next_regs.insert(next_regs.end(), added.begin(), added.end());
        std::sort(next_regs.begin(), next_regs.end());
        if (in.target && !has_value(in, next_regs, *in.target)) continue;
        bool ok = true;
        for (std::int32_t y : c_.node(static_cast<std::size_t>(x)).children) {
          if (!solve(y, next_regs, budget - k)) {
            ok = false;
            break;
          }
        }
        if (ok) {
          found = true;
          choice_[key] = prog;
          break;
        }
      }
      if (found || k == budget) break;
      std::map<std::vector<Vec>, std::vector<Step>> next;
      for (const auto& [added, prog] : layer) {
        std::vector<Vec> pool = base;
        pool.insert(pool.end(), added.begin(), added.end());
        for (std::size_t i = 0; i < pool.size(); ++i) {
          for (std::size_t j = 0; j < pool.size(); ++j) {
            for (bool sub : {false, true}) {
              if (!sub && j < i) continue;
              Vec r = combine(pool[i], pool[j], sub);
              if (is_zero(r) || std::find(regs.begin(), regs.end(), r) != regs.end() ||
                  std::find(added.begin(), added.end(), r) != added.end()) {
                continue;
              }
              std::vector<Vec> s = added;
              s.insert(std::upper_bound(s.begin(), s.end(), r), r);
              if (next.count(s)) continue;
              auto p = prog;
              p.push_back({pool[i], pool[j], sub});
              next.emplace(std::move(s), std::move(p));
            }
          }
        }
      }
      layer = std::move(next);
    }
    memo_.emplace(key, found);
    return found;
  }

  /// Writes the chosen programs into the tree; registers are numbered by
  /// position along the path, so the result is succinct.
  void build(std::int32_t x, const std::vector<Vec>& regs, std::size_t budget, std::map<Vec, std::int32_t> regmap,
             std::int32_t next_reg) {
    const std::string key = make_key(x, regs, budget);
    const std::vector<Step>& prog = choice_.at(key);
    const NodeInfo& in = info_[static_cast<std::size_t>(x)];
    CtNode& node = c_.node(static_cast<std::size_t>(x));
    node.code.clear();
    auto operand = [&](const Vec& v, std::int32_t self) {
      if (is_zero(v)) return Operand::reg(self);
      for (Vertex u = 0; u < static_cast<Vertex>(f_.size()); ++u) {
        if (!f_.is_aux(u) && in.w[static_cast<std::size_t>(u)] == v) return Operand::weight(u);
      }
      return Operand::reg(regmap.at(v));
    };
    std::vector<Vec> next_regs = regs;
    for (const Step& s : prog) {
      const std::int32_t t = next_reg++;
      node.code.push_back({t, s.subtract, operand(s.a, t), operand(s.b, t)});
      Vec r = combine(s.a, s.b, s.subtract);
      regmap.emplace(r, t);
      next_regs.push_back(std::move(r));
    }
    std::sort(next_regs.begin(), next_regs.end());
    if (in.target) node.ret = operand(*in.target, 0);
    for (std::int32_t y : node.children) build(y, next_regs, budget - prog.size(), regmap, next_reg);
  }

 private:
  bool has_value(const NodeInfo& in, const std::vector<Vec>& regs, const Vec& v) const {
    for (Vertex u = 0; u < static_cast<Vertex>(f_.size()); ++u) {
      if (!f_.is_aux(u) && in.w[static_cast<std::size_t>(u)] == v) return true;
    }
    return std::binary_search(regs.begin(), regs.end(), v);
  }

  std::string make_key(std::int32_t x, const std::vector<Vec>& regs, std::size_t budget) const {
    std::string k = std::to_string(x) + '/' + std::to_string(budget) + '/';
    for (const Vec& v : regs) {
      k.append(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(std::int16_t));
    }
    return k;
  }

  ComputationTree& c_;
  const RootedForest& f_;
  std::size_t dim_ = 0;
  std::vector<NodeInfo> info_;
  std::unordered_map<std::string, bool> memo_;
  std::unordered_map<std::string, std::vector<Step>> choice_;
};

}  // namespace

std::optional<OptResult> search_optimal(const RootedForest& f, std::size_t m, std::size_t d, const SearchCaps& caps) {
  if (f.size() > caps.max_n || m > caps.max_m || d > caps.max_d) {
    throw Error(ErrorKind::CapExceeded, "search limited to n <= " + std::to_string(caps.max_n) + ", m <= " +
                                            std::to_string(caps.max_m) + ", d <= " + std::to_string(caps.max_d));
  }
  auto tree = std::make_shared<ComputationTree>(ComputationTree::skeleton(f, m));
  Searcher s(*tree, f);
  for (std::size_t budget = 0; budget <= d; ++budget) {
    if (!s.solve(0, {}, budget)) continue;
    s.build(0, {}, budget, {}, 1);
    if (!check_correct(*tree, f, m)) throw Error(ErrorKind::InvariantBroken, "search produced an incorrect witness");
    OptResult r;
    r.fingerprint = forest_fingerprint(f);
    r.m = m;
    r.mid = tree->mid();
    r.witness = std::move(tree);
    return r;
  }
  return std::nullopt;
}

OptTable OptTable::compute(const RootedForest& f, std::size_t m_cap, const SearchCaps& caps) {
  OptTable t(forest_fingerprint(f));
  for (std::size_t m = 1; m <= m_cap; ++m) {
    auto r = search_optimal(f, m, caps.max_d, caps);
    if (!r) break;
    t.push(std::move(*r));
  }
  return t;
}

void OptTable::push(OptResult r) {
  if (r.m != rows_.size() + 1) throw Error(ErrorKind::InvariantBroken, "rows must be pushed in order of m");
  rows_.push_back(std::move(r));
}

void OptTable::write(std::ostream& out) const {
  for (const OptResult& r : rows_) {
    out << "opt " << r.fingerprint << ' ' << r.m << ' ' << r.mid << '\n';
    r.witness->write(out);
  }
}

OptTable OptTable::read(std::istream& in) {
  OptTable t;
  std::string tok;
  while (in >> tok) {
    if (tok != "opt") throw Error(ErrorKind::ParseError, "expected 'opt', got '" + tok + "'");
    OptResult r;
    if (!(in >> r.fingerprint >> r.m >> r.mid)) throw Error(ErrorKind::ParseError, "opt line");
    if (t.rows_.empty()) t.fingerprint_ = r.fingerprint;
    if (r.fingerprint != t.fingerprint_) throw Error(ErrorKind::ParseError, "mixed fingerprints in one table");
    auto w = std::make_shared<ComputationTree>(ComputationTree::read(in));
    if (w->mid() != r.mid || w->height() != r.m) throw Error(ErrorKind::ParseError, "witness disagrees with its opt line");
    r.witness = std::move(w);
    t.push(std::move(r));
  }
  return t;
}

std::shared_ptr<const OptTable> shared_opt_table(const RootedForest& f, std::size_t m_cap, const SearchCaps& caps) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const OptTable>> cache;
  const std::string key = forest_fingerprint(f) + '#' + std::to_string(m_cap) + '#' + std::to_string(caps.max_d);
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto t = std::make_shared<const OptTable>(OptTable::compute(f, m_cap, caps));
  std::lock_guard lock(mu);
  return cache.emplace(key, std::move(t)).first->second;
}

}  // namespace decforest
