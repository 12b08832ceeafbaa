#include "decforest/tree_size/table.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>

#include "decforest/core/probe.hpp"

namespace decforest {

CodeLayout CodeLayout::of(unsigned ell) {
  if (ell < 1) throw Error(ErrorKind::ValueOutOfRange, "ell must be at least 1");
  CodeLayout l;
  l.ell = ell;
  l.parent_bits = static_cast<unsigned>(std::bit_width(ell));  // ceil(log2(ell + 1))
  l.field_bits = l.parent_bits + 1;
  if (static_cast<std::uint64_t>(ell) * l.field_bits > 64) {
    throw Error(ErrorKind::WordOverflow, "code for ell=" + std::to_string(ell) + " exceeds 64 bits");
  }
  l.bits = ell * l.field_bits;
  return l;
}

std::uint64_t encode_forest(const CodeLayout& layout, std::span<const Vertex> parents,
                            std::span<const std::uint8_t> weights) {
  if (parents.size() > layout.ell) throw Error(ErrorKind::TooLarge, "micro forest exceeds ell");
  std::uint64_t code = 0;
  for (std::size_t v = 0; v < parents.size(); ++v) {
    std::uint64_t field = parents[v] == kNoVertex ? 0 : static_cast<std::uint64_t>(parents[v]) + 1;
    std::uint64_t bit = v < weights.size() ? (weights[v] & 1u) : 0;
    code |= (field | (bit << layout.parent_bits)) << (v * layout.field_bits);
  }
  return code;
}

MicroForest decode_forest(const CodeLayout& layout, std::uint64_t code) {
  MicroForest f;
  f.parents.resize(layout.ell);
  f.weights.resize(layout.ell);
  for (unsigned v = 0; v < layout.ell; ++v) {
    unsigned field = layout.parent_field(code, v);
    f.parents[v] = field == 0 ? kNoVertex : static_cast<Vertex>(field - 1);
    f.weights[v] = static_cast<std::uint8_t>(layout.weight_bit(code, v));
  }
  return f;
}

namespace {

/// Roots of a decoded micro forest, or empty if the fields are not a forest.
std::vector<Vertex> micro_roots(const MicroForest& f) {
  const std::size_t l = f.parents.size();
  std::vector<Vertex> root(l, kNoVertex);
  for (std::size_t v = 0; v < l; ++v) {
    Vertex x = static_cast<Vertex>(v);
    std::size_t steps = 0;
    while (f.parents[static_cast<std::size_t>(x)] != kNoVertex) {
      Vertex p = f.parents[static_cast<std::size_t>(x)];
      if (p < 0 || static_cast<std::size_t>(p) >= l || ++steps > l) return {};
      x = p;
    }
    root[v] = x;
  }
  return root;
}

}  // namespace

GlobalSizeTable GlobalSizeTable::build(unsigned ell) {
  GlobalSizeTable t;
  t.layout_ = CodeLayout::of(ell);
  const std::uint64_t codes = t.code_count();
  if (codes * ell > kMaxEntries) {
    throw Error(ErrorKind::CapExceeded, "size table for ell=" + std::to_string(ell) + " exceeds the entry cap");
  }
  const std::size_t entries = static_cast<std::size_t>(codes) * ell;
  t.valid_.assign((codes + 7) / 8, 0);
  t.S_.assign(entries, 0);
  t.U0_.assign(entries, kNoCode);
  t.U1_.assign(entries, kNoCode);
  t.C_.assign(entries, kNoCode);
  const auto before = probe::read();
  const CodeLayout& L = t.layout_;
  for (std::uint64_t code = 0; code < codes; ++code) {
    probe::tick();
    MicroForest f = decode_forest(L, code);
    auto root = micro_roots(f);
    if (root.empty()) continue;
    t.valid_[code / 8] |= static_cast<std::uint8_t>(1u << (code % 8));
    std::vector<unsigned> sum(ell, 0);
    for (unsigned v = 0; v < ell; ++v) sum[static_cast<std::size_t>(root[v])] += f.weights[v];
    for (unsigned v = 0; v < ell; ++v) {
      probe::tick(ell);
      const std::size_t s = static_cast<std::size_t>(code) * ell + v;
      const std::uint64_t wmask = std::uint64_t{1} << (v * L.field_bits + L.parent_bits);
      t.S_[s] = static_cast<std::uint8_t>(sum[static_cast<std::size_t>(root[v])]);
      t.U0_[s] = static_cast<std::uint32_t>(code & ~wmask);
      t.U1_[s] = static_cast<std::uint32_t>(code | wmask);
      if (f.parents[v] != kNoVertex) {
        const std::uint64_t pmask = ((std::uint64_t{1} << L.parent_bits) - 1) << (v * L.field_bits);
        t.C_[s] = static_cast<std::uint32_t>(code & ~pmask);
      }
    }
  }
  t.build_probes_ = probe::read() - before;
  return t;
}

bool GlobalSizeTable::valid(std::uint64_t code) const {
  return code < code_count() && ((valid_[code / 8] >> (code % 8)) & 1u);
}

std::size_t GlobalSizeTable::valid_count() const {
  std::size_t c = 0;
  for (auto b : valid_) c += static_cast<std::size_t>(std::popcount(b));
  return c;
}

std::size_t GlobalSizeTable::slot(std::uint64_t code, unsigned v) const {
  if (!valid(code)) throw Error(ErrorKind::IllegalOperation, "invalid forest code " + std::to_string(code));
  if (v >= layout_.ell) throw Error(ErrorKind::IllegalOperation, "vertex " + std::to_string(v) + " outside micro tree");
  probe::tick();
  return static_cast<std::size_t>(code) * layout_.ell + v;
}

std::uint32_t GlobalSizeTable::tree_sum(std::uint64_t code, unsigned v) const { return S_[slot(code, v)]; }

std::uint64_t GlobalSizeTable::update(std::uint64_t code, unsigned v, unsigned bit) const {
  if (bit > 1) throw Error(ErrorKind::NonBinaryWeight, "weight " + std::to_string(bit));
  const std::size_t s = slot(code, v);
  return bit ? U1_[s] : U0_[s];
}

std::uint64_t GlobalSizeTable::cut(std::uint64_t code, unsigned v) const {
  const std::uint32_t next = C_[slot(code, v)];
  if (next == kNoCode) throw Error(ErrorKind::IllegalOperation, "cut of a micro root");
  return next;
}

namespace {

constexpr char kMagic[8] = {'D', 'F', 'S', 'Z', 'T', 'B', 'L', '1'};

template <class T>
void put(std::ostream& out, const std::vector<T>& v) {
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(T)));
}

template <class T>
void get(std::istream& in, std::vector<T>& v, std::size_t n) {
  v.resize(n);
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(T)));
  if (!in) throw Error(ErrorKind::ParseError, "truncated size table");
}

}  // namespace

void GlobalSizeTable::save(std::ostream& out) const {
  out.write(kMagic, sizeof kMagic);
  const std::uint32_t ell = layout_.ell;
  out.write(reinterpret_cast<const char*>(&ell), sizeof ell);
  put(out, valid_);
  put(out, S_);
  put(out, U0_);
  put(out, U1_);
  put(out, C_);
}

GlobalSizeTable GlobalSizeTable::load(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0) throw Error(ErrorKind::ParseError, "bad size table magic");
  std::uint32_t ell = 0;
  in.read(reinterpret_cast<char*>(&ell), sizeof ell);
  if (!in) throw Error(ErrorKind::ParseError, "truncated size table");
  GlobalSizeTable t;
  t.layout_ = CodeLayout::of(ell);
  const std::uint64_t codes = t.code_count();
  if (codes * ell > kMaxEntries) throw Error(ErrorKind::CapExceeded, "size table exceeds the entry cap");
  const std::size_t entries = static_cast<std::size_t>(codes) * ell;
  get(in, t.valid_, static_cast<std::size_t>((codes + 7) / 8));
  get(in, t.S_, entries);
  get(in, t.U0_, entries);
  get(in, t.U1_, entries);
  get(in, t.C_, entries);
  return t;
}

void GlobalSizeTable::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IllegalOperation, "cannot write " + path);
  save(out);
}

GlobalSizeTable GlobalSizeTable::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot read " + path);
  return load(in);
}

std::shared_ptr<const GlobalSizeTable> shared_size_table(unsigned ell) {
  static std::mutex mu;
  static std::map<unsigned, std::shared_ptr<const GlobalSizeTable>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[ell];
  if (!slot) slot = std::make_shared<const GlobalSizeTable>(GlobalSizeTable::build(ell));
  return slot;
}

}  // namespace decforest
