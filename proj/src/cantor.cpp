#include "growthlab/cantor.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <unordered_map>

#include "growthlab/error.hpp"

namespace growthlab {

namespace {

constexpr Coord kTerminalVar = 0xffffffffu;

}  // namespace

void PartialAssignment::set(Coord coord, bool bit) {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), coord,
      [](const auto& e, Coord c) { return e.first < c; });
  if (it != entries_.end() && it->first == coord) {
    if (it->second != bit)
      raise(Errc::SchemaError, "conflicting bits for coordinate " +
                                   std::to_string(coord));
    return;
  }
  entries_.insert(it, {coord, bit});
}

PartialAssignment::PartialAssignment(
    std::initializer_list<std::pair<Coord, bool>> entries) {
  for (const auto& [c, b] : entries) set(c, b);
}

bool PartialAssignment::defines(Coord coord) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), coord,
      [](const auto& e, Coord c) { return e.first < c; });
  return it != entries_.end() && it->first == coord;
}

bool PartialAssignment::at(Coord coord) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), coord,
      [](const auto& e, Coord c) { return e.first < c; });
  if (it == entries_.end() || it->first != coord)
    raise(Errc::Internal, "coordinate " + std::to_string(coord) + " unset");
  return it->second;
}

std::vector<Coord> PartialAssignment::domain() const {
  std::vector<Coord> out;
  out.reserve(entries_.size());
  for (const auto& [c, b] : entries_) out.push_back(c);
  return out;
}

bool PartialAssignment::conflicts(const PartialAssignment& other) const {
  auto i = entries_.begin();
  auto j = other.entries_.begin();
  while (i != entries_.end() && j != other.entries_.end()) {
    if (i->first < j->first) {
      ++i;
    } else if (j->first < i->first) {
      ++j;
    } else {
      if (i->second != j->second) return true;
      ++i;
      ++j;
    }
  }
  return false;
}

PartialAssignment PartialAssignment::merged(
    const PartialAssignment& other) const {
  PartialAssignment out = *this;
  for (const auto& [c, b] : other.entries_) out.set(c, b);
  return out;
}

// Reduced-ordered-tree workspace shared by the set operations. One instance
// per operation; ClopenSet itself stays immutable.
class ClopenBuilder {
public:
  ClopenBuilder() {
    nodes_.push_back({kTerminalVar, 0, 0});  // 0 = false
    nodes_.push_back({kTerminalVar, 1, 1});  // 1 = true
  }

  std::uint32_t mk(Coord var, std::uint32_t lo, std::uint32_t hi) {
    if (lo == hi) return lo;
    auto [it, fresh] = unique_.try_emplace({var, lo, hi}, 0);
    if (!fresh) return it->second;
    nodes_.push_back({var, lo, hi});
    it->second = static_cast<std::uint32_t>(nodes_.size() - 1);
    return it->second;
  }

  std::uint32_t import(const ClopenSet& s) {
    if (s.root_ <= 1) return s.root_;
    std::vector<std::uint32_t> map(s.nodes_.size() + 2, 0xffffffffu);
    map[0] = 0;
    map[1] = 1;
    return import_rec(s, s.root_, map);
  }

  std::uint32_t cylinder(const PartialAssignment& phi) {
    std::uint32_t acc = 1;
    const auto& es = phi.entries();
    for (auto it = es.rbegin(); it != es.rend(); ++it) {
      acc = it->second ? mk(it->first, 0, acc) : mk(it->first, acc, 0);
    }
    return acc;
  }

  enum class Op { Or, And, Diff };

  std::uint32_t apply(Op op, std::uint32_t f, std::uint32_t g) {
    switch (op) {
      case Op::Or:
        if (f == 1 || g == 1) return 1;
        if (f == 0) return g;
        if (g == 0) return f;
        if (f == g) return f;
        break;
      case Op::And:
        if (f == 0 || g == 0) return 0;
        if (f == 1) return g;
        if (g == 1) return f;
        if (f == g) return f;
        break;
      case Op::Diff:
        if (f == 0 || g == 1) return 0;
        if (g == 0) return f;
        if (f == g) return 0;
        break;
    }
    std::array<std::uint32_t, 3> key{static_cast<std::uint32_t>(op) + 0x10u,
                                     f, g};
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    Coord vf = nodes_[f].var;
    Coord vg = nodes_[g].var;
    Coord v = std::min(vf, vg);
    std::uint32_t flo = vf == v ? nodes_[f].lo : f;
    std::uint32_t fhi = vf == v ? nodes_[f].hi : f;
    std::uint32_t glo = vg == v ? nodes_[g].lo : g;
    std::uint32_t ghi = vg == v ? nodes_[g].hi : g;
    std::uint32_t r = mk(v, apply(op, flo, glo), apply(op, fhi, ghi));
    cache_[key] = r;
    return r;
  }

  std::uint32_t negate(std::uint32_t f) {
    if (f <= 1) return f ^ 1u;
    std::array<std::uint32_t, 3> key{0x99u, f, f};
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    std::uint32_t r =
        mk(nodes_[f].var, negate(nodes_[f].lo), negate(nodes_[f].hi));
    cache_[key] = r;
    return r;
  }

  ClopenSet extract(std::uint32_t root) const {
    ClopenSet out;
    if (root <= 1) {
      out.root_ = root;
      return out;
    }
    std::unordered_map<std::uint32_t, std::uint32_t> remap;
    out.root_ = 2;
    extract_rec(root, remap, out);
    return out;
  }

private:
  std::uint32_t import_rec(const ClopenSet& s, std::uint32_t n,
                           std::vector<std::uint32_t>& map) {
    if (map[n] != 0xffffffffu) return map[n];
    const auto& node = s.nodes_[n - 2];
    std::uint32_t lo = import_rec(s, node.lo, map);
    std::uint32_t hi = import_rec(s, node.hi, map);
    return map[n] = mk(node.var, lo, hi);
  }

  void extract_rec(std::uint32_t n,
                   std::unordered_map<std::uint32_t, std::uint32_t>& remap,
                   ClopenSet& out) const {
    if (n <= 1 || remap.count(n)) return;
    std::uint32_t id = static_cast<std::uint32_t>(out.nodes_.size() + 2);
    remap[n] = id;
    out.nodes_.push_back({nodes_[n].var, 0, 0});
    extract_rec(nodes_[n].lo, remap, out);
    extract_rec(nodes_[n].hi, remap, out);
    auto fix = [&](std::uint32_t c) { return c <= 1 ? c : remap.at(c); };
    out.nodes_[id - 2].lo = fix(nodes_[n].lo);
    out.nodes_[id - 2].hi = fix(nodes_[n].hi);
  }

  struct Node {
    Coord var;
    std::uint32_t lo, hi;
  };
  std::vector<Node> nodes_;
  std::map<std::array<std::uint32_t, 3>, std::uint32_t> unique_;
  std::map<std::array<std::uint32_t, 3>, std::uint32_t> cache_;
};

ClopenSet ClopenSet::full_space() {
  ClopenSet s;
  s.root_ = 1;
  return s;
}

ClopenSet ClopenSet::cylinder(const PartialAssignment& phi) {
  ClopenBuilder b;
  return b.extract(b.cylinder(phi));
}

ClopenSet ClopenSet::from_cylinders(
    const std::vector<PartialAssignment>& phis) {
  ClopenBuilder b;
  std::uint32_t acc = 0;
  for (const auto& phi : phis)
    acc = b.apply(ClopenBuilder::Op::Or, acc, b.cylinder(phi));
  return b.extract(acc);
}

ClopenSet set_union(const ClopenSet& a, const ClopenSet& b) {
  ClopenBuilder m;
  return m.extract(
      m.apply(ClopenBuilder::Op::Or, m.import(a), m.import(b)));
}

ClopenSet set_intersect(const ClopenSet& a, const ClopenSet& b) {
  ClopenBuilder m;
  return m.extract(
      m.apply(ClopenBuilder::Op::And, m.import(a), m.import(b)));
}

ClopenSet set_difference(const ClopenSet& a, const ClopenSet& b) {
  ClopenBuilder m;
  return m.extract(
      m.apply(ClopenBuilder::Op::Diff, m.import(a), m.import(b)));
}

ClopenSet set_complement(const ClopenSet& a) {
  ClopenBuilder m;
  return m.extract(m.negate(m.import(a)));
}

bool ClopenSet::subset_of(const ClopenSet& other) const {
  return set_difference(*this, other).is_empty();
}

Rational ClopenSet::measure() const {
  if (root_ == 0) return Rational(0);
  if (root_ == 1) return Rational(1);
  // measure(node) = (measure(lo) + measure(hi)) / 2; skipped coordinates
  // integrate out automatically under the fair-coin product measure.
  std::vector<Rational> memo(nodes_.size());
  std::vector<bool> done(nodes_.size(), false);
  Rational half(1, 2);
  auto value = [&](auto&& self, std::uint32_t n) -> Rational {
    if (n == 0) return Rational(0);
    if (n == 1) return Rational(1);
    if (done[n - 2]) return memo[n - 2];
    const Node& node = nodes_[n - 2];
    Rational r = (self(self, node.lo) + self(self, node.hi)) * half;
    memo[n - 2] = r;
    done[n - 2] = true;
    return r;
  };
  return value(value, root_);
}

std::vector<Coord> ClopenSet::syntactic_support() const {
  std::vector<Coord> vars;
  vars.reserve(nodes_.size());
  for (const auto& n : nodes_) vars.push_back(n.var);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

std::vector<Coord> ClopenSet::support(const Limits& limits) const {
  std::vector<Coord> vars = syntactic_support();
  if (vars.size() > limits.support_bound)
    raise(Errc::SupportTooLarge,
          std::to_string(vars.size()) + " coordinates exceed bound " +
              std::to_string(limits.support_bound));
  // The canonical tree is reduced, so it branches exactly on the minimal
  // semantic support.
  return vars;
}

std::vector<PartialAssignment> ClopenSet::cylinders(
    const Limits& limits) const {
  std::vector<PartialAssignment> out;
  if (root_ == 0) return out;
  PartialAssignment path;
  auto walk = [&](auto&& self, std::uint32_t n,
                  PartialAssignment& acc) -> void {
    if (n == 0) return;
    if (n == 1) {
      if (out.size() >= limits.cylinder_budget)
        raise(Errc::SupportTooLarge, "cylinder list exceeds budget");
      out.push_back(acc);
      return;
    }
    const Node& node = nodes_[n - 2];
    PartialAssignment lo = acc;
    lo.set(node.var, false);
    self(self, node.lo, lo);
    PartialAssignment hi = acc;
    hi.set(node.var, true);
    self(self, node.hi, hi);
  };
  walk(walk, root_, path);
  return out;
}

PartialAssignment ClopenSet::any_point() const {
  if (root_ == 0) raise(Errc::Internal, "no point in the empty set");
  PartialAssignment out;
  std::uint32_t n = root_;
  while (n > 1) {
    const Node& node = nodes_[n - 2];
    if (node.lo != 0) {
      out.set(node.var, false);
      n = node.lo;
    } else {
      out.set(node.var, true);
      n = node.hi;
    }
  }
  return out;
}

bool ClopenSet::contains_point(const PartialAssignment& point) const {
  std::uint32_t n = root_;
  while (n > 1) {
    const Node& node = nodes_[n - 2];
    n = point.at(node.var) ? node.hi : node.lo;
  }
  return n == 1;
}

bool ClopenSet::contains_word(std::uint64_t bits) const {
  std::uint32_t n = root_;
  while (n > 1) {
    const Node& node = nodes_[n - 2];
    if (node.var >= 64)
      raise(Errc::Internal, "coordinate beyond word evaluation range");
    n = ((bits >> node.var) & 1u) ? node.hi : node.lo;
  }
  return n == 1;
}

Rational product_measure_check(const ClopenSet& a, const ClopenSet& b,
                               const Limits& limits) {
  std::vector<Coord> sa = a.support(limits);
  std::vector<Coord> sb = b.support(limits);
  std::vector<Coord> shared;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                        std::back_inserter(shared));
  if (!shared.empty())
    raise(Errc::OverlappingSupports,
          "coordinate " + std::to_string(shared.front()) +
              " is in both supports");
  Rational m = set_intersect(a, b).measure();
  if (m != a.measure() * b.measure())
    raise(Errc::Internal, "product rule violated");
  return m;
}

}  // namespace growthlab
