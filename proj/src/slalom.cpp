#include "growthlab/slalom.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "growthlab/error.hpp"

namespace growthlab {

namespace {

constexpr std::uint32_t kMaxLevel = 62;

std::uint64_t level_size(std::uint32_t k) { return 1ull << k; }

}  // namespace

Slalom Slalom::from_levels(std::vector<Level> levels) {
  std::sort(levels.begin(), levels.end(),
            [](const Level& a, const Level& b) { return a.first < b.first; });
  Slalom s;
  for (auto& [k, values] : levels) {
    if (k > kMaxLevel)
      raise(Errc::SchemaError, "level " + std::to_string(k) + " too high");
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    if (values.empty()) continue;  // absent level
    if (values.back() >= level_size(k))
      raise(Errc::SchemaError,
            "value " + std::to_string(values.back()) + " out of range at level " +
                std::to_string(k));
    if (values.size() >= level_size(k))
      raise(Errc::SchemaError,
            "level " + std::to_string(k) + " holds all of its values");
    if (!s.levels_.empty() && s.levels_.back().first == k)
      raise(Errc::SchemaError, "duplicate level " + std::to_string(k));
    s.levels_.push_back({k, std::move(values)});
  }
  return s;
}

const std::vector<std::uint64_t>* Slalom::level(std::uint32_t k) const {
  for (const auto& [lvl, values] : levels_)
    if (lvl == k) return &values;
  return nullptr;
}

Slalom Slalom::restricted_below(std::uint32_t n) const {
  Slalom out;
  for (const auto& lv : levels_)
    if (lv.first < n) out.levels_.push_back(lv);
  return out;
}

bool Slalom::subset_of(const Slalom& other) const {
  for (const auto& [k, values] : levels_) {
    const auto* ov = other.level(k);
    if (!ov) return false;
    if (!std::includes(ov->begin(), ov->end(), values.begin(), values.end()))
      return false;
  }
  return true;
}

Rational Slalom::weight() const {
  Rational total(0);
  for (const auto& [k, values] : levels_)
    total += Rational(static_cast<long long>(values.size())) *
             Rational::pow2(-static_cast<long>(k));
  return total;
}

Rational Slalom::tail_weight(std::uint32_t n) const {
  Rational total(0);
  for (const auto& [k, values] : levels_)
    if (k > n)
      total += Rational(static_cast<long long>(values.size())) *
               Rational::pow2(-static_cast<long>(k));
  return total;
}

SlalomUnion slalom_union(const Slalom& a, const Slalom& b) {
  SlalomUnion out;
  std::vector<Slalom::Level> merged;
  auto ia = a.levels().begin(), ea = a.levels().end();
  auto ib = b.levels().begin(), eb = b.levels().end();
  while (ia != ea || ib != eb) {
    std::uint32_t k;
    std::vector<std::uint64_t> values;
    if (ib == eb || (ia != ea && ia->first < ib->first)) {
      k = ia->first;
      values = ia->second;
      ++ia;
    } else if (ia == ea || ib->first < ia->first) {
      k = ib->first;
      values = ib->second;
      ++ib;
    } else {
      k = ia->first;
      std::set_union(ia->second.begin(), ia->second.end(), ib->second.begin(),
                     ib->second.end(), std::back_inserter(values));
      ++ia;
      ++ib;
    }
    if (values.size() >= level_size(k)) {
      if (!out.covered_level) out.covered_level = k;
    }
    merged.push_back({k, std::move(values)});
  }
  if (!out.covered_level) out.slalom = Slalom::from_levels(std::move(merged));
  return out;
}

std::optional<std::uint32_t> slalom_union_covered(const Slalom& a,
                                                  const Slalom& b) {
  auto ia = a.levels().begin(), ea = a.levels().end();
  auto ib = b.levels().begin(), eb = b.levels().end();
  while (ia != ea && ib != eb) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      // Count the union without materializing it.
      std::uint64_t need = level_size(ia->first);
      if (ia->second.size() + ib->second.size() >= need) {
        std::size_t i = 0, j = 0, count = 0;
        while (i < ia->second.size() || j < ib->second.size()) {
          if (j == ib->second.size())
            ++i, ++count;
          else if (i == ia->second.size())
            ++j, ++count;
          else if (ia->second[i] < ib->second[j])
            ++i, ++count;
          else if (ib->second[j] < ia->second[i])
            ++j, ++count;
          else
            ++i, ++j, ++count;
        }
        if (count >= need) return ia->first;
      }
      ++ia;
      ++ib;
    }
  }
  return std::nullopt;
}

OmegaPoint make_omega_point(Slalom S, std::uint32_t n) {
  if (S.support_end() > n)
    raise(Errc::SchemaError, "slalom reaches level " +
                                 std::to_string(S.support_end() - 1) +
                                 ", height is " + std::to_string(n));
  return OmegaPoint{std::move(S), n};
}

std::vector<OmegaPoint> enum_omega(std::uint32_t H, const Limits& limits) {
  if (H > limits.omega_height)
    raise(Errc::HeightTooLarge, "height " + std::to_string(H) +
                                    " exceeds bound " +
                                    std::to_string(limits.omega_height));
  std::vector<OmegaPoint> out;
  for (std::uint32_t n = 0; n <= H; ++n) {
    // All slaloms supported below n: per level an absent marker or a
    // nonempty proper subset, enumerated as ascending bitmasks.
    std::vector<Slalom::Level> acc;
    auto rec = [&](auto&& self, std::uint32_t k) -> void {
      if (k >= n) {
        std::vector<Slalom::Level> copy = acc;
        out.push_back(OmegaPoint{Slalom::from_levels(std::move(copy)), n});
        return;
      }
      std::uint64_t full = (1ull << level_size(k)) - 1;
      for (std::uint64_t mask = 0; mask < full; ++mask) {
        if (mask != 0) {
          std::vector<std::uint64_t> values;
          for (std::uint64_t v = 0; v < level_size(k); ++v)
            if ((mask >> v) & 1ull) values.push_back(v);
          acc.push_back({k, std::move(values)});
        }
        self(self, k + 1);
        if (mask != 0) acc.pop_back();
      }
    };
    rec(rec, 1);  // level 0 admits only the empty level set
  }
  return out;
}

GenExpr GenExpr::constant(bool value) {
  GenExpr e;
  e.kind_ = value ? Kind::True : Kind::False;
  return e;
}

GenExpr GenExpr::pos(Slalom V) {
  GenExpr e;
  e.kind_ = Kind::PosT;
  e.slalom_ = std::move(V);
  return e;
}

GenExpr GenExpr::height(Slalom S, std::uint32_t n) {
  if (S.support_end() > n)
    raise(Errc::SchemaError, "height atom prefix reaches past its height");
  GenExpr e;
  e.kind_ = Kind::Height;
  e.slalom_ = std::move(S);
  e.n_ = n;
  return e;
}

GenExpr GenExpr::conj(GenExpr a, GenExpr b) {
  GenExpr e;
  e.kind_ = Kind::And;
  e.children_.push_back(std::move(a));
  e.children_.push_back(std::move(b));
  return e;
}

GenExpr GenExpr::disj(GenExpr a, GenExpr b) {
  GenExpr e;
  e.kind_ = Kind::Or;
  e.children_.push_back(std::move(a));
  e.children_.push_back(std::move(b));
  return e;
}

GenExpr GenExpr::neg(GenExpr a) {
  GenExpr e;
  e.kind_ = Kind::Not;
  e.children_.push_back(std::move(a));
  return e;
}

bool member(const GenExpr& e, const OmegaPoint& p) {
  switch (e.kind()) {
    case GenExpr::Kind::True:
      return true;
    case GenExpr::Kind::False:
      return false;
    case GenExpr::Kind::PosT: {
      // V|n subset of T.
      for (const auto& [k, values] : e.slalom().levels()) {
        if (k >= p.n) break;
        const auto* tv = p.S.level(k);
        if (!tv ||
            !std::includes(tv->begin(), tv->end(), values.begin(),
                           values.end()))
          return false;
      }
      return true;
    }
    case GenExpr::Kind::Height: {
      if (p.n < e.height_n()) return false;
      return p.S.restricted_below(e.height_n()) == e.slalom();
    }
    case GenExpr::Kind::And:
      return member(e.children()[0], p) && member(e.children()[1], p);
    case GenExpr::Kind::Or:
      return member(e.children()[0], p) || member(e.children()[1], p);
    case GenExpr::Kind::Not:
      return !member(e.children()[0], p);
  }
  return false;
}

namespace {

struct RawConjunct {
  std::vector<Slalom> pos;
  std::vector<Slalom> neg;
  std::vector<OmegaPoint> pos_heights;
  std::vector<OmegaPoint> neg_heights;
};

std::vector<RawConjunct> cross(const std::vector<RawConjunct>& a,
                               const std::vector<RawConjunct>& b) {
  std::vector<RawConjunct> out;
  for (const auto& x : a)
    for (const auto& y : b) {
      RawConjunct m = x;
      m.pos.insert(m.pos.end(), y.pos.begin(), y.pos.end());
      m.neg.insert(m.neg.end(), y.neg.begin(), y.neg.end());
      m.pos_heights.insert(m.pos_heights.end(), y.pos_heights.begin(),
                           y.pos_heights.end());
      m.neg_heights.insert(m.neg_heights.end(), y.neg_heights.begin(),
                           y.neg_heights.end());
      out.push_back(std::move(m));
    }
  return out;
}

std::vector<RawConjunct> dnf(const GenExpr& e, bool negated) {
  using K = GenExpr::Kind;
  switch (e.kind()) {
    case K::True:
      return negated ? std::vector<RawConjunct>{}
                     : std::vector<RawConjunct>{RawConjunct{}};
    case K::False:
      return negated ? std::vector<RawConjunct>{RawConjunct{}}
                     : std::vector<RawConjunct>{};
    case K::PosT: {
      RawConjunct c;
      (negated ? c.neg : c.pos).push_back(e.slalom());
      return {c};
    }
    case K::Height: {
      RawConjunct c;
      (negated ? c.neg_heights : c.pos_heights)
          .push_back(OmegaPoint{e.slalom(), e.height_n()});
      return {c};
    }
    case K::And: {
      auto a = dnf(e.children()[0], negated);
      auto b = dnf(e.children()[1], negated);
      if (!negated) return cross(a, b);
      a.insert(a.end(), b.begin(), b.end());
      return a;
    }
    case K::Or: {
      auto a = dnf(e.children()[0], negated);
      auto b = dnf(e.children()[1], negated);
      if (negated) return cross(a, b);
      a.insert(a.end(), b.begin(), b.end());
      return a;
    }
    case K::Not:
      return dnf(e.children()[0], !negated);
  }
  return {};
}

// Slaloms supported on levels [lo, hi), enumerated deterministically.
void enumerate_extensions(std::uint32_t lo, std::uint32_t hi,
                          std::vector<Slalom::Level>& acc,
                          std::vector<Slalom>& out) {
  if (lo >= hi) {
    std::vector<Slalom::Level> copy = acc;
    out.push_back(Slalom::from_levels(std::move(copy)));
    return;
  }
  std::uint64_t full = (1ull << level_size(lo)) - 1;
  for (std::uint64_t mask = 0; mask < full; ++mask) {
    if (mask != 0) {
      std::vector<std::uint64_t> values;
      for (std::uint64_t v = 0; v < level_size(lo); ++v)
        if ((mask >> v) & 1ull) values.push_back(v);
      acc.push_back({lo, std::move(values)});
    }
    enumerate_extensions(lo + 1, hi, acc, out);
    if (mask != 0) acc.pop_back();
  }
}

Slalom join_prefix(const Slalom& prefix, const Slalom& extension) {
  std::vector<Slalom::Level> levels = prefix.levels();
  for (const auto& lv : extension.levels()) levels.push_back(lv);
  return Slalom::from_levels(std::move(levels));
}

void resolve(const RawConjunct& raw, const Limits& limits,
             std::vector<Conjunct>& out) {
  // Merge the positive height atoms to the maximum height.
  Slalom hS;
  std::uint32_t hn = 0;
  bool incompatible = false;
  for (const auto& hp : raw.pos_heights) {
    if (hp.n >= hn) {
      if (hp.S.restricted_below(hn) == hS) {
        hS = hp.S;
        hn = hp.n;
      } else {
        incompatible = true;
        if (hp.n > hn) {
          hS = hp.S;
          hn = hp.n;
        }
      }
    } else {
      if (hS.restricted_below(hp.n) != hp.S) incompatible = true;
    }
  }

  // Merge the positive generators by levelwise union.
  std::optional<Slalom> positive;
  bool covered = false;
  for (const auto& v : raw.pos) {
    if (!positive) {
      positive = v;
      continue;
    }
    SlalomUnion u = slalom_union(*positive, v);
    if (u.covered_level) {
      covered = true;
      break;
    }
    positive = std::move(*u.slalom);
  }

  std::vector<Slalom> negatives = raw.neg;
  std::sort(negatives.begin(), negatives.end());
  negatives.erase(std::unique(negatives.begin(), negatives.end()),
                  negatives.end());

  if (incompatible || covered) {
    Conjunct c;
    c.height_S = hS.restricted_below(hn);
    c.height_n = hn;
    c.positive = positive;
    c.negatives = std::move(negatives);
    c.marked_finite = true;
    out.push_back(std::move(c));
    return;
  }

  // Negated height atoms: refine the height constraint up to the largest
  // negated height, then resolve each branch (equal prefix kills the branch
  // modulo a finite set, different prefix makes the literal vacuous).
  std::uint32_t target = hn;
  for (const auto& nh : raw.neg_heights) target = std::max(target, nh.n);
  if (target > hn) {
    if (target > limits.raise_height)
      raise(Errc::HeightTooLarge,
            "negated height at " + std::to_string(target) +
                " needs refinement beyond bound " +
                std::to_string(limits.raise_height));
    std::vector<Slalom> extensions;
    std::vector<Slalom::Level> acc;
    enumerate_extensions(hn, target, acc, extensions);
    for (const auto& ext : extensions) {
      Slalom refined = join_prefix(hS, ext);
      bool dead = false;
      for (const auto& nh : raw.neg_heights)
        if (refined.restricted_below(nh.n) == nh.S) dead = true;
      if (dead) continue;  // finite piece
      Conjunct c;
      c.height_S = refined;
      c.height_n = target;
      c.positive = positive;
      c.negatives = negatives;
      out.push_back(std::move(c));
    }
    return;
  }
  for (const auto& nh : raw.neg_heights) {
    if (hS.restricted_below(nh.n) == nh.S) return;  // finite piece
  }
  Conjunct c;
  c.height_S = hS;
  c.height_n = hn;
  c.positive = positive;
  c.negatives = std::move(negatives);
  out.push_back(std::move(c));
}

}  // namespace

std::vector<Conjunct> normal_form(const GenExpr& e, const Limits& limits) {
  std::vector<Conjunct> out;
  for (const auto& raw : dnf(e, false)) resolve(raw, limits, out);
  return out;
}

bool decide_infinite(const Conjunct& c) {
  if (c.height_S.support_end() > c.height_n)
    raise(Errc::MalformedConjunct, "height prefix reaches past its height");
  if (c.marked_finite) return false;
  Slalom vprime = c.height_S;
  if (c.positive) {
    if (!c.positive->restricted_below(c.height_n).subset_of(c.height_S))
      return false;
    // V' = the height prefix below n, the positive part from n on.
    std::vector<Slalom::Level> levels = c.height_S.levels();
    for (const auto& lv : c.positive->levels())
      if (lv.first >= c.height_n) levels.push_back(lv);
    vprime = Slalom::from_levels(std::move(levels));
  }
  for (const auto& vi : c.negatives)
    if (vi.subset_of(vprime)) return false;
  return true;
}

bool decide_infinite(const GenExpr& e, const Limits& limits) {
  for (const auto& c : normal_form(e, limits))
    if (decide_infinite(c)) return true;
  return false;
}

ExprVerdict expr_verdict(const GenExpr& e, const Limits& limits) {
  ExprVerdict v{decide_infinite(e, limits), std::nullopt};
  // Exact emptiness by enumeration when every atom lives below the
  // enumerable height.
  std::uint32_t needed = 0;
  bool enumerable = true;
  auto scan = [&](auto&& self, const GenExpr& x) -> void {
    switch (x.kind()) {
      case GenExpr::Kind::PosT:
        needed = std::max(needed, x.slalom().support_end());
        break;
      case GenExpr::Kind::Height:
        needed = std::max(needed, x.height_n());
        break;
      default:
        break;
    }
    for (const auto& k : x.children()) self(self, k);
  };
  scan(scan, e);
  if (needed > limits.omega_height) enumerable = false;
  if (v.infinite) {
    v.empty = false;
  } else if (enumerable) {
    bool found = false;
    for (const auto& p : enum_omega(limits.omega_height, limits))
      if (member(e, p)) {
        found = true;
        break;
      }
    v.empty = !found;
  }
  return v;
}

OmegaPoint w_delta_class(const Slalom& W, const Rational& delta) {
  if (!(Rational(0) < delta && delta < Rational(1)))
    raise(Errc::SchemaError, "delta must lie strictly between 0 and 1");
  Rational threshold = Rational(1) - delta;
  for (std::uint32_t n = 0;; ++n) {
    if (W.tail_weight(n) < threshold)
      return OmegaPoint{W.restricted_below(n), n};
  }
}

AwMeasure a_w_measure(const Slalom& W, std::uint32_t n) {
  AwMeasure out{Rational(1), Rational(1) - W.tail_weight(n)};
  for (const auto& [k, values] : W.levels())
    if (k > n)
      out.exact *= Rational(1) -
                   Rational(static_cast<long long>(values.size())) *
                       Rational::pow2(-static_cast<long>(k));
  return out;
}

Cl2Witness cl2_witness(const std::vector<Slalom>& Vs, const Slalom& S,
                       std::uint32_t n, const Rational& delta,
                       const Limits& limits) {
  if (!(Rational(0) < delta && delta < Rational(1)))
    raise(Errc::SchemaError, "delta must lie strictly between 0 and 1");
  if (Vs.empty()) raise(Errc::ClassMismatch, "empty class");
  if (Vs.size() > 63 || (1ull << Vs.size()) > limits.subset_evals)
    raise(Errc::SequenceTooLong,
          "subset search over " + std::to_string(Vs.size()) + " slaloms");
  Rational threshold = Rational(1) - delta;
  for (std::size_t i = 0; i < Vs.size(); ++i) {
    if (Vs[i].restricted_below(n) != S)
      raise(Errc::ClassMismatch,
            "slalom " + std::to_string(i) + " has a different prefix");
    if (!(Vs[i].tail_weight(n) < threshold))
      raise(Errc::ClassMismatch,
            "slalom " + std::to_string(i) + " fails the tail test");
  }

  // Exhaustive search for the largest subfamily whose union stays a slalom
  // from level n on. Level n itself is outside both class conditions yet a
  // covered level n makes the intersection finite, so it joins the test.
  auto union_ok = [&](std::uint64_t mask,
                      std::map<std::uint32_t, std::set<std::uint64_t>>& out) {
    out.clear();
    for (std::size_t i = 0; i < Vs.size(); ++i)
      if ((mask >> i) & 1ull)
        for (const auto& [k, values] : Vs[i].levels())
          if (k >= n) out[k].insert(values.begin(), values.end());
    for (const auto& [k, values] : out)
      if (values.size() >= level_size(k)) return false;
    return true;
  };
  std::uint64_t best_mask = 0;
  std::uint32_t best_count = 0;
  std::uint64_t total = 1ull << Vs.size();
  std::map<std::uint32_t, std::set<std::uint64_t>> scratch;
  for (std::uint64_t mask = 1; mask < total; ++mask) {
    std::uint32_t count =
        static_cast<std::uint32_t>(__builtin_popcountll(mask));
    if (count <= best_count) continue;
    if (union_ok(mask, scratch)) {
      best_mask = mask;
      best_count = count;
    }
  }
  Rational need = delta * Rational(static_cast<long long>(Vs.size()));
  if (Rational(static_cast<long long>(best_count)) < need)
    raise(Errc::Internal, "no subfamily of the guaranteed size");

  Cl2Witness out;
  Slalom merged = S;
  std::map<std::uint32_t, std::set<std::uint64_t>> unions;
  union_ok(best_mask, unions);
  for (std::size_t i = 0; i < Vs.size(); ++i)
    if ((best_mask >> i) & 1ull) out.I.push_back(static_cast<std::uint32_t>(i));
  for (const auto& [k, values] : unions) {
    if (k > n) {
      std::uint64_t escape = 0;
      while (values.count(escape)) ++escape;
      out.f.push_back({k, escape});
    }
    std::vector<Slalom::Level> levels = merged.levels();
    levels.push_back({k, std::vector<std::uint64_t>(values.begin(),
                                                    values.end())});
    merged = Slalom::from_levels(std::move(levels));
  }

  // Certify the full union of the chosen subfamily.
  Conjunct c;
  c.height_S = S;
  c.height_n = n;
  c.positive = merged;
  if (!decide_infinite(c))
    raise(Errc::Internal, "witness subfamily not certified infinite");
  return out;
}

std::vector<std::uint64_t> diagonal_escape(const std::vector<Slalom>& Wns,
                                           std::uint32_t H) {
  if (H < Wns.size())
    raise(Errc::SchemaError, "H must cover the listed slaloms");
  if (H > kMaxLevel) raise(Errc::SchemaError, "H too large");
  std::vector<std::uint64_t> f(H + 1, 0);
  for (std::uint32_t i = 1; i <= H; ++i) {
    if (i - 1 >= Wns.size()) break;
    const auto* values = Wns[i - 1].level(i);
    if (!values) continue;
    std::uint64_t escape = 0;
    while (std::binary_search(values->begin(), values->end(), escape))
      ++escape;
    f[i] = escape;
  }
  return f;
}

}  // namespace growthlab
