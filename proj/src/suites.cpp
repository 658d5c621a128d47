#include "growthlab/suites.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

#include "growthlab/ad.hpp"
#include "growthlab/bell.hpp"
#include "growthlab/cantor.hpp"
#include "growthlab/density.hpp"
#include "growthlab/error.hpp"
#include "growthlab/kelley.hpp"
#include "growthlab/rng.hpp"
#include "growthlab/slalom.hpp"

namespace growthlab {

namespace {

using Json = nlohmann::ordered_json;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  Rng r(seed ^ (tag * 0x9e3779b97f4a7c15ull));
  return r.next();
}

Json counts(std::uint64_t cases, std::uint64_t failures) {
  Json v = Json::object();
  v["cases"] = cases;
  v["failures"] = failures;
  return v;
}

// ---------------------------------------------------------------------------
// transfer: density of the residue image equals the measure, and the image
// is an exact Boolean homomorphism, over all cylinders and seeded random
// clopen sets on coordinates {0..5}.
// ---------------------------------------------------------------------------

ClopenSet set_from_truth_table(std::uint64_t table) {
  std::vector<PartialAssignment> minterms;
  for (std::uint32_t k = 0; k < 64; ++k) {
    if (!((table >> k) & 1ull)) continue;
    PartialAssignment phi;
    for (Coord c = 0; c < 6; ++c) phi.set(c, ((k >> c) & 1u) != 0);
    minterms.push_back(std::move(phi));
  }
  return ClopenSet::from_cylinders(minterms);
}

Report suite_transfer(std::uint64_t seed, const Limits& limits) {
  Report report;
  report.kind = "suite";
  report.name = "transfer";
  report.seed = seed;
  Rng rng(mix_seed(seed, 1));

  std::uint64_t cyl_fail = 0;
  for (std::uint32_t k = 0; k < 64; ++k) {
    PartialAssignment phi;
    for (Coord c = 0; c < 6; ++c) phi.set(c, ((k >> c) & 1u) != 0);
    ClopenSet a = ClopenSet::cylinder(phi);
    if (psi0(a, limits).density() != a.measure()) ++cyl_fail;
  }
  report.add_check("cylinder-density-transfer", cyl_fail == 0,
                   counts(64, cyl_fail));

  std::vector<ClopenSet> sets;
  sets.reserve(1000);
  for (int i = 0; i < 1000; ++i) sets.push_back(set_from_truth_table(rng.next()));

  std::uint64_t density_fail = 0, comp_fail = 0;
  for (const auto& a : sets) {
    PeriodicSet image = psi0(a, limits);
    if (image.density() != a.measure()) ++density_fail;
    if (psi0(set_complement(a), limits) != p_complement(image)) ++comp_fail;
  }
  report.add_check("random-density-transfer", density_fail == 0,
                   counts(sets.size(), density_fail));
  report.add_check("complement-law", comp_fail == 0,
                   counts(sets.size(), comp_fail));

  std::uint64_t union_fail = 0, inter_fail = 0;
  for (std::size_t i = 0; i + 1 < sets.size(); i += 2) {
    const ClopenSet& a = sets[i];
    const ClopenSet& b = sets[i + 1];
    if (psi0(set_union(a, b), limits) !=
        p_union(psi0(a, limits), psi0(b, limits), limits))
      ++union_fail;
    if (psi0(set_intersect(a, b), limits) !=
        p_intersect(psi0(a, limits), psi0(b, limits), limits))
      ++inter_fail;
  }
  report.add_check("union-law", union_fail == 0, counts(500, union_fail));
  report.add_check("intersect-law", inter_fail == 0, counts(500, inter_fail));
  return report;
}

// ---------------------------------------------------------------------------
// positive: seeded block scenarios; the exact residual measure at levels
// N..N+3 stays strictly above the certified lower bound.
// ---------------------------------------------------------------------------

struct PositiveCase {
  Scenario scenario;
  std::vector<std::string> labels;
  PartialAssignment tau;
};

PositiveCase make_positive_case(Rng& rng) {
  for (;;) {
    std::uint32_t m = 1 + static_cast<std::uint32_t>(rng.below(4));
    Coord ad_bound = 4 + static_cast<Coord>(rng.below(3));
    // A couple of values below the bound may be shared between families.
    std::vector<Coord> shared;
    for (Coord v = 0; v < ad_bound; ++v)
      if (rng.below(3) == 0) shared.push_back(v);

    std::map<std::string, ADPrefix> family;
    std::map<std::string, std::vector<PointPrefix>> points;
    std::vector<std::string> labels;
    for (std::uint32_t j = 0; j < m; ++j) {
      std::string label = "a" + std::to_string(j);
      labels.push_back(label);
      std::vector<Coord> elems;
      for (Coord v : shared)
        if (rng.coin()) elems.push_back(v);
      // Disjoint tails: residue j modulo m above the bound.
      Coord next = ad_bound + j + static_cast<Coord>(m * rng.below(3));
      while (elems.size() < 30) {
        elems.push_back(next);
        next += m * (1 + static_cast<Coord>(rng.below(2)));
      }
      std::sort(elems.begin(), elems.end());
      elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
      Coord max_coord = elems.back();
      std::vector<PointPrefix> pts;
      for (int t = 0; t < 7; ++t) {
        std::string bits;
        for (Coord c = 0; c <= max_coord; ++c)
          bits.push_back(rng.coin() ? '1' : '0');
        pts.push_back(PointPrefix{std::move(bits)});
      }
      family[label] = ADPrefix{std::move(elems), label};
      points[label] = std::move(pts);
    }
    PartialAssignment tau;
    if (rng.coin()) {
      std::uint32_t picks = 1 + static_cast<std::uint32_t>(rng.below(2));
      for (std::uint32_t t = 0; t < picks; ++t) {
        Coord c = static_cast<Coord>(rng.below(ad_bound));
        bool bit = rng.coin();
        if (!tau.defines(c)) tau.set(c, bit);
      }
    }
    try {
      Scenario s(std::move(points), std::move(family), ad_bound);
      PositiveBound pb = positive_lower_bound(s, labels, tau);
      if (pb.N + 3 > 6) continue;  // keep the checked levels within blocks
      return {std::move(s), std::move(labels), std::move(tau)};
    } catch (const Error&) {
      continue;
    }
  }
}

Report suite_positive(std::uint64_t seed, const Limits& limits) {
  (void)limits;
  Report report;
  report.kind = "suite";
  report.name = "positive";
  report.seed = seed;
  Rng rng(mix_seed(seed, 2));

  std::uint64_t cases = 0, violations = 0, strict_failures = 0;
  std::array<std::uint64_t, 5> by_label_count{};
  std::map<std::uint32_t, std::uint64_t> by_start_level;
  for (int i = 0; i < 100; ++i) {
    PositiveCase c = make_positive_case(rng);
    PositiveBound pb = positive_lower_bound(c.scenario, c.labels, c.tau);
    ++by_label_count[c.labels.size()];
    ++by_start_level[pb.N];
    for (std::uint32_t n = pb.N; n <= pb.N + 3; ++n) {
      ClopenSet residual = ClopenSet::cylinder(c.tau);
      for (const auto& label : c.labels)
        residual = set_difference(residual, u_trunc(c.scenario, label, n));
      Rational measure = residual.measure();
      ++cases;
      if (measure < pb.bound) ++violations;
      if (!(measure > pb.bound)) ++strict_failures;
    }
  }
  Json spread = counts(cases, violations);
  Json labels = Json::array();
  for (std::size_t m = 1; m <= 4; ++m) labels.push_back(by_label_count[m]);
  spread["cases_by_label_count"] = std::move(labels);
  Json starts = Json::object();
  for (const auto& [n, c] : by_start_level)
    starts[std::to_string(n)] = c;
  spread["cases_by_N"] = std::move(starts);
  report.add_check("residual-above-bound", violations == 0, std::move(spread));
  report.add_check("strict-inequality", strict_failures == 0,
                   counts(cases, strict_failures));
  return report;
}

// ---------------------------------------------------------------------------
// ll: exhaustive checks of the generator laws over slaloms supported below 4
// against the enumerated universe at height 4.
// ---------------------------------------------------------------------------

struct LlUniverse {
  std::vector<OmegaPoint> points;     // ordered by height
  std::vector<std::uint32_t> tmask;   // point slalom mask
  std::vector<std::uint32_t> deadly;  // prefix-mask & ~tmask
  std::vector<std::size_t> height_at; // first point index with n >= h
  std::vector<Slalom> slaloms;        // all slaloms supported below 4
  std::vector<std::uint32_t> smask;
  std::vector<std::int32_t> index_of_mask;  // mask -> slalom index
};

std::uint32_t mask_of_slalom(const Slalom& s) {
  std::uint32_t mask = 0;
  for (const auto& [k, values] : s.levels()) {
    std::uint32_t offset = (1u << k) - 2;
    for (std::uint64_t v : values)
      mask |= 1u << (offset + static_cast<std::uint32_t>(v));
  }
  return mask;
}

// Mask bits used by levels below n (levels 1..n-1 hold 2 + 4 + ... bits).
std::uint32_t prefix_mask(std::uint32_t n) {
  if (n == 0) return 0;
  return (1u << ((1u << n) - 2)) - 1;
}

// Any common member at point index >= from?
bool suffix_nonempty(const std::uint64_t* ra, const std::uint64_t* rb,
                     std::size_t from, std::size_t words) {
  std::size_t w0 = from / 64;
  for (std::size_t w = w0; w < words; ++w) {
    std::uint64_t x = ra[w] & rb[w];
    if (w == w0) x &= ~0ull << (from % 64);
    if (x) return true;
  }
  return false;
}

LlUniverse build_universe(const Limits& limits) {
  LlUniverse u;
  u.points = enum_omega(4, limits);
  for (std::size_t i = 0; i < u.points.size(); ++i) {
    const OmegaPoint& p = u.points[i];
    u.tmask.push_back(mask_of_slalom(p.S));
    u.deadly.push_back(prefix_mask(p.n) & ~u.tmask.back());
  }
  // height_at[h]: first point index whose height reaches h (points are
  // ordered by height).
  u.height_at.assign(6, u.points.size());
  for (std::uint32_t h = 0; h <= 5; ++h)
    for (std::size_t i = 0; i < u.points.size(); ++i)
      if (u.points[i].n >= h) {
        u.height_at[h] = i;
        break;
      }
  u.index_of_mask.assign(1u << 14, -1);
  for (std::size_t i = 0; i < u.points.size(); ++i) {
    if (u.points[i].n == 4) {
      u.slaloms.push_back(u.points[i].S);
      std::uint32_t m = u.tmask[i];
      u.smask.push_back(m);
      u.index_of_mask[m] = static_cast<std::int32_t>(u.slaloms.size() - 1);
    }
  }
  return u;
}

Report suite_ll(std::uint64_t seed, const Limits& limits) {
  Report report;
  report.kind = "suite";
  report.name = "ll";
  report.seed = seed;
  Rng rng(mix_seed(seed, 3));

  LlUniverse u = build_universe(limits);
  const std::size_t S = u.slaloms.size();
  const std::size_t P = u.points.size();
  const std::size_t W = (P + 63) / 64;

  // Membership bitsets from the real evaluator, cross-checked against the
  // masked definition pointwise.
  std::vector<std::uint64_t> bits(S * W, 0);
  std::uint64_t member_mismatch = 0;
  {
    for (std::size_t i = 0; i < S; ++i) {
      GenExpr atom = GenExpr::pos(u.slaloms[i]);
      std::uint64_t* row = &bits[i * W];
      for (std::size_t p = 0; p < P; ++p) {
        bool real = member(atom, u.points[p]);
        bool masked = (u.smask[i] & u.deadly[p]) == 0;
        if (real != masked) ++member_mismatch;
        if (real) row[p / 64] |= 1ull << (p % 64);
      }
    }
  }
  report.add_check("member-matches-definition", member_mismatch == 0,
                   counts(S * P, member_mismatch));

  // ll(1): inclusion pairs are exactly the membership-monotone pairs.
  std::uint64_t incl_pairs = 0, incl_fail = 0;
  for (std::size_t a = 0; a < S; ++a) {
    const std::uint64_t* ra = &bits[a * W];
    for (std::size_t b = 0; b < S; ++b) {
      if ((u.smask[a] & ~u.smask[b]) != 0) continue;  // not a subset
      ++incl_pairs;
      const std::uint64_t* rb = &bits[b * W];
      bool ok = true;
      for (std::size_t w = 0; w < W && ok; ++w)
        if (rb[w] & ~ra[w]) ok = false;  // T_B must sit inside T_A
      if (!ok) ++incl_fail;
    }
  }
  report.add_check("ll1-monotonicity", incl_fail == 0,
                   counts(incl_pairs, incl_fail));

  // ll(1) converse on sampled non-inclusions: a separating point exists.
  std::uint64_t conv_cases = 0, conv_fail = 0;
  while (conv_cases < 20000) {
    std::size_t a = rng.below(S), b = rng.below(S);
    if ((u.smask[a] & ~u.smask[b]) == 0) continue;  // subset; skip
    ++conv_cases;
    const std::uint64_t* ra = &bits[a * W];
    const std::uint64_t* rb = &bits[b * W];
    bool separated = false;
    for (std::size_t w = 0; w < W && !separated; ++w)
      if (rb[w] & ~ra[w]) separated = true;
    if (!separated) ++conv_fail;
  }
  report.add_check("ll1-converse-sampled", conv_fail == 0,
                   counts(conv_cases, conv_fail));

  // ll(2) and ll(3) over every unordered pair: the classification of the
  // levelwise union agrees with the decision procedure's merge logic, the
  // slalom case matches membership exactly, the covered case is finite in
  // the enumeration.
  std::uint64_t pair_cases = 0;
  std::uint64_t classify_fail = 0, merge_fail = 0, finite_fail = 0,
                infinite_fail = 0;
  for (std::size_t a = 0; a < S; ++a) {
    const std::uint64_t* ra = &bits[a * W];
    for (std::size_t b = a; b < S; ++b) {
      ++pair_cases;
      const std::uint64_t* rb = &bits[b * W];
      std::uint32_t umask = u.smask[a] | u.smask[b];
      std::int32_t ui = u.index_of_mask[umask];
      std::optional<std::uint32_t> covered =
          slalom_union_covered(u.slaloms[a], u.slaloms[b]);
      if (covered.has_value() != (ui < 0)) {
        ++classify_fail;
        continue;
      }
      if (ui >= 0) {
        // The decision procedure's own merge must produce this union.
        SlalomUnion merged = slalom_union(u.slaloms[a], u.slaloms[b]);
        if (!merged.slalom || mask_of_slalom(*merged.slalom) != umask) {
          ++classify_fail;
          continue;
        }
        const std::uint64_t* ru = &bits[static_cast<std::size_t>(ui) * W];
        std::uint64_t diff = 0;
        for (std::size_t w = 0; w < W; ++w) diff |= (ra[w] & rb[w]) ^ ru[w];
        if (diff) ++merge_fail;
        // An infinite intersection shows a member at the top height.
        if (!suffix_nonempty(ra, rb, u.height_at[4], W)) ++infinite_fail;
      } else {
        // Finite: no member strictly above the covered level.
        if (suffix_nonempty(ra, rb, u.height_at[*covered + 1], W))
          ++finite_fail;
      }
    }
  }
  report.add_check("ll3-classification", classify_fail == 0,
                   counts(pair_cases, classify_fail));
  report.add_check("ll2-union-equality", merge_fail == 0,
                   counts(pair_cases, merge_fail));
  report.add_check("ll3-finite-no-tail", finite_fail == 0,
                   counts(pair_cases, finite_fail));
  report.add_check("ll2-infinite-has-tail", infinite_fail == 0,
                   counts(pair_cases, infinite_fail));

  // Full pipeline on a seeded subsample: DNF + decision procedure vs the
  // enumerated truth.
  std::uint64_t pipeline_cases = 20000, pipeline_fail = 0;
  for (std::uint64_t t = 0; t < pipeline_cases; ++t) {
    std::size_t a = rng.below(S), b = rng.below(S);
    GenExpr e = GenExpr::conj(GenExpr::pos(u.slaloms[a]),
                              GenExpr::pos(u.slaloms[b]));
    std::vector<Conjunct> nf = normal_form(e, limits);
    bool infinite = false;
    for (const auto& c : nf) infinite = infinite || decide_infinite(c);
    bool enum_infinite =
        suffix_nonempty(&bits[a * W], &bits[b * W], u.height_at[4], W);
    if (infinite != enum_infinite) ++pipeline_fail;
    if (nf.size() != 1) ++pipeline_fail;
  }
  report.add_check("pipeline-subsample", pipeline_fail == 0,
                   counts(pipeline_cases, pipeline_fail));
  return report;
}

// ---------------------------------------------------------------------------
// kappa: the exact LP value equals the stabilized sequence bound on seeded
// families, with weak duality along the way.
// ---------------------------------------------------------------------------

Report suite_kappa(std::uint64_t seed, const Limits& limits) {
  Report report;
  report.kind = "suite";
  report.name = "kappa";
  report.seed = seed;
  Rng rng(mix_seed(seed, 4));

  const std::array<const char*, 6> names{"a", "b", "c", "d", "e", "f"};
  std::uint64_t equal_fail = 0, duality_fail = 0;
  for (int i = 0; i < 200; ++i) {
    std::uint32_t atom_count = 2 + static_cast<std::uint32_t>(rng.below(5));
    std::uint32_t set_count = 1 + static_cast<std::uint32_t>(rng.below(5));
    std::vector<std::string> atoms(names.begin(), names.begin() + atom_count);
    std::vector<std::vector<std::uint32_t>> sets;
    for (std::uint32_t s = 0; s < set_count; ++s) {
      std::uint64_t mask = 1 + rng.below((1ull << atom_count) - 1);
      std::vector<std::uint32_t> one;
      for (std::uint32_t a = 0; a < atom_count; ++a)
        if ((mask >> a) & 1ull) one.push_back(a);
      sets.push_back(std::move(one));
    }
    FiniteFamily fam = FiniteFamily::make(std::move(atoms), std::move(sets));
    KappaCertificate cert = kappa_lp(fam, limits);
    std::vector<Rational> bounds = kappa_upper_bounds(fam, 12, limits);
    for (const auto& bound : bounds)
      if (cert.value > bound) ++duality_fail;
    if (cert.value != bounds.back()) ++equal_fail;
  }
  report.add_check("lp-equals-stabilized-bound", equal_fail == 0,
                   counts(200, equal_fail));
  report.add_check("weak-duality", duality_fail == 0,
                   counts(200, duality_fail));
  return report;
}

// ---------------------------------------------------------------------------
// cl2: seeded tail classes; every member keeps measure above delta, the
// witness subfamily reaches delta*k and is certified infinite, and the
// finite atomization's LP value stays above delta.
// ---------------------------------------------------------------------------

struct Cl2Case {
  Slalom S;
  std::uint32_t n;
  Rational delta;
  std::vector<Slalom> members;
};

Cl2Case make_cl2_case(Rng& rng, int index) {
  static const std::array<Rational, 3> deltas{Rational(1, 4), Rational(1, 2),
                                              Rational(3, 4)};
  Rational delta = deltas[static_cast<std::size_t>(index % 3)];
  for (;;) {
    std::uint32_t n = static_cast<std::uint32_t>(rng.below(3));
    std::vector<Slalom::Level> prefix_levels;
    for (std::uint32_t k = 1; k < n; ++k) {
      if (rng.coin()) continue;
      std::uint64_t full = (1ull << (1ull << k)) - 1;
      std::uint64_t mask = 1 + rng.below(full - 1);
      std::vector<std::uint64_t> values;
      for (std::uint64_t v = 0; v < (1ull << k); ++v)
        if ((mask >> v) & 1ull) values.push_back(v);
      prefix_levels.push_back({k, std::move(values)});
    }
    Slalom S = Slalom::from_levels(std::move(prefix_levels));

    std::uint32_t count = 2 + static_cast<std::uint32_t>(rng.below(5));
    std::vector<Slalom> members;
    bool ok = true;
    Rational threshold = Rational(1) - delta;
    for (std::uint32_t i = 0; i < count; ++i) {
      std::vector<Slalom::Level> levels = S.levels();
      for (std::uint32_t k = n + 1; k <= n + 4; ++k) {
        if (rng.below(2) == 0) continue;
        std::uint64_t width = 1ull << k;
        std::uint64_t size = 1 + rng.below(std::min<std::uint64_t>(width - 1, 2));
        std::set<std::uint64_t> values;
        while (values.size() < size) values.insert(rng.below(width));
        levels.push_back(
            {k, std::vector<std::uint64_t>(values.begin(), values.end())});
      }
      Slalom W = Slalom::from_levels(std::move(levels));
      // Trim tail levels until the class test holds.
      while (!(W.tail_weight(n) < threshold)) {
        std::vector<Slalom::Level> ls = W.levels();
        // Drop the lowest tail level.
        for (std::size_t t = 0; t < ls.size(); ++t)
          if (ls[t].first > n) {
            ls.erase(ls.begin() + static_cast<std::ptrdiff_t>(t));
            break;
          }
        W = Slalom::from_levels(std::move(ls));
      }
      if (W.restricted_below(n) != S) ok = false;
      members.push_back(std::move(W));
    }
    if (!ok) continue;
    return {std::move(S), n, delta, std::move(members)};
  }
}

FiniteFamily atomize_class(const Cl2Case& c) {
  // Realized avoidance patterns: bit i of a pattern says the point escapes
  // member i at every level. One pass per level ANDs the per-value patterns.
  const std::size_t k = c.members.size();
  std::set<std::uint32_t> levels;
  for (const auto& w : c.members)
    for (const auto& [lvl, values] : w.levels())
      if (lvl > c.n) levels.insert(lvl);
  std::set<std::uint64_t> patterns{(1ull << k) - 1};
  for (std::uint32_t lvl : levels) {
    std::set<std::uint64_t> level_patterns;
    for (std::uint64_t v = 0; v < (1ull << lvl); ++v) {
      std::uint64_t p = 0;
      for (std::size_t i = 0; i < k; ++i) {
        const auto* values = c.members[i].level(lvl);
        bool avoided = !values || !std::binary_search(values->begin(),
                                                      values->end(), v);
        if (avoided) p |= 1ull << i;
      }
      level_patterns.insert(p);
    }
    std::set<std::uint64_t> next;
    for (std::uint64_t p : patterns)
      for (std::uint64_t q : level_patterns) next.insert(p & q);
    patterns = std::move(next);
  }
  std::vector<std::string> atoms;
  std::vector<std::uint64_t> atom_patterns(patterns.begin(), patterns.end());
  for (std::uint64_t p : atom_patterns)
    atoms.push_back("p" + std::to_string(p));
  std::vector<std::vector<std::uint32_t>> sets(k);
  for (std::size_t a = 0; a < atom_patterns.size(); ++a)
    for (std::size_t i = 0; i < k; ++i)
      if ((atom_patterns[a] >> i) & 1ull)
        sets[i].push_back(static_cast<std::uint32_t>(a));
  return FiniteFamily::make(std::move(atoms), std::move(sets));
}

Report suite_cl2(std::uint64_t seed, const Limits& limits) {
  Report report;
  report.kind = "suite";
  report.name = "cl2";
  report.seed = seed;
  Rng rng(mix_seed(seed, 5));

  std::uint64_t measure_fail = 0, witness_fail = 0, lp_fail = 0,
                escape_fail = 0;
  std::uint64_t member_cases = 0;
  for (int i = 0; i < 100; ++i) {
    Cl2Case c = make_cl2_case(rng, i);
    for (const auto& w : c.members) {
      ++member_cases;
      if (!(a_w_measure(w, c.n).exact > c.delta)) ++measure_fail;
    }
    Cl2Witness witness = cl2_witness(c.members, c.S, c.n, c.delta, limits);
    Rational size(static_cast<long long>(witness.I.size()));
    if (size < c.delta * Rational(static_cast<long long>(c.members.size())))
      ++witness_fail;
    for (const auto& [lvl, v] : witness.f) {
      for (std::uint32_t idx : witness.I) {
        const auto* values = c.members[idx].level(lvl);
        if (values && std::binary_search(values->begin(), values->end(), v))
          ++escape_fail;
      }
    }
    FiniteFamily fam = atomize_class(c);
    if (!(kappa_lp(fam, limits).value > c.delta)) ++lp_fail;
  }
  report.add_check("member-measure-above-delta", measure_fail == 0,
                   counts(member_cases, measure_fail));
  report.add_check("witness-size", witness_fail == 0, counts(100, witness_fail));
  report.add_check("witness-escape", escape_fail == 0, counts(100, escape_fail));
  report.add_check("atomized-lp-above-delta", lp_fail == 0,
                   counts(100, lp_fail));
  return report;
}

// ---------------------------------------------------------------------------
// bell-measure: depth masses, the difference ladder, and the certified
// factorial-tail comparison.
// ---------------------------------------------------------------------------

PiPrefix random_pi(Rng& rng, std::uint32_t H) {
  std::vector<BellNode> rows;
  for (std::uint32_t n = 0; n <= H; ++n) {
    BellNode row;
    for (std::uint32_t i = 0; i <= n; ++i)
      row.push_back(static_cast<std::uint32_t>(rng.below(i + 2)));
    rows.push_back(std::move(row));
  }
  return make_pi_prefix(std::move(rows));
}

Report suite_bell_measure(std::uint64_t seed, const Limits& limits) {
  Report report;
  report.kind = "suite";
  report.name = "bell-measure";
  report.seed = seed;
  Rng rng(mix_seed(seed, 6));

  std::uint64_t mass_fail = 0;
  for (std::uint32_t d = 0; d <= 8; ++d) {
    Rational total(0);
    for (const auto& node : bell_nodes_at_depth(d, limits))
      total += node_measure(node);
    if (total != Rational(1)) ++mass_fail;
  }
  report.add_check("depth-mass", mass_fail == 0, counts(9, mass_fail));

  std::uint64_t ladder_cases = 0, ladder_fail = 0;
  for (int i = 0; i < 100; ++i) {
    std::uint32_t m = 1 + static_cast<std::uint32_t>(rng.below(3));
    std::uint32_t H = 5 + static_cast<std::uint32_t>(rng.below(2));
    std::vector<PiPrefix> pis;
    for (std::uint32_t j = 0; j < m; ++j) pis.push_back(random_pi(rng, H));
    auto a_set = [&](std::uint32_t l) {
      std::vector<BellNode> rows;
      for (const auto& pi : pis)
        for (std::uint32_t t = 0; t < l && t < pi.rows.size(); ++t)
          rows.push_back(pi.rows[t]);
      return BellClopen::from_nodes(std::move(rows));
    };
    for (std::uint32_t l = 1; l <= H; ++l) {
      ++ladder_cases;
      Rational step = a_set(l + 1).measure() - a_set(l).measure();
      if (step > Rational(static_cast<long long>(m)) *
                     Rational::inv_factorial(l + 2))
        ++ladder_fail;
    }
  }
  report.add_check("difference-ladder", ladder_fail == 0,
                   counts(ladder_cases, ladder_fail));

  std::uint64_t taylor_cases = 0, taylor_fail = 0;
  for (std::uint32_t m = 1; m <= 5; ++m)
    for (std::uint32_t n = 3 * m + 1; n <= 60; ++n) {
      ++taylor_cases;
      if (!taylor_check(m, n).holds) ++taylor_fail;
    }
  report.add_check("factorial-tail-comparison", taylor_fail == 0,
                   counts(taylor_cases, taylor_fail));
  return report;
}

// ---------------------------------------------------------------------------
// bell-iso: both deciders against the exhaustive sweep, over a structured
// grid and seeded instances.
// ---------------------------------------------------------------------------

// Direct sweep oracle: does a node of the full depth survive the row
// constraints?
bool sweep_exists(const std::vector<PiPrefix>& pos,
                  const std::vector<PiPrefix>& neg, const Limits& limits) {
  std::uint32_t depth = 1;
  for (const auto* side : {&pos, &neg})
    for (const auto& pi : *side)
      depth = std::max(depth, pi.height() + 1);
  auto extends = [](const BellNode& t, const BellNode& prefix) {
    return prefix.size() <= t.size() &&
           std::equal(prefix.begin(), prefix.end(), t.begin());
  };
  for (const auto& node : bell_nodes_at_depth(depth, limits)) {
    bool ok = true;
    for (const auto& pi : pos) {
      bool hit = false;
      for (const auto& row : pi.rows) hit = hit || extends(node, row);
      if (!hit) ok = false;
    }
    for (const auto& pi : neg)
      for (const auto& row : pi.rows)
        if (extends(node, row)) ok = false;
    if (ok) return true;
  }
  return false;
}

void check_iso_instance(const std::vector<PiPrefix>& pos,
                        const std::vector<PiPrefix>& neg, const Limits& limits,
                        std::uint64_t& cases, std::uint64_t& failures) {
  ++cases;
  IsoReport iso = iso_condition_check(pos, neg, limits);
  bool exists = sweep_exists(pos, neg, limits);
  if (!iso.consistent || iso.c_finite == exists || iso.v_empty == exists)
    ++failures;
}

std::vector<PiPrefix> all_prefixes(std::uint32_t H) {
  std::vector<PiPrefix> out;
  std::vector<BellNode> rows;
  auto rec = [&](auto&& self, std::uint32_t n) -> void {
    if (n > H) {
      out.push_back(PiPrefix{rows});
      return;
    }
    std::vector<BellNode> candidates;
    BellNode acc;
    auto gen = [&](auto&& g) -> void {
      if (acc.size() == n + 1) {
        candidates.push_back(acc);
        return;
      }
      for (std::uint32_t v = 0; v <= acc.size() + 1; ++v) {
        acc.push_back(v);
        g(g);
        acc.pop_back();
      }
    };
    gen(gen);
    for (const auto& row : candidates) {
      rows.push_back(row);
      self(self, n + 1);
      rows.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

Report suite_bell_iso(std::uint64_t seed, const Limits& limits) {
  Report report;
  report.kind = "suite";
  report.name = "bell-iso";
  report.seed = seed;
  Rng rng(mix_seed(seed, 7));

  std::uint64_t cases = 0, failures = 0;

  // Heights <= 1: every combination with at most two prefixes per side.
  {
    std::vector<PiPrefix> pool = all_prefixes(0);
    for (auto& p : all_prefixes(1)) pool.push_back(std::move(p));
    std::vector<std::vector<PiPrefix>> sides;
    sides.push_back({});
    for (std::size_t i = 0; i < pool.size(); ++i) {
      sides.push_back({pool[i]});
      for (std::size_t j = i + 1; j < pool.size(); ++j)
        sides.push_back({pool[i], pool[j]});
    }
    for (const auto& pos : sides)
      for (const auto& neg : sides)
        check_iso_instance(pos, neg, limits, cases, failures);
  }
  report.add_check("grid-height-1", failures == 0, counts(cases, failures));

  // Height 2: every singleton-vs-singleton instance.
  {
    std::uint64_t c2 = 0, f2 = 0;
    std::vector<PiPrefix> pool = all_prefixes(2);
    for (const auto& a : pool) {
      check_iso_instance({a}, {}, limits, c2, f2);
      check_iso_instance({}, {a}, limits, c2, f2);
      for (const auto& b : pool) check_iso_instance({a}, {b}, limits, c2, f2);
    }
    report.add_check("grid-height-2", f2 == 0, counts(c2, f2));
    cases += c2;
    failures += f2;
  }

  // Height 3: every single-prefix instance on either side.
  {
    std::uint64_t c3 = 0, f3 = 0;
    for (const auto& p : all_prefixes(3)) {
      check_iso_instance({p}, {}, limits, c3, f3);
      check_iso_instance({}, {p}, limits, c3, f3);
    }
    report.add_check("grid-height-3", f3 == 0, counts(c3, f3));
    cases += c3;
    failures += f3;
  }

  // Seeded instances at heights up to 5, mixed sides.
  {
    std::uint64_t c5 = 0, f5 = 0;
    for (int i = 0; i < 500; ++i) {
      std::vector<PiPrefix> pos, neg;
      std::uint32_t np = static_cast<std::uint32_t>(rng.below(3));
      std::uint32_t nn = static_cast<std::uint32_t>(rng.below(3));
      for (std::uint32_t t = 0; t < np; ++t)
        pos.push_back(random_pi(rng, 1 + static_cast<std::uint32_t>(
                                             rng.below(5))));
      for (std::uint32_t t = 0; t < nn; ++t)
        neg.push_back(random_pi(rng, 1 + static_cast<std::uint32_t>(
                                             rng.below(5))));
      check_iso_instance(pos, neg, limits, c5, f5);
    }
    report.add_check("seeded-height-5", f5 == 0, counts(c5, f5));
  }
  return report;
}

// ---------------------------------------------------------------------------
// bell-positivity: seeded instances with a nonempty truncated residual have
// a strictly positive certified gap.
// ---------------------------------------------------------------------------

Report suite_bell_positivity(std::uint64_t seed, const Limits& limits) {
  Report report;
  report.kind = "suite";
  report.name = "bell-positivity";
  report.seed = seed;
  Rng rng(mix_seed(seed, 8));

  std::uint64_t gap_fail = 0, floor_fail = 0, ladder_fail = 0;
  for (int i = 0; i < 100; ++i) {
    for (;;) {
      std::uint32_t m = 1 + static_cast<std::uint32_t>(rng.below(3));
      std::uint32_t slen = static_cast<std::uint32_t>(rng.below(3));
      BellNode s;
      for (std::uint32_t t = 0; t < slen; ++t)
        s.push_back(static_cast<std::uint32_t>(rng.below(t + 2)));
      std::uint32_t n = std::max<std::uint32_t>(slen, 3 * m) + 1 +
                        static_cast<std::uint32_t>(rng.below(2));
      std::uint32_t H = n + 2;
      std::vector<PiPrefix> pis;
      for (std::uint32_t j = 0; j < m; ++j) pis.push_back(random_pi(rng, H));
      try {
        if (decide_nonempty_V(s, {}, pis, limits).empty) continue;
        PositivityReport pr = strict_positivity_check(s, pis, n, limits);
        if (!(pr.gap.sign() > 0)) ++gap_fail;
        if (!pr.residual_floor_holds) ++floor_fail;
        if (!pr.ladder_holds) ++ladder_fail;
      } catch (const Error& e) {
        if (e.code() == Errc::DepthGuard) continue;
        throw;
      }
      break;
    }
  }
  report.add_check("strict-gap", gap_fail == 0, counts(100, gap_fail));
  report.add_check("residual-floor", floor_fail == 0, counts(100, floor_fail));
  report.add_check("ladder", ladder_fail == 0, counts(100, ladder_fail));
  return report;
}

// ---------------------------------------------------------------------------
// diagonal: the escape function avoids every listed level set.
// ---------------------------------------------------------------------------

Report suite_diagonal(std::uint64_t seed, const Limits& limits) {
  (void)limits;
  Report report;
  report.kind = "suite";
  report.name = "diagonal";
  report.seed = seed;
  Rng rng(mix_seed(seed, 9));

  std::uint64_t cases = 0, failures = 0;
  for (int i = 0; i < 100; ++i) {
    std::uint32_t len = 1 + static_cast<std::uint32_t>(rng.below(16));
    std::uint32_t H = len + static_cast<std::uint32_t>(rng.below(4));
    std::vector<Slalom> list;
    for (std::uint32_t t = 0; t < len; ++t) {
      std::uint32_t level = t + 1;
      std::vector<Slalom::Level> levels;
      if (rng.below(4) != 0) {
        std::uint64_t width = 1ull << level;
        std::uint64_t size = 1 + rng.below(std::min<std::uint64_t>(width - 1, 6));
        std::set<std::uint64_t> values;
        while (values.size() < size) values.insert(rng.below(width));
        levels.push_back(
            {level, std::vector<std::uint64_t>(values.begin(), values.end())});
      }
      list.push_back(Slalom::from_levels(std::move(levels)));
    }
    std::vector<std::uint64_t> f = diagonal_escape(list, H);
    ++cases;
    bool ok = f.size() == H + 1;
    for (std::uint32_t nlevel = 0; nlevel <= H && ok; ++nlevel) {
      if (f[nlevel] >= (1ull << nlevel)) ok = false;
      if (nlevel >= 1 && nlevel - 1 < list.size()) {
        const auto* values = list[nlevel - 1].level(nlevel);
        if (values &&
            std::binary_search(values->begin(), values->end(), f[nlevel]))
          ok = false;
      }
    }
    if (!ok) ++failures;
  }
  report.add_check("escape-avoids-levels", failures == 0,
                   counts(cases, failures));
  return report;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{
      "transfer", "positive",     "ll",       "kappa",           "cl2",
      "bell-measure", "bell-iso", "bell-positivity", "diagonal"};
  return names;
}

Report run_suite(const std::string& name, std::uint64_t seed,
                 const Limits& limits) {
  if (name == "transfer") return suite_transfer(seed, limits);
  if (name == "positive") return suite_positive(seed, limits);
  if (name == "ll") return suite_ll(seed, limits);
  if (name == "kappa") return suite_kappa(seed, limits);
  if (name == "cl2") return suite_cl2(seed, limits);
  if (name == "bell-measure") return suite_bell_measure(seed, limits);
  if (name == "bell-iso") return suite_bell_iso(seed, limits);
  if (name == "bell-positivity") return suite_bell_positivity(seed, limits);
  if (name == "diagonal") return suite_diagonal(seed, limits);
  raise(Errc::UnknownSuite, "no suite named '" + name + "'");
}

}  // namespace growthlab
