#include "growthlab/density.hpp"

#include <algorithm>
#include <numeric>

#include "growthlab/error.hpp"

namespace growthlab {

namespace {

constexpr std::uint64_t kModulusCap = 1ull << 22;

std::uint64_t word_count(std::uint64_t bits) { return (bits + 63) / 64; }

std::uint64_t popcount_prefix(const std::vector<std::uint64_t>& words,
                              std::uint64_t n) {
  std::uint64_t full = n / 64, rest = n % 64, total = 0;
  for (std::uint64_t i = 0; i < full; ++i)
    total += static_cast<std::uint64_t>(__builtin_popcountll(words[i]));
  if (rest != 0)
    total += static_cast<std::uint64_t>(
        __builtin_popcountll(words[full] & ((1ull << rest) - 1)));
  return total;
}

std::uint64_t sorted_count_below(const std::vector<std::uint64_t>& v,
                                 std::uint64_t n) {
  return static_cast<std::uint64_t>(
      std::lower_bound(v.begin(), v.end(), n) - v.begin());
}

}  // namespace

PeriodicSet::PeriodicSet() : modulus_(1), words_(1, 0) {}

PeriodicSet PeriodicSet::omega() {
  PeriodicSet p;
  p.words_[0] = 1;
  return p;
}

bool PeriodicSet::periodic_bit(std::uint64_t k) const {
  std::uint64_t r = k % modulus_;
  return (words_[r / 64] >> (r % 64)) & 1u;
}

PeriodicSet PeriodicSet::from_residues(std::uint64_t modulus,
                                       std::vector<std::uint64_t> residues,
                                       std::vector<std::uint64_t> added,
                                       std::vector<std::uint64_t> removed) {
  if (modulus == 0) raise(Errc::SchemaError, "modulus must be positive");
  if (modulus > kModulusCap)
    raise(Errc::ModulusTooLarge, std::to_string(modulus));
  PeriodicSet p;
  p.modulus_ = modulus;
  p.words_.assign(word_count(modulus), 0);
  for (std::uint64_t r : residues) {
    if (r >= modulus)
      raise(Errc::SchemaError, "residue " + std::to_string(r) +
                                   " out of range for modulus " +
                                   std::to_string(modulus));
    p.words_[r / 64] |= 1ull << (r % 64);
  }
  p.added_ = std::move(added);
  p.removed_ = std::move(removed);
  std::sort(p.added_.begin(), p.added_.end());
  std::sort(p.removed_.begin(), p.removed_.end());
  p.added_.erase(std::unique(p.added_.begin(), p.added_.end()),
                 p.added_.end());
  p.removed_.erase(std::unique(p.removed_.begin(), p.removed_.end()),
                   p.removed_.end());
  p.canonicalize();
  return p;
}

void PeriodicSet::canonicalize() {
  // Drop redundant deltas: an added point already in the residue part and a
  // removed point outside it change nothing.
  std::vector<std::uint64_t> add2, rem2;
  for (std::uint64_t a : added_)
    if (!periodic_bit(a)) add2.push_back(a);
  for (std::uint64_t r : removed_)
    if (periodic_bit(r)) rem2.push_back(r);
  added_ = std::move(add2);
  removed_ = std::move(rem2);

  // Reduce to the minimal period.
  for (std::uint64_t d = 1; d <= modulus_ / 2; ++d) {
    if (modulus_ % d != 0) continue;
    bool periodic = true;
    for (std::uint64_t r = 0; r < modulus_ && periodic; ++r)
      if (periodic_bit(r) != periodic_bit(r % d)) periodic = false;
    if (periodic) {
      std::vector<std::uint64_t> w(word_count(d), 0);
      for (std::uint64_t r = 0; r < d; ++r)
        if (periodic_bit(r)) w[r / 64] |= 1ull << (r % 64);
      modulus_ = d;
      words_ = std::move(w);
      break;
    }
  }
}

std::vector<std::uint64_t> PeriodicSet::residues() const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t r = 0; r < modulus_; ++r)
    if (periodic_bit(r)) out.push_back(r);
  return out;
}

bool PeriodicSet::member(std::uint64_t k) const {
  if (std::binary_search(added_.begin(), added_.end(), k)) return true;
  if (std::binary_search(removed_.begin(), removed_.end(), k)) return false;
  return periodic_bit(k);
}

std::uint64_t PeriodicSet::residue_count() const {
  return popcount_prefix(words_, modulus_);
}

Rational PeriodicSet::density() const {
  return Rational(static_cast<long long>(residue_count()),
                  static_cast<long long>(modulus_));
}

std::uint64_t PeriodicSet::count_below(std::uint64_t N) const {
  std::uint64_t q = N / modulus_, s = N % modulus_;
  std::uint64_t c = q * residue_count() + popcount_prefix(words_, s);
  c += sorted_count_below(added_, N);
  c -= sorted_count_below(removed_, N);
  return c;
}

PeriodicSet p_union(const PeriodicSet& a, const PeriodicSet& b,
                    const Limits& limits) {
  std::uint64_t g = std::gcd(a.modulus_, b.modulus_);
  std::uint64_t l = a.modulus_ / g * b.modulus_;
  if (l > kModulusCap)
    raise(Errc::ModulusTooLarge, "lcm " + std::to_string(l));
  (void)limits;
  std::vector<std::uint64_t> residues;
  for (std::uint64_t r = 0; r < l; ++r)
    if (a.periodic_bit(r) || b.periodic_bit(r)) residues.push_back(r);
  // Delta points: recompute true membership against the combined periodic
  // part.
  std::vector<std::uint64_t> points;
  for (const auto* v : {&a.added_, &a.removed_, &b.added_, &b.removed_})
    points.insert(points.end(), v->begin(), v->end());
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::vector<std::uint64_t> added, removed;
  for (std::uint64_t k : points) {
    bool truth = a.member(k) || b.member(k);
    bool periodic = a.periodic_bit(k) || b.periodic_bit(k);
    if (truth && !periodic) added.push_back(k);
    if (!truth && periodic) removed.push_back(k);
  }
  return PeriodicSet::from_residues(l, residues, added, removed);
}

PeriodicSet p_intersect(const PeriodicSet& a, const PeriodicSet& b,
                        const Limits& limits) {
  std::uint64_t g = std::gcd(a.modulus_, b.modulus_);
  std::uint64_t l = a.modulus_ / g * b.modulus_;
  if (l > kModulusCap)
    raise(Errc::ModulusTooLarge, "lcm " + std::to_string(l));
  (void)limits;
  std::vector<std::uint64_t> residues;
  for (std::uint64_t r = 0; r < l; ++r)
    if (a.periodic_bit(r) && b.periodic_bit(r)) residues.push_back(r);
  std::vector<std::uint64_t> points;
  for (const auto* v : {&a.added_, &a.removed_, &b.added_, &b.removed_})
    points.insert(points.end(), v->begin(), v->end());
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::vector<std::uint64_t> added, removed;
  for (std::uint64_t k : points) {
    bool truth = a.member(k) && b.member(k);
    bool periodic = a.periodic_bit(k) && b.periodic_bit(k);
    if (truth && !periodic) added.push_back(k);
    if (!truth && periodic) removed.push_back(k);
  }
  return PeriodicSet::from_residues(l, residues, added, removed);
}

PeriodicSet p_complement(const PeriodicSet& a) {
  std::vector<std::uint64_t> residues;
  for (std::uint64_t r = 0; r < a.modulus_; ++r)
    if (!a.periodic_bit(r)) residues.push_back(r);
  // Complement swaps the roles of the deltas.
  return PeriodicSet::from_residues(a.modulus_, residues, a.removed_,
                                    a.added_);
}

PeriodicSet psi0(const ClopenSet& a, const Limits& limits) {
  if (a.is_empty()) return PeriodicSet::empty_set();
  if (a.is_full()) return PeriodicSet::omega();
  std::vector<Coord> support = a.syntactic_support();
  Coord max_coord = support.back();
  if (max_coord > limits.max_psi0_coord)
    raise(Errc::ModulusTooLarge,
          "coordinate " + std::to_string(max_coord) +
              " needs modulus beyond 2^" +
              std::to_string(limits.max_psi0_coord + 1));
  std::uint64_t m = static_cast<std::uint64_t>(max_coord) + 1;
  std::uint64_t M = 1ull << m;
  std::vector<std::uint64_t> residues;
  for (std::uint64_t k = 0; k < M; ++k)
    if (a.contains_word(k)) residues.push_back(k);
  return PeriodicSet::from_residues(M, residues);
}

TransferReport transfer_check(const ClopenSet& a, const Limits& limits) {
  TransferReport report;
  PeriodicSet image = psi0(a, limits);
  report.measure = a.measure();
  report.density = image.density();
  report.laws.push_back({"density-equals-measure",
                         report.density == report.measure,
                         report.density.str(), report.measure.str()});
  PeriodicSet comp = psi0(set_complement(a), limits);
  report.laws.push_back({"complement", comp == p_complement(image),
                         comp.density().str(),
                         p_complement(image).density().str()});
  std::vector<PartialAssignment> cyls = a.cylinders(limits);
  PeriodicSet acc = PeriodicSet::empty_set();
  for (const auto& phi : cyls)
    acc = p_union(acc, psi0(ClopenSet::cylinder(phi), limits), limits);
  report.laws.push_back({"union-over-cylinders", acc == image,
                         acc.density().str(), image.density().str()});
  if (!cyls.empty()) {
    ClopenSet first = ClopenSet::cylinder(cyls.front());
    PeriodicSet lhs = psi0(set_intersect(a, first), limits);
    PeriodicSet rhs = p_intersect(image, psi0(first, limits), limits);
    report.laws.push_back({"intersect-with-first-cylinder", lhs == rhs,
                           lhs.density().str(), rhs.density().str()});
  }
  report.pass = true;
  for (const auto& law : report.laws) report.pass = report.pass && law.holds;
  return report;
}

StagedSet StagedSet::wrap(const PeriodicSet& p) {
  StagedSet s;
  s.stages_.push_back({p, 0});
  s.density_ = p.density();
  s.truncated_ = false;
  return s;
}

StagedSet StagedSet::from_stages(std::vector<Stage> stages, Rational density,
                                 bool truncated) {
  if (stages.empty()) raise(Errc::SchemaError, "staged set needs a stage");
  for (std::size_t i = 1; i < stages.size(); ++i)
    if (stages[i].from <= stages[i - 1].from)
      raise(Errc::SchemaError, "switch points must increase strictly");
  StagedSet s;
  s.stages_ = std::move(stages);
  s.density_ = std::move(density);
  s.truncated_ = truncated;
  return s;
}

bool StagedSet::member(std::uint64_t k) const {
  if (k < stages_.front().from) return false;
  std::size_t i = stages_.size() - 1;
  while (i > 0 && stages_[i].from > k) --i;
  return stages_[i].set.member(k);
}

std::uint64_t StagedSet::count_below(std::uint64_t N) const {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < stages_.size(); ++i) {
    std::uint64_t lo = stages_[i].from;
    std::uint64_t hi =
        i + 1 < stages_.size() ? std::min<std::uint64_t>(stages_[i + 1].from, N)
                               : N;
    if (hi <= lo) continue;
    total += stages_[i].set.count_below(hi) - stages_[i].set.count_below(lo);
  }
  return total;
}

StagedSet buck_union(const ChainGenerator& chain, std::uint32_t stage_budget,
                     const Limits& limits) {
  if (stage_budget == 0) raise(Errc::SchemaError, "stage budget must be >= 1");
  std::vector<StagedSet::Stage> stages;
  std::optional<PeriodicSet> prev;
  std::uint64_t prev_switch = 0;
  std::uint64_t prev_dev = 0;
  bool stabilized = false;
  for (std::uint32_t k = 0; k < stage_budget; ++k) {
    std::optional<PeriodicSet> cur = chain.pull(k);
    if (!cur.has_value()) {
      // Chain exhausted: the last stage is the whole union, so the declared
      // supremum must already be attained.
      if (prev.has_value() && prev->density() != chain.declared_sup)
        raise(Errc::MonotonicityViolation,
              "chain exhausted below its declared supremum");
      stabilized = true;
      break;
    }
    if (prev.has_value()) {
      if (p_union(*prev, *cur, limits) != *cur)
        raise(Errc::MonotonicityViolation,
              "stage " + std::to_string(k) +
                  " does not contain its predecessor");
    }
    if (cur->density() > chain.declared_sup)
      raise(Errc::MonotonicityViolation,
            "stage density exceeds the declared supremum");
    std::uint64_t dev = cur->deviation_bound();
    // switch_k >= 2^{k+3} * max(dev_k, dev_{k-1}, switch_{k-1}) certifies:
    // for all N >= switch_k the counting density of the staged union is
    // within 2^-k + (sup - d(A_{k-1})) of the supremum.
    std::uint64_t scale = 1ull << std::min<std::uint32_t>(k + 3, 40);
    std::uint64_t sw =
        scale * std::max({dev, prev_dev, prev_switch, std::uint64_t{1}});
    if (!stages.empty()) sw = std::max(sw, stages.back().from + 1);
    stages.push_back({*cur, sw});
    if (prev.has_value() && *prev == *cur &&
        cur->density() == chain.declared_sup) {
      stabilized = true;
      stages.pop_back();  // identical stage adds nothing
      break;
    }
    prev = std::move(cur);
    prev_dev = dev;
    prev_switch = sw;
  }
  if (stages.empty()) raise(Errc::SchemaError, "chain produced no stage");
  bool truncated =
      !stabilized && stages.back().set.density() != chain.declared_sup;
  return StagedSet::from_stages(std::move(stages), chain.declared_sup,
                                truncated);
}

StagedCount staged_count(const StagedSet& s, std::uint64_t N) {
  if (N == 0) raise(Errc::SchemaError, "N must be >= 1");
  StagedCount out;
  out.count = s.count_below(N);
  Rational n(static_cast<long long>(N));
  out.estimate = Rational(static_cast<long long>(out.count)) / n;
  // Sound bound: per window, |exact window count - d_j * window length| is
  // at most twice the stage deviation bound, and the window density may sit
  // below the declared density by (d* - d_j).
  Rational bound(0);
  const Rational& dstar = s.declared_density();
  const auto& stages = s.stages();
  if (N <= stages.front().from) {
    bound = Rational(1);
  } else {
    for (std::size_t i = 0; i < stages.size(); ++i) {
      std::uint64_t lo = stages[i].from;
      std::uint64_t hi = i + 1 < stages.size()
                             ? std::min<std::uint64_t>(stages[i + 1].from, N)
                             : N;
      if (hi <= lo) continue;
      Rational len(static_cast<long long>(hi - lo));
      Rational dev(static_cast<long long>(2 * stages[i].set.deviation_bound()));
      Rational gap = dstar - stages[i].set.density();
      if (gap.sign() < 0) gap = -gap;
      bound += dev + gap * len;
    }
    // Everything below the first window is absent from the staged set.
    bound += Rational(static_cast<long long>(stages.front().from));
    bound = bound / n;
  }
  out.error_bound = bound;
  out.truncated = s.truncated();
  return out;
}

}  // namespace growthlab
