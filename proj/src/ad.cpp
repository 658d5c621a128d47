#include "growthlab/ad.hpp"

#include <algorithm>
#include <set>

#include "growthlab/error.hpp"

namespace growthlab {

namespace {

// Family indices of block i: the i-th triangular slice [i(i+1)/2, ...).
std::uint32_t block_begin(std::uint32_t i) { return i * (i + 1) / 2; }
std::uint32_t block_end(std::uint32_t i) { return (i + 1) * (i + 2) / 2; }

}  // namespace

Scenario::Scenario(std::map<std::string, std::vector<PointPrefix>> points,
                   std::map<std::string, ADPrefix> family, Coord ad_bound)
    : points_(std::move(points)), family_(std::move(family)),
      ad_bound_(ad_bound) {
  for (auto& [label, prefix] : family_) {
    prefix.label = label;
    if (prefix.elems.empty())
      raise(Errc::SchemaError, "family prefix of " + label + " is empty");
    for (std::size_t i = 1; i < prefix.elems.size(); ++i)
      if (prefix.elems[i] <= prefix.elems[i - 1])
        raise(Errc::SchemaError,
              "family prefix of " + label + " is not strictly increasing");
  }
  for (const auto& [label, prefixes] : points_) {
    for (const auto& p : prefixes) {
      if (p.bits.empty())
        raise(Errc::SchemaError, "empty point prefix under " + label);
      for (char c : p.bits)
        if (c != '0' && c != '1')
          raise(Errc::SchemaError, "point prefix of " + label +
                                       " contains '" + std::string(1, c) +
                                       "'");
    }
  }
  // Almost-disjointness certificate on the available prefixes.
  for (auto i = family_.begin(); i != family_.end(); ++i) {
    auto j = i;
    for (++j; j != family_.end(); ++j) {
      std::vector<Coord> shared;
      std::set_intersection(i->second.elems.begin(), i->second.elems.end(),
                            j->second.elems.begin(), j->second.elems.end(),
                            std::back_inserter(shared));
      for (Coord c : shared)
        if (c >= ad_bound_)
          raise(Errc::SchemaError,
                "families " + i->first + " and " + j->first + " share " +
                    std::to_string(c) + " above the ad bound");
    }
  }
}

const std::vector<PointPrefix>& Scenario::points_of(
    const std::string& alpha) const {
  auto it = points_.find(alpha);
  if (it == points_.end())
    raise(Errc::SchemaError, "no points under label " + alpha);
  return it->second;
}

const ADPrefix& Scenario::family_of(const std::string& alpha) const {
  auto it = family_.find(alpha);
  if (it == family_.end())
    raise(Errc::SchemaError, "no family prefix under label " + alpha);
  return it->second;
}

std::vector<std::string> Scenario::labels() const {
  std::vector<std::string> out;
  for (const auto& [label, prefix] : family_) out.push_back(label);
  return out;
}

std::optional<std::uint32_t> Scenario::max_block(const std::string& alpha,
                                                 const Limits& limits) const {
  const ADPrefix& fam = family_of(alpha);
  auto pit = points_.find(alpha);
  std::optional<std::uint32_t> best;
  for (std::uint32_t i = 0; i <= limits.block_bound; ++i) {
    if (block_end(i) > fam.elems.size()) break;
    if (pit == points_.end() || pit->second.size() <= i) break;
    Coord last_coord = fam.elems[block_end(i) - 1];
    if (pit->second[i].length() <= last_coord) break;
    best = i;
  }
  return best;
}

BlockFamily build_blocks(const Scenario& s, const std::string& alpha,
                         std::uint32_t upto, const Limits& limits) {
  if (upto > limits.block_bound)
    raise(Errc::DepthGuard, "block index " + std::to_string(upto) +
                                " exceeds the bound " +
                                std::to_string(limits.block_bound));
  const ADPrefix& fam = s.family_of(alpha);
  const auto& points = s.points_of(alpha);
  BlockFamily out;
  out.alpha = alpha;
  for (std::uint32_t i = 0; i <= upto; ++i) {
    if (block_end(i) > fam.elems.size())
      raise(Errc::InsufficientPrefix,
            "family prefix of " + alpha + " has " +
                std::to_string(fam.elems.size()) + " elements, block " +
                std::to_string(i) + " needs " + std::to_string(block_end(i)));
    if (points.size() <= i)
      raise(Errc::InsufficientPrefix,
            "no point " + std::to_string(i) + " under " + alpha);
    PartialAssignment phi;
    std::vector<Coord> support;
    for (std::uint32_t j = block_begin(i); j < block_end(i); ++j) {
      Coord c = fam.elems[j];
      if (points[i].length() <= c)
        raise(Errc::InsufficientPrefix,
              "point " + std::to_string(i) + " of " + alpha + " has " +
                  std::to_string(points[i].length()) +
                  " bits, block needs coordinate " + std::to_string(c));
      phi.set(c, points[i].bit(c));
      support.push_back(c);
    }
    out.blocks.push_back(std::move(phi));
    out.supports.push_back(std::move(support));
  }
  return out;
}

ClopenSet u_trunc(const Scenario& s, const std::string& alpha,
                  std::uint32_t n) {
  BlockFamily blocks = build_blocks(s, alpha, n);
  return ClopenSet::from_cylinders(blocks.blocks);
}

ContainsReport contains_check(const Scenario& s, const std::string& alpha,
                              std::uint32_t n) {
  return contains_check(s, alpha, n, build_blocks(s, alpha, n));
}

ContainsReport contains_check(const Scenario& s, const std::string& alpha,
                              std::uint32_t n, const BlockFamily& blocks) {
  if (blocks.blocks.size() <= n)
    raise(Errc::InsufficientPrefix,
          "block family stops before block " + std::to_string(n));
  const auto& points = s.points_of(alpha);
  if (points.size() <= n)
    raise(Errc::InsufficientPrefix,
          "no point " + std::to_string(n) + " under " + alpha);
  ContainsReport report{true, n, std::nullopt};
  for (const auto& [coord, bit] : blocks.blocks[n].entries()) {
    if (points[n].length() <= coord)
      raise(Errc::InsufficientPrefix,
            "point " + std::to_string(n) + " of " + alpha +
                " does not reach coordinate " + std::to_string(coord));
    if (points[n].bit(coord) != bit) {
      report.pass = false;
      report.offending = coord;
      break;
    }
  }
  return report;
}

namespace {

// Largest block whose support is determined by the family prefix alone.
std::optional<std::uint32_t> max_support_block(const ADPrefix& fam) {
  if (fam.elems.empty() || block_end(0) > fam.elems.size())
    return std::nullopt;
  std::uint32_t i = 0;
  while (block_end(i + 1) <= fam.elems.size()) ++i;
  return i;
}

}  // namespace

std::uint32_t find_N(const Scenario& s, const std::vector<std::string>& alphas,
                     const PartialAssignment& tau) {
  if (alphas.empty()) raise(Errc::SchemaError, "find_N needs a label");
  Coord max_t = 0;
  bool has_t = !tau.empty();
  if (has_t) max_t = tau.entries().back().first;

  // Blocks beyond the available prefixes contain only values above the last
  // known family element; certify those against tau and the other families.
  std::uint32_t min_avail = 0xffffffffu;
  for (const auto& alpha : alphas) {
    const ADPrefix& fam = s.family_of(alpha);
    Coord last = fam.elems.back();
    if (alphas.size() >= 2 && last + 1 < s.ad_bound())
      raise(Errc::InsufficientPrefix,
            "family prefix of " + alpha +
                " stops below the ad bound; later blocks not certifiable");
    if (has_t && last < max_t)
      raise(Errc::InsufficientPrefix,
            "family prefix of " + alpha +
                " stops below dom(tau); later blocks not certifiable");
    auto avail = max_support_block(fam);
    if (!avail)
      raise(Errc::InsufficientPrefix, "family prefix of " + alpha +
                                          " does not cover block 0");
    min_avail = std::min(min_avail, *avail);
  }

  for (std::uint32_t N = 0; N <= min_avail; ++N) {
    // I_N = dom(tau) plus the supports of blocks 0..N of every label.
    std::set<Coord> core;
    for (const auto& [coord, bit] : tau.entries()) core.insert(coord);
    bool ok = true;
    for (const auto& alpha : alphas) {
      const ADPrefix& fam = s.family_of(alpha);
      for (std::uint32_t j = 0; j < block_end(N) && ok; ++j)
        core.insert(fam.elems[j]);
    }
    // Later available blocks: pairwise disjoint and clear of I_N.
    std::set<Coord> seen;
    for (const auto& alpha : alphas) {
      const ADPrefix& fam = s.family_of(alpha);
      std::uint32_t avail = *max_support_block(fam);
      for (std::uint32_t i = N + 1; i <= avail && ok; ++i) {
        for (std::uint32_t j = block_begin(i); j < block_end(i) && ok; ++j) {
          Coord c = fam.elems[j];
          if (core.count(c) || seen.count(c)) ok = false;
          seen.insert(c);
        }
      }
    }
    if (ok) return N;
  }
  raise(Errc::InsufficientPrefix,
        "no certifiable N within the available blocks");
}

PositiveBound positive_lower_bound(const Scenario& s,
                                   const std::vector<std::string>& alphas,
                                   const PartialAssignment& tau) {
  std::uint32_t N = find_N(s, alphas, tau);
  ClopenSet core = ClopenSet::cylinder(tau);
  for (const auto& alpha : alphas)
    core = set_difference(core, u_trunc(s, alpha, N));
  if (core.is_empty())
    raise(Errc::EmptyCore, "[tau] is covered by the blocks up to N=" +
                               std::to_string(N));
  PositiveBound out;
  out.N = N;
  out.core_measure = core.measure();
  Rational factor = Rational(1) - Rational::pow2(-(static_cast<long>(N) + 1));
  out.bound = out.core_measure * factor.pow(alphas.size());
  return out;
}

EmptinessResult emptiness_decide(const ClopenSet& C,
                                 const std::vector<std::string>& betas,
                                 const std::vector<std::string>& alphas,
                                 const Scenario& s, std::uint32_t depth) {
  auto trunc_of = [&](const std::string& label) {
    auto mb = s.max_block(label);
    if (!mb)
      raise(Errc::InsufficientPrefix,
            "no complete block under " + label);
    return *mb;
  };

  if (betas.empty()) {
    // Base case: emptiness means the clopen part is covered by the blocks.
    ClopenSet cover = ClopenSet::empty_set();
    for (const auto& alpha : alphas)
      cover = set_union(cover, u_trunc(s, alpha, trunc_of(alpha)));
    ClopenSet residual = set_difference(C, cover);
    if (residual.is_empty()) return {EmptinessResult::Verdict::Empty, {}};
    return {EmptinessResult::Verdict::Nonempty, residual.any_point()};
  }
  if (depth == 0) return {EmptinessResult::Verdict::Unknown, {}};

  // Strip one positive occurrence: a block of it whose coordinates avoid the
  // rest of the expression preserves emptiness both ways. Any strippable one
  // will do; scan from the back.
  for (std::size_t pick = betas.size(); pick-- > 0;) {
    const std::string& beta = betas[pick];
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < betas.size(); ++i)
      if (i != pick) rest.push_back(betas[i]);

    std::set<Coord> rest_support;
    for (Coord c : C.syntactic_support()) rest_support.insert(c);
    auto add_blocks = [&](const std::string& label) {
      BlockFamily fam = build_blocks(s, label, trunc_of(label));
      for (const auto& sup : fam.supports)
        rest_support.insert(sup.begin(), sup.end());
    };
    for (const auto& b : rest) add_blocks(b);
    for (const auto& a : alphas) add_blocks(a);

    BlockFamily beta_blocks = build_blocks(s, beta, trunc_of(beta));
    std::optional<std::uint32_t> K;
    for (std::uint32_t i = 0; i < beta_blocks.supports.size(); ++i) {
      bool disjoint = true;
      for (Coord c : beta_blocks.supports[i])
        if (rest_support.count(c)) disjoint = false;
      if (disjoint) {
        K = i;
        break;
      }
    }
    if (!K) continue;

    EmptinessResult sub = emptiness_decide(C, rest, alphas, s, depth - 1);
    if (sub.verdict != EmptinessResult::Verdict::Nonempty) return sub;
    // Extend the witness into the stripped factor: supports are disjoint.
    PartialAssignment w = sub.witness->merged(beta_blocks.blocks[*K]);
    return {EmptinessResult::Verdict::Nonempty, std::move(w)};
  }
  return {EmptinessResult::Verdict::Unknown, {}};
}

}  // namespace growthlab
