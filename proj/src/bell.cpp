#include "growthlab/bell.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "growthlab/error.hpp"

namespace growthlab {

namespace {

bool extends(const BellNode& t, const BellNode& prefix) {
  if (prefix.size() > t.size()) return false;
  return std::equal(prefix.begin(), prefix.end(), t.begin());
}

bool node_less(const BellNode& a, const BellNode& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

}  // namespace

void validate_bell_node(const BellNode& s) {
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] > i + 1)
      raise(Errc::SchemaError,
            "node value " + std::to_string(s[i]) + " at index " +
                std::to_string(i) + " exceeds " + std::to_string(i + 1));
}

Rational node_measure(const BellNode& s) {
  validate_bell_node(s);
  return Rational::inv_factorial(s.size() + 1);
}

std::uint64_t bell_children(std::uint32_t depth) { return depth + 2; }

Rational bell_depth_count(std::uint32_t depth) {
  return Rational::factorial(depth + 1);
}

std::vector<BellNode> bell_nodes_at_depth(std::uint32_t depth,
                                          const Limits& limits) {
  Rational count = bell_depth_count(depth);
  if (count > Rational(static_cast<long long>(limits.node_budget)))
    raise(Errc::DepthGuard, "depth " + std::to_string(depth) + " holds " +
                                count.str() + " nodes");
  std::vector<BellNode> out;
  BellNode acc;
  auto rec = [&](auto&& self) -> void {
    if (acc.size() == depth) {
      out.push_back(acc);
      return;
    }
    for (std::uint32_t v = 0; v <= acc.size() + 1; ++v) {
      acc.push_back(v);
      self(self);
      acc.pop_back();
    }
  };
  rec(rec);
  return out;
}

BellClopen BellClopen::whole_space() {
  BellClopen b;
  b.nodes_.push_back({});
  return b;
}

BellClopen BellClopen::from_nodes(std::vector<BellNode> nodes) {
  for (const auto& n : nodes) validate_bell_node(n);
  std::sort(nodes.begin(), nodes.end(), node_less);
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  // Reduce to the unique minimal antichain: drop nodes under a listed node,
  // merge complete sibling families into their parent, repeat to fixpoint.
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<BellNode> kept;
    for (const auto& n : nodes) {
      bool nested = false;
      for (const auto& p : kept) {
        if (extends(n, p)) {
          nested = true;
          break;
        }
      }
      if (nested)
        changed = true;
      else
        kept.push_back(n);
    }
    nodes = std::move(kept);

    std::map<BellNode, std::set<std::uint32_t>> families;
    for (const auto& n : nodes) {
      if (n.empty()) continue;
      BellNode parent(n.begin(), n.end() - 1);
      families[parent].insert(n.back());
    }
    for (const auto& [parent, values] : families) {
      if (values.size() == bell_children(
                               static_cast<std::uint32_t>(parent.size()))) {
        std::vector<BellNode> next;
        for (const auto& n : nodes) {
          bool child = n.size() == parent.size() + 1 && extends(n, parent);
          if (!child) next.push_back(n);
        }
        next.push_back(parent);
        std::sort(next.begin(), next.end(), node_less);
        nodes = std::move(next);
        changed = true;
        break;
      }
    }
  }
  BellClopen b;
  b.nodes_ = std::move(nodes);
  return b;
}

Rational BellClopen::measure() const {
  Rational total(0);
  for (const auto& n : nodes_) total += node_measure(n);
  return total;
}

bool BellClopen::contains_node(const BellNode& t) const {
  for (const auto& n : nodes_)
    if (extends(t, n)) return true;
  return false;
}

bool BellClopen::meets_node(const BellNode& t) const {
  for (const auto& n : nodes_)
    if (extends(t, n) || extends(n, t)) return true;
  return false;
}

BellClopen b_union(const BellClopen& a, const BellClopen& b) {
  std::vector<BellNode> nodes = a.nodes_;
  nodes.insert(nodes.end(), b.nodes_.begin(), b.nodes_.end());
  return BellClopen::from_nodes(std::move(nodes));
}

BellClopen BellClopen::relativize(const BellNode& s) const {
  validate_bell_node(s);
  std::vector<BellNode> nodes;
  for (const auto& n : nodes_) {
    if (extends(n, s))
      nodes.push_back(n);  // [n] inside [s]
    else if (extends(s, n))
      nodes.push_back(s);  // [s] inside [n]
  }
  return BellClopen::from_nodes(std::move(nodes));
}

PiPrefix make_pi_prefix(std::vector<BellNode> rows) {
  if (rows.empty()) raise(Errc::SchemaError, "a prefix needs at least row 0");
  for (std::size_t n = 0; n < rows.size(); ++n) {
    validate_bell_node(rows[n]);
    if (rows[n].size() != n + 1)
      raise(Errc::SchemaError, "row " + std::to_string(n) + " must have " +
                                   std::to_string(n + 1) + " entries");
  }
  return PiPrefix{std::move(rows)};
}

BellClopen v_trunc(const PiPrefix& pi) {
  return BellClopen::from_nodes(pi.rows);
}

Rational v_tail_bound(std::uint32_t H, std::uint32_t m) {
  if (m == 0) raise(Errc::SchemaError, "m must be >= 1");
  Rational majorant = Rational::inv_factorial(H + 3) *
                      Rational(static_cast<long long>(H) + 4) /
                      Rational(static_cast<long long>(H) + 3);
  return Rational(static_cast<long long>(m)) * majorant;
}

TaylorVerdict taylor_check(std::uint32_t m, std::uint32_t n) {
  if (m == 0 || n == 0) raise(Errc::SchemaError, "m, n must be >= 1");
  Rational rhs = Rational::inv_factorial(n);
  Rational mr(static_cast<long long>(m));
  Rational partial(0);
  for (std::uint32_t L = n + 8;; L += 8) {
    partial = Rational(0);
    for (std::uint32_t l = n; l <= L; ++l)
      partial += Rational::inv_factorial(l + 1);
    Rational tail = Rational::inv_factorial(L + 2) *
                    Rational(static_cast<long long>(L) + 3) /
                    Rational(static_cast<long long>(L) + 2);
    Rational upper = mr * (partial + tail);
    Rational lower = mr * partial;
    if (upper < rhs) return {true, upper, rhs};
    if (lower >= rhs) return {false, upper, rhs};
  }
}

namespace {

std::uint32_t sweep_depth(const BellNode& s, const std::vector<PiPrefix>& pos,
                          const std::vector<PiPrefix>& neg) {
  std::uint32_t depth = std::max<std::uint32_t>(
      1, static_cast<std::uint32_t>(s.size()));
  for (const auto* side : {&pos, &neg})
    for (const auto& pi : *side)
      depth = std::max(depth, pi.height() + 1);  // the deepest row length
  return depth;
}

}  // namespace

NonemptyVerdict decide_nonempty_V(const BellNode& s,
                                  const std::vector<PiPrefix>& pos,
                                  const std::vector<PiPrefix>& neg,
                                  const Limits& limits) {
  validate_bell_node(s);
  std::vector<BellClopen> vs, ws;
  for (const auto& pi : pos) vs.push_back(v_trunc(pi));
  for (const auto& pi : neg) ws.push_back(v_trunc(pi));
  const std::uint32_t depth = sweep_depth(s, pos, neg);
  std::uint64_t visited = 0;

  // Depth-first search for a depth-`depth` node whose basic set lies inside
  // every positive truncation and misses every negative one.
  BellNode acc;
  auto viable = [&](const BellNode& u) {
    for (const auto& w : ws)
      if (w.contains_node(u)) return false;  // [u] already swallowed
    for (const auto& v : vs)
      if (!v.meets_node(u)) return false;  // [u] can no longer reach v
    return true;
  };
  std::optional<BellNode> found;
  auto rec = [&](auto&& self) -> bool {
    if (++visited > limits.node_budget)
      raise(Errc::DepthGuard, "node budget exhausted");
    if (!viable(acc)) return false;
    if (acc.size() == depth) {
      bool inside = true;
      for (const auto& v : vs) inside = inside && v.contains_node(acc);
      if (!inside) return false;
      found = acc;
      return true;
    }
    for (std::uint32_t v = 0; v <= acc.size() + 1; ++v) {
      acc.push_back(v);
      bool ok = self(self);
      acc.pop_back();
      if (ok) return true;
    }
    return false;
  };
  acc = s;
  if (rec(rec)) return {false, found};
  return {true, std::nullopt};
}

InfiniteVerdict decide_infinite_C(const BellNode& s,
                                  const std::vector<PiPrefix>& pos,
                                  const std::vector<PiPrefix>& neg,
                                  const Limits& limits) {
  validate_bell_node(s);
  const std::uint32_t depth = sweep_depth(s, pos, neg);
  std::uint64_t visited = 0;

  // Row combinatorics: t must extend a row of every positive prefix and no
  // row of any negative prefix; a viable node of maximal depth starts a
  // branch that stays inside forever (rows cannot reach past it).
  auto extends_some_row = [](const BellNode& t, const PiPrefix& pi) {
    for (const auto& row : pi.rows)
      if (extends(t, row)) return true;
    return false;
  };
  auto row_viable = [&](const BellNode& t, const PiPrefix& pi) {
    for (const auto& row : pi.rows)
      if (extends(t, row) || extends(row, t)) return true;
    return false;
  };
  BellNode acc;
  std::optional<BellNode> found;
  auto rec = [&](auto&& self) -> bool {
    if (++visited > limits.node_budget)
      raise(Errc::DepthGuard, "node budget exhausted");
    for (const auto& pi : neg)
      if (extends_some_row(acc, pi)) return false;
    for (const auto& pi : pos)
      if (!row_viable(acc, pi)) return false;
    if (acc.size() == depth) {
      for (const auto& pi : pos)
        if (!extends_some_row(acc, pi)) return false;
      found = acc;
      return true;
    }
    for (std::uint32_t v = 0; v <= acc.size() + 1; ++v) {
      acc.push_back(v);
      bool ok = self(self);
      acc.pop_back();
      if (ok) return true;
    }
    return false;
  };
  acc = s;
  if (!rec(rec)) return {true, std::nullopt};

  // Greedy branch extension: past every row, any child avoiding the (at most
  // m) forbidden continuations works; take the smallest.
  BellNode branch = *found;
  for (int step = 0; step < 2; ++step) {
    bool extended = false;
    for (std::uint32_t v = 0; v <= branch.size() + 1 && !extended; ++v) {
      BellNode child = branch;
      child.push_back(v);
      bool bad = false;
      for (const auto& pi : neg)
        if (extends_some_row(child, pi)) bad = true;
      if (!bad) {
        branch = std::move(child);
        extended = true;
      }
    }
    if (!extended) raise(Errc::Internal, "branch extension blocked");
  }
  return {false, branch};
}

IsoReport iso_condition_check(const std::vector<PiPrefix>& pos,
                              const std::vector<PiPrefix>& neg,
                              const Limits& limits) {
  InfiniteVerdict c = decide_infinite_C({}, pos, neg, limits);
  NonemptyVerdict v = decide_nonempty_V({}, pos, neg, limits);
  IsoReport report;
  report.c_finite = c.finite;
  report.v_empty = v.empty;
  report.consistent = (c.finite == v.empty);
  report.c_witness = c.witness;
  report.v_witness = v.witness;
  return report;
}

PositivityReport strict_positivity_check(const BellNode& s,
                                         const std::vector<PiPrefix>& pis,
                                         std::uint32_t n,
                                         const Limits& limits) {
  validate_bell_node(s);
  if (pis.empty()) raise(Errc::SchemaError, "needs at least one prefix");
  const std::uint32_t m = static_cast<std::uint32_t>(pis.size());
  if (n <= s.size() || n <= 3 * m)
    raise(Errc::SchemaError, "n must exceed max(|s|, 3m)");
  std::uint32_t H = pis.front().height();
  for (const auto& pi : pis) H = std::min(H, pi.height());
  if (n > H)
    raise(Errc::SchemaError, "n exceeds the available height");

  NonemptyVerdict residual = decide_nonempty_V(s, {}, pis, limits);
  if (residual.empty)
    raise(Errc::HypothesisFailed,
          "the truncated residual under [s] is empty; nothing to certify");

  PositivityReport report;
  report.s_measure = node_measure(s);

  // A_l = rows below l of every prefix.
  auto a_set = [&](std::uint32_t l) {
    std::vector<BellNode> rows;
    for (const auto& pi : pis)
      for (std::uint32_t i = 0; i < l && i < pi.rows.size(); ++i)
        rows.push_back(pi.rows[i]);
    return BellClopen::from_nodes(std::move(rows));
  };

  BellClopen an = a_set(n);
  report.residual_at_n =
      report.s_measure - an.relativize(s).measure();
  report.residual_floor_holds =
      report.residual_at_n.is_zero() ||
      report.residual_at_n >= Rational::inv_factorial(n + 1);

  report.ladder_holds = true;
  for (std::uint32_t l = 1; l <= H; ++l) {
    Rational step = a_set(l + 1).measure() - a_set(l).measure();
    if (step > Rational(static_cast<long long>(m)) *
                   Rational::inv_factorial(l + 2))
      report.ladder_holds = false;
  }

  BellClopen covered = BellClopen::empty_set();
  for (const auto& pi : pis) covered = b_union(covered, v_trunc(pi));
  report.covered = covered.relativize(s).measure();
  report.tail = v_tail_bound(H, m);
  report.gap = report.s_measure - report.covered - report.tail;
  report.pass = report.residual_floor_holds && report.ladder_holds &&
                report.gap.sign() > 0;
  return report;
}

LinkedReport measure_threshold_report(const std::vector<BellClopen>& sets,
                                      std::uint32_t n) {
  if (n == 0) raise(Errc::SchemaError, "n must be >= 1");
  LinkedReport report;
  report.all_pass = true;
  Rational threshold = Rational(1) - Rational(1, static_cast<long long>(n));
  for (const auto& s : sets) {
    Rational v = s.measure();
    report.measures.push_back(v);
    report.all_pass = report.all_pass && v > threshold;
  }
  return report;
}

}  // namespace growthlab
