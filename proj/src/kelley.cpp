#include "growthlab/kelley.hpp"

#include <algorithm>
#include <numeric>

#include "growthlab/error.hpp"

namespace growthlab {

namespace {

// Dense two-phase simplex over exact rationals, Bland's rule throughout.
// Maximizes c.x subject to A x (rel) b, x >= 0, rel per row in
// {-1: <=, 0: ==, +1: >=}.
struct LpResult {
  Rational value;
  std::vector<Rational> x;
};

class Simplex {
public:
  static LpResult maximize(std::vector<std::vector<Rational>> A,
                           std::vector<int> rel, std::vector<Rational> b,
                           const std::vector<Rational>& c) {
    const std::size_t m = A.size();
    const std::size_t n = c.size();
    for (std::size_t i = 0; i < m; ++i) {
      if (b[i].sign() < 0) {
        for (auto& v : A[i]) v = -v;
        b[i] = -b[i];
        rel[i] = -rel[i];
      }
    }
    // Column layout: originals, slack/surplus, artificials.
    std::size_t slacks = 0, arts = 0;
    for (int r : rel) {
      if (r != 0) ++slacks;
      if (r >= 0) ++arts;
    }
    std::size_t cols = n + slacks + arts;
    std::vector<std::vector<Rational>> T(m, std::vector<Rational>(cols + 1));
    std::vector<std::size_t> basis(m);
    std::size_t s_at = n, a_at = n + slacks;
    std::vector<bool> artificial(cols, false);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) T[i][j] = A[i][j];
      T[i][cols] = b[i];
      if (rel[i] == -1) {
        T[i][s_at] = Rational(1);
        basis[i] = s_at++;
      } else if (rel[i] == 1) {
        T[i][s_at] = Rational(-1);
        ++s_at;
        T[i][a_at] = Rational(1);
        artificial[a_at] = true;
        basis[i] = a_at++;
      } else {
        T[i][a_at] = Rational(1);
        artificial[a_at] = true;
        basis[i] = a_at++;
      }
    }

    // Phase 1: drive the artificial variables to zero.
    {
      std::vector<Rational> cost(cols, Rational(0));
      for (std::size_t j = 0; j < cols; ++j)
        if (artificial[j]) cost[j] = Rational(-1);
      Rational v = run(T, basis, cost, cols);
      if (v != Rational(0))
        raise(Errc::Internal, "infeasible linear program");
      // Pivot any degenerate artificial out of the basis.
      for (std::size_t i = 0; i < T.size(); ++i) {
        if (!artificial[basis[i]]) continue;
        std::size_t enter = cols;
        for (std::size_t j = 0; j < cols && enter == cols; ++j)
          if (!artificial[j] && T[i][j] != Rational(0)) enter = j;
        if (enter < cols) pivot(T, basis, i, enter);
      }
      // Rows still basic in an artificial variable are redundant zeros.
      for (std::size_t i = T.size(); i-- > 0;) {
        if (artificial[basis[i]]) {
          T.erase(T.begin() + static_cast<std::ptrdiff_t>(i));
          basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(i));
        }
      }
      // Forbid re-entering artificial columns.
      for (auto& row : T)
        for (std::size_t j = 0; j < cols; ++j)
          if (artificial[j]) row[j] = Rational(0);
    }

    // Phase 2.
    std::vector<Rational> cost(cols, Rational(0));
    for (std::size_t j = 0; j < n; ++j) cost[j] = c[j];
    Rational v = run(T, basis, cost, cols);
    LpResult out;
    out.value = v;
    out.x.assign(n, Rational(0));
    for (std::size_t i = 0; i < T.size(); ++i)
      if (basis[i] < n) out.x[basis[i]] = T[i][cols];
    return out;
  }

private:
  static void pivot(std::vector<std::vector<Rational>>& T,
                    std::vector<std::size_t>& basis, std::size_t r,
                    std::size_t c) {
    std::size_t cols = T[r].size();
    Rational inv = Rational(1) / T[r][c];
    for (auto& v : T[r]) v *= inv;
    for (std::size_t i = 0; i < T.size(); ++i) {
      if (i == r || T[i][c].is_zero()) continue;
      Rational f = T[i][c];
      for (std::size_t j = 0; j < cols; ++j) T[i][j] -= f * T[r][j];
    }
    basis[r] = c;
  }

  // Bland's rule: smallest eligible entering column, smallest basic index on
  // ratio ties. Returns the objective value.
  static Rational run(std::vector<std::vector<Rational>>& T,
                      std::vector<std::size_t>& basis,
                      const std::vector<Rational>& cost, std::size_t cols) {
    for (;;) {
      // Reduced costs: cost_j - cost_B . column_j.
      std::size_t enter = cols;
      for (std::size_t j = 0; j < cols; ++j) {
        Rational rc = cost[j];
        for (std::size_t i = 0; i < T.size(); ++i)
          rc -= cost[basis[i]] * T[i][j];
        if (rc.sign() > 0) {
          enter = j;
          break;
        }
      }
      if (enter == cols) break;
      std::size_t leave = T.size();
      Rational best;
      for (std::size_t i = 0; i < T.size(); ++i) {
        if (T[i][enter].sign() <= 0) continue;
        Rational ratio = T[i][cols] / T[i][enter];
        if (leave == T.size() || ratio < best ||
            (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == T.size())
        raise(Errc::Internal, "unbounded linear program");
      pivot(T, basis, leave, enter);
    }
    Rational v(0);
    for (std::size_t i = 0; i < T.size(); ++i)
      v += cost[basis[i]] * T[i][cols];
    return v;
  }
};

using Mask = std::vector<std::uint64_t>;

Mask atom_mask(const FiniteFamily& fam, const std::vector<std::uint32_t>& set) {
  Mask m((fam.atoms.size() + 63) / 64, 0);
  for (std::uint32_t a : set) m[a / 64] |= 1ull << (a % 64);
  return m;
}

bool mask_nonempty(const Mask& m) {
  for (std::uint64_t w : m)
    if (w) return true;
  return false;
}

Mask mask_and(const Mask& a, const Mask& b) {
  Mask out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] & b[i];
  return out;
}

}  // namespace

FiniteFamily FiniteFamily::make(std::vector<std::string> atoms,
                                std::vector<std::vector<std::uint32_t>> sets) {
  FiniteFamily fam;
  fam.atoms = std::move(atoms);
  for (auto& s : sets) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    if (s.empty()) raise(Errc::SchemaError, "family sets must be nonempty");
    if (s.back() >= fam.atoms.size())
      raise(Errc::SchemaError, "atom index out of range");
    fam.sets.push_back(std::move(s));
  }
  return fam;
}

Rational kappa_of_multiset(const FiniteFamily& fam,
                           const std::vector<std::uint64_t>& multiplicities,
                           const Limits& limits) {
  if (multiplicities.size() != fam.sets.size())
    raise(Errc::SchemaError, "one multiplicity per family set expected");
  std::vector<std::size_t> used;
  for (std::size_t i = 0; i < multiplicities.size(); ++i)
    if (multiplicities[i] > 0) used.push_back(i);
  if (used.empty()) raise(Errc::SchemaError, "empty sequence");
  if (used.size() >= 63 || (1ull << used.size()) > limits.subset_evals)
    raise(Errc::SequenceTooLong,
          std::to_string(used.size()) + " distinct sets in the sequence");
  std::vector<Mask> masks;
  for (std::size_t i : used) masks.push_back(atom_mask(fam, fam.sets[i]));
  std::uint64_t best = 0, total = 0;
  for (std::size_t i : used) total += multiplicities[i];
  // DFS over subsets with the running intersection.
  auto rec = [&](auto&& self, std::size_t i, Mask inter,
                 std::uint64_t weight) -> void {
    if (i == used.size()) {
      if (weight > best) best = weight;
      return;
    }
    self(self, i + 1, inter, weight);  // skip set i
    Mask next = mask_and(inter, masks[i]);
    if (mask_nonempty(next))
      self(self, i + 1, std::move(next), weight + multiplicities[used[i]]);
  };
  Mask full((fam.atoms.size() + 63) / 64, ~0ull);
  rec(rec, 0, full, 0);
  return Rational(static_cast<long long>(best)) /
         Rational(static_cast<long long>(total));
}

Rational kappa_of_seq(const FiniteFamily& fam,
                      const std::vector<std::uint32_t>& seq,
                      const Limits& limits) {
  if (seq.empty()) raise(Errc::SchemaError, "empty sequence");
  std::vector<std::uint64_t> mult(fam.sets.size(), 0);
  for (std::uint32_t i : seq) {
    if (i >= fam.sets.size())
      raise(Errc::SchemaError, "sequence index out of range");
    ++mult[i];
  }
  return kappa_of_multiset(fam, mult, limits);
}

std::vector<Rational> kappa_upper_bounds(const FiniteFamily& fam,
                                         std::uint32_t L,
                                         const Limits& limits) {
  if (L == 0) raise(Errc::SchemaError, "L must be >= 1");
  if (fam.sets.empty()) raise(Errc::EmptyFamily, "no sets");
  const std::size_t s = fam.sets.size();
  if (s >= 63 || (1ull << s) > limits.subset_evals)
    raise(Errc::SequenceTooLong, "family too large for subset search");
  // Intersecting subsets, precomputed once.
  std::vector<Mask> masks;
  for (const auto& set : fam.sets) masks.push_back(atom_mask(fam, set));
  std::vector<bool> intersecting(1ull << s, false);
  Mask full((fam.atoms.size() + 63) / 64, ~0ull);
  std::vector<Mask> inter(1ull << s, Mask());
  inter[0] = full;
  intersecting[0] = true;
  for (std::uint64_t m = 1; m < (1ull << s); ++m) {
    std::uint64_t low = m & (~m + 1);
    std::size_t bit = static_cast<std::size_t>(__builtin_ctzll(m));
    if (!intersecting[m ^ low]) continue;
    Mask x = mask_and(inter[m ^ low], masks[bit]);
    if (mask_nonempty(x)) {
      intersecting[m] = true;
      inter[m] = std::move(x);
    }
  }
  inter.clear();

  std::vector<Rational> out;
  std::vector<std::uint64_t> mult(s, 0);
  Rational running(1);
  bool first = true;
  for (std::uint32_t len = 1; len <= L; ++len) {
    Rational best_for_len(1);
    bool any = false;
    // All multisets of size len over the s sets.
    auto rec = [&](auto&& self, std::size_t i, std::uint32_t left) -> void {
      if (i + 1 == s) {
        mult[i] = left;
        std::uint64_t best = 0;
        for (std::uint64_t m = 1; m < (1ull << s); ++m) {
          if (!intersecting[m]) continue;
          std::uint64_t w = 0;
          for (std::size_t j = 0; j < s; ++j)
            if ((m >> j) & 1ull) w += mult[j];
          if (w > best) best = w;
        }
        Rational k = Rational(static_cast<long long>(best)) /
                     Rational(static_cast<long long>(len));
        if (!any || k < best_for_len) best_for_len = k;
        any = true;
        return;
      }
      for (std::uint32_t take = 0; take <= left; ++take) {
        mult[i] = take;
        self(self, i + 1, left - take);
      }
      mult[i] = 0;
    };
    rec(rec, 0, len);
    if (first || best_for_len < running) running = best_for_len;
    first = false;
    out.push_back(running);
  }
  return out;
}

KappaCertificate kappa_lp(const FiniteFamily& fam, const Limits& limits) {
  if (fam.sets.empty()) raise(Errc::EmptyFamily, "no sets");
  const std::size_t atoms = fam.atoms.size();
  const std::size_t s = fam.sets.size();

  // Primal: variables mu_0..mu_{atoms-1}, t.
  std::vector<std::vector<Rational>> A;
  std::vector<int> rel;
  std::vector<Rational> b;
  {
    std::vector<Rational> row(atoms + 1, Rational(0));
    for (std::size_t j = 0; j < atoms; ++j) row[j] = Rational(1);
    A.push_back(row);
    rel.push_back(0);
    b.push_back(Rational(1));
  }
  for (const auto& set : fam.sets) {
    std::vector<Rational> row(atoms + 1, Rational(0));
    for (std::uint32_t aidx : set) row[aidx] = Rational(1);
    row[atoms] = Rational(-1);
    A.push_back(row);
    rel.push_back(1);
    b.push_back(Rational(0));
  }
  std::vector<Rational> c(atoms + 1, Rational(0));
  c[atoms] = Rational(1);
  LpResult primal = Simplex::maximize(A, rel, b, c);

  // Dual: variables w_0..w_{s-1}, u; minimize u.
  std::vector<std::vector<Rational>> Ad;
  std::vector<int> reld;
  std::vector<Rational> bd;
  {
    std::vector<Rational> row(s + 1, Rational(0));
    for (std::size_t i = 0; i < s; ++i) row[i] = Rational(1);
    Ad.push_back(row);
    reld.push_back(0);
    bd.push_back(Rational(1));
  }
  for (std::size_t j = 0; j < atoms; ++j) {
    std::vector<Rational> row(s + 1, Rational(0));
    for (std::size_t i = 0; i < s; ++i)
      if (std::binary_search(fam.sets[i].begin(), fam.sets[i].end(),
                             static_cast<std::uint32_t>(j)))
        row[i] = Rational(1);
    row[s] = Rational(-1);
    Ad.push_back(row);
    reld.push_back(-1);
    bd.push_back(Rational(0));
  }
  std::vector<Rational> cd(s + 1, Rational(0));
  cd[s] = Rational(-1);
  LpResult dual = Simplex::maximize(Ad, reld, bd, cd);
  Rational dual_value = -dual.value;

  if (primal.value != dual_value)
    raise(Errc::Internal, "primal/dual gap in the intersection-number LP");

  KappaCertificate cert;
  cert.value = primal.value;
  cert.atom_weights.assign(primal.x.begin(), primal.x.begin() + atoms);

  // Verify the weighting: min over sets of the mass equals the value.
  {
    bool any = false;
    Rational minmass(0);
    for (const auto& set : fam.sets) {
      Rational mass(0);
      for (std::uint32_t aidx : set) mass += cert.atom_weights[aidx];
      if (!any || mass < minmass) minmass = mass;
      any = true;
    }
    if (minmass != cert.value)
      raise(Errc::Internal, "weight witness does not hit the LP value");
  }

  // Sequence witness: scale the dual weights to integer multiplicities.
  {
    std::vector<Rational> weights(dual.x.begin(), dual.x.begin() + s);
    Rational q = Rational::common_denominator(weights);
    cert.seq_multiplicities.assign(s, 0);
    for (std::size_t i = 0; i < s; ++i)
      cert.seq_multiplicities[i] = (weights[i] * q).to_uint64();
    Rational check = kappa_of_multiset(fam, cert.seq_multiplicities, limits);
    if (check != cert.value)
      raise(Errc::Internal, "sequence witness does not hit the LP value");
  }
  return cert;
}

FragmentationReport fragmentation_report(const std::vector<FiniteFamily>& fams,
                                         const Rational& delta,
                                         const Limits& limits) {
  if (!(Rational(0) < delta && delta < Rational(1)))
    raise(Errc::SchemaError, "delta must lie strictly between 0 and 1");
  FragmentationReport report;
  report.all_pass = true;
  for (const auto& fam : fams) {
    Rational v = kappa_lp(fam, limits).value;
    bool pass = v > delta;
    report.rows.push_back({v, pass});
    report.all_pass = report.all_pass && pass;
  }
  return report;
}

}  // namespace growthlab
