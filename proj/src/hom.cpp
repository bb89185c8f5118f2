#include "sgl/hom.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sgl/metric.hpp"
#include "sgl/rng.hpp"

namespace sgl {

std::vector<char> HomLabeling::set_of_atoms(const std::vector<char>& atom_subset) const {
  std::vector<char> out(d, 0);
  for (int i = 0; i < d; ++i) out[i] = atom_subset[label[i]];
  return out;
}

GoodHomReport is_good_hom(SoficMap& sigma, const RefinedPartition& rp,
                          const HomLabeling& phi, const Rat& delta) {
  const int d = phi.d;
  const int nf = static_cast<int>(rp.F.size());
  GoodHomReport rep;
  rep.delta = delta;
  rep.pass = true;

  for (int fi = 0; fi < nf; ++fi) {
    const PartialBijection& sf = sigma.at(rp.F[fi]);
    int total = 0;
    for (int b = 0; b < rp.parent.blocks; ++b) {
      std::vector<char> phiB = phi.set_of_atoms(rp.block_atoms[b]);
      std::vector<char> img = sf.image(phiB);
      std::vector<char> phifB = phi.set_of_atoms(rp.in_fP[fi][b]);
      for (int i = 0; i < d; ++i) total += img[i] != phifB[i];
    }
    Rat c1(total, d);
    rep.cond1.push_back(c1);
    if (!(c1 < delta)) rep.pass = false;
  }

  std::vector<int> counts(rp.n_atoms(), 0);
  for (int i = 0; i < d; ++i) ++counts[phi.label[i]];
  Rat c2 = 0;
  for (int a = 0; a < rp.n_atoms(); ++a) {
    Rat diff = Rat(counts[a], d) - rp.atom_measure[a];
    c2 += diff < 0 ? -diff : diff;
  }
  rep.cond2 = c2;
  if (!(c2 < delta)) rep.pass = false;
  return rep;
}

std::vector<int> coarsen_to(const RefinedPartition& rp, const Partition& q) {
  if (q.base != rp.pi->G) throw std::invalid_argument("Q base mismatch");
  std::vector<int> q_of_atom(rp.n_atoms(), -1);
  for (int a = 0; a < rp.n_atoms(); ++a) {
    for (int u : rp.atoms[a]) {
      if (q_of_atom[a] < 0) q_of_atom[a] = q.label[u];
      if (q.label[u] != q_of_atom[a])
        throw std::invalid_argument(
            "Q is not coarser than P^F: restriction is ill-typed (require Q <= P)");
    }
  }
  return q_of_atom;
}

namespace {

// Precomputed integer tables: per f, a preimage array and the per-index
// mismatch cost as a function of (own atom label, preimage atom label).
struct CondTables {
  int d = 0, A = 0, nf = 0;
  std::vector<std::vector<int>> pre;   // nf x d, -1 when no preimage
  std::vector<std::vector<int>> cost;  // nf x (A+1)^2, index a*(A+1)+b
  // condition-1 pass: sum_f * c1_den < c1_num (i.e. sum/d < delta)
  long long c1_num = 0, c1_den = 0;
  // condition-2: atoms counted against scaled measures
  long long per_count = 0;              // Dm / d
  std::vector<long long> mu_scaled;     // mu_a * Dm
  __int128 c2_num = 0, c2_den = 0;      // pass iff sum * delta_den < delta_num * Dm

  bool cond1_ok(long long sum) const {
    return static_cast<__int128>(sum) * c1_den < static_cast<__int128>(c1_num);
  }
  bool cond2_ok(long long sum) const {
    return static_cast<__int128>(sum) * c2_den < c2_num;
  }
};

CondTables build_tables(SoficMap& sigma, const RefinedPartition& rp, const Rat& delta) {
  CondTables t;
  t.d = sigma.d();
  t.A = rp.n_atoms();
  t.nf = static_cast<int>(rp.F.size());
  t.pre.resize(t.nf);
  t.cost.assign(t.nf, std::vector<int>((t.A + 1) * (t.A + 1), 0));
  for (int fi = 0; fi < t.nf; ++fi) {
    const PartialBijection& sf = sigma.at(rp.F[fi]);
    t.pre[fi].resize(t.d);
    for (int i = 0; i < t.d; ++i) t.pre[fi][i] = sf.preimage(i);
    for (int a = 0; a < t.A; ++a)
      for (int b = 0; b <= t.A; ++b) {
        int c = 0;
        for (int blk = 0; blk < rp.parent.blocks; ++blk) {
          bool in_image = b < t.A && rp.block_atoms[blk][b];
          bool in_target = rp.in_fP[fi][blk][a];
          c += in_image != in_target;
        }
        t.cost[fi][a * (t.A + 1) + b] = c;
      }
  }
  // thresholds: sum/d < delta  <=>  sum * den(delta) < num(delta) * d
  t.c1_num = (numerator(delta) * t.d).convert_to<long long>();
  t.c1_den = denominator(delta).convert_to<long long>();
  // common scale Dm = lcm(d, atom measure denominators)
  BigInt dm = t.d;
  for (int a = 0; a < t.A; ++a) {
    BigInt den = denominator(rp.atom_measure[a]);
    dm = dm / gcd(dm, den) * den;
  }
  if (dm > BigInt(1) << 40)
    throw std::overflow_error("atom measure denominators too large for exact counting");
  long long Dm = dm.convert_to<long long>();
  t.per_count = Dm / t.d;
  t.mu_scaled.resize(t.A);
  for (int a = 0; a < t.A; ++a)
    t.mu_scaled[a] = (rp.atom_measure[a] * Dm).convert_to<long long>();
  t.c2_num = static_cast<__int128>((numerator(delta)).convert_to<long long>()) * Dm;
  t.c2_den = denominator(delta).convert_to<long long>();
  return t;
}

bool passes(const CondTables& t, const std::vector<int>& label) {
  for (int fi = 0; fi < t.nf; ++fi) {
    long long sum = 0;
    const auto& pre = t.pre[fi];
    const auto& cost = t.cost[fi];
    for (int i = 0; i < t.d; ++i) {
      int b = pre[i] >= 0 ? label[pre[i]] : t.A;
      sum += cost[label[i] * (t.A + 1) + b];
    }
    if (!t.cond1_ok(sum)) return false;
  }
  std::vector<int> counts(t.A, 0);
  for (int i = 0; i < t.d; ++i) ++counts[label[i]];
  long long sum = 0;
  for (int a = 0; a < t.A; ++a)
    sum += std::llabs(counts[a] * t.per_count - t.mu_scaled[a]);
  return t.cond2_ok(sum);
}

}  // namespace

HomCountResult count_hom_exact(
    SoficMap& sigma, const RefinedPartition& rp, const Rat& delta,
    const std::vector<int>& q_of_atom, std::uint64_t budget,
    const std::function<void(const std::vector<int>&)>& on_passer) {
  const int d = sigma.d();
  const int A = rp.n_atoms();
  if (static_cast<int>(q_of_atom.size()) != A)
    throw std::invalid_argument("q_of_atom size mismatch");
  // total = A^d, with budget guard
  long double total_ld = std::pow(static_cast<long double>(A), d);
  if (total_ld > static_cast<long double>(budget))
    throw BudgetExceeded("enumeration budget exceeded (" + std::to_string(A) + "^" +
                         std::to_string(d) + " labelings); use count_hom_mc");
  CondTables t = build_tables(sigma, rp, delta);

  HomCountResult res;
  std::vector<int> label(d, 0);
  std::vector<std::uint8_t> coarse(d);
  for (;;) {
    if (passes(t, label)) {
      ++res.hom_count;
      for (int i = 0; i < d; ++i)
        coarse[i] = static_cast<std::uint8_t>(q_of_atom[label[i]]);
      res.restrictions.insert(coarse);
      if (on_passer) on_passer(label);
    }
    // odometer
    int pos = d - 1;
    while (pos >= 0 && label[pos] == A - 1) label[pos--] = 0;
    if (pos < 0) break;
    ++label[pos];
  }
  res.restricted_count = res.restrictions.size();
  res.exact = true;
  return res;
}

HomEstimate count_hom_mc(SoficMap& sigma, const RefinedPartition& rp, const Rat& delta,
                         const std::vector<int>& q_of_atom, std::uint64_t samples,
                         std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("count_hom_mc needs samples >= 1");
  const int d = sigma.d();
  const int A = rp.n_atoms();
  CondTables t = build_tables(sigma, rp, delta);
  SplitRng rng(seed);
  HomEstimate est;
  est.samples = samples;
  std::set<std::vector<std::uint8_t>> captured;
  std::vector<int> label(d);
  std::vector<std::uint8_t> coarse(d);
  for (std::uint64_t s = 0; s < samples; ++s) {
    for (int i = 0; i < d; ++i) label[i] = static_cast<int>(rng.below(A));
    if (passes(t, label)) {
      ++est.passers;
      for (int i = 0; i < d; ++i)
        coarse[i] = static_cast<std::uint8_t>(q_of_atom[label[i]]);
      captured.insert(coarse);
    }
  }
  est.restricted_capture = captured.size();
  double phat = static_cast<double>(est.passers) / static_cast<double>(samples);
  double total = std::pow(static_cast<double>(A), d);
  est.hom_estimate = total * phat;
  double half = 1.959963984540054 *
                std::sqrt(std::max(phat * (1 - phat) / static_cast<double>(samples), 0.0));
  est.ci_low = total * std::max(phat - half, 0.0);
  est.ci_high = total * std::min(phat + half, 1.0);
  return est;
}

std::vector<double> stage_entropy_terms(const std::vector<int>& stage_d,
                                        const std::vector<std::vector<double>>& counts,
                                        double p) {
  if (stage_d.size() != counts.size())
    throw std::invalid_argument("stage size mismatch");
  if (!(p >= 1.0))
    throw std::invalid_argument("p must be in [1, infinity]");
  std::vector<double> terms;
  for (size_t j = 0; j < counts.size(); ++j) {
    const auto& c = counts[j];
    if (c.empty()) throw std::invalid_argument("empty ensemble at stage " + std::to_string(j));
    double lognorm;
    if (std::isinf(p)) {
      double mx = 0;
      for (double v : c) mx = std::max(mx, v);
      lognorm = mx > 0 ? std::log(mx) : -INFINITY;
    } else {
      // ((1/M) sum c^p)^{1/p} via log-sum-exp over nonzero entries
      double best = -INFINITY;
      for (double v : c)
        if (v > 0) best = std::max(best, p * std::log(v));
      if (std::isinf(best)) {
        lognorm = -INFINITY;
      } else {
        double acc = 0;
        for (double v : c)
          if (v > 0) acc += std::exp(p * std::log(v) - best);
        lognorm = (best + std::log(acc) - std::log(static_cast<double>(c.size()))) / p;
      }
    }
    terms.push_back(std::isinf(lognorm) ? -INFINITY : lognorm / stage_d[j]);
  }
  return terms;
}

Rat rho_Q_distance(const HomLabeling& phi, const HomLabeling& psi,
                   const std::vector<int>& q_of_atom, int n_q) {
  if (phi.d != psi.d) throw std::invalid_argument("dimension mismatch");
  std::vector<int> diff(n_q, 0);
  for (int i = 0; i < phi.d; ++i) {
    int qa = q_of_atom[phi.label[i]], qb = q_of_atom[psi.label[i]];
    if (qa != qb) {
      ++diff[qa];
      ++diff[qb];
    }
  }
  int mx = 0;
  for (int v : diff) mx = std::max(mx, v);
  return Rat(mx, phi.d);
}

int separated_count_homs(const std::vector<HomLabeling>& homs,
                         const std::vector<int>& q_of_atom, int n_q,
                         const Rat& epsilon) {
  const int n = static_cast<int>(homs.size());
  std::vector<std::vector<char>> close(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      bool is_close = rho_Q_distance(homs[i], homs[j], q_of_atom, n_q) <= epsilon;
      close[i][j] = close[j][i] = is_close;
    }
  return max_independent_set_exact(close);
}

}  // namespace sgl
