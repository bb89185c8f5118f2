#include "sgl/metric.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "sgl/rng.hpp"

namespace sgl {

PseudoMetric::PseudoMetric(const std::vector<std::vector<Rat>>& values) {
  n_ = static_cast<int>(values.size());
  BigInt denom = 1;
  for (const auto& row : values) {
    if (static_cast<int>(row.size()) != n_)
      throw std::invalid_argument("metric matrix not square");
    for (const Rat& v : row) {
      BigInt den = denominator(v);
      denom = denom / gcd(denom, den) * den;
    }
  }
  if (denom > BigInt(1) << 31)
    throw std::overflow_error("metric denominators too large");
  scale_ = denom.convert_to<long long>();
  v_.assign(n_, std::vector<long long>(n_, 0));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      v_[i][j] = (values[i][j] * scale_).convert_to<long long>();
  // validate: symmetry, zero diagonal, nonnegativity, triangle inequality
  for (int i = 0; i < n_; ++i) {
    if (v_[i][i] != 0) throw std::invalid_argument("nonzero diagonal in metric");
    for (int j = 0; j < n_; ++j) {
      if (v_[i][j] < 0) throw std::invalid_argument("negative metric value");
      if (v_[i][j] != v_[j][i]) throw std::invalid_argument("metric not symmetric");
      diameter_ = std::max(diameter_, v_[i][j]);
    }
  }
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        if (v_[i][k] > v_[i][j] + v_[j][k])
          throw std::invalid_argument("triangle inequality fails");
}

PseudoMetric PseudoMetric::discrete(int n) {
  std::vector<std::vector<Rat>> vals(n, std::vector<Rat>(n, Rat(1)));
  for (int i = 0; i < n; ++i) vals[i][i] = 0;
  return PseudoMetric(vals);
}

Rat PseudoMetric::value(int a, int b) const {
  return Rat(scaled(a, b), scale_);
}

long long PseudoMetric::scaled(int a, int b) const {
  if (a < 0 && b < 0) return 0;
  if (a < 0 || b < 0) return diameter_;  // rho(star, x) = diameter
  return v_[a][b];
}

__int128 rho2_sq_scaled(const PseudoMetric& rho, const Tuple& x, const Tuple& y) {
  if (x.size() != y.size()) throw std::invalid_argument("tuple length mismatch");
  __int128 acc = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    long long v = rho.scaled(x[i], y[i]);
    acc += static_cast<__int128>(v) * v;
  }
  return acc;
}

long long rho_inf_scaled(const PseudoMetric& rho, const Tuple& x, const Tuple& y) {
  if (x.size() != y.size()) throw std::invalid_argument("tuple length mismatch");
  long long mx = 0;
  for (size_t i = 0; i < x.size(); ++i)
    mx = std::max(mx, rho.scaled(x[i], y[i]));
  return mx;
}

double rho2(const PseudoMetric& rho, const Tuple& x, const Tuple& y) {
  return std::sqrt(static_cast<double>(rho2_sq_scaled(rho, x, y)) /
                   (static_cast<double>(x.size()) * rho.scale() * rho.scale()));
}

double rho_inf(const PseudoMetric& rho, const Tuple& x, const Tuple& y) {
  return static_cast<double>(rho_inf_scaled(rho, x, y)) / rho.scale();
}

namespace {

// rho_2(x,y) > eps  <=>  sum s_i^2 * den^2 > num^2 * d * scale^2 (all exact)
struct EpsThreshold {
  __int128 lhs_factor;  // den^2 for rho2, den for rho_inf
  __int128 rhs;         // num^2 d scale^2, or num * scale
};

EpsThreshold make_threshold(const PseudoMetric& rho, RhoFlavor flavor, const Rat& eps,
                            size_t d) {
  EpsThreshold t;
  auto num = numerator(eps).convert_to<long long>();
  auto den = denominator(eps).convert_to<long long>();
  if (flavor == RhoFlavor::two) {
    t.lhs_factor = static_cast<__int128>(den) * den;
    t.rhs = static_cast<__int128>(num) * num * static_cast<long long>(d) *
            rho.scale() * rho.scale();
  } else {
    t.lhs_factor = den;
    t.rhs = static_cast<__int128>(num) * rho.scale();
  }
  return t;
}

__int128 dist_lhs(const PseudoMetric& rho, RhoFlavor flavor, const Tuple& x,
                  const Tuple& y) {
  return flavor == RhoFlavor::two ? rho2_sq_scaled(rho, x, y)
                                  : static_cast<__int128>(rho_inf_scaled(rho, x, y));
}

}  // namespace

bool tuple_dist_greater(const PseudoMetric& rho, RhoFlavor flavor, const Tuple& x,
                        const Tuple& y, const Rat& eps) {
  EpsThreshold t = make_threshold(rho, flavor, eps, x.size());
  return dist_lhs(rho, flavor, x, y) * t.lhs_factor > t.rhs;
}

bool tuple_dist_less(const PseudoMetric& rho, RhoFlavor flavor, const Tuple& x,
                     const Tuple& y, const Rat& eps) {
  EpsThreshold t = make_threshold(rho, flavor, eps, x.size());
  return dist_lhs(rho, flavor, x, y) * t.lhs_factor < t.rhs;
}

// --- orbits -------------------------------------------------------------------

OrbitReport orbit_membership(const Tuple& x, SoficMap& sigma, const GroupoidMorphism& pi,
                             const std::vector<PartialAutomorphism>& F,
                             const std::vector<TestFunction>& K, const Rat& delta,
                             const PseudoMetric& rho, OrbitFlavor flavor) {
  const FiniteGroupoid& G = *pi.G;
  const FiniteGroupoid& H = *pi.H;
  const int d = static_cast<int>(x.size());
  OrbitReport rep;
  rep.member = true;

  const Rat delta_sq = delta * delta;
  for (const auto& f : F) {
    // unit action of f on G^0 through pi (a partial injection)
    std::vector<int> unit_map(G.n_units(), -1);
    for (int g = 0; g < G.m; ++g)
      if (f.contains(pi.map[g])) unit_map[G.uid_of_source(g)] = G.uid_of_range(g);
    Tuple fx(d), xs(d);
    const PartialBijection& sf = sigma.at(f);
    for (int i = 0; i < d; ++i) {
      fx[i] = x[i] >= 0 ? unit_map[x[i]] : -1;
      int j = sf.apply(i);
      xs[i] = j >= 0 ? x[j] : -1;
    }
    // exact surrogate margin: delta^2 - rho_2^2
    Rat r2 = Rat(BigInt(static_cast<long long>(rho2_sq_scaled(rho, fx, xs))),
                 BigInt(d) * rho.scale() * rho.scale());
    rep.equivariance_margin_sq.push_back(delta_sq - r2);
    if (!(r2 < delta_sq)) rep.member = false;
  }

  for (const auto& k : K) {
    Rat avg = 0, integral = 0;
    if (flavor == OrbitFlavor::nu) {
      if (static_cast<int>(k.values.size()) != H.n_units())
        throw std::invalid_argument("nu-flavor test function must live on H^0");
      for (int i = 0; i < d; ++i)
        avg += k.values[H.unit_id[pi.map[G.units[x[i]]]]];
      for (int u = 0; u < H.n_units(); ++u)
        integral += k.values[u] * H.unit_weight[u];
    } else {
      if (static_cast<int>(k.values.size()) != G.n_units())
        throw std::invalid_argument("mu-flavor test function must live on G^0");
      for (int i = 0; i < d; ++i) avg += k.values[x[i]];
      for (int u = 0; u < G.n_units(); ++u)
        integral += k.values[u] * G.unit_weight[u];
    }
    avg /= d;
    Rat dev = avg - integral;
    if (dev < 0) dev = -dev;
    rep.statistics_margin.push_back(delta - dev);
    if (!(dev < delta)) rep.member = false;
  }
  return rep;
}

// --- exact solvers ------------------------------------------------------------

namespace {

int mis_recurse(const std::vector<std::uint64_t>& adj, std::uint64_t avail, int best_so_far) {
  if (!avail) return 0;
  int remaining = __builtin_popcountll(avail);
  // pick the available vertex of maximum available-degree
  int pick = -1, pick_deg = -1;
  std::uint64_t scan = avail;
  while (scan) {
    int v = __builtin_ctzll(scan);
    scan &= scan - 1;
    int deg = __builtin_popcountll(adj[v] & avail);
    if (deg > pick_deg) {
      pick_deg = deg;
      pick = v;
    }
  }
  if (pick_deg == 0) return remaining;  // no edges left: take everything
  // branch: include pick, or exclude it
  int with_pick =
      1 + mis_recurse(adj, avail & ~(adj[pick] | (1ULL << pick)), best_so_far - 1);
  int without = mis_recurse(adj, avail & ~(1ULL << pick), std::max(best_so_far, with_pick));
  return std::max(with_pick, without);
}

}  // namespace

int max_independent_set_exact(const std::vector<std::vector<char>>& close) {
  const int n = static_cast<int>(close.size());
  if (n == 0) return 0;
  if (n > 63) throw std::invalid_argument("exact MIS limited to 63 points");
  std::vector<std::uint64_t> adj(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && close[i][j]) adj[i] |= 1ULL << j;
  return mis_recurse(adj, n == 63 ? ~0ULL >> 1 : (1ULL << n) - 1, 0);
}

SeparatedResult separated_max(const std::vector<Tuple>& xs, const PseudoMetric& rho,
                              RhoFlavor flavor, const Rat& eps,
                              const SeparatedOptions& opts) {
  SeparatedResult res;
  const int n = static_cast<int>(xs.size());
  if (n == 0) return res;
  EpsThreshold t = make_threshold(rho, flavor, eps, xs[0].size());
  auto sep = [&](int i, int j) {
    return dist_lhs(rho, flavor, xs[i], xs[j]) * t.lhs_factor > t.rhs;
  };
  if (n <= opts.exact_budget) {
    std::vector<std::vector<char>> close(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) close[i][j] = close[j][i] = !sep(i, j);
    res.count = max_independent_set_exact(close);
    res.exact = true;
    return res;
  }
  // greedy maximal separated set; exact when nothing was rejected
  std::vector<int> kept;
  bool rejected = false;
  for (int i = 0; i < n; ++i) {
    bool ok = true;
    for (int j : kept)
      if (!sep(i, j)) {
        ok = false;
        break;
      }
    if (ok)
      kept.push_back(i);
    else
      rejected = true;
  }
  res.count = static_cast<int>(kept.size());
  res.exact = !rejected;
  return res;
}

namespace {

struct CoverState {
  const std::vector<std::uint64_t>* sets;
  std::uint64_t universe;
  int best;
};

void cover_recurse(CoverState& st, std::uint64_t uncovered, int used) {
  if (!uncovered) {
    st.best = std::min(st.best, used);
    return;
  }
  if (used + 1 >= st.best) return;
  // element covered by fewest sets
  int elem = -1, fewest = INT_MAX;
  std::uint64_t scan = uncovered;
  while (scan) {
    int e = __builtin_ctzll(scan);
    scan &= scan - 1;
    int cnt = 0;
    for (auto s : *st.sets)
      if (s & (1ULL << e)) ++cnt;
    if (cnt < fewest) {
      fewest = cnt;
      elem = e;
    }
  }
  if (fewest == 0) return;  // infeasible branch
  for (size_t i = 0; i < st.sets->size(); ++i) {
    std::uint64_t s = (*st.sets)[i];
    if (!(s & (1ULL << elem))) continue;
    cover_recurse(st, uncovered & ~s, used + 1);
  }
}

}  // namespace

SpanningResult spanning_min(const std::vector<Tuple>& xs, const std::vector<Tuple>& ambient,
                            const PseudoMetric& rho, RhoFlavor flavor, const Rat& eps,
                            int exact_budget) {
  SpanningResult res;
  const int n = static_cast<int>(xs.size());
  if (n == 0) return res;
  EpsThreshold t = make_threshold(rho, flavor, eps, xs[0].size());
  std::vector<std::uint64_t> sets;
  sets.reserve(ambient.size());
  std::uint64_t universe = n >= 64 ? 0 : (1ULL << n) - 1;
  if (n > 63) throw std::invalid_argument("spanning_min limited to 63 targets");
  std::uint64_t covered = 0;
  for (const auto& c : ambient) {
    std::uint64_t mask = 0;
    for (int i = 0; i < n; ++i)
      if (dist_lhs(rho, flavor, c, xs[i]) * t.lhs_factor < t.rhs) mask |= 1ULL << i;
    sets.push_back(mask);
    covered |= mask;
  }
  if (covered != universe) {
    res.feasible = false;
    res.count = 0;
    return res;
  }
  if (n <= exact_budget) {
    // greedy first for an upper bound, then branch and bound
    std::uint64_t uncovered = universe;
    int greedy = 0;
    while (uncovered) {
      std::uint64_t best_mask = 0;
      for (auto s : sets)
        if (__builtin_popcountll(s & uncovered) >
            __builtin_popcountll(best_mask & uncovered))
          best_mask = s;
      uncovered &= ~best_mask;
      ++greedy;
    }
    CoverState st{&sets, universe, greedy};
    cover_recurse(st, universe, 0);
    res.count = st.best;
    res.exact = true;
    return res;
  }
  // greedy with ln-factor caveat
  std::uint64_t uncovered = universe;
  int count = 0;
  while (uncovered) {
    std::uint64_t best_mask = 0;
    for (auto s : sets)
      if (__builtin_popcountll(s & uncovered) >
          __builtin_popcountll(best_mask & uncovered))
        best_mask = s;
    uncovered &= ~best_mask;
    ++count;
  }
  res.count = count;
  res.exact = false;
  return res;
}

// --- finite-stage metric entropy ----------------------------------------------

MetricStageResult metric_stage_entropy(SoficMap& sigma, const GroupoidMorphism& pi,
                                       const std::vector<PartialAutomorphism>& F,
                                       const std::vector<TestFunction>& K,
                                       const Rat& delta, const PseudoMetric& rho,
                                       RhoFlavor flavor, OrbitFlavor orbit_flavor,
                                       const Rat& eps, std::uint64_t budget,
                                       std::uint64_t sample_count, std::uint64_t seed) {
  const FiniteGroupoid& G = *pi.G;
  const int d = sigma.d();
  const int n = G.n_units();
  MetricStageResult res;
  res.d = d;

  std::vector<Tuple> orbit;
  long double total = std::pow(static_cast<long double>(n), d);
  if (total <= static_cast<long double>(budget)) {
    Tuple x(d, 0);
    for (;;) {
      if (orbit_membership(x, sigma, pi, F, K, delta, rho, orbit_flavor).member)
        orbit.push_back(x);
      int pos = d - 1;
      while (pos >= 0 && x[pos] == n - 1) x[pos--] = 0;
      if (pos < 0) break;
      ++x[pos];
    }
    res.exact = true;
  } else {
    // sampled lower bound: draw i.i.d. mu-distributed tuples (the empirical
    // constraint region carries most of the product mass)
    SplitRng rng(seed);
    std::vector<double> cdf(n);
    double acc = 0;
    for (int u = 0; u < n; ++u) {
      acc += to_double(G.unit_weight[u]);
      cdf[u] = acc;
    }
    std::set<Tuple> seen;
    for (std::uint64_t s = 0; s < sample_count; ++s) {
      Tuple x(d);
      for (int i = 0; i < d; ++i) {
        double r = rng.uniform01();
        x[i] = static_cast<int>(std::lower_bound(cdf.begin(), cdf.end(), r) - cdf.begin());
        if (x[i] >= n) x[i] = n - 1;
      }
      if (seen.insert(x).second &&
          orbit_membership(x, sigma, pi, F, K, delta, rho, orbit_flavor).member)
        orbit.push_back(x);
    }
    res.exact = false;
  }
  res.orbit_size = orbit.size();
  SeparatedResult sep = separated_max(orbit, rho, flavor, eps);
  res.n_eps = sep.count;
  res.exact = res.exact && sep.exact;
  res.entropy_term =
      sep.count > 0 ? std::log(static_cast<double>(sep.count)) / d : -INFINITY;
  return res;
}

}  // namespace sgl
