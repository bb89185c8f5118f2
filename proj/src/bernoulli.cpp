#include "sgl/bernoulli.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "sgl/rng.hpp"

namespace sgl {

BaseSpace BaseSpace::uniform(int symbols) {
  BaseSpace b;
  b.symbols = symbols;
  b.kappa.assign(symbols, Rat(1, symbols));
  return b;
}

void BaseSpace::validate() const {
  if (symbols <= 0 || static_cast<int>(kappa.size()) != symbols)
    throw std::invalid_argument("base space: weight count mismatch");
  Rat total = 0;
  for (const Rat& k : kappa) {
    if (k <= 0) throw std::invalid_argument("base space: weights must be positive");
    total += k;
  }
  if (total != 1) throw std::invalid_argument("base space: weights must sum to 1");
}

double shannon_entropy(const BaseSpace& base) {
  double h = 0;
  for (const Rat& k : base.kappa) {
    double p = to_double(k);
    if (p > 0) h -= p * std::log(p);
  }
  return h;
}

int BernoulliExtension::evaluate(int g_unit) const {
  const FiniteGroupoid& H = *base_groupoid;
  int hu = unit_base[g_unit];
  int unit_morph = H.units[hu];
  const auto& fib = fiber[hu];
  for (size_t p = 0; p < fib.size(); ++p)
    if (fib[p] == unit_morph) return unit_omega[g_unit][p];
  throw std::logic_error("unit morphism missing from its own source fiber");
}

BernoulliExtension build_bernoulli(const FiniteGroupoid& h, const BaseSpace& base,
                                   std::uint64_t unit_budget) {
  base.validate();
  const int K = base.symbols;
  BernoulliExtension ext;
  ext.base_groupoid = &h;
  ext.base_space = base;

  ext.fiber.resize(h.n_units());
  for (int u = 0; u < h.n_units(); ++u)
    for (int f = 0; f < h.m; ++f)
      if (h.source[f] == h.units[u]) ext.fiber[u].push_back(f);

  // budget guard: explicit-state construction only
  for (int u = 0; u < h.n_units(); ++u) {
    long double units_here = std::pow(static_cast<long double>(K),
                                      static_cast<int>(ext.fiber[u].size()));
    if (units_here > static_cast<long double>(unit_budget))
      throw std::invalid_argument("bernoulli construction exceeds the unit budget");
  }

  // morphisms (hm, omega): offset per hm, omega in K^{|fiber(s(hm))|}
  // (lexicographic with position 0 most significant)
  std::vector<int> omega_count(h.m), offset(h.m + 1, 0);
  for (int f = 0; f < h.m; ++f) {
    int fib = static_cast<int>(ext.fiber[h.uid_of_source(f)].size());
    int cnt = 1;
    for (int i = 0; i < fib; ++i) cnt *= K;
    omega_count[f] = cnt;
    offset[f + 1] = offset[f] + cnt;
  }
  const int m = offset[h.m];

  auto omega_of_index = [&](int hm, int idx) {
    int fib = static_cast<int>(ext.fiber[h.uid_of_source(hm)].size());
    std::vector<int> w(fib);
    for (int p = fib - 1; p >= 0; --p) {
      w[p] = idx % K;
      idx /= K;
    }
    return w;
  };
  auto index_of_omega = [&](const std::vector<int>& w) {
    int idx = 0;
    for (int v : w) idx = idx * K + v;
    return idx;
  };
  // position of a morphism in the source fiber of a given H unit
  std::vector<std::vector<int>> pos(h.n_units(), std::vector<int>(h.m, -1));
  for (int u = 0; u < h.n_units(); ++u)
    for (size_t p = 0; p < ext.fiber[u].size(); ++p)
      pos[u][ext.fiber[u][p]] = static_cast<int>(p);

  // range-side omega: psi(f) = omega(f hm) for f in fiber(r(hm))
  auto range_omega = [&](int hm, const std::vector<int>& w) {
    int ru = h.uid_of_range(hm), su = h.uid_of_source(hm);
    std::vector<int> psi(ext.fiber[ru].size());
    for (size_t p = 0; p < ext.fiber[ru].size(); ++p) {
      int f = ext.fiber[ru][p];
      psi[p] = w[pos[su][h.compose[f][hm]]];
    }
    return psi;
  };

  std::vector<int> source(m), range(m), inverse(m);
  std::vector<std::vector<int>> compose(m, std::vector<int>(m, -1));
  std::vector<int> units;
  for (int hm = 0; hm < h.m; ++hm)
    for (int oi = 0; oi < omega_count[hm]; ++oi) {
      int gm = offset[hm] + oi;
      std::vector<int> w = omega_of_index(hm, oi);
      int shm = h.source[hm];
      source[gm] = offset[shm] + oi;  // same omega, same fiber
      std::vector<int> psi = range_omega(hm, w);
      int rhm = h.range[hm];
      range[gm] = offset[rhm] + index_of_omega(psi);
      inverse[gm] = offset[h.inverse[hm]] + index_of_omega(psi);
      if (h.is_unit(hm)) units.push_back(gm);
    }
  // compose: for each (hm, omega) and each f with s(f) = r(hm):
  // (f, psi)(hm, omega) = (f hm, omega)
  for (int hm = 0; hm < h.m; ++hm)
    for (int oi = 0; oi < omega_count[hm]; ++oi) {
      int gm = offset[hm] + oi;
      std::vector<int> w = omega_of_index(hm, oi);
      int psi_idx = index_of_omega(range_omega(hm, w));
      for (int f = 0; f < h.m; ++f) {
        if (h.compose[f][hm] < 0) continue;
        compose[offset[f] + psi_idx][gm] = offset[h.compose[f][hm]] + oi;
      }
    }

  // weights mu(x, omega) = nu(x) prod kappa(omega(.)) over G units
  std::vector<Rat> weights;
  FiniteGroupoid g;
  g.m = m;
  g.source = std::move(source);
  g.range = std::move(range);
  g.inverse = std::move(inverse);
  g.compose = std::move(compose);
  g.units = units;  // already in ascending order (hm-major, omega minor)
  for (int gm : units) {
    // recover (hm, omega)
    int hm = 0;
    while (offset[hm + 1] <= gm) ++hm;
    std::vector<int> w = omega_of_index(hm, gm - offset[hm]);
    Rat wt = h.unit_weight[h.unit_id[hm]];
    for (int v : w) wt *= base.kappa[v];
    weights.push_back(wt);
    ext.unit_omega.push_back(w);
    ext.unit_base.push_back(h.unit_id[hm]);
  }
  g.unit_weight = std::move(weights);
  g.unit_id.assign(g.m, -1);
  for (int u = 0; u < g.n_units(); ++u) g.unit_id[g.units[u]] = u;

  ext.total = std::make_unique<FiniteGroupoid>(std::move(g));
  ext.projection.G = ext.total.get();
  ext.projection.H = &h;
  ext.projection.map.resize(m);
  for (int hm = 0; hm < h.m; ++hm)
    for (int oi = 0; oi < omega_count[hm]; ++oi) ext.projection.map[offset[hm] + oi] = hm;
  return ext;
}

Partition evaluation_partition(const BernoulliExtension& ext,
                               const std::vector<int>& symbol_block) {
  const FiniteGroupoid& G = *ext.total;
  if (static_cast<int>(symbol_block.size()) != ext.base_space.symbols)
    throw std::invalid_argument("symbol partition size mismatch");
  std::vector<int> labels(G.n_units());
  for (int u = 0; u < G.n_units(); ++u) labels[u] = symbol_block[ext.evaluate(u)];
  return Partition::from_labels(G, std::move(labels));
}

HomLabeling peeled_hom(SoficMap& sigma, const RefinedPartition& rp) {
  const FiniteGroupoid& H = sigma.groupoid();
  if (rp.pi->G != &H || rp.pi->H != &H)
    throw std::invalid_argument("peeled_hom expects an identity extension refinement");
  const int d = sigma.d();
  const int n = rp.n_atoms();
  HomLabeling phi;
  phi.d = d;
  phi.label.assign(d, n - 1);  // last atom takes the remainder
  std::vector<char> used(d, 0);
  for (int a = 0; a + 1 < n; ++a) {
    UnitSet atom_set(H.n_units(), 0);
    for (int u : rp.atoms[a]) atom_set[u] = 1;
    const PartialBijection& sp =
        sigma.at(PartialAutomorphism::from_unit_set(H, atom_set));
    for (int i = 0; i < d; ++i)
      if (sp.apply(i) == i && !used[i]) {
        phi.label[i] = a;
        used[i] = 1;
      }
  }
  return phi;
}

BinomialOracleResult binomial_entropy_oracle(const BaseSpace& kappa, int d,
                                             const Rat& delta) {
  kappa.validate();
  const int K = kappa.symbols;
  BinomialOracleResult res;
  std::vector<int> v(K, 0);
  // enumerate compositions of d into K parts
  std::function<void(int, int)> rec = [&](int part, int left) {
    if (part == K - 1) {
      v[part] = left;
      Rat dev = 0;
      for (int k = 0; k < K; ++k) {
        Rat t = Rat(v[k], d) - kappa.kappa[k];
        dev += t < 0 ? -t : t;
      }
      if (dev < delta) {
        BigInt mult = factorial(d);
        for (int k = 0; k < K; ++k) mult /= factorial(v[k]);
        res.count += mult;
      }
      return;
    }
    for (int take = 0; take <= left; ++take) {
      v[part] = take;
      rec(part + 1, left - take);
    }
  };
  rec(0, d);
  res.log_count_over_d = res.count > 0 ? log_bigint(res.count) / d : -INFINITY;
  return res;
}

// --- randomized witness -------------------------------------------------------

WitnessHomResult random_witness_hom(const BernoulliExtension& ext, SoficMap& sigma,
                                    const std::vector<PartialAutomorphism>& F,
                                    const Partition& R,
                                    const std::vector<int>& symbol_block,
                                    const Rat& eps, const Rat& delta, int c,
                                    std::uint64_t z_seed) {
  const FiniteGroupoid& H = *ext.base_groupoid;
  const FiniteGroupoid& G = *ext.total;
  const int d = sigma.d();
  if (R.base != &H) throw std::invalid_argument("R must partition H^0");
  // F must be global and inverse-closed
  for (const auto& f : F) {
    if (f.size() != H.n_units())
      throw std::invalid_argument("witness construction expects global F");
    bool has_inverse = false;
    for (const auto& g : F)
      if (g.key() == pa_invert(f).key()) has_inverse = true;
    if (!has_inverse) throw std::invalid_argument("F must be inverse-closed");
  }

  // key family F Sigma(R) realized on generators: {f S} and {S} and H^0
  std::vector<PartialAutomorphism> keys;
  keys.push_back(PartialAutomorphism::full_units(H));
  for (int b = 0; b < R.blocks; ++b) {
    PartialAutomorphism s = PartialAutomorphism::from_unit_set(H, R.block_set(b));
    keys.push_back(s);
    for (const auto& f : F) keys.push_back(pa_compose(f, s));
  }

  // H-side base homomorphism phi on Sigma(T^{F Sigma(R)})
  GroupoidMorphism idH = identity_extension(H);
  RefinedPartition rpH = refine(Partition::trivial(H), keys, idH);
  HomLabeling phiH = peeled_hom(sigma, rpH);

  // G-side refinement of Pbar = E^{-1}(P)
  Partition pbar = evaluation_partition(ext, symbol_block);
  RefinedPartition rpG = refine(pbar, keys, ext.projection);

  // total unit actions of each f on G^0 and on H^0 (f is global)
  const int nF = static_cast<int>(F.size());
  std::vector<std::vector<int>> f_on_G(nF, std::vector<int>(G.n_units(), -1));
  std::vector<std::vector<int>> f_on_H(nF, std::vector<int>(H.n_units(), -1));
  for (int fi = 0; fi < nF; ++fi) {
    for (int g = 0; g < G.m; ++g)
      if (F[fi].contains(ext.projection.map[g]))
        f_on_G[fi][G.uid_of_source(g)] = G.uid_of_range(g);
    for (int u = 0; u < H.n_units(); ++u) {
      int mh = F[fi].member_with_source(u);
      if (mh >= 0) f_on_H[fi][u] = H.uid_of_range(mh);
    }
  }

  // z : {1..d} -> K with product law kappa
  SplitRng rng(z_seed);
  std::vector<double> cdf(ext.base_space.symbols);
  double acc = 0;
  for (int k = 0; k < ext.base_space.symbols; ++k) {
    acc += to_double(ext.base_space.kappa[k]);
    cdf[k] = acc;
  }
  std::vector<int> z(d);
  for (int i = 0; i < d; ++i) {
    double r = rng.uniform01();
    z[i] = static_cast<int>(std::lower_bound(cdf.begin(), cdf.end(), r) - cdf.begin());
    if (z[i] >= ext.base_space.symbols) z[i] = ext.base_space.symbols - 1;
  }
  int p_blocks = 0;
  for (int b : symbol_block) p_blocks = std::max(p_blocks, b + 1);
  std::vector<std::vector<char>> psi_z(p_blocks, std::vector<char>(d, 0));
  for (int i = 0; i < d; ++i) psi_z[symbol_block[z[i]]][i] = 1;

  WitnessHomResult res;
  res.phi.d = d;
  res.phi.label.assign(d, -1);

  for (int a = 0; a < rpG.n_atoms(); ++a) {
    int u0 = rpG.atoms[a].front();  // representative G unit
    // X = intersection over f of f^{-1} . (R-block of f.u0), on the H side
    UnitSet xH(H.n_units(), 1);
    std::vector<int> p_of_f(nF);
    for (int fi = 0; fi < nF; ++fi) {
      int v = f_on_G[fi][u0];
      if (v < 0) throw std::logic_error("global f must act everywhere");
      int rb = R.label[ext.unit_base[v]];
      p_of_f[fi] = symbol_block[ext.evaluate(v)];
      for (int u = 0; u < H.n_units(); ++u)
        if (xH[u] && R.label[f_on_H[fi][u]] != rb) xH[u] = 0;
    }
    // phi_H(X): union of rpH atoms inside X (X lies in Sigma(T^{F Sigma(R)}))
    std::vector<char> atom_in(rpH.n_atoms(), 0);
    for (int ha = 0; ha < rpH.n_atoms(); ++ha) {
      bool inside = true, outside = true;
      for (int u : rpH.atoms[ha]) (xH[u] ? outside : inside) = false;
      if (!inside && !outside)
        throw std::logic_error("X is not a union of T^{F Sigma(R)} atoms");
      atom_in[ha] = inside;
    }
    std::vector<char> cell(d, 0);
    for (int i = 0; i < d; ++i) cell[i] = atom_in[phiH.label[i]];
    // intersect with sigma(f)^{-1} . psi_z(P-block of E(f . atom))
    for (int fi = 0; fi < nF; ++fi) {
      const PartialBijection& sf = sigma.at(F[fi]);
      for (int i = 0; i < d; ++i) {
        if (!cell[i]) continue;
        int j = sf.apply(i);
        if (j < 0 || !psi_z[p_of_f[fi]][j]) cell[i] = 0;
      }
    }
    for (int i = 0; i < d; ++i)
      if (cell[i] && res.phi.label[i] < 0) res.phi.label[i] = a;
  }

  // repair: dump the deficit into atom 0
  for (int i = 0; i < d; ++i)
    if (res.phi.label[i] < 0) {
      res.phi.label[i] = 0;
      ++res.repaired;
    }

  Rat tolerance = Rat(c) * (eps + delta);
  res.report = is_good_hom(sigma, rpG, res.phi, tolerance);
  res.passes = res.report.pass;
  return res;
}

std::vector<IdentityStage> identity_extension_entropy(
    const FiniteGroupoid& h, const std::vector<int>& multiplicities,
    const std::vector<PartialAutomorphism>& F, const Rat& delta) {
  std::vector<IdentityStage> stages;
  GroupoidMorphism id = identity_extension(h);
  for (int n : multiplicities) {
    SoficMap sigma = exact_sofic_from_quotient(h, n);
    RefinedPartition rp = refine(Partition::trivial(h), F, id);
    HomLabeling phi = peeled_hom(sigma, rp);
    GoodHomReport rep = is_good_hom(sigma, rp, phi, delta);
    IdentityStage st;
    st.d = sigma.d();
    st.hom_nonempty = rep.pass;
    // |Hom|_T <= 1: the trivial restriction is {} -> {}, G^0 -> full, so
    // the entropy term is 0 exactly when Hom is nonempty
    st.entropy_term = rep.pass ? 0.0 : -INFINITY;
    stages.push_back(st);
  }
  return stages;
}

}  // namespace sgl
