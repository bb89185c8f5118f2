#include "sgl/partition.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace sgl {

Partition Partition::trivial(const FiniteGroupoid& g) {
  Partition p;
  p.base = &g;
  p.label.assign(g.n_units(), 0);
  p.blocks = 1;
  return p;
}

Partition Partition::discrete(const FiniteGroupoid& g) {
  Partition p;
  p.base = &g;
  p.label.resize(g.n_units());
  for (int u = 0; u < g.n_units(); ++u) p.label[u] = u;
  p.blocks = g.n_units();
  return p;
}

Partition Partition::from_labels(const FiniteGroupoid& g, std::vector<int> labels) {
  if (static_cast<int>(labels.size()) != g.n_units())
    throw std::invalid_argument("partition label count mismatch");
  Partition p;
  p.base = &g;
  p.label = std::move(labels);
  p.blocks = 0;
  for (int l : p.label) {
    if (l < 0) throw std::invalid_argument("negative block id");
    p.blocks = std::max(p.blocks, l + 1);
  }
  // blocks must be nonempty
  std::vector<char> seen(p.blocks, 0);
  for (int l : p.label) seen[l] = 1;
  for (int b = 0; b < p.blocks; ++b)
    if (!seen[b]) throw std::invalid_argument("empty block " + std::to_string(b));
  return p;
}

UnitSet Partition::block_set(int b) const {
  UnitSet s(base->n_units(), 0);
  for (int u = 0; u < base->n_units(); ++u) s[u] = label[u] == b;
  return s;
}

Rat Partition::block_measure(int b) const {
  Rat total = 0;
  for (int u = 0; u < base->n_units(); ++u)
    if (label[u] == b) total += base->unit_weight[u];
  return total;
}

UnitSet act_through(const GroupoidMorphism& pi, const PartialAutomorphism& f,
                    const UnitSet& p) {
  const FiniteGroupoid& G = *pi.G;
  UnitSet out(G.n_units(), 0);
  for (int g = 0; g < G.m; ++g) {
    if (!f.contains(pi.map[g])) continue;
    if (p[G.uid_of_source(g)]) out[G.uid_of_range(g)] = 1;
  }
  return out;
}

RefinedPartition refine(const Partition& p, const std::vector<PartialAutomorphism>& F,
                        const GroupoidMorphism& pi) {
  const FiniteGroupoid& G = *pi.G;
  const FiniteGroupoid& H = *pi.H;
  if (p.base != &G) throw std::invalid_argument("partition base mismatch");
  // H^0 must be a member of F (necessary for Hom to be well-defined)
  bool has_units = false;
  for (const auto& f : F)
    if (f.size() == H.n_units() && pa_trace(f) == 1 &&
        f.key() == PartialAutomorphism::full_units(H).key())
      has_units = true;
  if (!has_units) throw std::invalid_argument("F must contain the units element H^0");

  RefinedPartition rp;
  rp.parent = p;
  rp.pi = &pi;
  rp.F = F;

  const int nf = static_cast<int>(F.size());
  const int n = G.n_units();
  // generating sets f.P_b, and membership signatures
  std::vector<std::vector<UnitSet>> sets(nf);
  for (int fi = 0; fi < nf; ++fi) {
    sets[fi].resize(p.blocks);
    for (int b = 0; b < p.blocks; ++b)
      sets[fi][b] = act_through(pi, F[fi], p.block_set(b));
  }
  std::vector<std::vector<char>> sig(n);
  for (int u = 0; u < n; ++u) {
    sig[u].reserve(nf * p.blocks);
    for (int fi = 0; fi < nf; ++fi)
      for (int b = 0; b < p.blocks; ++b) sig[u].push_back(sets[fi][b][u]);
  }
  std::map<std::vector<char>, int> atom_id;  // lexicographic order
  for (int u = 0; u < n; ++u) atom_id.emplace(sig[u], 0);
  int next = 0;
  for (auto& [key, id] : atom_id) id = next++;
  rp.atom_of_unit.resize(n);
  rp.atoms.assign(next, {});
  rp.atom_measure.assign(next, Rat(0));
  for (int u = 0; u < n; ++u) {
    int a = atom_id[sig[u]];
    rp.atom_of_unit[u] = a;
    rp.atoms[a].push_back(u);
    rp.atom_measure[a] += G.unit_weight[u];
  }
  // atom-level membership in each f.P_b (constant across an atom by
  // construction of the signature)
  rp.in_fP.assign(nf, std::vector<std::vector<char>>(p.blocks, std::vector<char>(next, 0)));
  for (int fi = 0; fi < nf; ++fi)
    for (int b = 0; b < p.blocks; ++b)
      for (int a = 0; a < next; ++a)
        rp.in_fP[fi][b][a] = sets[fi][b][rp.atoms[a].front()];
  rp.block_atoms.assign(p.blocks, std::vector<char>(next, 0));
  for (int a = 0; a < next; ++a)
    rp.block_atoms[p.label[rp.atoms[a].front()]][a] = 1;
  // sanity: parent blocks must be unions of atoms
  for (int a = 0; a < next; ++a)
    for (int u : rp.atoms[a])
      if (p.label[u] != p.label[rp.atoms[a].front()])
        throw std::logic_error("refinement does not refine the parent partition");
  return rp;
}

NearHomResult near_homomorphism(const Partition& p, const std::vector<UnitSet>& psi,
                                const Rat& epsilon) {
  const FiniteGroupoid& G = *p.base;
  const int n = p.blocks;
  if (static_cast<int>(psi.size()) != n)
    throw std::invalid_argument("psi must supply one set per block");
  NearHomResult res;
  res.epsilon = epsilon;

  auto mu = [&](const UnitSet& s) {
    Rat total = 0;
    for (int u = 0; u < G.n_units(); ++u)
      if (s[u]) total += G.unit_weight[u];
    return total;
  };
  auto sym = [&](const UnitSet& a, const UnitSet& b) {
    UnitSet d(G.n_units(), 0);
    for (int u = 0; u < G.n_units(); ++u) d[u] = a[u] != b[u];
    return d;
  };

  res.delta = 0;
  for (int b = 0; b < n; ++b)
    res.delta = std::max(res.delta, mu(sym(p.block_set(b), psi[b])));
  if (Rat(3 * n) * n * n * res.delta >= epsilon) {
    res.precondition_ok = false;
    return res;
  }
  res.precondition_ok = true;

  // peeling: phi_i = psi_i \ union_{j<i} psi_j; last block = complement
  res.phi.assign(n, UnitSet(G.n_units(), 0));
  UnitSet used(G.n_units(), 0);
  for (int b = 0; b + 1 < n; ++b) {
    for (int u = 0; u < G.n_units(); ++u)
      res.phi[b][u] = psi[b][u] && !used[u];
    for (int u = 0; u < G.n_units(); ++u)
      if (psi[b][u]) used[u] = 1;
  }
  for (int u = 0; u < G.n_units(); ++u) res.phi[n - 1][u] = !used[u];

  // worst error over all of Sigma(P): check every union of blocks
  res.worst_error = 0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    UnitSet s(G.n_units(), 0), t(G.n_units(), 0);
    for (int b = 0; b < n; ++b) {
      if (!((mask >> b) & 1)) continue;
      for (int u = 0; u < G.n_units(); ++u) {
        if (p.label[u] == b) s[u] = 1;
        if (res.phi[b][u]) t[u] = 1;
      }
    }
    res.worst_error = std::max(res.worst_error, mu(sym(s, t)));
  }
  res.bound_met = res.worst_error < epsilon;
  return res;
}

AtomDecomposition atom_decomposition(const RefinedPartition& rp, int atom) {
  const GroupoidMorphism& pi = *rp.pi;
  const FiniteGroupoid& G = *pi.G;
  const FiniteGroupoid& H = *pi.H;
  const int nf = static_cast<int>(rp.F.size());

  // closure hypothesis: r(f) in F and H^0 \ r(f) in F for every f in F
  auto contains_key = [&](const std::vector<int>& key) {
    for (const auto& f : rp.F)
      if (f.key() == key) return true;
    return false;
  };
  for (const auto& f : rp.F) {
    PartialAutomorphism rf = pa_range_set(f);
    UnitSet comp(H.n_units(), 1);
    for (int u = 0; u < H.n_units(); ++u)
      if (rf.member_with_source(u) >= 0) comp[u] = 0;
    PartialAutomorphism crf = PartialAutomorphism::from_unit_set(H, comp);
    // the empty set is trivially in the generated algebra; only nonempty
    // range sets and complements must be listed
    if ((rf.size() > 0 && !contains_key(rf.key())) ||
        (crf.size() > 0 && !contains_key(crf.key())))
      throw std::invalid_argument("closure hypothesis fails: F lacks r(f) or its complement");
  }

  UnitSet y(G.n_units(), 0);
  for (int u : rp.atoms[atom]) y[u] = 1;
  UnitSet full(G.n_units(), 1);

  AtomDecomposition dec;
  UnitSet inter(G.n_units(), 1);
  bool any = false;
  for (int fi = 0; fi < nf; ++fi) {
    // candidates: parent blocks, then G^0; minimal = smallest measure
    int best_block = -2;  // -2 none, -1 G^0
    Rat best_measure;
    auto consider = [&](int block_id, const UnitSet& img, const Rat& meas) {
      for (int u = 0; u < G.n_units(); ++u)
        if (y[u] && !img[u]) return;
      if (best_block == -2 || meas < best_measure) {
        best_block = block_id;
        best_measure = meas;
      }
    };
    for (int b = 0; b < rp.parent.blocks; ++b)
      consider(b, act_through(pi, rp.F[fi], rp.parent.block_set(b)),
               rp.parent.block_measure(b));
    consider(-1, act_through(pi, rp.F[fi], full), Rat(1));
    if (best_block == -2) continue;
    dec.F_indices.push_back(fi);
    dec.Y_blocks.push_back(best_block);
    UnitSet img = act_through(pi, rp.F[fi],
                              best_block < 0 ? full : rp.parent.block_set(best_block));
    for (int u = 0; u < G.n_units(); ++u) inter[u] = inter[u] && img[u];
    any = true;
  }
  dec.exact = any && inter == y;
  return dec;
}

}  // namespace sgl
