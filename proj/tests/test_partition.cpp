#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "sgl/bernoulli.hpp"
#include "sgl/groupoid.hpp"
#include "sgl/hom.hpp"
#include "sgl/partition.hpp"
#include "sgl/rng.hpp"
#include "sgl/sofic.hpp"

using namespace sgl;

namespace {

std::vector<PartialAutomorphism> unit_family(const FiniteGroupoid& h) {
  return {PartialAutomorphism::full_units(h)};
}

// Definition-level re-evaluation of homomorphism membership, built from
// act_through and raw set images rather than the library's tables.
bool oracle_good(SoficMap& sigma, const RefinedPartition& rp, const HomLabeling& phi,
                 const Rat& delta) {
  const int d = phi.d;
  for (size_t fi = 0; fi < rp.F.size(); ++fi) {
    Rat total = 0;
    for (int b = 0; b < rp.parent.blocks; ++b) {
      std::vector<char> phiB(d, 0), phifB(d, 0);
      UnitSet fB = act_through(*rp.pi, rp.F[fi],
                               rp.parent.block_set(b));
      for (int i = 0; i < d; ++i) {
        int atom = phi.label[i];
        int rep = rp.atoms[atom].front();
        if (rp.parent.label[rep] == b) phiB[i] = 1;
        if (fB[rep]) phifB[i] = 1;
      }
      std::vector<char> img = sigma.at(rp.F[fi]).image(phiB);
      int mism = 0;
      for (int i = 0; i < d; ++i) mism += img[i] != phifB[i];
      total += Rat(mism, d);
    }
    if (!(total < delta)) return false;
  }
  std::vector<int> counts(rp.n_atoms(), 0);
  for (int i = 0; i < d; ++i) ++counts[phi.label[i]];
  Rat s = 0;
  for (int a = 0; a < rp.n_atoms(); ++a) {
    Rat diff = Rat(counts[a], d) - rp.atom_measure[a];
    s += diff < 0 ? -diff : diff;
  }
  return s < delta;
}

}  // namespace

TEST_CASE("refining by the units element reproduces the blocks") {
  FiniteGroupoid rel = build_relation_groupoid({0, 0, 1});
  Partition p = Partition::from_labels(rel, {0, 0, 1});
  GroupoidMorphism id = identity_extension(rel);
  RefinedPartition rp = refine(p, unit_family(rel), id);
  CHECK(rp.n_atoms() == 2);
  for (int a = 0; a < rp.n_atoms(); ++a)
    for (int u : rp.atoms[a]) CHECK(p.label[u] == p.label[rp.atoms[a].front()]);
}

TEST_CASE("trivial partition refined by singletons separates range sets") {
  FiniteGroupoid rel = build_relation_groupoid({0, 0, 1});
  std::vector<PartialAutomorphism> F = unit_family(rel);
  // the morphism 1 -> 2 inside the first class
  for (int m = 0; m < rel.m; ++m)
    if (!rel.is_unit(m)) {
      F.push_back(PartialAutomorphism::singleton(rel, m));
      break;
    }
  GroupoidMorphism id = identity_extension(rel);
  RefinedPartition rp = refine(Partition::trivial(rel), F, id);
  // atoms must be exactly the signature classes of the f.G^0 sets
  std::vector<std::vector<char>> sigs;
  for (int u = 0; u < rel.n_units(); ++u) {
    std::vector<char> sig;
    for (const auto& f : F)
      sig.push_back(act_through(id, f, UnitSet(rel.n_units(), 1))[u]);
    sigs.push_back(sig);
  }
  for (int u = 0; u < rel.n_units(); ++u)
    for (int v = 0; v < rel.n_units(); ++v)
      CHECK((rp.atom_of_unit[u] == rp.atom_of_unit[v]) == (sigs[u] == sigs[v]));
}

TEST_CASE("2-block partition with a 2-cycle refines to singletons") {
  FiniteGroupoid d4 = build_relation_groupoid({0, 0, 0, 0});
  Partition p = Partition::from_labels(d4, {0, 0, 1, 1});
  // global automorphism swapping units 1 and 2, fixing 0 and 3
  auto pair_index = [&](int y, int x) {
    for (int m = 0; m < d4.m; ++m)
      if (d4.uid_of_source(m) == x && d4.uid_of_range(m) == y) return m;
    return -1;
  };
  MorphSet mem(d4.m, 0);
  mem[pair_index(0, 0)] = 1;
  mem[pair_index(2, 1)] = 1;
  mem[pair_index(1, 2)] = 1;
  mem[pair_index(3, 3)] = 1;
  PartialAutomorphism g(d4, mem);
  GroupoidMorphism id = identity_extension(d4);
  RefinedPartition rp = refine(p, {PartialAutomorphism::full_units(d4), g}, id);
  CHECK(rp.n_atoms() == 4);
}

TEST_CASE("refine requires the units element") {
  FiniteGroupoid z2 = build_cyclic_group_groupoid(2);
  GroupoidMorphism id = identity_extension(z2);
  CHECK_THROWS(refine(Partition::trivial(z2),
                      {PartialAutomorphism::singleton(z2, 1)}, id));
}

TEST_CASE("peeled labeling is a good homomorphism for exact maps") {
  for (const FiniteGroupoid& h :
       {build_relation_groupoid({0, 0, 1}), build_cyclic_group_groupoid(4)}) {
    SoficMap sigma = exact_sofic_from_quotient(h, 2);
    GroupoidMorphism id = identity_extension(h);
    std::vector<PartialAutomorphism> F = unit_family(h);
    for (int m = 0; m < h.m; ++m) F.push_back(PartialAutomorphism::singleton(h, m));
    RefinedPartition rp = refine(Partition::trivial(h), F, id);
    HomLabeling phi = peeled_hom(sigma, rp);
    GoodHomReport rep = is_good_hom(sigma, rp, phi, Rat(1, 100));
    CHECK(rep.pass);
    for (const Rat& c : rep.cond1) CHECK(c == Rat(0));
    CHECK(rep.cond2 == Rat(0));
  }
}

TEST_CASE("concentrating everything in one atom violates condition 2") {
  FiniteGroupoid rel = build_relation_groupoid({0, 0, 1});
  SoficMap sigma = exact_sofic_from_quotient(rel, 2);
  GroupoidMorphism id = identity_extension(rel);
  RefinedPartition rp = refine(Partition::from_labels(rel, {0, 0, 1}),
                               unit_family(rel), id);
  HomLabeling phi;
  phi.d = sigma.d();
  phi.label.assign(phi.d, 0);
  GoodHomReport rep = is_good_hom(sigma, rp, phi, Rat(1, 10));
  CHECK(!rep.pass);
  CHECK(rep.cond2 > Rat(0));
}

TEST_CASE("is_good_hom agrees with definitional re-evaluation at d=8") {
  FiniteGroupoid z4 = build_cyclic_group_groupoid(4);
  SoficMap sigma = exact_sofic_from_quotient(z4, 2);
  GroupoidMorphism id = identity_extension(z4);
  std::vector<PartialAutomorphism> F = unit_family(z4);
  F.push_back(PartialAutomorphism::singleton(z4, 1));
  RefinedPartition rp = refine(Partition::trivial(z4), F, id);
  SplitRng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    HomLabeling phi;
    phi.d = sigma.d();
    for (int i = 0; i < phi.d; ++i)
      phi.label.push_back(static_cast<int>(rng.below(rp.n_atoms())));
    for (const Rat& delta : {Rat(1, 10), Rat(1, 2), Rat(3, 2)})
      CHECK(is_good_hom(sigma, rp, phi, delta).pass ==
            oracle_good(sigma, rp, phi, delta));
  }
}

TEST_CASE("exact counting: trivial restriction and vacuous delta") {
  FiniteGroupoid z2 = build_cyclic_group_groupoid(2);
  SoficMap sigma = exact_sofic_from_quotient(z2, 2);
  GroupoidMorphism id = identity_extension(z2);
  std::vector<PartialAutomorphism> F = unit_family(z2);
  F.push_back(PartialAutomorphism::singleton(z2, 1));
  RefinedPartition rp = refine(Partition::trivial(z2), F, id);
  std::vector<int> q = coarsen_to(rp, Partition::trivial(z2));
  HomCountResult res = count_hom_exact(sigma, rp, Rat(1, 10), q);
  CHECK(res.restricted_count <= 1);
  CHECK(res.hom_count >= 1);

  HomCountResult vac = count_hom_exact(sigma, rp, Rat(2), q);
  unsigned long long total = 1;
  for (int i = 0; i < sigma.d(); ++i) total *= rp.n_atoms();
  CHECK(vac.hom_count == total);
}

TEST_CASE("Z/2 Bernoulli counts match an independent exhaustive oracle") {
  FiniteGroupoid z2 = build_cyclic_group_groupoid(2);
  BernoulliExtension ext = build_bernoulli(z2, BaseSpace::uniform(2));
  SoficMap sigma = exact_sofic_from_quotient(z2, 2);  // d = 4
  std::vector<PartialAutomorphism> F = unit_family(z2);
  F.push_back(PartialAutomorphism::singleton(z2, 1));
  Partition pbar = evaluation_partition(ext, {0, 1});
  RefinedPartition rp = refine(pbar, F, ext.projection);
  std::vector<int> q = coarsen_to(rp, pbar);
  Rat delta(3, 10);
  HomCountResult res = count_hom_exact(sigma, rp, delta, q);

  // oracle: enumerate labelings, evaluate membership from definitions
  unsigned long long oracle = 0;
  std::set<std::vector<std::uint8_t>> oracle_restr;
  const int d = sigma.d(), A = rp.n_atoms();
  std::vector<int> label(d, 0);
  for (;;) {
    HomLabeling phi{d, label};
    if (oracle_good(sigma, rp, phi, delta)) {
      ++oracle;
      std::vector<std::uint8_t> coarse(d);
      for (int i = 0; i < d; ++i) coarse[i] = static_cast<std::uint8_t>(q[label[i]]);
      oracle_restr.insert(coarse);
    }
    int pos = d - 1;
    while (pos >= 0 && label[pos] == A - 1) label[pos--] = 0;
    if (pos < 0) break;
    ++label[pos];
  }
  CHECK(res.hom_count == oracle);
  CHECK(res.restricted_count == oracle_restr.size());
}

TEST_CASE("monotonicity of exact counts") {
  FiniteGroupoid z2 = build_cyclic_group_groupoid(2);
  SoficMap sigma = exact_sofic_from_quotient(z2, 2);
  GroupoidMorphism id = identity_extension(z2);
  std::vector<PartialAutomorphism> Fsmall = unit_family(z2);
  std::vector<PartialAutomorphism> Fbig = Fsmall;
  Fbig.push_back(PartialAutomorphism::singleton(z2, 1));
  RefinedPartition rp_small = refine(Partition::trivial(z2), Fsmall, id);
  RefinedPartition rp_big = refine(Partition::trivial(z2), Fbig, id);
  std::vector<int> qs = coarsen_to(rp_small, Partition::trivial(z2));
  std::vector<int> qb = coarsen_to(rp_big, Partition::trivial(z2));
  unsigned long long prev = 0;
  for (const Rat& delta : {Rat(1, 100), Rat(1, 10), Rat(1, 2), Rat(1)}) {
    unsigned long long now = count_hom_exact(sigma, rp_small, delta, qs).hom_count;
    CHECK(now >= prev);
    // growing F cannot create new homomorphisms
    CHECK(count_hom_exact(sigma, rp_big, delta, qb).hom_count <= now);
    prev = now;
  }
}

TEST_CASE("budget guard directs large enumerations to Monte Carlo") {
  FiniteGroupoid d3 = build_full_groupoid(3);
  SoficMap sigma = exact_sofic_from_quotient(d3, 8);  // d = 24
  GroupoidMorphism id = identity_extension(d3);
  RefinedPartition rp = refine(Partition::discrete(d3), unit_family(d3), id);
  std::vector<int> q = coarsen_to(rp, Partition::discrete(d3));
  CHECK_THROWS_AS(count_hom_exact(sigma, rp, Rat(1, 10), q, 1000),
                  BudgetExceeded);
}

TEST_CASE("Monte Carlo: vacuous delta is exact, zero samples rejected") {
  FiniteGroupoid z2 = build_cyclic_group_groupoid(2);
  SoficMap sigma = exact_sofic_from_quotient(z2, 2);
  GroupoidMorphism id = identity_extension(z2);
  RefinedPartition rp = refine(Partition::trivial(z2), unit_family(z2), id);
  std::vector<int> q = coarsen_to(rp, Partition::trivial(z2));
  HomEstimate est = count_hom_mc(sigma, rp, Rat(2), q, 500, 3);
  CHECK(est.passers == est.samples);
  double total = std::pow(static_cast<double>(rp.n_atoms()), sigma.d());
  CHECK(est.hom_estimate == doctest::Approx(total));
  CHECK_THROWS(count_hom_mc(sigma, rp, Rat(2), q, 0, 3));
}

TEST_CASE("Monte Carlo interval covers the exact count in most seeds") {
  FiniteGroupoid z2 = build_cyclic_group_groupoid(2);
  SoficMap sigma = exact_sofic_from_quotient(z2, 3);  // d = 6
  GroupoidMorphism id = identity_extension(z2);
  std::vector<PartialAutomorphism> F = unit_family(z2);
  F.push_back(PartialAutomorphism::singleton(z2, 1));
  RefinedPartition rp = refine(Partition::trivial(z2), F, id);
  std::vector<int> q = coarsen_to(rp, Partition::trivial(z2));
  Rat delta(1, 2);
  double exact = static_cast<double>(count_hom_exact(sigma, rp, delta, q).hom_count);
  int covered = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    HomEstimate est = count_hom_mc(sigma, rp, delta, q, 2000, seed);
    if (est.ci_low <= exact && exact <= est.ci_high) ++covered;
  }
  CHECK(covered >= 90);
}

TEST_CASE("stage entropy terms: point masses and unit counts") {
  std::vector<double> one_map = stage_entropy_terms({4, 8}, {{5.0}, {9.0}}, 1.0);
  std::vector<double> one_map_inf =
      stage_entropy_terms({4, 8}, {{5.0}, {9.0}}, INFINITY);
  CHECK(one_map[0] == doctest::Approx(one_map_inf[0]));
  CHECK(one_map[1] == doctest::Approx(one_map_inf[1]));

  std::vector<double> zeros = stage_entropy_terms({4, 8}, {{1.0}, {1.0}}, 2.0);
  CHECK(zeros[0] == doctest::Approx(0.0));
  CHECK(zeros[1] == doctest::Approx(0.0));

  CHECK(std::isinf(stage_entropy_terms({4}, {{0.0}}, 1.0)[0]));
  CHECK_THROWS(stage_entropy_terms({4}, {{}}, 1.0));
  CHECK_THROWS(stage_entropy_terms({4}, {{1.0}}, 0.5));
}

TEST_CASE("near-homomorphism peeling") {
  FiniteGroupoid rel = build_relation_groupoid({0, 0, 1, 1},
                                               {Rat(1, 4), Rat(1, 4), Rat(1, 4), Rat(1, 4)});
  Partition p = Partition::from_labels(rel, {0, 0, 1, 1});
  std::vector<UnitSet> psi{p.block_set(0), p.block_set(1)};
  NearHomResult exact_case = near_homomorphism(p, psi, Rat(1, 2));
  CHECK(exact_case.precondition_ok);
  CHECK(exact_case.bound_met);
  CHECK(exact_case.worst_error == Rat(0));
  CHECK(exact_case.phi[0] == p.block_set(0));

  // perturbed psi overlapping on one unit of weight w = 1/12
  FiniteGroupoid fine = build_relation_groupoid(std::vector<int>(12, 0));
  std::vector<int> labels(12, 0);
  for (int u = 6; u < 12; ++u) labels[u] = 1;
  Partition p2 = Partition::from_labels(fine, labels);
  UnitSet psi0 = p2.block_set(0);
  psi0[6] = 1;  // overlap into the other block
  std::vector<UnitSet> shifted{psi0, p2.block_set(1)};
  NearHomResult res = near_homomorphism(p2, shifted, Rat(3));
  CHECK(res.precondition_ok);
  CHECK(res.delta == Rat(1, 12));
  UnitSet all(12, 0);
  for (const UnitSet& block : res.phi)
    for (int u = 0; u < 12; ++u)
      if (block[u]) {
        CHECK(!all[u]);
        all[u] = 1;
      }
  CHECK(all == UnitSet(12, 1));
  // mu(phi(P) delta P) <= 3 * n * w with n = 2 blocks, w = 1/12
  CHECK(res.worst_error <= Rat(6, 12));
  CHECK(res.bound_met);

  // precondition 3 n^3 delta < eps violated
  NearHomResult rej = near_homomorphism(p2, shifted, Rat(1, 100));
  CHECK(!rej.precondition_ok);
}

TEST_CASE("atom decomposition under the closure hypothesis") {
  FiniteGroupoid rel = build_relation_groupoid({0, 0, 1});
  GroupoidMorphism id = identity_extension(rel);
  Partition p = Partition::from_labels(rel, {0, 0, 1});
  RefinedPartition rp = refine(p, unit_family(rel), id);
  AtomDecomposition dec = atom_decomposition(rp, 0);
  CHECK(dec.exact);
  REQUIRE(dec.F_indices.size() == 1);
  CHECK(dec.Y_blocks[0] == rp.parent.label[rp.atoms[0].front()]);

  // closure hypothesis violated: a singleton without its range complement
  std::vector<PartialAutomorphism> F = unit_family(rel);
  int non_unit = -1;
  for (int m = 0; m < rel.m && non_unit < 0; ++m)
    if (!rel.is_unit(m)) non_unit = m;
  F.push_back(PartialAutomorphism::singleton(rel, non_unit));
  RefinedPartition rp2 = refine(Partition::trivial(rel), F, id);
  CHECK_THROWS(atom_decomposition(rp2, 0));

  // closure satisfied: add r(f) and complement as unit-set elements
  PartialAutomorphism f = PartialAutomorphism::singleton(rel, non_unit);
  UnitSet rf(rel.n_units(), 0);
  rf[rel.uid_of_range(non_unit)] = 1;
  UnitSet co(rel.n_units(), 1);
  co[rel.uid_of_range(non_unit)] = 0;
  F.push_back(PartialAutomorphism::from_unit_set(rel, rf));
  F.push_back(PartialAutomorphism::from_unit_set(rel, co));
  RefinedPartition rp3 = refine(Partition::trivial(rel), F, id);
  for (int a = 0; a < rp3.n_atoms(); ++a) CHECK(atom_decomposition(rp3, a).exact);
}

TEST_CASE("rho_Q distance and separated counts") {
  HomLabeling phi{4, {0, 0, 1, 1}};
  HomLabeling psi{4, {0, 0, 1, 1}};
  std::vector<int> q{0, 1};
  CHECK(rho_Q_distance(phi, psi, q, 2) == Rat(0));
  psi.label[0] = 1;
  CHECK(rho_Q_distance(phi, psi, q, 2) == Rat(1, 4));
  CHECK(separated_count_homs({phi, psi}, q, 2, Rat(1, 8)) == 2);
  CHECK(separated_count_homs({phi, psi}, q, 2, Rat(1, 2)) == 1);
}

TEST_CASE("separated-count bound against restricted counts at d=4") {
  FiniteGroupoid z2 = build_cyclic_group_groupoid(2);
  BernoulliExtension ext = build_bernoulli(z2, BaseSpace::uniform(2));
  SoficMap sigma = exact_sofic_from_quotient(z2, 2);
  std::vector<PartialAutomorphism> F = unit_family(z2);
  F.push_back(PartialAutomorphism::singleton(z2, 1));
  Partition pbar = evaluation_partition(ext, {0, 1});
  RefinedPartition rp = refine(pbar, F, ext.projection);
  std::vector<int> q = coarsen_to(rp, pbar);
  const int d = sigma.d();
  std::vector<HomLabeling> passers;
  HomCountResult res = count_hom_exact(
      sigma, rp, Rat(3, 10), q, 200000000ULL,
      [&](const std::vector<int>& label) { passers.push_back({d, label}); });
  for (const Rat& eps : {Rat(1, 8), Rat(1, 4)}) {
    int neps = separated_count_homs(passers, q, pbar.blocks, eps);
    // restricted count <= N_eps * (sum_{i <= eps d} C(d, i))^{|Q|}
    BigInt ball = 0;
    BigInt cap = (eps * d).convert_to<BigInt>();
    for (BigInt i = 0; i <= cap; ++i)
      ball += binomial(d, static_cast<int>(i.convert_to<long>()));
    BigInt bound = neps;
    for (int b = 0; b < pbar.blocks; ++b) bound *= ball;
    CHECK(BigInt(res.restricted_count) <= bound);
  }
}
