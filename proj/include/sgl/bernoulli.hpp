#ifndef SGL_BERNOULLI_HPP
#define SGL_BERNOULLI_HPP

#include <memory>
#include <vector>

#include "sgl/hom.hpp"
#include "sgl/partition.hpp"
#include "sgl/sofic.hpp"

namespace sgl {

/** Finite symbol space with rational weights summing to 1. */
struct BaseSpace {
  int symbols = 0;
  std::vector<Rat> kappa;

  static BaseSpace uniform(int symbols);
  void validate() const;  // positivity, sum to 1
};

// -sum kappa(k) log kappa(k), natural log
double shannon_entropy(const BaseSpace& base);

/**
 * Bernoulli shift over (H, nu): units of the total groupoid G are pairs
 * (x, omega) with omega : s^{-1}(x) -> K, morphisms are pairs (h, omega)
 * over omega : s^{-1}(s(h)) -> K with r(h, omega) = (r(h), psi),
 * psi(f) = omega(f h); mu(x, omega) = nu(x) prod kappa(omega(h)).
 */
struct BernoulliExtension {
  const FiniteGroupoid* base_groupoid = nullptr;  // H
  BaseSpace base_space;
  std::unique_ptr<FiniteGroupoid> total;  // G
  GroupoidMorphism projection;            // pi : G -> H

  // per G-unit: the omega table (indexed by position in the source fiber
  // of the underlying H-unit), and the underlying H-unit id
  std::vector<std::vector<int>> unit_omega;
  std::vector<int> unit_base;  // G unit id -> H unit id
  // source fiber of each H-unit (morphism ids, in index order)
  std::vector<std::vector<int>> fiber;

  // evaluation map E(x, omega) = omega(x): symbol at a G-unit
  int evaluate(int g_unit) const;
};

// Refuses when |K|^{max fiber} exceeds the budget (explicit-state only).
BernoulliExtension build_bernoulli(const FiniteGroupoid& h, const BaseSpace& base,
                                   std::uint64_t unit_budget = 1000000);

// Pullback of a partition of the symbols through the evaluation map.
Partition evaluation_partition(const BernoulliExtension& ext,
                               const std::vector<int>& symbol_block);

/**
 * The identity-extension base homomorphism: phi(P_1) = sigma(P_1) & diag,
 * phi(P_i) = (sigma(P_i) & diag) \ earlier, last atom takes the rest.
 * P_i are the atoms of rp (expected: trivial partition refined by F).
 */
HomLabeling peeled_hom(SoficMap& sigma, const RefinedPartition& rp);

/**
 * Exact count of labelings z : {1..d} -> K whose empirical distribution is
 * within delta of kappa in the condition-(2) sense
 * (sum_k |count_k/d - kappa_k| < delta), via multinomial summation.
 * Returns d^{-1} log count (0 labelings -> -inf).
 */
struct BinomialOracleResult {
  BigInt count = 0;
  double log_count_over_d = 0;
};
BinomialOracleResult binomial_entropy_oracle(const BaseSpace& kappa, int d,
                                             const Rat& delta);

// --- randomized witness homomorphism ----------------------------------------

struct WitnessHomResult {
  HomLabeling phi;        // the repaired phi'_z over atoms of Pbar^{F Sigma(R)}
  bool passes = false;    // phi'_z in Hom(pi, sigma, Pbar, ..., c(eps+delta))
  GoodHomReport report;
  int repaired = 0;       // indices dumped into the chosen atom
};

/**
 * The randomized witness construction: draws z : {1..d} -> K with product
 * law kappa, forms phi_z(atom) = phi_H(range-part) & intersections of
 * sigma-pullbacks of psi_z, repairs the deficit into atom 0, and evaluates
 * membership at tolerance c (eps + delta).  F must be inverse-closed
 * global automorphisms of H; R a partition of H^0.
 */
WitnessHomResult random_witness_hom(const BernoulliExtension& ext, SoficMap& sigma,
                                    const std::vector<PartialAutomorphism>& F,
                                    const Partition& R,
                                    const std::vector<int>& symbol_block,
                                    const Rat& eps, const Rat& delta, int c,
                                    std::uint64_t z_seed);

// --- identity-extension baseline ---------------------------------------------

struct IdentityStage {
  int d = 0;
  bool hom_nonempty = false;
  double entropy_term = 0;  // d^{-1} log |Hom|_T, 0 when nonempty
};

/**
 * Identity extension pi_0 : H -> H with the trivial partition: builds the
 * peeled homomorphism at each stage, verifies membership at the given delta,
 * and reports the |Hom|_T entropy terms (0 whenever Hom is nonempty,
 * since the trivial restriction admits at most one class).
 */
std::vector<IdentityStage> identity_extension_entropy(
    const FiniteGroupoid& h, const std::vector<int>& multiplicities,
    const std::vector<PartialAutomorphism>& F, const Rat& delta);

}  // namespace sgl

#endif
