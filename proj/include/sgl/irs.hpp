#ifndef SGL_IRS_HPP
#define SGL_IRS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sgl/groupoid.hpp"
#include "sgl/partial_auto.hpp"
#include "sgl/partial_bij.hpp"
#include "sgl/rational.hpp"
#include "sgl/sofic.hpp"

namespace sgl {

/** Finite group as a Cayley table (group axioms checked by validate). */
struct FiniteGroupTable {
  int n = 0;
  std::vector<std::vector<int>> mult;  // mult[a][b] = ab
  int identity = 0;
  std::vector<int> inverse;
  std::vector<std::string> names;  // "e", "a", "b", ... unless supplied

  void validate() const;

  static FiniteGroupTable cyclic(int n);
  static FiniteGroupTable klein4();
  static FiniteGroupTable dihedral(int n);  // order 2n
  static FiniteGroupTable symmetric3();
};

// Group table exchange format: one Cayley row of element indices per line.
FiniteGroupTable group_from_text(const std::string& text);
std::string group_to_text(const FiniteGroupTable& g);

// --- subgroup lattice (bitmask subsets, n <= 64) ----------------------------

bool is_subgroup(const FiniteGroupTable& g, std::uint64_t mask);
std::vector<std::uint64_t> all_subgroups(const FiniteGroupTable& g);
std::uint64_t conjugate_subgroup(const FiniteGroupTable& g, std::uint64_t mask, int a);

/** IRS candidate: weights on subgroups, constant on conjugacy classes. */
struct StabilizerDistribution {
  std::vector<std::uint64_t> support;  // element-set bitmasks
  std::vector<Rat> weights;

  // subgroup membership, positive weights summing to 1,
  // conjugation-invariance of the weight function
  void validate(const FiniteGroupTable& g) const;
};

// IRS file format: lines "subgroup = {e, a}; weight = 1/2".
StabilizerDistribution irs_from_text(const FiniteGroupTable& g, const std::string& text);
std::string irs_to_text(const FiniteGroupTable& g, const StabilizerDistribution& eta);

// --- permutation-valued maps -------------------------------------------------

/** A map G -> Sym(d): one total permutation per group element. */
struct SymMap {
  int d = 0;
  std::vector<std::vector<int>> perm;  // perm[g][q]

  void validate(const FiniteGroupTable& g) const;  // totality and bijectivity

  static SymMap regular(const FiniteGroupTable& g);
  static SymMap trivial(const FiniteGroupTable& g, int d);
  // through a surjection onto quotient indices acting on d points
  static SymMap from_action(const FiniteGroupTable& g,
                            const std::vector<std::vector<int>>& act);
  static SymMap direct_sum(const FiniteGroupTable& g, const SymMap& a, const SymMap& b);
};

struct StabResult {
  std::uint64_t set = 0;    // {g : sigma(g) q = q}
  bool subgroup = false;    // need not be one when sigma is not multiplicative
};
StabResult stab_map(const FiniteGroupTable& g, const SymMap& sigma, int q);

// --- sofic IRS check ---------------------------------------------------------

struct IrsCheckReport {
  bool pass = false;
  Rat worst_mult_fraction = 1;  // min over pairs in K of the agreeing fraction
  Rat tv_distance = 0;          // windowed total-variation distance to eta
};

/**
 * Condition (1): for every pair (a, b) in K the fraction of points where
 * sigma(a) sigma(b) and sigma(ab) agree is at least 1 - delta.
 * Condition (2): the pushforward of the uniform measure on {1..d} under
 * q -> Stab(q) & K_window lies within omega_radius of eta (windowed the
 * same way) in total variation.
 */
IrsCheckReport check_sofic_irs(const FiniteGroupTable& g,
                               const StabilizerDistribution& eta,
                               const std::vector<int>& K, const Rat& delta,
                               const Rat& omega_radius, const SymMap& sigma);

// --- principal groupoid of a finite action -----------------------------------

/** A finite action of a finite group with rational point weights. */
struct GroupAction {
  const FiniteGroupTable* group = nullptr;
  int points = 0;
  std::vector<std::vector<int>> act;  // act[g][x]
  std::vector<Rat> weights;           // probability weights on points

  void validate() const;
  int apply(int g, int x) const { return act[g][x]; }
};

// Morphisms are orbit-equivalent pairs (y, x); weights push forward.
FiniteGroupoid principal_groupoid(const GroupAction& action);

// --- sofic-with-stabilizers check --------------------------------------------

struct StabilizersCheckReport {
  bool pass = false;
  Rat worst_pair_diff = 0;  // max over pairs in K of |sigma(a)sigma(b) delta sigma(ab)|_d
  Rat tv_distance = 0;      // signature distribution distance
};

/**
 * Compares the action signatures Psi(x)(k) = (Stab(k x) & K, P(k x)) under
 * the point weights with the candidate signatures
 * Phi(q)(k) = (Stab_sigma(sigma(k) q) & K, phi(sigma(k) q)) under the
 * uniform measure, in total variation; also asserts pairwise
 * multiplicativity below epsilon on K.
 */
StabilizersCheckReport check_sofic_with_stabilizers(
    const GroupAction& action, const std::vector<int>& P, const std::vector<int>& K,
    const Rat& omega_radius, const Rat& epsilon, const SymMap& sigma,
    const std::vector<int>& phi);

// --- induced sofic map on the principal groupoid ------------------------------

/**
 * Translation table for one partial automorphism f of the principal
 * groupoid: a window K_f of group elements and disjoint point sets A(f, g)
 * on which f agrees with the action of g.  The identity entry must be
 * exactly the fixed-point set of f (when present), and the union must
 * cover s(f) up to the tolerance passed at assembly time.
 */
struct TranslationTable {
  std::vector<int> window;                  // K_f, group element ids
  std::vector<std::vector<char>> sets;      // parallel to window, subsets of X
};

// Default table: fixed points go to the identity entry, every other covered
// point to the smallest g realizing f there.  Covers s(f) completely.
TranslationTable default_translation_table(const GroupAction& action,
                                           const PartialAutomorphism& f);

struct InducedAssembly {
  PartialBijection value;     // the assembled partial bijection
  std::vector<char> bad;      // target points dropped by the overlap rule
  int dropped = 0;            // pairs removed because their target was bad
  Rat uncovered = 0;          // nu(s(f) minus the union of A(f, g))
};

/**
 * Assembles sigma~(f) = {(sigma(g) q, q) : phi(q) in A(f, g)} after removing
 * pairs whose target lies in the overlap set BAD(f); verifies the table
 * (disjointness, agreement with f, identity rule, coverage up to eps) and
 * the injectivity of the assembled map as a hard postcondition.
 */
InducedAssembly induce_one(const GroupAction& action, const PartialAutomorphism& f,
                           const SymMap& sigma, const std::vector<int>& phi,
                           const TranslationTable& table, const Rat& eps);

/**
 * Induced sofic map sigma~ on the principal groupoid: assembles every f in
 * F with its table (default tables built when absent).  Auto-extension is
 * left off; callers measuring defects supply composition products in F.
 */
SoficMap induced_sofic_map(const GroupAction& action, const FiniteGroupoid& h,
                           const std::vector<PartialAutomorphism>& F,
                           const SymMap& sigma, const std::vector<int>& phi,
                           const std::map<std::vector<int>, TranslationTable>& tables,
                           const Rat& eps);

}  // namespace sgl

#endif
