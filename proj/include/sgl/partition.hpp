#ifndef SGL_PARTITION_HPP
#define SGL_PARTITION_HPP

#include <vector>

#include "sgl/partial_auto.hpp"

namespace sgl {

/** A finite partition of the unit space of a groupoid. */
struct Partition {
  const FiniteGroupoid* base = nullptr;
  std::vector<int> label;  // unit id -> block id, 0..blocks-1
  int blocks = 0;

  static Partition trivial(const FiniteGroupoid& g);
  static Partition discrete(const FiniteGroupoid& g);
  static Partition from_labels(const FiniteGroupoid& g, std::vector<int> labels);

  UnitSet block_set(int b) const;
  Rat block_measure(int b) const;  // sum of unit weights
};

// f . P computed through an extension pi : G -> H for f in [[H]]:
// ranges of G-morphisms g with pi(g) in f and s(g) in P.
UnitSet act_through(const GroupoidMorphism& pi, const PartialAutomorphism& f,
                    const UnitSet& p);

/**
 * P^F: the coarsest partition of G^0 containing {f.P : f in F, P block of P},
 * computed through the extension pi.  Atoms are membership-signature classes,
 * ordered lexicographically by membership vector (deterministic).
 * F lives in [[H]] and must contain the units element H^0.
 */
struct RefinedPartition {
  Partition parent;
  const GroupoidMorphism* pi = nullptr;
  std::vector<PartialAutomorphism> F;    // over H
  std::vector<int> atom_of_unit;         // G unit -> atom id
  std::vector<std::vector<int>> atoms;   // atom id -> unit list
  std::vector<Rat> atom_measure;
  // in_fP[fi][block] over atoms: atom lies inside f.P_block
  std::vector<std::vector<std::vector<char>>> in_fP;
  // atoms making up each parent block
  std::vector<std::vector<char>> block_atoms;

  int n_atoms() const { return static_cast<int>(atoms.size()); }
};

RefinedPartition refine(const Partition& p, const std::vector<PartialAutomorphism>& F,
                        const GroupoidMorphism& pi);

// --- near-homomorphism (constructive peeling) -------------------------------

struct NearHomResult {
  bool precondition_ok = false;  // 3 n^3 delta < epsilon
  Rat delta;                     // max_i mu(P_i delta psi_i)
  Rat epsilon;
  std::vector<UnitSet> phi;      // genuine partition, one set per block
  Rat worst_error;               // max over S in Sigma(P) of mu(phi(S) delta S)
  bool bound_met = false;        // worst_error < epsilon
};

// Peeling construction: phi(P_i) = psi(P_i) \ union_{j<i} psi(P_j), last
// block as complement; rejects when 3 n^3 delta >= epsilon.
NearHomResult near_homomorphism(const Partition& p, const std::vector<UnitSet>& psi,
                                const Rat& epsilon);

// --- atom decomposition (closure hypothesis) --------------------------------

struct AtomDecomposition {
  std::vector<int> F_indices;  // maximal F_Y as indices into rp.F
  std::vector<int> Y_blocks;   // per entry: parent block id, or -1 for G^0
  bool exact = false;          // intersection reconstructs the atom
};

// Requires the closure hypothesis: r(f) and H^0 \ r(f) are members of F
// (as unit-set elements) for every f in F; throws otherwise.
AtomDecomposition atom_decomposition(const RefinedPartition& rp, int atom);

}  // namespace sgl

#endif
