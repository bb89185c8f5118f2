#ifndef SGL_GROUPOID_HPP
#define SGL_GROUPOID_HPP

#include <string>
#include <vector>

#include "sgl/rational.hpp"

namespace sgl {

/** A single axiom violation with a human-readable witness. */
struct Violation {
  std::string axiom;    // e.g. "axiom3-range", "pmp", "weights-sum"
  std::string witness;  // offending morphism indices / values
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

// A set of units, indexed by unit id (0..n_units-1); membership flags.
using UnitSet = std::vector<char>;

// A set of morphisms, indexed by morphism id; membership flags.
using MorphSet = std::vector<char>;

/**
 * Finite discrete pmp groupoid given by dense tables.
 *
 * Morphisms are indexed 0..m-1; units are the morphisms x with i(x) = x,
 * carrying their own contiguous unit ids 0..n-1 and a rational weight
 * (the unit measure nu on H^0).  compose[f][g] is the morphism fg when
 * s(f) = r(g) and -1 otherwise.  Immutable after construction; safe to
 * share read-only among any number of workers.
 */
struct FiniteGroupoid {
  int m = 0;                              // number of morphisms
  std::vector<int> source;                // morphism -> unit morphism id
  std::vector<int> range;                 // morphism -> unit morphism id
  std::vector<int> inverse;               // morphism -> morphism id
  std::vector<std::vector<int>> compose;  // m x m, -1 when not composable
  std::vector<int> units;                 // unit id -> morphism id (sorted)
  std::vector<int> unit_id;               // morphism id -> unit id or -1
  std::vector<Rat> unit_weight;           // unit id -> nu weight

  int n_units() const { return static_cast<int>(units.size()); }
  bool is_unit(int f) const { return unit_id[f] >= 0; }
  int uid_of_source(int f) const { return unit_id[source[f]]; }
  int uid_of_range(int f) const { return unit_id[range[f]]; }

  // nu(B) = sum_x nu(x) |s^{-1}(x) & B|; additive, extends unit_weight.
  Rat measure(const MorphSet& set) const;
  // tr_H(f) = nu(f & H^0)
  Rat trace(const MorphSet& set) const;

  UnitSet full_unit_set() const { return UnitSet(units.size(), 1); }
  MorphSet empty_morph_set() const { return MorphSet(m, 0); }
};

ValidationReport validate_groupoid(const FiniteGroupoid& g);

// --- standard example constructions ----------------------------------------

// Pair groupoid on {1..d} ("full groupoid" Delta_d), uniform weights 1/d.
FiniteGroupoid build_full_groupoid(int d);

// Group as a one-unit groupoid from a Cayley table (table[a][b] = ab).
FiniteGroupoid build_group_groupoid(const std::vector<std::vector<int>>& table);

// Cyclic group Z/k convenience builder.
FiniteGroupoid build_cyclic_group_groupoid(int k);

// Action groupoid of a group acting on points: morphisms are pairs (g, x),
// s(g,x) = x, r(g,x) = g.x.  act[g][x] must be a group action; weights
// uniform unless supplied.
FiniteGroupoid build_action_groupoid(const std::vector<std::vector<int>>& table,
                                     const std::vector<std::vector<int>>& act,
                                     const std::vector<Rat>& point_weights = {});

// Equivalence-relation groupoid from a class assignment point -> class id.
// Morphisms are pairs (y, x) in the same class; weights uniform unless given.
FiniteGroupoid build_relation_groupoid(const std::vector<int>& class_of,
                                       const std::vector<Rat>& point_weights = {});

// --- groupoid morphisms / extensions ---------------------------------------

/**
 * A groupoid morphism pi : G -> H as a total map on morphism indices.
 * Class-bijective extensions restrict to fiber bijections over every unit.
 */
struct GroupoidMorphism {
  const FiniteGroupoid* G = nullptr;
  const FiniteGroupoid* H = nullptr;
  std::vector<int> map;  // G morphism id -> H morphism id

  bool is_identity() const { return G == H; }
};

GroupoidMorphism identity_extension(const FiniteGroupoid& g);

// Checks morphism laws (composition, inversion, units) first, then the
// class-bijectivity of fiber-restricted source maps at every unit of G.
ValidationReport class_bijective_check(const GroupoidMorphism& pi);

// Cocycle extension: G = H x X for a group action c : X -> X indexed by a
// group element attached to each morphism of H.  cocycle[f] is a group
// element index; act is the auxiliary group's action on X.  Morphisms are
// pairs (f, x) with s = (s(f), x), r = (r(f), c(f).x).
FiniteGroupoid build_cocycle_extension(const FiniteGroupoid& h,
                                       const std::vector<int>& cocycle,
                                       const std::vector<std::vector<int>>& group_table,
                                       const std::vector<std::vector<int>>& act,
                                       GroupoidMorphism* projection_out);

// --- exchange format --------------------------------------------------------

// Structured text listing units, morphisms (id, source, range, inverse),
// composition triples and unit weights as exact "p/q" strings.
// Round-trips bit-exactly.
std::string groupoid_to_text(const FiniteGroupoid& g);
FiniteGroupoid groupoid_from_text(const std::string& text);

// Connected components of the unit space (orbits under morphisms):
// returns unit id -> component id.
std::vector<int> unit_components(const FiniteGroupoid& g);

}  // namespace sgl

#endif
