#ifndef SGL_PARTIAL_AUTO_HPP
#define SGL_PARTIAL_AUTO_HPP

#include <vector>

#include "sgl/groupoid.hpp"

namespace sgl {

/**
 * An element of [[H]]: a morphism subset with injective source and range
 * maps, over a fixed parent groupoid.  Membership is a flag vector over
 * morphism indices; values are immutable in spirit (operations return
 * fresh values).
 */
class PartialAutomorphism {
 public:
  PartialAutomorphism() = default;
  PartialAutomorphism(const FiniteGroupoid& parent, MorphSet members);

  // Identity-style element: the unit set P viewed inside [[H]].
  static PartialAutomorphism from_unit_set(const FiniteGroupoid& parent,
                                           const UnitSet& units);
  static PartialAutomorphism full_units(const FiniteGroupoid& parent);
  static PartialAutomorphism singleton(const FiniteGroupoid& parent, int morphism);

  const FiniteGroupoid& parent() const { return *parent_; }
  const MorphSet& members() const { return members_; }
  bool contains(int f) const { return members_[f]; }
  int size() const;
  bool valid() const;  // injectivity of source and range on members

  // Canonical key: sorted member index list.  Equal sets key equal
  // (almost-everywhere-equal keys coincide in the finite setting).
  std::vector<int> key() const;

  // by-source lookup: unit id -> member morphism or -1 (well-defined by
  // the injectivity invariant)
  int member_with_source(int uid) const { return by_source_[uid]; }
  int member_with_range(int uid) const { return by_range_[uid]; }

 private:
  const FiniteGroupoid* parent_ = nullptr;
  MorphSet members_;
  std::vector<int> by_source_;  // unit id -> morphism or -1
  std::vector<int> by_range_;
};

PartialAutomorphism pa_compose(const PartialAutomorphism& f,
                               const PartialAutomorphism& g);
PartialAutomorphism pa_invert(const PartialAutomorphism& f);
PartialAutomorphism pa_intersect(const PartialAutomorphism& f,
                                 const PartialAutomorphism& g);
Rat pa_trace(const PartialAutomorphism& f);    // tr_H = nu(f & H^0)
Rat pa_measure(const PartialAutomorphism& f);  // |f|_H = nu(f)
Rat pa_sym_diff_measure(const PartialAutomorphism& f, const PartialAutomorphism& g);

// f . P := r(f P): ranges of members whose source lies in P.
UnitSet act(const PartialAutomorphism& f, const UnitSet& p);

// s(f), r(f), f & H^0 as unit-set elements of [[H]]
PartialAutomorphism pa_source_set(const PartialAutomorphism& f);
PartialAutomorphism pa_range_set(const PartialAutomorphism& f);
PartialAutomorphism pa_unit_part(const PartialAutomorphism& f);

}  // namespace sgl

#endif
