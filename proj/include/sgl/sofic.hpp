#ifndef SGL_SOFIC_HPP
#define SGL_SOFIC_HPP

#include <map>
#include <memory>
#include <vector>

#include "sgl/partial_auto.hpp"
#include "sgl/partial_bij.hpp"
#include "sgl/rng.hpp"

namespace sgl {

/**
 * A finite assignment sigma : [[H]] -> [[d]] on a declared key set, with
 * optional auto-extension: unassigned keys are filled from the exact
 * quotient construction, so corrupted maps stay exact away from the
 * corrupted entries.  Keys are canonical sorted morphism-index lists.
 */
class SoficMap {
 public:
  struct ExactLayout;  // layout of the exact quotient construction (see .cpp)

  SoficMap(const FiniteGroupoid& h, int d) : h_(&h), d_(d) {}

  const FiniteGroupoid& groupoid() const { return *h_; }
  int d() const { return d_; }

  void assign(const PartialAutomorphism& key, PartialBijection value);
  bool has(const PartialAutomorphism& key) const;
  // Looks the key up; if absent and auto-extension is enabled, computes the
  // exact image, records it, and notes the key in added_keys().
  const PartialBijection& at(const PartialAutomorphism& key);
  const std::vector<std::vector<int>>& added_keys() const { return added_; }

  void enable_exact_extension(bool on) { exact_extension_ = on; }
  bool exact_extension() const { return exact_extension_; }

  // Canonical unit tuple of the exact quotient construction: point p maps to
  // the range unit of its fiber morphism.  Exactly equivariant under the
  // exact map.  Throws when the map was not built from the quotient layout.
  std::vector<int> canonical_units() const;

 private:
  friend SoficMap exact_sofic_from_quotient(const FiniteGroupoid&, int);
  const FiniteGroupoid* h_;
  int d_;
  bool exact_extension_ = false;
  std::map<std::vector<int>, PartialBijection> table_;
  std::vector<std::vector<int>> added_;
  std::shared_ptr<const ExactLayout> layout_;
  PartialBijection exact_image(const PartialAutomorphism& key) const;
};

/**
 * Exact sofic map of a finite pmp groupoid: disjoint weighted copies of
 * left translation on one source fiber per connected component, with copy
 * counts chosen so traces are reproduced exactly.  All defects are 0.
 * The resulting degree is multiplicity * M where M is the groupoid's
 * minimal exact degree (see exact_degree_unit).
 */
SoficMap exact_sofic_from_quotient(const FiniteGroupoid& h, int multiplicity);

// M such that exact_sofic_from_quotient(h, n) has d = n * M.
int exact_degree_unit(const FiniteGroupoid& h);

struct DefectReport {
  Rat mult_defect = 0;   // max over F x F of |sigma(st) delta sigma(s)sigma(t)|_d
  Rat trace_defect = 0;  // max over F of |tr_d(sigma(s)) - tr_H(s)|
  Rat cont_defect = 0;   // max over F x F of (|sigma_f delta sigma_g|_d - nu(f delta g))+, floored at 0
};

// F is supplied as a list of keys; products st are auto-extended (and
// reported via sigma.added_keys()) when absent.
DefectReport measure_defects(SoficMap& sigma, const std::vector<PartialAutomorphism>& F);

// In-place random corruption of sigma(key): `ops` random swap/delete/insert
// edits keeping the value a valid partial bijection.
void corrupt_assignment(SoficMap& sigma, const PartialAutomorphism& key, int ops,
                        SplitRng& rng);

struct BoundReport {
  // parallel arrays: measured left-hand sides, their bounds, slack = bound - lhs
  std::vector<Rat> lhs;
  std::vector<Rat> bound;
  Rat delta = 0;  // the measured defect the bounds are scaled from
  bool holds() const {
    for (size_t i = 0; i < lhs.size(); ++i)
      if (lhs[i] > bound[i]) return false;
    return true;
  }
  Rat min_slack() const;
};

// Defect-propagation bounds (delta measured, never supplied):
// (1) |sigma(P) delta (sigma(P) & diag)|_d <= delta
// (2) |s(sigma(f)) delta sigma(s(f))|_d   <= 10 delta
// (3) |r(sigma(f)) delta sigma(r(f))|_d   <= 10 delta
// (4) |sigma(f^{-1}) delta sigma(f)^{-1}|_d <= 15 delta
BoundReport check_lemma33(SoficMap& sigma, const PartialAutomorphism& f,
                          const PartialAutomorphism& p);

// |sigma_f delta sigma_g|_d <= 58 delta + nu(f delta g),
// delta = max(mult, trace defect) on {f, g, f^{-1}g, f^{-1}, s(f), r(f), s(g), r(g)}
BoundReport check_lemma82(SoficMap& sigma, const PartialAutomorphism& f,
                          const PartialAutomorphism& g);

// |sigma(f & H^0) delta (sigma(f) & diag)|_d <= 9 delta
BoundReport check_lemma126(SoficMap& sigma, const PartialAutomorphism& f);

}  // namespace sgl

#endif
