#ifndef SGL_PARTIAL_BIJ_HPP
#define SGL_PARTIAL_BIJ_HPP

#include <string>
#include <vector>

#include "sgl/rational.hpp"

namespace sgl {

/**
 * An element of [[d]]: a partial injective self-map of {1..d}, stored as
 * forward (source -> range) and backward (range -> source) index arrays
 * with -1 for "undefined".  Indices are 0-based internally; the textual
 * literal form is 1-based.  Values are immutable in spirit: every
 * operation returns a fresh value.
 */
class PartialBijection {
 public:
  PartialBijection() = default;
  explicit PartialBijection(int d) : d_(d), fwd_(d, -1), bwd_(d, -1) {}

  static PartialBijection identity(int d);
  // pairs are (range, source), 0-based
  static PartialBijection from_pairs(int d, const std::vector<std::pair<int, int>>& pairs);

  int d() const { return d_; }
  int size() const;                    // |f| = number of pairs
  int apply(int src) const { return fwd_[src]; }      // -1 if undefined
  int preimage(int rng) const { return bwd_[rng]; }   // -1 if undefined
  bool has_pair(int rng, int src) const { return fwd_[src] == rng; }

  // Mutators used only by builders/corruption; keep the invariant yourself
  // by going through insert/erase.
  void insert(int rng, int src);       // throws if src or rng occupied
  void erase_by_source(int src);

  std::vector<std::pair<int, int>> pairs() const;  // (range, source), sorted by source

  PartialBijection inverse() const;
  // domain/range as index sets
  std::vector<char> src_set() const;
  std::vector<char> rng_set() const;
  // restriction to a source subset / range subset
  PartialBijection restrict_src(const std::vector<char>& keep) const;

  // image of an index set under f (r(f S) with out-of-domain dropped)
  std::vector<char> image(const std::vector<char>& s) const;
  // preimage of an index set under f
  std::vector<char> preimage_set(const std::vector<char>& s) const;

  bool operator==(const PartialBijection& o) const {
    return d_ == o.d_ && fwd_ == o.fwd_;
  }

 private:
  int d_ = 0;
  std::vector<int> fwd_;
  std::vector<int> bwd_;
};

// fg = {(i,k) : (i,j) in f, (j,k) in g}; throws on dimension mismatch.
PartialBijection compose(const PartialBijection& f, const PartialBijection& g);

// tr_d(f) = |f & diagonal| / d
Rat tr_d(const PartialBijection& f);
// |f|_d = |f| / d
Rat norm_d(const PartialBijection& f);
// |f delta g| / d
Rat sym_diff_d(const PartialBijection& f, const PartialBijection& g);
int sym_diff_count(const PartialBijection& f, const PartialBijection& g);

// Intersection with the diagonal, as an element of [[d]].
PartialBijection diagonal_part(const PartialBijection& f);
// Identity on the source set / range set of f (s(f), r(f) as elements of [[d]]).
PartialBijection src_identity(const PartialBijection& f);
PartialBijection rng_identity(const PartialBijection& f);

// Textual literal: "d=3; (2,1)(3,2)" with 1-based (range, source) pairs,
// printed canonically with pairs sorted by source.
std::string to_literal(const PartialBijection& f);
PartialBijection from_literal(const std::string& text);

}  // namespace sgl

#endif
