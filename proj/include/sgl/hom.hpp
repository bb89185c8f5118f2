#ifndef SGL_HOM_HPP
#define SGL_HOM_HPP

#include <cstdint>
#include <functional>
#include <set>
#include <vector>

#include "sgl/partition.hpp"
#include "sgl/sofic.hpp"

namespace sgl {

/**
 * A set-algebra homomorphism Sigma(P^F) -> subsets of {1..d} with
 * phi(G^0) = Delta_d^0, stored as an atom labeling of {1..d}.  Every such
 * homomorphism is of this form and conversely (the finite representation
 * theorem): phi is determined by where it sends the atoms, the atom images
 * must partition {1..d} because phi preserves disjoint unions and
 * complements, and any labeling defines such a phi.
 */
struct HomLabeling {
  int d = 0;
  std::vector<int> label;  // index in {1..d} -> atom id of P^F

  std::vector<char> set_of_atoms(const std::vector<char>& atom_subset) const;
};

struct GoodHomReport {
  bool pass = false;
  std::vector<Rat> cond1;  // per f in F: sum over blocks of |sigma_f.phi(P) delta phi(f.P)|/d
  Rat cond2 = 0;           // sum over atoms of ||phi(A)|/d - mu(A)|
  Rat delta;
};

GoodHomReport is_good_hom(SoficMap& sigma, const RefinedPartition& rp,
                          const HomLabeling& phi, const Rat& delta);

// Verifies Q <= P^F: every Q block is a union of atoms; returns atom -> Q
// block.  Throws otherwise (restriction would be ill-typed).
std::vector<int> coarsen_to(const RefinedPartition& rp, const Partition& q);

struct HomCountResult {
  unsigned long long hom_count = 0;
  unsigned long long restricted_count = 0;
  bool exact = true;
  // distinct Q-coarsened labelings of the passers (capped in MC mode)
  std::set<std::vector<std::uint8_t>> restrictions;
};

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/**
 * Enumerates all |atoms|^d labelings; throws BudgetExceeded beyond the
 * budget (default 2e8) directing the caller to count_hom_mc.  on_passer,
 * when set, receives every passing labeling.
 */
HomCountResult count_hom_exact(
    SoficMap& sigma, const RefinedPartition& rp, const Rat& delta,
    const std::vector<int>& q_of_atom, std::uint64_t budget = 200000000ULL,
    const std::function<void(const std::vector<int>&)>& on_passer = nullptr);

struct HomEstimate {
  double hom_estimate = 0;       // |atoms|^d * pass fraction (unbiased)
  double ci_low = 0, ci_high = 0;  // normal-approx 95% interval
  unsigned long long samples = 0, passers = 0;
  // captured distinct restrictions: a lower bound with a documented
  // downward bias (sampling cannot certify completeness)
  unsigned long long restricted_capture = 0;
};

HomEstimate count_hom_mc(SoficMap& sigma, const RefinedPartition& rp, const Rat& delta,
                         const std::vector<int>& q_of_atom, std::uint64_t samples,
                         std::uint64_t seed);

// Per stage j: d_j^{-1} log || count ||_{p, ensemble_j} with equal weights;
// p = infinity accepted as INFINITY.  Zero counts yield -inf terms.
std::vector<double> stage_entropy_terms(const std::vector<int>& stage_d,
                                        const std::vector<std::vector<double>>& counts,
                                        double p);

// rho_Q(phi, psi) = max over Q blocks of |phi(Q) delta psi(Q)|/d
Rat rho_Q_distance(const HomLabeling& phi, const HomLabeling& psi,
                   const std::vector<int>& q_of_atom, int n_q);

// Maximum epsilon-separated subset of the given labelings under rho_Q
// (exact via the metric module's branch-and-bound).
int separated_count_homs(const std::vector<HomLabeling>& homs,
                         const std::vector<int>& q_of_atom, int n_q,
                         const Rat& epsilon);

}  // namespace sgl

#endif
