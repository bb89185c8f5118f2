#ifndef SGL_METRIC_HPP
#define SGL_METRIC_HPP

#include <cstdint>
#include <vector>

#include "sgl/partition.hpp"
#include "sgl/sofic.hpp"

namespace sgl {

/**
 * Pseudo-metric on a finite point set with the adjoined symbol star
 * (index -1 in tuples): rho(star, x) = diameter for x != star,
 * rho(star, star) = 0.  Values are exact rationals stored as integers over
 * a common denominator so tuple-distance comparisons stay exact and fast.
 */
class PseudoMetric {
 public:
  PseudoMetric() = default;
  // values[i][j]: symmetric, zero diagonal, triangle inequality (validated)
  explicit PseudoMetric(const std::vector<std::vector<Rat>>& values);

  static PseudoMetric discrete(int n);  // 0/1 metric

  int points() const { return n_; }
  Rat value(int a, int b) const;  // -1 accepted as star
  // scaled integer value (common denominator scale())
  long long scaled(int a, int b) const;
  long long scale() const { return scale_; }
  long long scaled_diameter() const { return diameter_; }

 private:
  int n_ = 0;
  long long scale_ = 1;
  long long diameter_ = 0;
  std::vector<std::vector<long long>> v_;
};

// d-tuples over points union {star}; star entries are -1.
using Tuple = std::vector<int>;

// rho_2(x,y)^2 * d * scale^2 as an exact integer (for comparisons against
// epsilon^2: rho_2 > eps  <=>  rho2_sq_scaled > eps^2 d scale^2).
__int128 rho2_sq_scaled(const PseudoMetric& rho, const Tuple& x, const Tuple& y);
// rho_inf * scale as exact integer
long long rho_inf_scaled(const PseudoMetric& rho, const Tuple& x, const Tuple& y);

double rho2(const PseudoMetric& rho, const Tuple& x, const Tuple& y);
double rho_inf(const PseudoMetric& rho, const Tuple& x, const Tuple& y);

enum class RhoFlavor { two, inf };

// exact comparison helpers: dist(x,y) OP eps with eps rational
bool tuple_dist_greater(const PseudoMetric& rho, RhoFlavor flavor, const Tuple& x,
                        const Tuple& y, const Rat& eps);
bool tuple_dist_less(const PseudoMetric& rho, RhoFlavor flavor, const Tuple& x,
                     const Tuple& y, const Rat& eps);

// --- approximate partial orbits --------------------------------------------

enum class OrbitFlavor { nu, mu };  // test functions on H^0 vs G^0

struct TestFunction {
  std::vector<Rat> values;  // on units of H (nu flavor) or G (mu flavor)
};

struct OrbitReport {
  bool member = false;
  // margins: delta - rho_2(f.x, x o sigma(f)) per f, then delta - |avg - integral| per k
  std::vector<Rat> equivariance_margin_sq;  // delta^2 - rho_2^2, exact surrogate
  std::vector<Rat> statistics_margin;
};

/**
 * Membership of a d-tuple x over G^0 in Orb(pi, sigma, F, K, delta, rho):
 * delta > rho_2(f.x, x o sigma(f)) for every f in F, and
 * delta > |d^{-1} sum k(pi(x_i)) - integral k dnu|   (nu flavor, K on H^0)
 * delta > |d^{-1} sum k(x_i) - integral k dmu|       (mu flavor, K on G^0).
 * Undefined entries become star; the equivariance margin is reported as
 * delta^2 - rho_2^2 to stay rational.
 */
OrbitReport orbit_membership(const Tuple& x, SoficMap& sigma, const GroupoidMorphism& pi,
                             const std::vector<PartialAutomorphism>& F,
                             const std::vector<TestFunction>& K, const Rat& delta,
                             const PseudoMetric& rho, OrbitFlavor flavor);

// --- separated / spanning ----------------------------------------------------

// Exact maximum independent set of the "close" graph; branch and bound,
// intended for <= ~40 vertices.
int max_independent_set_exact(const std::vector<std::vector<char>>& close);

struct SeparatedOptions {
  int exact_budget = 40;  // switch to greedy above this many points
};

// Maximum (rho, eps)-separated subset size (pairwise distance > eps).
// Exact within budget; otherwise a maximal separated set (greedy), which
// by the sandwich argument 2eps-spans.
struct SeparatedResult {
  int count = 0;
  bool exact = true;
};
SeparatedResult separated_max(const std::vector<Tuple>& xs, const PseudoMetric& rho,
                              RhoFlavor flavor, const Rat& eps,
                              const SeparatedOptions& opts = {});

// Minimum subset of `ambient` coming strictly within eps of every point of
// xs; exact set-cover branch and bound within budget, else greedy with a
// ln-factor caveat.
struct SpanningResult {
  int count = 0;
  bool exact = true;
  bool feasible = true;  // some xs point not covered by any ambient candidate
};
SpanningResult spanning_min(const std::vector<Tuple>& xs, const std::vector<Tuple>& ambient,
                            const PseudoMetric& rho, RhoFlavor flavor, const Rat& eps,
                            int exact_budget = 25);

// --- finite-stage metric entropy --------------------------------------------

struct MetricStageResult {
  int d = 0;
  std::uint64_t orbit_size = 0;
  int n_eps = 0;
  bool exact = true;      // orbit enumerated exactly and N_eps exact
  double entropy_term = 0;  // -inf sentinel when N = 0
};

/**
 * Enumerates the orbit set over (G^0)^d when |G^0|^d <= budget and returns
 * d^{-1} log N_eps; above budget, samples tuples satisfying the empirical
 * constraint and reports a greedy lower bound.
 */
MetricStageResult metric_stage_entropy(SoficMap& sigma, const GroupoidMorphism& pi,
                                       const std::vector<PartialAutomorphism>& F,
                                       const std::vector<TestFunction>& K,
                                       const Rat& delta, const PseudoMetric& rho,
                                       RhoFlavor flavor, OrbitFlavor orbit_flavor,
                                       const Rat& eps, std::uint64_t budget = 20000000ULL,
                                       std::uint64_t sample_count = 20000,
                                       std::uint64_t seed = 1);

}  // namespace sgl

#endif
