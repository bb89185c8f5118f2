#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sgl/groupoid.hpp"
#include "sgl/partial_auto.hpp"
#include "sgl/partial_bij.hpp"
#include "sgl/rng.hpp"

using namespace sgl;

namespace {

PartialBijection random_pb(int d, SplitRng& rng) {
  std::vector<int> srcs, rngs;
  for (int i = 0; i < d; ++i) {
    srcs.push_back(i);
    rngs.push_back(i);
  }
  // shuffle both and take a random-length prefix pairing
  for (int i = d - 1; i > 0; --i) {
    std::swap(srcs[i], srcs[rng.below(i + 1)]);
    std::swap(rngs[i], rngs[rng.below(i + 1)]);
  }
  int k = static_cast<int>(rng.below(d + 1));
  PartialBijection f(d);
  for (int i = 0; i < k; ++i) f.insert(rngs[i], srcs[i]);
  return f;
}

}  // namespace

TEST_CASE("composition follows the pair-matching rule") {
  // 0-based: f = {(1,0)}, g = {(0,2)} -> fg = {(1,2)}
  PartialBijection f = PartialBijection::from_pairs(3, {{1, 0}});
  PartialBijection g = PartialBijection::from_pairs(3, {{0, 2}});
  PartialBijection fg = compose(f, g);
  CHECK(fg.pairs() == std::vector<std::pair<int, int>>{{1, 2}});

  // no matching middle index -> empty
  PartialBijection h = PartialBijection::from_pairs(3, {{2, 1}});
  CHECK(compose(h, g).size() == 0);
}

TEST_CASE("identity is neutral for composition") {
  SplitRng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    PartialBijection g = random_pb(5, rng);
    CHECK(compose(PartialBijection::identity(5), g) == g);
    CHECK(compose(g, PartialBijection::identity(5)) == g);
  }
}

TEST_CASE("composition equals the 0/1 matrix-product oracle at d=6") {
  SplitRng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    PartialBijection f = random_pb(6, rng), g = random_pb(6, rng);
    PartialBijection fg = compose(f, g);
    for (int i = 0; i < 6; ++i)
      for (int k = 0; k < 6; ++k) {
        int prod = 0;
        for (int j = 0; j < 6; ++j) prod += f.has_pair(i, j) && g.has_pair(j, k);
        CHECK(fg.has_pair(i, k) == (prod == 1));
      }
  }
}

TEST_CASE("trace, norm and symmetric difference basics") {
  CHECK(tr_d(PartialBijection::identity(5)) == Rat(1));
  PartialBijection f = PartialBijection::from_pairs(4, {{0, 1}});
  PartialBijection g = PartialBijection::from_pairs(4, {{1, 0}});
  CHECK(sym_diff_d(f, f) == Rat(0));
  CHECK(sym_diff_d(f, g) == Rat(2, 4));
  CHECK(norm_d(f) == Rat(1, 4));
}

TEST_CASE("inverse-semigroup laws on random values") {
  SplitRng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    PartialBijection f = random_pb(6, rng), g = random_pb(6, rng),
                     h = random_pb(6, rng);
    CHECK(compose(compose(f, g), h) == compose(f, compose(g, h)));
    CHECK(compose(f, g).inverse() == compose(g.inverse(), f.inverse()));
    CHECK(compose(compose(f, f.inverse()), f) == f);
    CHECK(tr_d(f) == tr_d(f.inverse()));
    CHECK(norm_d(f) == norm_d(f.inverse()));
  }
}

TEST_CASE("containment bound nu(stu delta st'u) <= nu(t delta t') in [[d]]") {
  SplitRng rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    PartialBijection s = random_pb(6, rng), t = random_pb(6, rng),
                     t2 = random_pb(6, rng), u = random_pb(6, rng);
    Rat lhs = sym_diff_d(compose(compose(s, t), u), compose(compose(s, t2), u));
    CHECK(lhs <= sym_diff_d(t, t2));
  }
}

TEST_CASE("literal form round-trips canonically") {
  PartialBijection f = from_literal("d=3; (2,1)(3,2)");
  CHECK(f.pairs() == std::vector<std::pair<int, int>>{{1, 0}, {2, 1}});
  CHECK(to_literal(f) == "d=3; (2,1)(3,2)");
  CHECK(to_literal(from_literal("d=4;")) == "d=4;");
}

TEST_CASE("partial automorphisms: action and trace basics") {
  FiniteGroupoid d3 = build_full_groupoid(3);
  PartialAutomorphism units = PartialAutomorphism::full_units(d3);
  UnitSet p(3, 0);
  p[0] = 1;
  p[2] = 1;
  CHECK(act(units, p) == p);

  // morphism (2,1): 0-based pair index 1*3 + 0
  PartialAutomorphism f = PartialAutomorphism::singleton(d3, 1 * 3 + 0);
  UnitSet q(3, 0);
  q[0] = 1;
  UnitSet fq = act(f, q);
  CHECK(fq == UnitSet{0, 1, 0});
  CHECK(pa_trace(units) == Rat(1));
  CHECK(pa_trace(f) == Rat(0));
  CHECK(pa_measure(f) == Rat(1, 3));
}

TEST_CASE("pa_compose then act equals act-then-act on all subsets") {
  FiniteGroupoid rel = build_relation_groupoid({0, 0, 1, 1});
  std::vector<PartialAutomorphism> elems;
  // a few random valid members
  SplitRng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    MorphSet mem(rel.m, 0);
    for (int f = 0; f < rel.m; ++f) mem[f] = rng.below(3) == 0;
    try {
      elems.emplace_back(rel, mem);
    } catch (const std::invalid_argument&) {
    }
  }
  REQUIRE(elems.size() >= 2);
  for (size_t a = 0; a < elems.size(); ++a)
    for (size_t b = 0; b < elems.size(); ++b)
      for (int mask = 0; mask < 16; ++mask) {
        UnitSet p(4, 0);
        for (int u = 0; u < 4; ++u) p[u] = (mask >> u) & 1;
        CHECK(act(pa_compose(elems[a], elems[b]), p) ==
              act(elems[a], act(elems[b], p)));
      }
}

TEST_CASE("containment bound in [[H]] with exact measures") {
  FiniteGroupoid rel = build_relation_groupoid({0, 0, 0, 1});
  SplitRng rng(29);
  auto random_pa = [&]() {
    for (;;) {
      MorphSet mem(rel.m, 0);
      for (int f = 0; f < rel.m; ++f) mem[f] = rng.below(3) == 0;
      try {
        return PartialAutomorphism(rel, mem);
      } catch (const std::invalid_argument&) {
      }
    }
  };
  for (int trial = 0; trial < 100; ++trial) {
    PartialAutomorphism s = random_pa(), t = random_pa(), t2 = random_pa(),
                        u = random_pa();
    Rat lhs = pa_sym_diff_measure(pa_compose(pa_compose(s, t), u),
                                  pa_compose(pa_compose(s, t2), u));
    CHECK(lhs <= pa_sym_diff_measure(t, t2));
  }
}

TEST_CASE("invalid member sets are rejected at construction") {
  FiniteGroupoid d2 = build_full_groupoid(2);
  // (1,1) and (1,2) share the range unit 1 -> range map not injective
  CHECK_THROWS_AS(PartialAutomorphism(d2, MorphSet{1, 1, 0, 0}),
                  std::invalid_argument);
}
