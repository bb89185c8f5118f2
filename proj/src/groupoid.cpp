#include "sgl/groupoid.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace sgl {

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const auto& v : violations) out << v.axiom << ": " << v.witness << "\n";
  return out.str();
}

Rat FiniteGroupoid::measure(const MorphSet& set) const {
  // nu(B) = sum_{f in B} nu(s(f)); finite additivity over source fibers.
  Rat total = 0;
  for (int f = 0; f < m; ++f)
    if (set[f]) total += unit_weight[uid_of_source(f)];
  return total;
}

Rat FiniteGroupoid::trace(const MorphSet& set) const {
  Rat total = 0;
  for (int u = 0; u < n_units(); ++u)
    if (set[units[u]]) total += unit_weight[u];
  return total;
}

namespace {

void finalize_units(FiniteGroupoid& g) {
  g.unit_id.assign(g.m, -1);
  for (int u = 0; u < g.n_units(); ++u) g.unit_id[g.units[u]] = u;
}

std::string morph_name(int f) { return "morphism " + std::to_string(f); }

}  // namespace

ValidationReport validate_groupoid(const FiniteGroupoid& g) {
  ValidationReport rep;
  auto add = [&](const std::string& axiom, const std::string& witness) {
    rep.violations.push_back({axiom, witness});
  };

  // structural sanity of the tables
  if (static_cast<int>(g.source.size()) != g.m ||
      static_cast<int>(g.range.size()) != g.m ||
      static_cast<int>(g.inverse.size()) != g.m ||
      static_cast<int>(g.compose.size()) != g.m) {
    add("tables", "table sizes do not match morphism count");
    return rep;
  }
  for (int f = 0; f < g.m; ++f) {
    if (static_cast<int>(g.compose[f].size()) != g.m) {
      add("tables", "compose row " + std::to_string(f) + " has wrong width");
      return rep;
    }
  }
  for (int u : g.units)
    if (u < 0 || u >= g.m) {
      add("units", "unit morphism id out of range: " + std::to_string(u));
      return rep;
    }

  // axiom 1: s(i(x)) = r(i(x)) = x for units; units are their own s/r
  for (int uidx = 0; uidx < g.n_units(); ++uidx) {
    int x = g.units[uidx];
    if (g.source[x] != x || g.range[x] != x)
      add("axiom1-unit", morph_name(x) + " is declared a unit but s/r differ");
  }
  for (int f = 0; f < g.m; ++f) {
    if (g.unit_id[g.source[f]] < 0)
      add("axiom1-source", "s(" + std::to_string(f) + ") is not a unit");
    if (g.unit_id[g.range[f]] < 0)
      add("axiom1-range", "r(" + std::to_string(f) + ") is not a unit");
  }
  if (!rep.ok()) return rep;

  // axioms 2-3: composability iff s(f) = r(g); s(fg) = s(g), r(fg) = r(f)
  for (int f = 0; f < g.m; ++f) {
    for (int h = 0; h < g.m; ++h) {
      int fh = g.compose[f][h];
      bool composable = g.source[f] == g.range[h];
      if (composable && fh < 0)
        add("axiom2-defined", "(" + std::to_string(f) + "," + std::to_string(h) +
                                  ") composable but undefined");
      if (!composable && fh >= 0)
        add("axiom2-undefined", "(" + std::to_string(f) + "," + std::to_string(h) +
                                    ") not composable but defined");
      if (composable && fh >= 0) {
        if (g.source[fh] != g.source[h])
          add("axiom3-source", "s((" + std::to_string(f) + ")(" +
                                   std::to_string(h) + ")) != s(" + std::to_string(h) + ")");
        if (g.range[fh] != g.range[f])
          add("axiom3-range", "r((" + std::to_string(f) + ")(" +
                                  std::to_string(h) + ")) != r(" + std::to_string(f) + ")");
      }
    }
  }

  // units act as identities
  for (int f = 0; f < g.m; ++f) {
    int lu = g.range[f], ru = g.source[f];
    if (g.compose[lu][f] != f)
      add("unit-identity", "r(f) f != f at " + morph_name(f));
    if (g.compose[f][ru] != f)
      add("unit-identity", "f s(f) != f at " + morph_name(f));
  }

  // axiom 4: f^{-1} f = s(f), f f^{-1} = r(f); inversion is an involution
  for (int f = 0; f < g.m; ++f) {
    int fi = g.inverse[f];
    if (fi < 0 || fi >= g.m) {
      add("axiom4", "inverse out of range at " + morph_name(f));
      continue;
    }
    if (g.inverse[fi] != f)
      add("axiom4-involution", morph_name(f) + " has non-involutive inverse");
    if (g.source[fi] != g.range[f] || g.range[fi] != g.source[f])
      add("axiom4-swap", "inverse does not swap s/r at " + morph_name(f));
    if (g.source[fi] == g.range[f] && g.compose[fi][f] != g.source[f])
      add("axiom4-left", "f^{-1} f != s(f) at " + morph_name(f));
    if (g.source[f] == g.range[fi] && g.compose[f][fi] != g.range[f])
      add("axiom4-right", "f f^{-1} != r(f) at " + morph_name(f));
  }

  // associativity on all composable triples
  for (int f = 0; f < g.m; ++f)
    for (int h = 0; h < g.m; ++h) {
      if (g.compose[f][h] < 0) continue;
      for (int k = 0; k < g.m; ++k) {
        if (g.compose[h][k] < 0) continue;
        if (g.compose[g.compose[f][h]][k] != g.compose[f][g.compose[h][k]])
          add("associativity", "(" + std::to_string(f) + "," + std::to_string(h) +
                                   "," + std::to_string(k) + ")");
      }
    }

  // weights: nonnegative, sum to 1
  Rat total = 0;
  for (int u = 0; u < g.n_units(); ++u) {
    if (g.unit_weight[u] < 0)
      add("weights-nonneg", "unit " + std::to_string(u));
    total += g.unit_weight[u];
  }
  if (total != 1) add("weights-sum", "unit weights sum to " + format_rational(total));

  // pmp: checked on singleton morphism sets (finite additivity extends to
  // all sets); nu_s({f}) = nu(s(f)), nu_r({f}) = nu(r(f)).
  for (int f = 0; f < g.m; ++f) {
    if (g.unit_weight[g.uid_of_source(f)] != g.unit_weight[g.uid_of_range(f)])
      add("pmp", morph_name(f) + ": nu(s(f)) != nu(r(f))");
  }

  return rep;
}

// --- builders ---------------------------------------------------------------

namespace {

FiniteGroupoid assemble(int m, std::vector<int> source, std::vector<int> range,
                        std::vector<int> inverse, std::vector<std::vector<int>> compose,
                        std::vector<int> units, std::vector<Rat> weights) {
  FiniteGroupoid g;
  g.m = m;
  g.source = std::move(source);
  g.range = std::move(range);
  g.inverse = std::move(inverse);
  g.compose = std::move(compose);
  g.units = std::move(units);
  g.unit_weight = std::move(weights);
  finalize_units(g);
  return g;
}

}  // namespace

FiniteGroupoid build_full_groupoid(int d) {
  if (d <= 0) throw std::invalid_argument("full groupoid needs d >= 1");
  // morphism (i,j) = "j -> i", index i*d + j; units are (i,i)
  int m = d * d;
  std::vector<int> source(m), range(m), inverse(m), units(d);
  std::vector<std::vector<int>> compose(m, std::vector<int>(m, -1));
  auto id = [d](int i, int j) { return i * d + j; };
  for (int i = 0; i < d; ++i) {
    units[i] = id(i, i);
    for (int j = 0; j < d; ++j) {
      source[id(i, j)] = id(j, j);
      range[id(i, j)] = id(i, i);
      inverse[id(i, j)] = id(j, i);
    }
  }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) compose[id(i, j)][id(j, k)] = id(i, k);
  return assemble(m, source, range, inverse, compose, units,
                  std::vector<Rat>(d, Rat(1, d)));
}

FiniteGroupoid build_group_groupoid(const std::vector<std::vector<int>>& table) {
  int n = static_cast<int>(table.size());
  if (n == 0) throw std::invalid_argument("empty group table");
  // locate identity
  int e = -1;
  for (int a = 0; a < n; ++a) {
    bool ident = true;
    for (int b = 0; b < n; ++b)
      if (table[a][b] != b || table[b][a] != b) ident = false;
    if (ident) { e = a; break; }
  }
  if (e < 0) throw std::invalid_argument("group table has no identity");
  std::vector<int> source(n, e), range(n, e), inverse(n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (table[a][b] == e) inverse[a] = b;
  for (int a = 0; a < n; ++a)
    if (inverse[a] < 0) throw std::invalid_argument("group table lacks inverses");
  std::vector<std::vector<int>> compose(n, std::vector<int>(n, -1));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) compose[a][b] = table[a][b];
  return assemble(n, source, range, inverse, compose, {e}, {Rat(1)});
}

FiniteGroupoid build_cyclic_group_groupoid(int k) {
  std::vector<std::vector<int>> table(k, std::vector<int>(k));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) table[a][b] = (a + b) % k;
  return build_group_groupoid(table);
}

FiniteGroupoid build_action_groupoid(const std::vector<std::vector<int>>& table,
                                     const std::vector<std::vector<int>>& act,
                                     const std::vector<Rat>& point_weights) {
  int n = static_cast<int>(table.size());
  int npts = n ? static_cast<int>(act[0].size()) : 0;
  if (static_cast<int>(act.size()) != n)
    throw std::invalid_argument("action table must have one row per group element");
  // verify it is an action: e.x = x and (ab).x = a.(b.x)
  int e = -1;
  for (int a = 0; a < n && e < 0; ++a) {
    bool ident = true;
    for (int b = 0; b < n; ++b)
      if (table[a][b] != b || table[b][a] != b) ident = false;
    if (ident) e = a;
  }
  if (e < 0) throw std::invalid_argument("group table has no identity");
  for (int x = 0; x < npts; ++x)
    if (act[e][x] != x)
      throw std::invalid_argument("not an action: e.x != x at point " + std::to_string(x));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int x = 0; x < npts; ++x)
        if (act[table[a][b]][x] != act[a][act[b][x]])
          throw std::invalid_argument("not an action: failing pair (" +
                                      std::to_string(a) + "," + std::to_string(b) +
                                      ") at point " + std::to_string(x));

  // morphism (g, x): s = (e, x), r = (e, g.x); (h, g.x)(g, x) = (hg, x)
  int m = n * npts;
  auto id = [npts](int gidx, int x) { return gidx * npts + x; };
  std::vector<int> source(m), range(m), inverse(m), units(npts);
  std::vector<std::vector<int>> compose(m, std::vector<int>(m, -1));
  for (int x = 0; x < npts; ++x) units[x] = id(e, x);
  // group inverses
  std::vector<int> ginv(n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (table[a][b] == e) ginv[a] = b;
  for (int gidx = 0; gidx < n; ++gidx)
    for (int x = 0; x < npts; ++x) {
      source[id(gidx, x)] = id(e, x);
      range[id(gidx, x)] = id(e, act[gidx][x]);
      inverse[id(gidx, x)] = id(ginv[gidx], act[gidx][x]);
    }
  for (int h = 0; h < n; ++h)
    for (int gidx = 0; gidx < n; ++gidx)
      for (int x = 0; x < npts; ++x)
        compose[id(h, act[gidx][x])][id(gidx, x)] = id(table[h][gidx], x);
  std::vector<Rat> w = point_weights;
  if (w.empty()) w.assign(npts, Rat(1, npts));
  if (static_cast<int>(w.size()) != npts)
    throw std::invalid_argument("point weight count mismatch");
  return assemble(m, source, range, inverse, compose, units, w);
}

FiniteGroupoid build_relation_groupoid(const std::vector<int>& class_of,
                                       const std::vector<Rat>& point_weights) {
  int npts = static_cast<int>(class_of.size());
  // morphisms: ordered pairs (y, x) within a class, meaning x -> y
  std::vector<std::pair<int, int>> pairs;
  for (int y = 0; y < npts; ++y)
    for (int x = 0; x < npts; ++x)
      if (class_of[y] == class_of[x]) pairs.emplace_back(y, x);
  int m = static_cast<int>(pairs.size());
  std::map<std::pair<int, int>, int> idx;
  for (int i = 0; i < m; ++i) idx[pairs[i]] = i;
  std::vector<int> source(m), range(m), inverse(m), units(npts);
  std::vector<std::vector<int>> compose(m, std::vector<int>(m, -1));
  for (int x = 0; x < npts; ++x) units[x] = idx[{x, x}];
  for (int i = 0; i < m; ++i) {
    auto [y, x] = pairs[i];
    source[i] = idx[{x, x}];
    range[i] = idx[{y, y}];
    inverse[i] = idx[{x, y}];
  }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      auto [y, x] = pairs[i];
      auto [xx, w] = pairs[j];
      if (x == xx) compose[i][j] = idx[{y, w}];
    }
  std::vector<Rat> wts = point_weights;
  if (wts.empty()) wts.assign(npts, Rat(1, npts));
  if (static_cast<int>(wts.size()) != npts)
    throw std::invalid_argument("point weight count mismatch");
  return assemble(m, source, range, inverse, compose, units, wts);
}

// --- morphisms / extensions -------------------------------------------------

GroupoidMorphism identity_extension(const FiniteGroupoid& g) {
  GroupoidMorphism pi;
  pi.G = &g;
  pi.H = &g;
  pi.map.resize(g.m);
  for (int f = 0; f < g.m; ++f) pi.map[f] = f;
  return pi;
}

ValidationReport class_bijective_check(const GroupoidMorphism& pi) {
  ValidationReport rep;
  auto add = [&](const std::string& axiom, const std::string& witness) {
    rep.violations.push_back({axiom, witness});
  };
  const FiniteGroupoid& G = *pi.G;
  const FiniteGroupoid& H = *pi.H;
  if (static_cast<int>(pi.map.size()) != G.m) {
    add("morphism-total", "map size mismatch");
    return rep;
  }
  for (int f = 0; f < G.m; ++f)
    if (pi.map[f] < 0 || pi.map[f] >= H.m) {
      add("morphism-total", "image out of range at morphism " + std::to_string(f));
      return rep;
    }
  // morphism laws
  for (int f = 0; f < G.m; ++f) {
    if (G.is_unit(f) && !H.is_unit(pi.map[f]))
      add("morphism-units", "unit " + std::to_string(f) + " maps to a non-unit");
    if (pi.map[G.source[f]] != H.source[pi.map[f]])
      add("morphism-source", "pi(s(f)) != s(pi(f)) at " + std::to_string(f));
    if (pi.map[G.range[f]] != H.range[pi.map[f]])
      add("morphism-range", "pi(r(f)) != r(pi(f)) at " + std::to_string(f));
    if (pi.map[G.inverse[f]] != H.inverse[pi.map[f]])
      add("morphism-inverse", "pi(f^{-1}) != pi(f)^{-1} at " + std::to_string(f));
  }
  for (int f = 0; f < G.m; ++f)
    for (int h = 0; h < G.m; ++h) {
      if (G.compose[f][h] < 0) continue;
      if (H.compose[pi.map[f]][pi.map[h]] != pi.map[G.compose[f][h]])
        add("morphism-compose",
            "pi(fg) != pi(f)pi(g) at (" + std::to_string(f) + "," + std::to_string(h) + ")");
    }
  if (!rep.ok()) return rep;

  // class-bijectivity: pi restricted to s^{-1}(a) is a bijection onto
  // s^{-1}(pi(a)) for every unit a of G (and likewise for ranges, which
  // follows via inversion but is checked explicitly).
  for (int u = 0; u < G.n_units(); ++u) {
    int a = G.units[u];
    int pa = pi.map[a];
    std::vector<int> fiber_G, fiber_H;
    for (int f = 0; f < G.m; ++f)
      if (G.source[f] == a) fiber_G.push_back(f);
    for (int f = 0; f < H.m; ++f)
      if (H.source[f] == pa) fiber_H.push_back(f);
    std::vector<char> hit(H.m, 0);
    bool injective = true;
    for (int f : fiber_G) {
      if (hit[pi.map[f]]) injective = false;
      hit[pi.map[f]] = 1;
    }
    if (!injective)
      add("fiber-injective", "source fiber over unit " + std::to_string(u));
    for (int f : fiber_H)
      if (!hit[f])
        add("fiber-surjective", "source fiber over unit " + std::to_string(u) +
                                    " misses H morphism " + std::to_string(f));
  }
  return rep;
}

FiniteGroupoid build_cocycle_extension(const FiniteGroupoid& h,
                                       const std::vector<int>& cocycle,
                                       const std::vector<std::vector<int>>& group_table,
                                       const std::vector<std::vector<int>>& act,
                                       GroupoidMorphism* projection_out) {
  int npts = static_cast<int>(act.empty() ? 0 : act[0].size());
  if (static_cast<int>(cocycle.size()) != h.m)
    throw std::invalid_argument("cocycle must assign a group element to every morphism");
  // cocycle law: c(fg) = c(f)c(g), c(unit) = e (checked)
  int e = -1;
  int n = static_cast<int>(group_table.size());
  for (int a = 0; a < n && e < 0; ++a) {
    bool ident = true;
    for (int b = 0; b < n; ++b)
      if (group_table[a][b] != b || group_table[b][a] != b) ident = false;
    if (ident) e = a;
  }
  if (e < 0) throw std::invalid_argument("auxiliary group table has no identity");
  for (int u : h.units)
    if (cocycle[u] != e) throw std::invalid_argument("cocycle of a unit is not e");
  for (int f = 0; f < h.m; ++f)
    for (int g = 0; g < h.m; ++g)
      if (h.compose[f][g] >= 0 &&
          cocycle[h.compose[f][g]] != group_table[cocycle[f]][cocycle[g]])
        throw std::invalid_argument("cocycle law fails at (" + std::to_string(f) +
                                    "," + std::to_string(g) + ")");

  // morphisms (f, x): s = (s(f), x), r = (r(f), c(f).x)
  int m = h.m * npts;
  auto id = [npts](int f, int x) { return f * npts + x; };
  std::vector<int> source(m), range(m), inverse(m);
  std::vector<int> units;
  std::vector<std::vector<int>> compose(m, std::vector<int>(m, -1));
  std::vector<int> ginv(n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (group_table[a][b] == e) ginv[a] = b;
  for (int f = 0; f < h.m; ++f)
    for (int x = 0; x < npts; ++x) {
      source[id(f, x)] = id(h.source[f], x);
      range[id(f, x)] = id(h.range[f], act[cocycle[f]][x]);
      inverse[id(f, x)] = id(h.inverse[f], act[cocycle[f]][x]);
    }
  for (int u : h.units)
    for (int x = 0; x < npts; ++x) units.push_back(id(u, x));
  std::sort(units.begin(), units.end());
  for (int f = 0; f < h.m; ++f)
    for (int g = 0; g < h.m; ++g) {
      if (h.compose[f][g] < 0) continue;
      for (int x = 0; x < npts; ++x)
        compose[id(f, act[cocycle[g]][x])][id(g, x)] = id(h.compose[f][g], x);
    }
  std::vector<Rat> w;
  for (int u = 0; u < h.n_units(); ++u)
    for (int x = 0; x < npts; ++x) w.push_back(h.unit_weight[u] * Rat(1, npts));
  // weights indexed in sorted-unit order: units are (unit morphism, x) with
  // id = u*npts + x; sorting preserves (u, x) lexicographic order, matching w.
  FiniteGroupoid g = assemble(m, source, range, inverse, compose, units, w);
  if (projection_out) {
    projection_out->G = nullptr;  // caller rebinds to the stored copy
    projection_out->H = &h;
    projection_out->map.resize(m);
    for (int f = 0; f < h.m; ++f)
      for (int x = 0; x < npts; ++x) projection_out->map[id(f, x)] = f;
  }
  return g;
}

// --- exchange format --------------------------------------------------------

std::string groupoid_to_text(const FiniteGroupoid& g) {
  std::ostringstream out;
  out << "groupoid\n";
  out << "morphisms " << g.m << "\n";
  out << "units";
  for (int u : g.units) out << " " << u;
  out << "\n";
  for (int f = 0; f < g.m; ++f)
    out << "morphism " << f << " source " << g.source[f] << " range " << g.range[f]
        << " inverse " << g.inverse[f] << "\n";
  for (int f = 0; f < g.m; ++f)
    for (int h = 0; h < g.m; ++h)
      if (g.compose[f][h] >= 0)
        out << "compose " << f << " " << h << " " << g.compose[f][h] << "\n";
  for (int u = 0; u < g.n_units(); ++u)
    out << "weight " << u << " " << format_rational(g.unit_weight[u]) << "\n";
  return out.str();
}

FiniteGroupoid groupoid_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string tok;
  if (!(in >> tok) || tok != "groupoid")
    throw std::runtime_error("exchange format: missing 'groupoid' header");
  FiniteGroupoid g;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    if (!(ls >> tok)) continue;
    if (tok == "morphisms") {
      ls >> g.m;
      g.source.assign(g.m, -1);
      g.range.assign(g.m, -1);
      g.inverse.assign(g.m, -1);
      g.compose.assign(g.m, std::vector<int>(g.m, -1));
    } else if (tok == "units") {
      int u;
      while (ls >> u) g.units.push_back(u);
    } else if (tok == "morphism") {
      int f, s, r, i;
      std::string ks, kr, ki;
      ls >> f >> ks >> s >> kr >> r >> ki >> i;
      if (ks != "source" || kr != "range" || ki != "inverse")
        throw std::runtime_error("exchange format: bad morphism line: " + line);
      g.source.at(f) = s;
      g.range.at(f) = r;
      g.inverse.at(f) = i;
    } else if (tok == "compose") {
      int f, h, fh;
      ls >> f >> h >> fh;
      g.compose.at(f).at(h) = fh;
    } else if (tok == "weight") {
      int u;
      std::string frac;
      ls >> u >> frac;
      if (static_cast<int>(g.unit_weight.size()) <= u) g.unit_weight.resize(u + 1);
      g.unit_weight.at(u) = parse_rational(frac);
    } else {
      throw std::runtime_error("exchange format: unknown directive '" + tok + "'");
    }
  }
  g.unit_id.assign(g.m, -1);
  for (int u = 0; u < g.n_units(); ++u) g.unit_id[g.units[u]] = u;
  if (static_cast<int>(g.unit_weight.size()) != g.n_units())
    throw std::runtime_error("exchange format: weight count mismatch");
  return g;
}

std::vector<int> unit_components(const FiniteGroupoid& g) {
  std::vector<int> comp(g.n_units(), -1);
  int next = 0;
  for (int u = 0; u < g.n_units(); ++u) {
    if (comp[u] >= 0) continue;
    // BFS over morphisms
    std::vector<int> queue = {u};
    comp[u] = next;
    while (!queue.empty()) {
      int cur = queue.back();
      queue.pop_back();
      for (int f = 0; f < g.m; ++f) {
        if (g.uid_of_source(f) != cur) continue;
        int v = g.uid_of_range(f);
        if (comp[v] < 0) {
          comp[v] = next;
          queue.push_back(v);
        }
      }
    }
    ++next;
  }
  return comp;
}

}  // namespace sgl
