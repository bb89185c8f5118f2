#include "sgl/irs.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "sgl/io.hpp"

namespace sgl {

namespace {

std::vector<std::string> default_names(int n, int identity) {
  std::vector<std::string> names(n);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    if (i == identity) {
      names[i] = "e";
      continue;
    }
    if (next == 'e' - 'a') ++next;  // "e" is reserved for the identity
    if (next < 25) {
      names[i] = std::string(1, static_cast<char>('a' + next++));
    } else {
      names[i] = "g" + std::to_string(i);
    }
  }
  return names;
}

}  // namespace

void FiniteGroupTable::validate() const {
  if (n <= 0 || static_cast<int>(mult.size()) != n)
    throw std::invalid_argument("group table: size mismatch");
  for (const auto& row : mult) {
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("group table: row size mismatch");
    for (int v : row)
      if (v < 0 || v >= n) throw std::invalid_argument("group table: entry out of range");
  }
  if (identity < 0 || identity >= n)
    throw std::invalid_argument("group table: identity out of range");
  for (int a = 0; a < n; ++a)
    if (mult[identity][a] != a || mult[a][identity] != a)
      throw std::invalid_argument("group table: identity law fails");
  if (static_cast<int>(inverse.size()) != n)
    throw std::invalid_argument("group table: inverse size mismatch");
  for (int a = 0; a < n; ++a)
    if (mult[a][inverse[a]] != identity || mult[inverse[a]][a] != identity)
      throw std::invalid_argument("group table: inverse law fails");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (mult[mult[a][b]][c] != mult[a][mult[b][c]])
          throw std::invalid_argument("group table: associativity fails");
}

FiniteGroupTable FiniteGroupTable::cyclic(int n) {
  FiniteGroupTable g;
  g.n = n;
  g.mult.assign(n, std::vector<int>(n));
  g.inverse.resize(n);
  for (int a = 0; a < n; ++a) {
    g.inverse[a] = (n - a) % n;
    for (int b = 0; b < n; ++b) g.mult[a][b] = (a + b) % n;
  }
  g.identity = 0;
  g.names = default_names(n, 0);
  g.validate();
  return g;
}

FiniteGroupTable FiniteGroupTable::klein4() {
  FiniteGroupTable g;
  g.n = 4;
  g.mult.assign(4, std::vector<int>(4));
  g.inverse.resize(4);
  for (int a = 0; a < 4; ++a) {
    g.inverse[a] = a;
    for (int b = 0; b < 4; ++b) g.mult[a][b] = a ^ b;
  }
  g.identity = 0;
  g.names = default_names(4, 0);
  g.validate();
  return g;
}

FiniteGroupTable FiniteGroupTable::dihedral(int n) {
  // element r^i s^j stored as i + n j
  FiniteGroupTable g;
  g.n = 2 * n;
  g.mult.assign(g.n, std::vector<int>(g.n));
  g.inverse.resize(g.n);
  auto id = [n](int i, int j) { return ((i % n) + n) % n + n * j; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < 2; ++j) {
      int a = id(i, j);
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < 2; ++l)
          g.mult[a][id(k, l)] = id(i + (j ? -k : k), j ^ l);
      g.inverse[a] = j ? a : id(-i, 0);
    }
  g.identity = 0;
  g.names = default_names(g.n, 0);
  g.validate();
  return g;
}

FiniteGroupTable FiniteGroupTable::symmetric3() { return dihedral(3); }

FiniteGroupTable group_from_text(const std::string& text) {
  FiniteGroupTable g;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    std::vector<int> vals;
    int v;
    while (row >> v) vals.push_back(v);
    if (!vals.empty()) g.mult.push_back(vals);
  }
  g.n = static_cast<int>(g.mult.size());
  if (g.n == 0) throw std::invalid_argument("group table: empty input");
  g.identity = -1;
  for (int e = 0; e < g.n; ++e) {
    bool ok = true;
    for (int a = 0; a < g.n && ok; ++a)
      ok = g.mult[e].size() == static_cast<size_t>(g.n) &&
           g.mult[e][a] == a && g.mult[a][e] == a;
    if (ok) {
      g.identity = e;
      break;
    }
  }
  if (g.identity < 0) throw std::invalid_argument("group table: no identity element");
  g.inverse.assign(g.n, -1);
  for (int a = 0; a < g.n; ++a)
    for (int b = 0; b < g.n; ++b)
      if (g.mult[a][b] == g.identity && g.mult[b][a] == g.identity) g.inverse[a] = b;
  for (int a = 0; a < g.n; ++a)
    if (g.inverse[a] < 0) throw std::invalid_argument("group table: missing inverse");
  g.names = default_names(g.n, g.identity);
  g.validate();
  return g;
}

std::string group_to_text(const FiniteGroupTable& g) {
  std::string out;
  for (int a = 0; a < g.n; ++a) {
    for (int b = 0; b < g.n; ++b) {
      if (b) out += ' ';
      out += std::to_string(g.mult[a][b]);
    }
    out += '\n';
  }
  return out;
}

// --- subgroups ---------------------------------------------------------------

bool is_subgroup(const FiniteGroupTable& g, std::uint64_t mask) {
  if (!(mask >> g.identity & 1)) return false;
  for (int a = 0; a < g.n; ++a) {
    if (!(mask >> a & 1)) continue;
    for (int b = 0; b < g.n; ++b)
      if ((mask >> b & 1) && !(mask >> g.mult[a][b] & 1)) return false;
  }
  return true;
}

std::vector<std::uint64_t> all_subgroups(const FiniteGroupTable& g) {
  if (g.n > 20) throw std::invalid_argument("subgroup enumeration limited to order 20");
  std::vector<std::uint64_t> subs;
  for (std::uint64_t mask = 0; mask < (1ULL << g.n); ++mask)
    if (is_subgroup(g, mask)) subs.push_back(mask);
  return subs;
}

std::uint64_t conjugate_subgroup(const FiniteGroupTable& g, std::uint64_t mask, int a) {
  std::uint64_t out = 0;
  for (int h = 0; h < g.n; ++h)
    if (mask >> h & 1) out |= 1ULL << g.mult[g.mult[a][h]][g.inverse[a]];
  return out;
}

void StabilizerDistribution::validate(const FiniteGroupTable& g) const {
  if (support.size() != weights.size() || support.empty())
    throw std::invalid_argument("stabilizer distribution: size mismatch");
  std::map<std::uint64_t, Rat> w;
  Rat total = 0;
  for (size_t i = 0; i < support.size(); ++i) {
    if (!is_subgroup(g, support[i]))
      throw std::invalid_argument("stabilizer distribution: support member not a subgroup");
    if (weights[i] <= 0)
      throw std::invalid_argument("stabilizer distribution: weights must be positive");
    if (!w.emplace(support[i], weights[i]).second)
      throw std::invalid_argument("stabilizer distribution: duplicate support member");
    total += weights[i];
  }
  if (total != 1)
    throw std::invalid_argument("stabilizer distribution: weights must sum to 1");
  for (const auto& [mask, weight] : w)
    for (int a = 0; a < g.n; ++a) {
      std::uint64_t c = conjugate_subgroup(g, mask, a);
      auto it = w.find(c);
      if (it == w.end() || it->second != weight)
        throw std::invalid_argument(
            "stabilizer distribution: not conjugation-invariant");
    }
}

StabilizerDistribution irs_from_text(const FiniteGroupTable& g, const std::string& text) {
  std::map<std::string, int> by_name;
  for (int i = 0; i < g.n; ++i) by_name[g.names[i]] = i;
  StabilizerDistribution eta;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto err = [&](const std::string& what) {
      throw std::invalid_argument("irs line " + std::to_string(lineno) + ": " + what);
    };
    auto open = line.find('{'), close = line.find('}');
    auto weq = line.find("weight");
    if (line.find("subgroup") == std::string::npos || open == std::string::npos ||
        close == std::string::npos || weq == std::string::npos)
      err("expected 'subgroup = {...}; weight = p/q'");
    std::uint64_t mask = 0;
    std::istringstream elems(line.substr(open + 1, close - open - 1));
    std::string tok;
    while (std::getline(elems, tok, ',')) {
      tok.erase(0, tok.find_first_not_of(" \t"));
      tok.erase(tok.find_last_not_of(" \t") + 1);
      auto it = by_name.find(tok);
      if (it == by_name.end()) err("unknown element '" + tok + "'");
      mask |= 1ULL << it->second;
    }
    auto eq = line.find('=', weq);
    if (eq == std::string::npos) err("missing weight value");
    eta.support.push_back(mask);
    eta.weights.push_back(parse_rational(line.substr(eq + 1)));
  }
  eta.validate(g);
  return eta;
}

std::string irs_to_text(const FiniteGroupTable& g, const StabilizerDistribution& eta) {
  std::string out;
  for (size_t i = 0; i < eta.support.size(); ++i) {
    out += "subgroup = {";
    bool first = true;
    for (int a = 0; a < g.n; ++a)
      if (eta.support[i] >> a & 1) {
        if (!first) out += ", ";
        out += g.names[a];
        first = false;
      }
    out += "}; weight = " + format_rational(eta.weights[i]) + "\n";
  }
  return out;
}

// --- permutation maps --------------------------------------------------------

void SymMap::validate(const FiniteGroupTable& g) const {
  if (static_cast<int>(perm.size()) != g.n)
    throw std::invalid_argument("sym map: one permutation per group element required");
  for (const auto& p : perm) {
    if (static_cast<int>(p.size()) != d)
      throw std::invalid_argument("sym map: permutation size mismatch");
    std::vector<char> seen(d, 0);
    for (int v : p) {
      if (v < 0 || v >= d || seen[v])
        throw std::invalid_argument("sym map: not a permutation");
      seen[v] = 1;
    }
  }
}

SymMap SymMap::regular(const FiniteGroupTable& g) {
  SymMap s;
  s.d = g.n;
  s.perm.resize(g.n);
  for (int a = 0; a < g.n; ++a) s.perm[a] = g.mult[a];
  return s;
}

SymMap SymMap::trivial(const FiniteGroupTable& g, int d) {
  SymMap s;
  s.d = d;
  s.perm.assign(g.n, std::vector<int>(d));
  for (auto& p : s.perm)
    for (int i = 0; i < d; ++i) p[i] = i;
  return s;
}

SymMap SymMap::from_action(const FiniteGroupTable& g,
                           const std::vector<std::vector<int>>& act) {
  SymMap s;
  s.d = act.empty() ? 0 : static_cast<int>(act[0].size());
  s.perm = act;
  s.validate(g);
  return s;
}

SymMap SymMap::direct_sum(const FiniteGroupTable& g, const SymMap& a, const SymMap& b) {
  SymMap s;
  s.d = a.d + b.d;
  s.perm.assign(g.n, std::vector<int>(s.d));
  for (int e = 0; e < g.n; ++e) {
    for (int i = 0; i < a.d; ++i) s.perm[e][i] = a.perm[e][i];
    for (int i = 0; i < b.d; ++i) s.perm[e][a.d + i] = a.d + b.perm[e][i];
  }
  return s;
}

StabResult stab_map(const FiniteGroupTable& g, const SymMap& sigma, int q) {
  StabResult r;
  for (int a = 0; a < g.n; ++a)
    if (sigma.perm[a][q] == q) r.set |= 1ULL << a;
  r.subgroup = is_subgroup(g, r.set);
  return r;
}

// --- sofic IRS check ---------------------------------------------------------

namespace {

template <typename Key>
Rat total_variation(const std::map<Key, Rat>& p, const std::map<Key, Rat>& q) {
  Rat tv = 0;
  for (const auto& [k, v] : p) {
    auto it = q.find(k);
    Rat diff = v - (it == q.end() ? Rat(0) : it->second);
    tv += diff < 0 ? -diff : diff;
  }
  for (const auto& [k, v] : q)
    if (!p.count(k)) tv += v;
  return tv / 2;
}

}  // namespace

IrsCheckReport check_sofic_irs(const FiniteGroupTable& g,
                               const StabilizerDistribution& eta,
                               const std::vector<int>& K, const Rat& delta,
                               const Rat& omega_radius, const SymMap& sigma) {
  sigma.validate(g);
  eta.validate(g);
  const int d = sigma.d;
  IrsCheckReport rep;
  rep.worst_mult_fraction = 1;
  for (int a : K)
    for (int b : K) {
      int agree = 0;
      for (int q = 0; q < d; ++q)
        agree += sigma.perm[a][sigma.perm[b][q]] == sigma.perm[g.mult[a][b]][q];
      rep.worst_mult_fraction = std::min(rep.worst_mult_fraction, Rat(agree, d));
    }
  std::uint64_t window = 0;
  for (int a : K) window |= 1ULL << a;
  std::map<std::uint64_t, Rat> push, target;
  for (int q = 0; q < d; ++q) push[stab_map(g, sigma, q).set & window] += Rat(1, d);
  for (size_t i = 0; i < eta.support.size(); ++i)
    target[eta.support[i] & window] += eta.weights[i];
  rep.tv_distance = total_variation(push, target);
  rep.pass = rep.worst_mult_fraction >= 1 - delta && rep.tv_distance <= omega_radius;
  return rep;
}

// --- principal groupoid ------------------------------------------------------

void GroupAction::validate() const {
  group->validate();
  if (points <= 0 || static_cast<int>(act.size()) != group->n)
    throw std::invalid_argument("action: table size mismatch");
  for (const auto& row : act) {
    if (static_cast<int>(row.size()) != points)
      throw std::invalid_argument("action: row size mismatch");
    for (int v : row)
      if (v < 0 || v >= points) throw std::invalid_argument("action: point out of range");
  }
  for (int x = 0; x < points; ++x)
    if (act[group->identity][x] != x)
      throw std::invalid_argument("action: identity must act trivially");
  for (int a = 0; a < group->n; ++a)
    for (int b = 0; b < group->n; ++b)
      for (int x = 0; x < points; ++x)
        if (act[a][act[b][x]] != act[group->mult[a][b]][x])
          throw std::invalid_argument("action: composition law fails");
  if (static_cast<int>(weights.size()) != points)
    throw std::invalid_argument("action: weight count mismatch");
  Rat total = 0;
  for (const Rat& w : weights) {
    if (w <= 0) throw std::invalid_argument("action: weights must be positive");
    total += w;
  }
  if (total != 1) throw std::invalid_argument("action: weights must sum to 1");
}

FiniteGroupoid principal_groupoid(const GroupAction& action) {
  action.validate();
  // orbit classes: x ~ gx
  std::vector<int> class_of(action.points, -1);
  int next = 0;
  for (int x = 0; x < action.points; ++x) {
    if (class_of[x] >= 0) continue;
    class_of[x] = next;
    std::vector<int> stack{x};
    while (!stack.empty()) {
      int y = stack.back();
      stack.pop_back();
      for (int a = 0; a < action.group->n; ++a) {
        int z = action.act[a][y];
        if (class_of[z] < 0) {
          class_of[z] = next;
          stack.push_back(z);
        }
      }
    }
    ++next;
  }
  return build_relation_groupoid(class_of, action.weights);
}

// --- sofic with stabilizers --------------------------------------------------

StabilizersCheckReport check_sofic_with_stabilizers(
    const GroupAction& action, const std::vector<int>& P, const std::vector<int>& K,
    const Rat& omega_radius, const Rat& epsilon, const SymMap& sigma,
    const std::vector<int>& phi) {
  action.validate();
  const FiniteGroupTable& g = *action.group;
  sigma.validate(g);
  if (static_cast<int>(P.size()) != action.points)
    throw std::invalid_argument("P must label the action points");
  if (static_cast<int>(phi.size()) != sigma.d)
    throw std::invalid_argument("phi must label {1..d}");
  StabilizersCheckReport rep;
  const int d = sigma.d;
  for (int a : K)
    for (int b : K) {
      int disagree = 0;
      for (int q = 0; q < d; ++q)
        disagree += sigma.perm[a][sigma.perm[b][q]] != sigma.perm[g.mult[a][b]][q];
      rep.worst_pair_diff = std::max(rep.worst_pair_diff, Rat(2 * disagree, d));
    }
  std::uint64_t window = 0;
  for (int a : K) window |= 1ULL << a;

  using Signature = std::vector<std::pair<std::uint64_t, int>>;
  std::map<Signature, Rat> psi_dist, phi_dist;
  for (int x = 0; x < action.points; ++x) {
    Signature sig;
    for (int k : K) {
      int y = action.act[k][x];
      std::uint64_t stab = 0;
      for (int a : K)
        if (action.act[a][y] == y) stab |= 1ULL << a;
      sig.emplace_back(stab, P[y]);
    }
    psi_dist[sig] += action.weights[x];
  }
  for (int q = 0; q < d; ++q) {
    Signature sig;
    for (int k : K) {
      int y = sigma.perm[k][q];
      sig.emplace_back(stab_map(g, sigma, y).set & window, phi[y]);
    }
    phi_dist[sig] += Rat(1, d);
  }
  rep.tv_distance = total_variation(psi_dist, phi_dist);
  rep.pass = rep.worst_pair_diff < epsilon && rep.tv_distance <= omega_radius;
  return rep;
}

// --- induced sofic map -------------------------------------------------------

TranslationTable default_translation_table(const GroupAction& action,
                                           const PartialAutomorphism& f) {
  const FiniteGroupTable& g = *action.group;
  TranslationTable t;
  std::map<int, int> slot;  // group element -> window position
  auto slot_of = [&](int a) {
    auto it = slot.find(a);
    if (it != slot.end()) return it->second;
    int pos = static_cast<int>(t.window.size());
    t.window.push_back(a);
    t.sets.emplace_back(action.points, 0);
    slot[a] = pos;
    return pos;
  };
  for (int x = 0; x < action.points; ++x) {
    int member = f.member_with_source(x);  // unit id == point id
    if (member < 0) continue;
    int y = f.parent().uid_of_range(member);
    if (y == x) {
      t.sets[slot_of(g.identity)][x] = 1;
      continue;
    }
    int chosen = -1;
    for (int a = 0; a < g.n && chosen < 0; ++a)
      if (a != g.identity && action.act[a][x] == y) chosen = a;
    if (chosen < 0) throw std::invalid_argument("f is not realized by the action");
    t.sets[slot_of(chosen)][x] = 1;
  }
  return t;
}

InducedAssembly induce_one(const GroupAction& action, const PartialAutomorphism& f,
                           const SymMap& sigma, const std::vector<int>& phi,
                           const TranslationTable& table, const Rat& eps) {
  const FiniteGroupTable& g = *action.group;
  const FiniteGroupoid& h = f.parent();
  const int d = sigma.d;
  if (table.window.size() != table.sets.size())
    throw std::invalid_argument("translation table: window/set mismatch");

  // validate: disjointness, agreement with f, the identity rule
  std::vector<char> covered(action.points, 0);
  for (size_t gi = 0; gi < table.window.size(); ++gi) {
    int a = table.window[gi];
    for (int x = 0; x < action.points; ++x) {
      if (!table.sets[gi][x]) continue;
      if (covered[x])
        throw std::invalid_argument("translation table: sets must be disjoint");
      covered[x] = 1;
      int member = f.member_with_source(x);
      if (member < 0)
        throw std::invalid_argument("translation table: set escapes s(f)");
      int y = h.uid_of_range(member);
      if (action.act[a][x] != y)
        throw std::invalid_argument("translation table: f and g disagree on A(f,g)");
      if (a == g.identity && y != x)
        throw std::invalid_argument("translation table: identity entry must be fixed points");
      if (a != g.identity && y == x)
        throw std::invalid_argument("translation table: fixed points belong to the identity entry");
    }
  }
  InducedAssembly out{PartialBijection(d), std::vector<char>(d, 0), 0, 0};
  for (int x = 0; x < action.points; ++x) {
    int member = f.member_with_source(x);
    if (member >= 0 && !covered[x]) out.uncovered += action.weights[x];
  }
  if (out.uncovered > eps)
    throw std::invalid_argument("translation table: coverage of s(f) worse than eps");

  // targets claimed by two entries are BAD and dropped
  std::vector<int> claims(d, 0);
  std::vector<std::pair<int, int>> pairs;  // (target, source)
  for (size_t gi = 0; gi < table.window.size(); ++gi)
    for (int q = 0; q < d; ++q) {
      if (!table.sets[gi][phi[q]]) continue;
      int target = sigma.perm[table.window[gi]][q];
      ++claims[target];
      pairs.emplace_back(target, q);
    }
  for (int q = 0; q < d; ++q) out.bad[q] = claims[q] > 1;
  for (auto [target, q] : pairs) {
    if (out.bad[target]) {
      ++out.dropped;
      continue;
    }
    out.value.insert(target, q);  // throws if injectivity fails
  }
  return out;
}

SoficMap induced_sofic_map(const GroupAction& action, const FiniteGroupoid& h,
                           const std::vector<PartialAutomorphism>& F,
                           const SymMap& sigma, const std::vector<int>& phi,
                           const std::map<std::vector<int>, TranslationTable>& tables,
                           const Rat& eps) {
  SoficMap out(h, sigma.d);
  for (const auto& f : F) {
    auto it = tables.find(f.key());
    TranslationTable t =
        it != tables.end() ? it->second : default_translation_table(action, f);
    out.assign(f, induce_one(action, f, sigma, phi, t, eps).value);
  }
  return out;
}

}  // namespace sgl
