#include "sgl/partial_auto.hpp"

#include <stdexcept>

namespace sgl {

PartialAutomorphism::PartialAutomorphism(const FiniteGroupoid& parent, MorphSet members)
    : parent_(&parent), members_(std::move(members)) {
  if (static_cast<int>(members_.size()) != parent.m)
    throw std::invalid_argument("member set size mismatch");
  by_source_.assign(parent.n_units(), -1);
  by_range_.assign(parent.n_units(), -1);
  for (int f = 0; f < parent.m; ++f) {
    if (!members_[f]) continue;
    int s = parent.uid_of_source(f), r = parent.uid_of_range(f);
    if (by_source_[s] >= 0 || by_range_[r] >= 0)
      throw std::invalid_argument("member set is not a partial automorphism");
    by_source_[s] = f;
    by_range_[r] = f;
  }
}

PartialAutomorphism PartialAutomorphism::from_unit_set(const FiniteGroupoid& parent,
                                                       const UnitSet& units) {
  MorphSet ms(parent.m, 0);
  for (int u = 0; u < parent.n_units(); ++u)
    if (units[u]) ms[parent.units[u]] = 1;
  return PartialAutomorphism(parent, std::move(ms));
}

PartialAutomorphism PartialAutomorphism::full_units(const FiniteGroupoid& parent) {
  return from_unit_set(parent, UnitSet(parent.n_units(), 1));
}

PartialAutomorphism PartialAutomorphism::singleton(const FiniteGroupoid& parent,
                                                   int morphism) {
  MorphSet ms(parent.m, 0);
  ms.at(morphism) = 1;
  return PartialAutomorphism(parent, std::move(ms));
}

int PartialAutomorphism::size() const {
  int n = 0;
  for (char c : members_) n += c;
  return n;
}

bool PartialAutomorphism::valid() const { return parent_ != nullptr; }

std::vector<int> PartialAutomorphism::key() const {
  std::vector<int> k;
  for (int f = 0; f < parent_->m; ++f)
    if (members_[f]) k.push_back(f);
  return k;
}

PartialAutomorphism pa_compose(const PartialAutomorphism& f,
                               const PartialAutomorphism& g) {
  const FiniteGroupoid& gp = f.parent();
  if (&gp != &g.parent()) throw std::invalid_argument("parent groupoid mismatch");
  MorphSet out(gp.m, 0);
  // fg = {h : h = f'g' with f' in f, g' in g}; by injectivity it suffices
  // to match each g' with the unique f' whose source equals r(g').
  for (int gm = 0; gm < gp.m; ++gm) {
    if (!g.contains(gm)) continue;
    int fm = f.member_with_source(gp.uid_of_range(gm));
    if (fm < 0) continue;
    out[gp.compose[fm][gm]] = 1;
  }
  return PartialAutomorphism(gp, std::move(out));
}

PartialAutomorphism pa_invert(const PartialAutomorphism& f) {
  const FiniteGroupoid& gp = f.parent();
  MorphSet out(gp.m, 0);
  for (int m = 0; m < gp.m; ++m)
    if (f.contains(m)) out[gp.inverse[m]] = 1;
  return PartialAutomorphism(gp, std::move(out));
}

PartialAutomorphism pa_intersect(const PartialAutomorphism& f,
                                 const PartialAutomorphism& g) {
  const FiniteGroupoid& gp = f.parent();
  if (&gp != &g.parent()) throw std::invalid_argument("parent groupoid mismatch");
  MorphSet out(gp.m, 0);
  for (int m = 0; m < gp.m; ++m) out[m] = f.contains(m) && g.contains(m);
  return PartialAutomorphism(gp, std::move(out));
}

Rat pa_trace(const PartialAutomorphism& f) { return f.parent().trace(f.members()); }

Rat pa_measure(const PartialAutomorphism& f) { return f.parent().measure(f.members()); }

Rat pa_sym_diff_measure(const PartialAutomorphism& f, const PartialAutomorphism& g) {
  const FiniteGroupoid& gp = f.parent();
  if (&gp != &g.parent()) throw std::invalid_argument("parent groupoid mismatch");
  MorphSet diff(gp.m, 0);
  for (int m = 0; m < gp.m; ++m) diff[m] = f.contains(m) != g.contains(m);
  return gp.measure(diff);
}

UnitSet act(const PartialAutomorphism& f, const UnitSet& p) {
  const FiniteGroupoid& gp = f.parent();
  UnitSet out(gp.n_units(), 0);
  for (int u = 0; u < gp.n_units(); ++u) {
    if (!p[u]) continue;
    int m = f.member_with_source(u);
    if (m >= 0) out[gp.uid_of_range(m)] = 1;
  }
  return out;
}

PartialAutomorphism pa_source_set(const PartialAutomorphism& f) {
  const FiniteGroupoid& gp = f.parent();
  UnitSet s(gp.n_units(), 0);
  for (int u = 0; u < gp.n_units(); ++u) s[u] = f.member_with_source(u) >= 0;
  return PartialAutomorphism::from_unit_set(gp, s);
}

PartialAutomorphism pa_range_set(const PartialAutomorphism& f) {
  const FiniteGroupoid& gp = f.parent();
  UnitSet s(gp.n_units(), 0);
  for (int u = 0; u < gp.n_units(); ++u) s[u] = f.member_with_range(u) >= 0;
  return PartialAutomorphism::from_unit_set(gp, s);
}

PartialAutomorphism pa_unit_part(const PartialAutomorphism& f) {
  const FiniteGroupoid& gp = f.parent();
  MorphSet out(gp.m, 0);
  for (int u : gp.units) out[u] = f.contains(u);
  return PartialAutomorphism(gp, std::move(out));
}

}  // namespace sgl
