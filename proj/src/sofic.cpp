#include "sgl/sofic.hpp"

#include <numeric>
#include <stdexcept>

namespace sgl {

// Layout of the exact quotient construction: one source fiber per connected
// component, replicated so that t_j * m_j / d = w_j exactly (m_j = isotropy
// order, w_j = per-unit weight on the component, constant by pmp).
struct SoficMap::ExactLayout {
  struct Component {
    int base_uid = 0;            // chosen base unit x0
    std::vector<int> fiber;      // morphisms with source x0
    std::vector<int> pos_in_fiber;  // morphism id -> position or -1
    int copies = 0;              // t_j
    int offset = 0;              // first point index
  };
  std::vector<Component> comps;
  std::vector<int> comp_of_unit;
  int d = 0;
};

namespace {

long lcm_long(long a, long b) { return a / std::gcd(a, b) * b; }

std::shared_ptr<const SoficMap::ExactLayout> build_layout(const FiniteGroupoid& h,
                                                          int multiplicity) {
  auto layout = std::make_shared<SoficMap::ExactLayout>();
  layout->comp_of_unit = unit_components(h);
  int ncomp = 0;
  for (int c : layout->comp_of_unit) ncomp = std::max(ncomp, c + 1);
  layout->comps.resize(ncomp);
  std::vector<int> base(ncomp, -1);
  for (int u = 0; u < h.n_units(); ++u) {
    int c = layout->comp_of_unit[u];
    if (base[c] < 0) {
      base[c] = u;
      layout->comps[c].base_uid = u;
    } else if (h.unit_weight[u] != h.unit_weight[base[c]]) {
      // weight must be constant on each component (pmp)
      throw std::invalid_argument("unit weights not constant on a component (not pmp)");
    }
  }
  // denominators and isotropy orders
  BigInt denom_lcm = 1;
  long iso_lcm = 1;
  std::vector<long> iso(ncomp, 0);
  for (int c = 0; c < ncomp; ++c) {
    auto& comp = layout->comps[c];
    int x0 = h.units[comp.base_uid];
    comp.pos_in_fiber.assign(h.m, -1);
    for (int f = 0; f < h.m; ++f)
      if (h.source[f] == x0) {
        comp.pos_in_fiber[f] = static_cast<int>(comp.fiber.size());
        comp.fiber.push_back(f);
        if (h.range[f] == x0) ++iso[c];
      }
    iso_lcm = lcm_long(iso_lcm, iso[c]);
    const Rat& w = h.unit_weight[comp.base_uid];
    BigInt den = denominator(w);
    denom_lcm = denom_lcm / gcd(denom_lcm, den) * den;
  }
  // t_j = n * (w_j * D) * (L / m_j); d = n * D * L
  long D = denom_lcm.convert_to<long>();
  int offset = 0;
  for (int c = 0; c < ncomp; ++c) {
    auto& comp = layout->comps[c];
    Rat t = Rat(multiplicity) * h.unit_weight[comp.base_uid] * D * iso_lcm / iso[c];
    if (denominator(t) != 1)
      throw std::logic_error("internal: non-integral copy count");
    comp.copies = numerator(t).convert_to<int>();
    comp.offset = offset;
    offset += comp.copies * static_cast<int>(comp.fiber.size());
  }
  layout->d = offset;
  if (layout->d != multiplicity * static_cast<int>(D * iso_lcm))
    throw std::logic_error("internal: degree mismatch in exact layout");
  return layout;
}

}  // namespace

int exact_degree_unit(const FiniteGroupoid& h) {
  return build_layout(h, 1)->d;
}

PartialBijection SoficMap::exact_image(const PartialAutomorphism& key) const {
  const FiniteGroupoid& h = *h_;
  PartialBijection out(d_);
  for (const auto& comp : layout_->comps) {
    int fib = static_cast<int>(comp.fiber.size());
    for (int pos = 0; pos < fib; ++pos) {
      int hm = comp.fiber[pos];
      int g = key.member_with_source(h.uid_of_range(hm));
      if (g < 0) continue;
      int img = comp.pos_in_fiber[h.compose[g][hm]];
      for (int t = 0; t < comp.copies; ++t)
        out.insert(comp.offset + t * fib + img, comp.offset + t * fib + pos);
    }
  }
  return out;
}

std::vector<int> SoficMap::canonical_units() const {
  if (!layout_) throw std::runtime_error("sofic map has no exact layout");
  std::vector<int> units(d_, -1);
  for (const auto& comp : layout_->comps) {
    int fib = static_cast<int>(comp.fiber.size());
    for (int pos = 0; pos < fib; ++pos) {
      int uid = h_->uid_of_range(comp.fiber[pos]);
      for (int t = 0; t < comp.copies; ++t) units[comp.offset + t * fib + pos] = uid;
    }
  }
  return units;
}

SoficMap exact_sofic_from_quotient(const FiniteGroupoid& h, int multiplicity) {
  if (multiplicity <= 0) throw std::invalid_argument("multiplicity must be positive");
  auto layout = build_layout(h, multiplicity);
  SoficMap sigma(h, layout->d);
  sigma.layout_ = layout;
  sigma.exact_extension_ = true;
  return sigma;
}

void SoficMap::assign(const PartialAutomorphism& key, PartialBijection value) {
  if (value.d() != d_) throw std::invalid_argument("assigned value has wrong d");
  table_.insert_or_assign(key.key(), std::move(value));
}

bool SoficMap::has(const PartialAutomorphism& key) const {
  return table_.count(key.key()) != 0;
}

const PartialBijection& SoficMap::at(const PartialAutomorphism& key) {
  auto k = key.key();
  auto it = table_.find(k);
  if (it != table_.end()) return it->second;
  if (!exact_extension_ || !layout_)
    throw std::runtime_error("sofic map: key not assigned and auto-extension disabled");
  added_.push_back(k);
  auto [pos, inserted] = table_.emplace(std::move(k), exact_image(key));
  (void)inserted;
  return pos->second;
}

DefectReport measure_defects(SoficMap& sigma, const std::vector<PartialAutomorphism>& F) {
  DefectReport rep;
  for (const auto& s : F) {
    Rat td = tr_d(sigma.at(s)) - pa_trace(s);
    if (td < 0) td = -td;
    rep.trace_defect = std::max(rep.trace_defect, td);
  }
  for (const auto& s : F) {
    for (const auto& t : F) {
      PartialAutomorphism st = pa_compose(s, t);
      Rat md = sym_diff_d(sigma.at(st), compose(sigma.at(s), sigma.at(t)));
      rep.mult_defect = std::max(rep.mult_defect, md);
      Rat cd = sym_diff_d(sigma.at(s), sigma.at(t)) - pa_sym_diff_measure(s, t);
      if (cd > 0) rep.cont_defect = std::max(rep.cont_defect, cd);
    }
  }
  return rep;
}

void corrupt_assignment(SoficMap& sigma, const PartialAutomorphism& key, int ops,
                        SplitRng& rng) {
  PartialBijection v = sigma.at(key);
  const int d = v.d();
  for (int op = 0; op < ops; ++op) {
    switch (rng.below(3)) {
      case 0: {  // swap the targets of two assigned sources
        auto ps = v.pairs();
        if (ps.size() < 2) break;
        int a = static_cast<int>(rng.below(ps.size()));
        int b = static_cast<int>(rng.below(ps.size()));
        if (a == b) break;
        auto [ra, sa] = ps[a];
        auto [rb, sb] = ps[b];
        v.erase_by_source(sa);
        v.erase_by_source(sb);
        v.insert(rb, sa);
        v.insert(ra, sb);
        break;
      }
      case 1: {  // delete a random pair
        auto ps = v.pairs();
        if (ps.empty()) break;
        v.erase_by_source(ps[rng.below(ps.size())].second);
        break;
      }
      default: {  // insert into free slots
        std::vector<int> free_src, free_rng;
        for (int i = 0; i < d; ++i) {
          if (v.apply(i) < 0) free_src.push_back(i);
          if (v.preimage(i) < 0) free_rng.push_back(i);
        }
        if (free_src.empty() || free_rng.empty()) break;
        v.insert(free_rng[rng.below(free_rng.size())],
                 free_src[rng.below(free_src.size())]);
        break;
      }
    }
  }
  sigma.assign(key, std::move(v));
}

Rat BoundReport::min_slack() const {
  Rat best;
  bool first = true;
  for (size_t i = 0; i < lhs.size(); ++i) {
    Rat s = bound[i] - lhs[i];
    if (first || s < best) {
      best = s;
      first = false;
    }
  }
  return best;
}

BoundReport check_lemma33(SoficMap& sigma, const PartialAutomorphism& f,
                          const PartialAutomorphism& p) {
  std::vector<PartialAutomorphism> F = {p, f, pa_invert(f), pa_source_set(f),
                                        pa_range_set(f)};
  BoundReport rep;
  rep.delta = measure_defects(sigma, F).mult_defect;

  const PartialBijection& sp = sigma.at(p);
  rep.lhs.push_back(sym_diff_d(sp, diagonal_part(sp)));
  rep.bound.push_back(rep.delta);

  const PartialBijection& sf = sigma.at(f);
  rep.lhs.push_back(sym_diff_d(src_identity(sf), sigma.at(pa_source_set(f))));
  rep.bound.push_back(10 * rep.delta);

  rep.lhs.push_back(sym_diff_d(rng_identity(sf), sigma.at(pa_range_set(f))));
  rep.bound.push_back(10 * rep.delta);

  rep.lhs.push_back(sym_diff_d(sigma.at(pa_invert(f)), sf.inverse()));
  rep.bound.push_back(15 * rep.delta);
  return rep;
}

BoundReport check_lemma82(SoficMap& sigma, const PartialAutomorphism& f,
                          const PartialAutomorphism& g) {
  std::vector<PartialAutomorphism> F = {
      f, g, pa_compose(pa_invert(f), g), pa_invert(f),
      pa_source_set(f), pa_range_set(f), pa_source_set(g), pa_range_set(g)};
  DefectReport d = measure_defects(sigma, F);
  BoundReport rep;
  rep.delta = std::max(d.mult_defect, d.trace_defect);
  rep.lhs.push_back(sym_diff_d(sigma.at(f), sigma.at(g)));
  rep.bound.push_back(58 * rep.delta + pa_sym_diff_measure(f, g));
  return rep;
}

BoundReport check_lemma126(SoficMap& sigma, const PartialAutomorphism& f) {
  PartialAutomorphism fu = pa_unit_part(f);
  std::vector<PartialAutomorphism> F = {f, fu, pa_invert(f), pa_source_set(f),
                                        pa_range_set(f)};
  DefectReport d = measure_defects(sigma, F);
  BoundReport rep;
  rep.delta = std::max(d.mult_defect, d.trace_defect);
  rep.lhs.push_back(sym_diff_d(sigma.at(fu), diagonal_part(sigma.at(f))));
  rep.bound.push_back(9 * rep.delta);
  return rep;
}

}  // namespace sgl
