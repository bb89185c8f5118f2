#include "sgl/partial_bij.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace sgl {

PartialBijection PartialBijection::identity(int d) {
  PartialBijection f(d);
  for (int i = 0; i < d; ++i) {
    f.fwd_[i] = i;
    f.bwd_[i] = i;
  }
  return f;
}

PartialBijection PartialBijection::from_pairs(
    int d, const std::vector<std::pair<int, int>>& pairs) {
  PartialBijection f(d);
  for (auto [rng, src] : pairs) f.insert(rng, src);
  return f;
}

int PartialBijection::size() const {
  int n = 0;
  for (int v : fwd_)
    if (v >= 0) ++n;
  return n;
}

void PartialBijection::insert(int rng, int src) {
  if (src < 0 || src >= d_ || rng < 0 || rng >= d_)
    throw std::out_of_range("pair index out of range");
  if (fwd_[src] >= 0)
    throw std::invalid_argument("duplicate source index " + std::to_string(src + 1));
  if (bwd_[rng] >= 0)
    throw std::invalid_argument("duplicate range index " + std::to_string(rng + 1));
  fwd_[src] = rng;
  bwd_[rng] = src;
}

void PartialBijection::erase_by_source(int src) {
  if (fwd_[src] >= 0) {
    bwd_[fwd_[src]] = -1;
    fwd_[src] = -1;
  }
}

std::vector<std::pair<int, int>> PartialBijection::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int s = 0; s < d_; ++s)
    if (fwd_[s] >= 0) out.emplace_back(fwd_[s], s);
  return out;
}

PartialBijection PartialBijection::inverse() const {
  PartialBijection f(d_);
  f.fwd_ = bwd_;
  f.bwd_ = fwd_;
  return f;
}

std::vector<char> PartialBijection::src_set() const {
  std::vector<char> s(d_, 0);
  for (int i = 0; i < d_; ++i) s[i] = fwd_[i] >= 0;
  return s;
}

std::vector<char> PartialBijection::rng_set() const {
  std::vector<char> s(d_, 0);
  for (int i = 0; i < d_; ++i) s[i] = bwd_[i] >= 0;
  return s;
}

PartialBijection PartialBijection::restrict_src(const std::vector<char>& keep) const {
  PartialBijection f(d_);
  for (int s = 0; s < d_; ++s)
    if (fwd_[s] >= 0 && keep[s]) {
      f.fwd_[s] = fwd_[s];
      f.bwd_[fwd_[s]] = s;
    }
  return f;
}

std::vector<char> PartialBijection::image(const std::vector<char>& s) const {
  std::vector<char> out(d_, 0);
  for (int i = 0; i < d_; ++i)
    if (s[i] && fwd_[i] >= 0) out[fwd_[i]] = 1;
  return out;
}

std::vector<char> PartialBijection::preimage_set(const std::vector<char>& s) const {
  std::vector<char> out(d_, 0);
  for (int i = 0; i < d_; ++i)
    if (fwd_[i] >= 0 && s[fwd_[i]]) out[i] = 1;
  return out;
}

PartialBijection compose(const PartialBijection& f, const PartialBijection& g) {
  if (f.d() != g.d()) throw std::invalid_argument("dimension mismatch in compose");
  PartialBijection out(f.d());
  for (int k = 0; k < g.d(); ++k) {
    int j = g.apply(k);
    if (j < 0) continue;
    int i = f.apply(j);
    if (i < 0) continue;
    out.insert(i, k);
  }
  return out;
}

Rat tr_d(const PartialBijection& f) {
  int fixed = 0;
  for (int i = 0; i < f.d(); ++i)
    if (f.apply(i) == i) ++fixed;
  return Rat(fixed, f.d());
}

Rat norm_d(const PartialBijection& f) { return Rat(f.size(), f.d()); }

int sym_diff_count(const PartialBijection& f, const PartialBijection& g) {
  if (f.d() != g.d()) throw std::invalid_argument("dimension mismatch in sym_diff");
  int n = 0;
  for (int s = 0; s < f.d(); ++s) {
    int a = f.apply(s), b = g.apply(s);
    if (a >= 0 && a != b) ++n;
    if (b >= 0 && b != a) ++n;
  }
  return n;
}

Rat sym_diff_d(const PartialBijection& f, const PartialBijection& g) {
  return Rat(sym_diff_count(f, g), f.d());
}

PartialBijection diagonal_part(const PartialBijection& f) {
  PartialBijection out(f.d());
  for (int i = 0; i < f.d(); ++i)
    if (f.apply(i) == i) out.insert(i, i);
  return out;
}

PartialBijection src_identity(const PartialBijection& f) {
  PartialBijection out(f.d());
  for (int i = 0; i < f.d(); ++i)
    if (f.apply(i) >= 0) out.insert(i, i);
  return out;
}

PartialBijection rng_identity(const PartialBijection& f) {
  PartialBijection out(f.d());
  for (int i = 0; i < f.d(); ++i)
    if (f.preimage(i) >= 0) out.insert(i, i);
  return out;
}

std::string to_literal(const PartialBijection& f) {
  std::ostringstream out;
  out << "d=" << f.d() << ";";
  auto ps = f.pairs();  // already sorted by source
  if (!ps.empty()) out << " ";
  for (auto [rng, src] : ps) out << "(" << rng + 1 << "," << src + 1 << ")";
  return out.str();
}

PartialBijection from_literal(const std::string& text) {
  auto semi = text.find(';');
  if (semi == std::string::npos || text.compare(0, 2, "d=") != 0)
    throw std::invalid_argument("partial bijection literal must start with 'd=<n>;'");
  int d = std::stoi(text.substr(2, semi - 2));
  if (d <= 0) throw std::invalid_argument("d must be positive");
  PartialBijection f(d);
  size_t pos = semi + 1;
  while (pos < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
      continue;
    }
    if (text[pos] != '(')
      throw std::invalid_argument("expected '(' in literal at position " +
                                  std::to_string(pos));
    auto comma = text.find(',', pos);
    auto close = text.find(')', pos);
    if (comma == std::string::npos || close == std::string::npos || comma > close)
      throw std::invalid_argument("malformed pair in literal");
    int rng = std::stoi(text.substr(pos + 1, comma - pos - 1));
    int src = std::stoi(text.substr(comma + 1, close - comma - 1));
    if (rng < 1 || rng > d || src < 1 || src > d)
      throw std::invalid_argument("pair index out of range in literal");
    f.insert(rng - 1, src - 1);
    pos = close + 1;
  }
  return f;
}

}  // namespace sgl
