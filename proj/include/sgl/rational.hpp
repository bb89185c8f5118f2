#ifndef SGL_RATIONAL_HPP
#define SGL_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sgl {

// All measures, traces and defect quantities are exact rationals; the lemma
// inequalities are sharp and must not be blurred by rounding.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

// Natural log of a positive big integer, accurate enough for entropy terms.
inline double log_bigint(const BigInt& n) {
  if (n <= 0) throw std::domain_error("log of non-positive integer");
  // msb + mantissa: n = m * 2^k with m in [1,2)
  const unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(n));
  if (bits <= 60) return std::log(n.convert_to<double>());
  BigInt top = n >> (bits - 60);
  return std::log(top.convert_to<double>()) + (bits - 60) * std::log(2.0);
}

// Parses "p/q" or "p" with optional sign; also accepts plain decimals
// like "0.05" (exact: 5/100). Throws on malformed input or zero denominator.
Rat parse_rational(const std::string& text);

// Canonical "p/q" (or "p" when the denominator is 1); round-trips bit-exactly.
std::string format_rational(const Rat& r);

BigInt binomial(unsigned n, unsigned k);
BigInt factorial(unsigned n);

}  // namespace sgl

#endif
