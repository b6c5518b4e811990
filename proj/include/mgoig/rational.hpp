#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace mgoig {

// Exact arithmetic everywhere a bound is checked: densities, capacities,
// matchings, duals and error values are all Rat. Arbitrary precision so the
// scaled-solver and permutation-average paths never overflow.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::rational<Int>;

inline Int rat_floor(const Rat& r) {
  Int q = r.numerator() / r.denominator();
  if (r.numerator() < 0 && q * r.denominator() != r.numerator()) --q;
  return q;
}

inline Int rat_ceil(const Rat& r) {
  Int q = r.numerator() / r.denominator();
  if (r.numerator() > 0 && q * r.denominator() != r.numerator()) ++q;
  return q;
}

inline Int int_gcd(Int a, Int b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline Int int_lcm(const Int& a, const Int& b) {
  if (a == 0 || b == 0) return 0;
  return a / int_gcd(a, b) * b;
}

inline double rat_double(const Rat& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

inline std::string rat_str(const Rat& r) {
  std::string s = r.numerator().str();
  if (r.denominator() != 1) s += "/" + r.denominator().str();
  return s;
}

// Accepts "p", "p/q", or a plain decimal like "0.25".
inline Rat rat_parse(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("rat_parse: empty string");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("rat_parse: zero denominator");
    return Rat(num, den);
  }
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
    bool neg = !head.empty() && head[0] == '-';
    if (neg) head = head.substr(1);
    if (head.empty()) head = "0";
    Int den = 1;
    for (size_t i = 0; i < tail.size(); ++i) den *= 10;
    Int num = Int(head) * den + (tail.empty() ? Int(0) : Int(tail));
    if (neg) num = -num;
    return Rat(num, den);
  }
  return Rat(Int(s), Int(1));
}

}  // namespace mgoig
