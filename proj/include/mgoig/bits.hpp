#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mgoig {

// Behaviors and group masks are bitvectors over an ordered point set,
// stored with point i at bit i.
inline int popcount32(uint32_t x) { return std::popcount(x); }

inline bool bit_get(uint32_t bits, int i) { return (bits >> i) & 1u; }

// Lexicographic order reading point 0 first; this is the canonical order
// used for concept classes, group families and all tie-breaking.
inline bool lex_less(uint32_t a, uint32_t b) {
  uint32_t d = a ^ b;
  if (d == 0) return false;
  uint32_t low = d & (~d + 1);
  return (a & low) == 0;
}

struct LexLess {
  bool operator()(uint32_t a, uint32_t b) const { return lex_less(a, b); }
};

inline std::string bits_str(uint32_t bits, int m) {
  std::string s(static_cast<size_t>(m), '0');
  for (int i = 0; i < m; ++i)
    if (bit_get(bits, i)) s[static_cast<size_t>(i)] = '1';
  return s;
}

inline uint32_t bits_parse(const std::string& s) {
  if (s.size() > 31) throw std::invalid_argument("bitstring longer than 31 points");
  uint32_t bits = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1')
      bits |= (1u << i);
    else if (s[i] != '0')
      throw std::invalid_argument("bitstring must contain only 0/1");
  }
  return bits;
}

// Packs the bits of `bits` selected by `mask` into the low bits of the result.
inline uint32_t gather_bits(uint32_t bits, uint32_t mask) {
  uint32_t out = 0;
  int j = 0;
  while (mask) {
    uint32_t low = mask & (~mask + 1);
    if (bits & low) out |= (1u << j);
    ++j;
    mask &= mask - 1;
  }
  return out;
}

}  // namespace mgoig
