#pragma once

#include <vector>

#include "mgoig/evaluation.hpp"

namespace mgoig::testing {

// Seeded random instances for property tests.
inline ConceptClass random_class(Rng& rng, int m, int max_size) {
  int want = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(max_size)));
  std::vector<uint32_t> members;
  for (int i = 0; i < want; ++i)
    members.push_back(static_cast<uint32_t>(rng.below(1ull << m)));
  return ConceptClass(Domain(m), members);
}

inline GroupFamily random_family(Rng& rng, int m) {
  std::vector<uint32_t> masks;
  switch (rng.below(4)) {
    case 0:
      masks.push_back(Domain(m).full_mask());
      break;
    case 1:
      for (int i = 0; i < m; ++i) masks.push_back(1u << i);
      break;
    case 2: {
      int count = 1 + static_cast<int>(rng.below(3));
      for (int i = 0; i < count; ++i) {
        uint32_t mask = static_cast<uint32_t>(rng.below(1ull << m));
        if (mask == 0) mask = 1;
        masks.push_back(mask);
      }
      break;
    }
    default:
      masks.push_back(Domain(m).full_mask());
      for (int i = 0; i < m; ++i) masks.push_back(1u << i);
  }
  return GroupFamily(Domain(m), masks);
}

inline bool pairwise_disjoint(const GroupFamily& g) {
  for (size_t i = 0; i < g.size(); ++i)
    for (size_t j = i + 1; j < g.size(); ++j)
      if ((g.at(i) & g.at(j)) != 0) return false;
  return true;
}

// Families whose masks never share a point: every edge belongs to at most
// one group, so exact-density capacities always admit a full matching.
inline GroupFamily random_disjoint_family(Rng& rng, int m) {
  switch (rng.below(3)) {
    case 0:
      return GroupFamily(Domain(m), {Domain(m).full_mask()});
    case 1: {
      std::vector<uint32_t> singles;
      for (int i = 0; i < m; ++i) singles.push_back(1u << i);
      return GroupFamily(Domain(m), singles);
    }
    default: {
      std::vector<uint32_t> blocks;
      uint32_t current = 0;
      for (int i = 0; i < m; ++i) {
        current |= (1u << i);
        if (rng.below(2) == 0 || i == m - 1) {
          blocks.push_back(current);
          current = 0;
        }
      }
      return GroupFamily(Domain(m), blocks);
    }
  }
}

// Independent shattering route for VC checks: tests every subset, no early
// stopping, patterns collected with plain sets.
inline bool shatters_oracle(const ConceptClass& c, const std::vector<int>& subset) {
  size_t k = subset.size();
  std::vector<char> seen(1ull << k, 0);
  size_t distinct = 0;
  for (uint32_t b : c.members()) {
    uint32_t pattern = 0;
    for (size_t i = 0; i < k; ++i)
      if (bit_get(b, subset[i])) pattern |= (1u << i);
    if (!seen[pattern]) {
      seen[pattern] = 1;
      ++distinct;
    }
  }
  return distinct == (1ull << k);
}

inline int vc_oracle(const ConceptClass& c, uint32_t pool_mask) {
  std::vector<int> pool;
  for (int i = 0; i < c.domain().m; ++i)
    if (bit_get(pool_mask, i)) pool.push_back(i);
  int best = 0;
  for (uint32_t sub = 1; sub < (1u << pool.size()); ++sub) {
    std::vector<int> subset;
    for (size_t i = 0; i < pool.size(); ++i)
      if (sub & (1u << i)) subset.push_back(pool[i]);
    if (shatters_oracle(c, subset)) best = std::max(best, static_cast<int>(subset.size()));
  }
  return best;
}

class ConstantPredictor : public Predictor {
 public:
  explicit ConstantPredictor(uint32_t concept_bits) : bits_(concept_bits) {}
  Prediction predict_prob(const LabeledSample&, int x) const override {
    return {Rat(bit_get(bits_, x) ? 1 : 0), true};
  }
  LearnerKind kind() const override { return LearnerKind::Base; }

 private:
  uint32_t bits_;
};

}  // namespace mgoig::testing
