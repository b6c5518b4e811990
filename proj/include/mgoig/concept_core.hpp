#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mgoig/bits.hpp"
#include "mgoig/errors.hpp"

namespace mgoig {

// Hard cap for 2^m enumerations (group-realizable concepts, full cubes).
inline constexpr int kEnumerationCap = 20;
// Representation cap: behaviors and masks live in uint32_t.
inline constexpr int kMaxPoints = 31;

struct Domain {
  int m = 0;
  explicit Domain(int m_) : m(m_) {
    if (m < 1 || m > kMaxPoints) throw Error(Errc::DomainTooLarge, "domain size out of range");
  }
  uint32_t full_mask() const { return (m == 31) ? 0x7fffffffu : ((1u << m) - 1u); }
  bool operator==(const Domain& o) const { return m == o.m; }
};

// A behavior is a labeling of the ordered point set, one bit per point.
// Concepts, hypotheses, OIG vertices and targets all share this shape.
struct Behavior {
  uint32_t bits = 0;
  std::string str(const Domain& d) const { return bits_str(bits, d.m); }
};

class ConceptClass {
 public:
  ConceptClass(Domain dom, std::vector<uint32_t> members);

  const Domain& domain() const { return dom_; }
  const std::vector<uint32_t>& members() const { return members_; }
  size_t size() const { return members_.size(); }
  uint32_t at(size_t i) const { return members_[i]; }
  bool contains(uint32_t bits) const;

 private:
  Domain dom_;
  std::vector<uint32_t> members_;  // lex-sorted, deduplicated, nonempty
};

class GroupFamily {
 public:
  GroupFamily(Domain dom, std::vector<uint32_t> masks);

  const Domain& domain() const { return dom_; }
  const std::vector<uint32_t>& masks() const { return masks_; }
  size_t size() const { return masks_.size(); }
  uint32_t at(size_t i) const { return masks_[i]; }

 private:
  Domain dom_;
  std::vector<uint32_t> masks_;  // nonempty, lex-sorted, deduplicated
};

// Ordered list of (point, label). Duplicate points are allowed; conflicting
// labels on the same point are rejected by the realizable learners but are
// legal input for the agnostic path.
struct LabeledSample {
  std::vector<std::pair<int, int>> entries;

  size_t size() const { return entries.size(); }
  LabeledSample prefix(size_t t) const {
    return LabeledSample{{entries.begin(), entries.begin() + static_cast<long>(t)}};
  }
  std::vector<int> distinct_points() const;
  bool duplicates_consistent() const;
  void validate_against(const Domain& d) const;
};

int vc_dimension(const ConceptClass& c);
int vc_restricted(const ConceptClass& c, uint32_t group_mask);

// All labelings of the domain that agree with some member of H inside every
// group of G. Exhaustive over 2^m labelings; m is capped.
ConceptClass enumerate_group_realizable(const ConceptClass& H, const GroupFamily& G,
                                        int enumeration_cap = kEnumerationCap);

ConceptClass project_class(const ConceptClass& c, const std::vector<int>& points);
// Projection drops groups with empty intersection and deduplicates masks.
// Returns masks over the projected coordinates; may be empty.
std::vector<uint32_t> project_masks(const GroupFamily& g, const std::vector<int>& points);

// Generators for the classes the JSON descriptors name.
ConceptClass make_thresholds(Domain d);
ConceptClass make_intervals(Domain d);
ConceptClass make_singletons(Domain d);
ConceptClass make_full_cube(Domain d, int enumeration_cap = kEnumerationCap);
ConceptClass make_explicit(Domain d, const std::vector<std::string>& bitstrings);

}  // namespace mgoig
