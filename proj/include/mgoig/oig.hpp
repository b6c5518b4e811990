#pragma once

#include <string>
#include <vector>

#include "mgoig/concept_core.hpp"
#include "mgoig/rational.hpp"

namespace mgoig {

// Largest connected component the exact densest-subgraph brute force accepts.
inline constexpr int kDensityCap = 22;

struct OigEdge {
  int u = 0, v = 0;  // vertex indices, u < v in canonical order
  int coord = 0;     // the single point where the endpoint behaviors differ
};

// One-inclusion graph over an ordered point set: vertices are the distinct
// behaviors of a class, edges join behaviors at Hamming distance one, and
// each group of the attached family indexes the edges whose differing
// coordinate it contains.
struct Oig {
  Domain dom = Domain(1);
  std::vector<uint32_t> vertices;              // lex-sorted behaviors
  std::vector<OigEdge> edges;                  // sorted by (u, v)
  std::vector<uint32_t> group_masks;           // projected family, canonical order
  std::vector<std::vector<int>> group_edges;   // per group: g-relevant edge ids

  int vertex_index(uint32_t behavior) const;   // -1 if absent
  int edge_between(int u, int v) const;        // -1 if absent
};

Oig build_oig(const ConceptClass& c, const GroupFamily& g);
Oig build_oig(const ConceptClass& c, const std::vector<uint32_t>& projected_masks);

std::vector<int> g_relevant_edges(const Oig& oig, uint32_t group_mask);

struct DensityReport {
  uint32_t group_mask = 0;
  Rat density;               // exact max over nonempty W of |E_g^W| / |W|
  std::vector<int> witness;  // vertex indices attaining the maximum
};

// Exact maximum induced-subgraph density restricted to g-relevant edges.
// The maximum is attained inside a connected component of (V, E_g), so each
// component is brute-forced independently; a component larger than `cap`
// raises GraphTooLarge.
DensityReport max_subgraph_density(const Oig& oig, uint32_t group_mask, int cap = kDensityCap);

// Checks that the full-mask density does not exceed d (used with the VC
// dimension of the class that built the graph).
bool verify_density_bound(const Oig& oig, int d, int cap = kDensityCap);

std::string oig_to_dot(const Oig& oig);
std::string oig_to_json(const Oig& oig);

}  // namespace mgoig
