#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mgoig/oig.hpp"
#include "mgoig/rational.hpp"

namespace mgoig {

enum class CapacityMode { Exact, Ceil, Explicit };

std::string to_string(CapacityMode mode);

// Bipartite network for the multi-group matching problem: one node per OIG
// edge with two arcs to its endpoint vertices, plus per-(vertex, group)
// capacities. Exact mode uses the g-relevant max subgraph density, Ceil its
// ceiling, Explicit a caller-supplied table.
struct MgNetwork {
  int n_vertices = 0;
  std::vector<OigEdge> edges;
  std::vector<uint32_t> group_masks;
  std::vector<std::vector<int>> group_edges;   // per group: relevant edge ids
  std::vector<uint64_t> edge_groups;           // per edge: bitmask of groups containing it
  std::vector<std::vector<Rat>> cap;           // [group][vertex]
  CapacityMode mode = CapacityMode::Ceil;
  bool capacity_warning = false;  // uniform explicit capacities below the exact density
  std::vector<int> uncovered_edges;            // edges relevant to no group

  size_t n_groups() const { return group_masks.size(); }
  size_t n_edges() const { return edges.size(); }
  const Rat& capacity(size_t g, int v) const { return cap[g][static_cast<size_t>(v)]; }
};

MgNetwork build_network(const Oig& oig, CapacityMode mode, int density_cap = kDensityCap);
MgNetwork build_network_explicit(const Oig& oig, const std::vector<std::vector<Rat>>& cap_table,
                                 int density_cap = kDensityCap);

// Matching on the two arcs of every edge node, exact rational values.
struct Matching {
  std::vector<std::array<Rat, 2>> f;  // [edge]{u-side, v-side}
  Rat value() const;
};

bool is_feasible(const MgNetwork& net, const Matching& m);
// Every edge node fully split across its two arcs.
bool is_prediction_sufficient(const Matching& m);

struct DualCertificate {
  std::vector<Rat> y;                 // per edge node
  std::vector<std::vector<Rat>> z;    // [group][vertex]
  Rat value(const MgNetwork& net) const;
};

DualCertificate trivial_dual(const MgNetwork& net);
bool dual_feasible(const MgNetwork& net, const DualCertificate& cert);
// Zero duality gap in exact arithmetic certifies both sides optimal.
bool verify_optimality(const MgNetwork& net, const Matching& m, const DualCertificate& cert);

// Scaled solver state. Fractional capacities are handled by scaling the
// instance by D, the lcm of all capacity denominators: each edge node then
// supplies D units and all capacities are integers.
struct GroupFlowState {
  const MgNetwork* net = nullptr;
  Int D{1};
  std::vector<std::array<Int, 2>> flow;        // per edge, scaled arc values
  std::vector<Int> edge_total;                 // per edge, flow sum
  std::vector<std::vector<Int>> load;          // [group][vertex]
  std::vector<std::vector<Int>> cap_scaled;    // [group][vertex]
  std::vector<std::vector<std::vector<int>>> incident;  // [group][vertex] -> relevant edges

  Int value() const;
  Int target() const;  // D * number of group-covered edges
};

GroupFlowState make_flow_state(const MgNetwork& net);

// One step of an augmenting matching: sets or returns one unit of the arc
// (edge, vertex). A path alternates a forward step into a vertex with a
// backward step that frees an incident edge.
struct AugmentStep {
  int edge = 0;
  int vertex = 0;
  bool forward = true;
};

struct AugmentingMatching {
  size_t group = 0;            // group whose residual network carries the path
  std::vector<AugmentStep> steps;
  Int units{1};                // how many scaled units the path can carry
};

// Searches every group's residual network (canonical order, lexicographic
// arcs) for a path whose application keeps all groups' capacities intact.
// Returns nullopt iff the matching value already equals its target.
std::optional<AugmentingMatching> find_valid_augmenting_matching(const GroupFlowState& state);

void apply_augmenting(GroupFlowState& state, const AugmentingMatching& aug);

struct SolveResult {
  Matching matching;
  Int scale{1};         // D
  Int unit_steps{0};    // total scaled units pushed (<= D * |E|)
  long long paths = 0;  // augmenting matchings applied
  bool integral = false;
  bool prediction_sufficient = false;
  bool used_lp_fallback = false;  // augmenting search stalled; exact simplex closed the gap
  Rat value;
};

// Exact optimum of the matching program: augmenting matchings first; if the
// search stalls below |E|, an exact simplex pass either finds more value or
// certifies that no prediction sufficient matching exists at these
// capacities (possible when overlapping groups share edges).
SolveResult solve_matching(const MgNetwork& net);

std::string matching_to_json(const MgNetwork& net, const Matching& m);
std::string network_to_json(const MgNetwork& net);

}  // namespace mgoig
