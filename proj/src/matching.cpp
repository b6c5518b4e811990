#include "mgoig/matching.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <functional>
#include <map>

#include "json.hpp"
#include "mgoig/lp_oracle.hpp"

namespace mgoig {

std::string to_string(CapacityMode mode) {
  switch (mode) {
    case CapacityMode::Exact: return "exact";
    case CapacityMode::Ceil: return "ceil";
    case CapacityMode::Explicit: return "explicit";
  }
  return "?";
}

namespace {

MgNetwork network_skeleton(const Oig& oig) {
  MgNetwork net;
  net.n_vertices = static_cast<int>(oig.vertices.size());
  net.edges = oig.edges;
  net.group_masks = oig.group_masks;
  net.group_edges = oig.group_edges;
  if (net.group_masks.size() > 64)
    throw Error(Errc::InstanceTooLarge, "more than 64 groups after projection");
  net.edge_groups.assign(net.edges.size(), 0);
  for (size_t g = 0; g < net.group_edges.size(); ++g)
    for (int e : net.group_edges[g]) net.edge_groups[static_cast<size_t>(e)] |= (1ull << g);
  for (size_t e = 0; e < net.edges.size(); ++e)
    if (net.edge_groups[e] == 0) net.uncovered_edges.push_back(static_cast<int>(e));
  return net;
}

}  // namespace

MgNetwork build_network(const Oig& oig, CapacityMode mode, int density_cap) {
  if (mode == CapacityMode::Explicit)
    throw std::invalid_argument("explicit mode takes a capacity table");
  MgNetwork net = network_skeleton(oig);
  net.mode = mode;
  net.cap.resize(net.n_groups());
  for (size_t g = 0; g < net.n_groups(); ++g) {
    Rat d = max_subgraph_density(oig, net.group_masks[g], density_cap).density;
    Rat c = (mode == CapacityMode::Ceil) ? Rat(rat_ceil(d)) : d;
    net.cap[g].assign(static_cast<size_t>(net.n_vertices), c);
  }
  return net;
}

MgNetwork build_network_explicit(const Oig& oig, const std::vector<std::vector<Rat>>& cap_table,
                                 int density_cap) {
  MgNetwork net = network_skeleton(oig);
  net.mode = CapacityMode::Explicit;
  if (cap_table.size() != net.n_groups())
    throw std::invalid_argument("capacity table must have one row per group");
  for (const auto& row : cap_table)
    if (row.size() != static_cast<size_t>(net.n_vertices))
      throw std::invalid_argument("capacity row must have one entry per vertex");
  net.cap = cap_table;
  // Uniform rows below the exact density lose the solver's completeness
  // guarantee; flag it (but only where the density is itself computable).
  for (size_t g = 0; g < net.n_groups(); ++g) {
    const auto& row = net.cap[g];
    bool uniform = std::adjacent_find(row.begin(), row.end(), std::not_equal_to<Rat>()) == row.end();
    if (!uniform || row.empty()) continue;
    try {
      Rat d = max_subgraph_density(oig, net.group_masks[g], density_cap).density;
      if (row[0] < d) net.capacity_warning = true;
    } catch (const Error&) {
      // component above the brute-force cap: skip the check
    }
  }
  return net;
}

Rat Matching::value() const {
  Rat v(0);
  for (const auto& a : f) v += a[0] + a[1];
  return v;
}

bool is_feasible(const MgNetwork& net, const Matching& m) {
  if (m.f.size() != net.n_edges()) return false;
  for (const auto& a : m.f) {
    if (a[0] < Rat(0) || a[1] < Rat(0)) return false;
    if (a[0] + a[1] > Rat(1)) return false;
  }
  for (size_t g = 0; g < net.n_groups(); ++g) {
    std::vector<Rat> loads(static_cast<size_t>(net.n_vertices), Rat(0));
    for (int e : net.group_edges[g]) {
      loads[static_cast<size_t>(net.edges[static_cast<size_t>(e)].u)] += m.f[static_cast<size_t>(e)][0];
      loads[static_cast<size_t>(net.edges[static_cast<size_t>(e)].v)] += m.f[static_cast<size_t>(e)][1];
    }
    for (int v = 0; v < net.n_vertices; ++v)
      if (loads[static_cast<size_t>(v)] > net.capacity(g, v)) return false;
  }
  return true;
}

bool is_prediction_sufficient(const Matching& m) {
  for (const auto& a : m.f)
    if (a[0] + a[1] != Rat(1)) return false;
  return true;
}

Rat DualCertificate::value(const MgNetwork& net) const {
  Rat v(0);
  for (const auto& ye : y) v += ye;
  for (size_t g = 0; g < net.n_groups(); ++g)
    for (int vtx = 0; vtx < net.n_vertices; ++vtx)
      v += net.capacity(g, vtx) * z[g][static_cast<size_t>(vtx)];
  return v;
}

DualCertificate trivial_dual(const MgNetwork& net) {
  DualCertificate cert;
  cert.y.assign(net.n_edges(), Rat(1));
  cert.z.assign(net.n_groups(), std::vector<Rat>(static_cast<size_t>(net.n_vertices), Rat(0)));
  return cert;
}

bool dual_feasible(const MgNetwork& net, const DualCertificate& cert) {
  if (cert.y.size() != net.n_edges() || cert.z.size() != net.n_groups()) return false;
  for (const auto& ye : cert.y)
    if (ye < Rat(0)) return false;
  for (const auto& row : cert.z)
    for (const auto& zv : row)
      if (zv < Rat(0)) return false;
  for (size_t e = 0; e < net.n_edges(); ++e) {
    for (int w : {net.edges[e].u, net.edges[e].v}) {
      Rat lhs = cert.y[e];
      uint64_t gm = net.edge_groups[e];
      while (gm) {
        int g = std::countr_zero(gm);
        lhs += cert.z[static_cast<size_t>(g)][static_cast<size_t>(w)];
        gm &= gm - 1;
      }
      if (lhs < Rat(1)) return false;
    }
  }
  return true;
}

bool verify_optimality(const MgNetwork& net, const Matching& m, const DualCertificate& cert) {
  if (!is_feasible(net, m)) return false;
  if (!dual_feasible(net, cert)) return false;
  return m.value() == cert.value(net);
}

Int GroupFlowState::value() const {
  Int v = 0;
  for (const auto& t : edge_total) v += t;
  return v;
}

Int GroupFlowState::target() const {
  return D * Int(net->n_edges() - net->uncovered_edges.size());
}

GroupFlowState make_flow_state(const MgNetwork& net) {
  GroupFlowState st;
  st.net = &net;
  st.D = 1;
  for (const auto& row : net.cap)
    for (const auto& c : row) {
      if (c < Rat(0))
        throw std::invalid_argument("capacities must be nonnegative");
      st.D = int_lcm(st.D, c.denominator());
    }
  if (st.D == 0) st.D = 1;
  st.flow.assign(net.n_edges(), {Int(0), Int(0)});
  st.edge_total.assign(net.n_edges(), Int(0));
  st.load.assign(net.n_groups(), std::vector<Int>(static_cast<size_t>(net.n_vertices), Int(0)));
  st.cap_scaled.resize(net.n_groups());
  for (size_t g = 0; g < net.n_groups(); ++g) {
    st.cap_scaled[g].resize(static_cast<size_t>(net.n_vertices));
    for (int v = 0; v < net.n_vertices; ++v) {
      Rat scaled = net.capacity(g, v) * Rat(st.D);
      st.cap_scaled[g][static_cast<size_t>(v)] = scaled.numerator();  // denominator is 1 by lcm
    }
  }
  st.incident.assign(net.n_groups(), {});
  for (size_t g = 0; g < net.n_groups(); ++g) {
    st.incident[g].assign(static_cast<size_t>(net.n_vertices), {});
    for (int e : net.group_edges[g]) {
      st.incident[g][static_cast<size_t>(net.edges[static_cast<size_t>(e)].u)].push_back(e);
      st.incident[g][static_cast<size_t>(net.edges[static_cast<size_t>(e)].v)].push_back(e);
    }
  }
  return st;
}

namespace {

int arc_side(const OigEdge& e, int vertex) { return vertex == e.u ? 0 : 1; }

// Validity across all groups: largest number of units the path can carry,
// 0 if even a single unit breaks some group's capacity.
Int path_bottleneck(const GroupFlowState& st, const std::vector<AugmentStep>& steps) {
  const MgNetwork& net = *st.net;
  Int k = st.D - st.edge_total[static_cast<size_t>(steps.front().edge)];
  for (const auto& s : steps) {
    if (!s.forward) {
      const Int& have =
          st.flow[static_cast<size_t>(s.edge)][static_cast<size_t>(arc_side(net.edges[static_cast<size_t>(s.edge)], s.vertex))];
      if (have < k) k = have;
    }
  }
  // net load deltas per (group, vertex)
  std::map<std::pair<size_t, int>, long long> delta;
  for (const auto& s : steps) {
    uint64_t gm = net.edge_groups[static_cast<size_t>(s.edge)];
    while (gm) {
      int g = std::countr_zero(gm);
      delta[{static_cast<size_t>(g), s.vertex}] += s.forward ? 1 : -1;
      gm &= gm - 1;
    }
  }
  for (const auto& [key, d] : delta) {
    if (d <= 0) continue;
    Int slack = st.cap_scaled[key.first][static_cast<size_t>(key.second)] -
                st.load[key.first][static_cast<size_t>(key.second)];
    Int allowed = slack / d;
    if (allowed < k) k = allowed;
  }
  if (k < 0) k = 0;
  return k;
}

struct SearchNode {
  bool is_vertex = false;
  int id = 0;
  int parent = -1;  // index into the BFS pool
};

// Lexicographic BFS for a shortest s->t path in group g's residual network.
std::optional<std::vector<AugmentStep>> bfs_path(const GroupFlowState& st, size_t g) {
  const MgNetwork& net = *st.net;
  std::vector<SearchNode> pool;
  std::vector<char> seen_edge(net.n_edges(), 0);
  std::vector<char> seen_vertex(static_cast<size_t>(net.n_vertices), 0);
  std::deque<int> queue;

  for (int e : net.group_edges[g]) {
    if (st.edge_total[static_cast<size_t>(e)] < st.D) {
      pool.push_back({false, e, -1});
      queue.push_back(static_cast<int>(pool.size()) - 1);
      seen_edge[static_cast<size_t>(e)] = 1;
    }
  }

  auto reconstruct = [&](int node_idx) {
    std::vector<AugmentStep> steps;
    // walk back: vertex<-edge pairs
    int cur = node_idx;
    while (cur != -1) {
      const SearchNode& vn = pool[static_cast<size_t>(cur)];
      const SearchNode& en = pool[static_cast<size_t>(vn.parent)];
      steps.push_back({en.id, vn.id, true});  // forward (edge -> vertex)
      int before = en.parent;
      if (before != -1) {
        const SearchNode& pv = pool[static_cast<size_t>(before)];
        steps.push_back({en.id, pv.id, false});  // backward (vertex -> edge)
        cur = before;
      } else {
        cur = -1;
      }
    }
    std::reverse(steps.begin(), steps.end());
    return steps;
  };

  while (!queue.empty()) {
    int idx = queue.front();
    queue.pop_front();
    const SearchNode node = pool[static_cast<size_t>(idx)];
    if (!node.is_vertex) {
      const OigEdge& e = net.edges[static_cast<size_t>(node.id)];
      for (int w : {e.u, e.v}) {
        if (seen_vertex[static_cast<size_t>(w)]) continue;
        seen_vertex[static_cast<size_t>(w)] = 1;
        pool.push_back({true, w, idx});
        int widx = static_cast<int>(pool.size()) - 1;
        if (st.cap_scaled[g][static_cast<size_t>(w)] - st.load[g][static_cast<size_t>(w)] >= 1)
          return reconstruct(widx);
        queue.push_back(widx);
      }
    } else {
      int w = node.id;
      for (int e : st.incident[g][static_cast<size_t>(w)]) {
        if (seen_edge[static_cast<size_t>(e)]) continue;
        int side = arc_side(net.edges[static_cast<size_t>(e)], w);
        if (st.flow[static_cast<size_t>(e)][static_cast<size_t>(side)] < 1) continue;
        seen_edge[static_cast<size_t>(e)] = 1;
        pool.push_back({false, e, idx});
        queue.push_back(static_cast<int>(pool.size()) - 1);
      }
    }
  }
  return std::nullopt;
}

// Exhaustive DFS over simple residual paths, lexicographic arc order; used
// when the BFS path fails cross-group validity. Returns the first valid path.
std::optional<AugmentingMatching> dfs_valid_path(const GroupFlowState& st, size_t g,
                                                 long long budget, bool& out_truncated) {
  const MgNetwork& net = *st.net;
  std::vector<char> on_path_edge(net.n_edges(), 0);
  std::vector<char> on_path_vertex(static_cast<size_t>(net.n_vertices), 0);
  std::vector<AugmentStep> steps;
  long long expansions = 0;
  bool truncated = false;

  // Depth-first over alternating edge/vertex nodes.
  std::function<std::optional<AugmentingMatching>(int)> from_edge;
  std::function<std::optional<AugmentingMatching>(int)> from_vertex;

  from_edge = [&](int e) -> std::optional<AugmentingMatching> {
    const OigEdge& ed = net.edges[static_cast<size_t>(e)];
    for (int w : {ed.u, ed.v}) {
      if (on_path_vertex[static_cast<size_t>(w)]) continue;
      if (++expansions > budget) {
        truncated = true;
        return std::nullopt;
      }
      steps.push_back({e, w, true});
      on_path_vertex[static_cast<size_t>(w)] = 1;
      auto r = from_vertex(w);
      if (r) return r;
      on_path_vertex[static_cast<size_t>(w)] = 0;
      steps.pop_back();
      if (truncated) return std::nullopt;
    }
    return std::nullopt;
  };

  from_vertex = [&](int w) -> std::optional<AugmentingMatching> {
    if (st.cap_scaled[g][static_cast<size_t>(w)] - st.load[g][static_cast<size_t>(w)] >= 1) {
      Int k = path_bottleneck(st, steps);
      if (k >= 1) return AugmentingMatching{g, steps, k};
    }
    for (int e : st.incident[g][static_cast<size_t>(w)]) {
      if (on_path_edge[static_cast<size_t>(e)]) continue;
      int side = arc_side(net.edges[static_cast<size_t>(e)], w);
      if (st.flow[static_cast<size_t>(e)][static_cast<size_t>(side)] < 1) continue;
      if (++expansions > budget) {
        truncated = true;
        return std::nullopt;
      }
      steps.push_back({e, w, false});
      on_path_edge[static_cast<size_t>(e)] = 1;
      auto r = from_edge(e);
      if (r) return r;
      on_path_edge[static_cast<size_t>(e)] = 0;
      steps.pop_back();
      if (truncated) return std::nullopt;
    }
    return std::nullopt;
  };

  for (int e : net.group_edges[g]) {
    if (st.edge_total[static_cast<size_t>(e)] >= st.D) continue;
    on_path_edge[static_cast<size_t>(e)] = 1;
    auto r = from_edge(e);
    if (r) return r;
    on_path_edge[static_cast<size_t>(e)] = 0;
    if (truncated) {
      out_truncated = true;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<AugmentingMatching> find_valid_augmenting_matching(const GroupFlowState& state) {
  constexpr long long kDfsBudget = 4'000'000;
  bool any_truncated = false;
  for (size_t g = 0; g < state.net->n_groups(); ++g) {
    auto path = bfs_path(state, g);
    if (path) {
      Int k = path_bottleneck(state, *path);
      if (k >= 1) return AugmentingMatching{g, std::move(*path), k};
      auto fallback = dfs_valid_path(state, g, kDfsBudget, any_truncated);
      if (fallback) return fallback;
    }
  }
  if (any_truncated)
    throw Error(Errc::SolverStuck, "augmenting-path search budget exceeded");
  return std::nullopt;
}

void apply_augmenting(GroupFlowState& state, const AugmentingMatching& aug) {
  const MgNetwork& net = *state.net;
  const Int& k = aug.units;
  state.edge_total[static_cast<size_t>(aug.steps.front().edge)] += k;
  for (const auto& s : aug.steps) {
    int side = arc_side(net.edges[static_cast<size_t>(s.edge)], s.vertex);
    uint64_t gm = net.edge_groups[static_cast<size_t>(s.edge)];
    if (s.forward) {
      state.flow[static_cast<size_t>(s.edge)][static_cast<size_t>(side)] += k;
      while (gm) {
        int g = std::countr_zero(gm);
        state.load[static_cast<size_t>(g)][static_cast<size_t>(s.vertex)] += k;
        gm &= gm - 1;
      }
    } else {
      state.flow[static_cast<size_t>(s.edge)][static_cast<size_t>(side)] -= k;
      while (gm) {
        int g = std::countr_zero(gm);
        state.load[static_cast<size_t>(g)][static_cast<size_t>(s.vertex)] -= k;
        gm &= gm - 1;
      }
    }
  }
}

SolveResult solve_matching(const MgNetwork& net) {
  GroupFlowState st = make_flow_state(net);
  SolveResult result;
  result.scale = st.D;

  Int target = st.target();
  while (st.value() < target) {
    auto aug = find_valid_augmenting_matching(st);
    if (!aug) break;
    apply_augmenting(st, *aug);
    result.unit_steps += aug->units;
    ++result.paths;
  }

  // Edges outside every group have no capacity constraints; park each on its
  // lexicographically least endpoint.
  for (int e : net.uncovered_edges) {
    st.flow[static_cast<size_t>(e)][0] = st.D;
    st.edge_total[static_cast<size_t>(e)] = st.D;
    result.unit_steps += st.D;
  }

  result.matching.f.resize(net.n_edges());
  for (size_t e = 0; e < net.n_edges(); ++e) {
    result.matching.f[e][0] = Rat(st.flow[e][0], st.D);
    result.matching.f[e][1] = Rat(st.flow[e][1], st.D);
  }
  result.value = result.matching.value();

  if (st.value() < target) {
    // Stalled below |E|: let the exact simplex either find the rest of the
    // value or certify that this is the true optimum.
    LpMatchingSolution lp = lp_solve_matching(net);
    if (lp.value > result.value) {
      result.matching = lp.matching;
      result.value = lp.value;
      result.used_lp_fallback = true;
    }
  }

  result.integral = true;
  for (const auto& arc : result.matching.f)
    for (const Rat& x : arc)
      if (x != Rat(0) && x != Rat(1)) result.integral = false;
  result.prediction_sufficient = is_prediction_sufficient(result.matching);
  return result;
}

std::string network_to_json(const MgNetwork& net) {
  nlohmann::json j;
  j["n_vertices"] = net.n_vertices;
  j["mode"] = to_string(net.mode);
  j["capacity_warning"] = net.capacity_warning;
  j["edges"] = nlohmann::json::array();
  for (const auto& e : net.edges) j["edges"].push_back({{"u", e.u}, {"v", e.v}, {"coord", e.coord}});
  j["groups"] = nlohmann::json::array();
  for (size_t g = 0; g < net.n_groups(); ++g) {
    nlohmann::json caps = nlohmann::json::array();
    for (int v = 0; v < net.n_vertices; ++v) caps.push_back(rat_str(net.capacity(g, v)));
    j["groups"].push_back({{"edges", net.group_edges[g]}, {"cap", caps}});
  }
  return j.dump(2);
}

std::string matching_to_json(const MgNetwork& net, const Matching& m) {
  nlohmann::json j;
  j["arcs"] = nlohmann::json::array();
  for (size_t e = 0; e < m.f.size(); ++e) {
    j["arcs"].push_back({{"edge", e},
                         {"u", net.edges[e].u},
                         {"v", net.edges[e].v},
                         {"f_u", rat_str(m.f[e][0])},
                         {"f_v", rat_str(m.f[e][1])}});
  }
  j["value"] = rat_str(m.value());
  return j.dump(2);
}

}  // namespace mgoig
