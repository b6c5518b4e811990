#include "mgoig/oig.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <sstream>
#include <tuple>

#include "json.hpp"

namespace mgoig {

int Oig::vertex_index(uint32_t behavior) const {
  auto it = std::lower_bound(vertices.begin(), vertices.end(), behavior, LexLess{});
  if (it == vertices.end() || *it != behavior) return -1;
  return static_cast<int>(it - vertices.begin());
}

int Oig::edge_between(int u, int v) const {
  if (u > v) std::swap(u, v);
  auto it = std::lower_bound(edges.begin(), edges.end(), std::pair<int, int>(u, v),
                             [](const OigEdge& e, const std::pair<int, int>& p) {
                               return std::pair<int, int>(e.u, e.v) < p;
                             });
  if (it == edges.end() || it->u != u || it->v != v) return -1;
  return static_cast<int>(it - edges.begin());
}

Oig build_oig(const ConceptClass& c, const std::vector<uint32_t>& projected_masks) {
  Oig oig{c.domain(), c.members(), {}, projected_masks, {}};
  const auto& v = oig.vertices;
  for (size_t i = 0; i < v.size(); ++i) {
    for (int coord = 0; coord < oig.dom.m; ++coord) {
      uint32_t nb = v[i] ^ (1u << coord);
      int j = oig.vertex_index(nb);
      if (j > static_cast<int>(i))
        oig.edges.push_back({static_cast<int>(i), j, coord});
    }
  }
  std::sort(oig.edges.begin(), oig.edges.end(),
            [](const OigEdge& a, const OigEdge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
  oig.group_edges.resize(oig.group_masks.size());
  for (size_t g = 0; g < oig.group_masks.size(); ++g)
    oig.group_edges[g] = g_relevant_edges(oig, oig.group_masks[g]);
  return oig;
}

Oig build_oig(const ConceptClass& c, const GroupFamily& g) {
  if (!(c.domain() == g.domain()))
    throw std::invalid_argument("class and family must share a domain");
  return build_oig(c, g.masks());
}

std::vector<int> g_relevant_edges(const Oig& oig, uint32_t group_mask) {
  std::vector<int> out;
  for (size_t e = 0; e < oig.edges.size(); ++e)
    if (bit_get(group_mask, oig.edges[e].coord)) out.push_back(static_cast<int>(e));
  return out;
}

namespace {

// Compare witnesses (sorted vertex-index lists) lexicographically.
bool witness_less(const std::vector<int>& a, const std::vector<int>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct ComponentBest {
  long long edges_count = 0;
  int size = 1;
  std::vector<int> witness;
};

// Exhaustive max density over nonempty subsets of one component.
// `local_adj[i]` holds bitmask adjacency among the component's vertices;
// `global_ids` maps local index -> vertex index in the graph.
ComponentBest densest_subset(const std::vector<uint32_t>& local_adj,
                             const std::vector<int>& global_ids) {
  int n = static_cast<int>(local_adj.size());
  std::vector<int> edge_count(1u << n, 0);
  ComponentBest best;
  best.witness = {global_ids[0]};
  best.edges_count = 0;
  best.size = 1;
  for (uint32_t w = 1; w < (1u << n); ++w) {
    uint32_t rest = w & (w - 1);
    int low = std::countr_zero(w);
    int ec = edge_count[rest] + popcount32(local_adj[static_cast<size_t>(low)] & rest);
    edge_count[w] = ec;
    int size = popcount32(w);
    // compare ec/size vs best (exact integer cross product)
    long long lhs = static_cast<long long>(ec) * best.size;
    long long rhs = best.edges_count * static_cast<long long>(size);
    if (lhs < rhs) continue;
    std::vector<int> cand;
    cand.reserve(static_cast<size_t>(size));
    for (int i = 0; i < n; ++i)
      if (w & (1u << i)) cand.push_back(global_ids[static_cast<size_t>(i)]);
    std::sort(cand.begin(), cand.end());
    if (lhs > rhs || witness_less(cand, best.witness)) {
      best.edges_count = ec;
      best.size = size;
      best.witness = std::move(cand);
    }
  }
  return best;
}

}  // namespace

DensityReport max_subgraph_density(const Oig& oig, uint32_t group_mask, int cap) {
  std::vector<int> rel = g_relevant_edges(oig, group_mask);
  int nv = static_cast<int>(oig.vertices.size());

  DensityReport report;
  report.group_mask = group_mask;
  report.density = Rat(0);
  report.witness = {0};
  if (rel.empty() || nv == 0) return report;

  // Union-find over vertices touched by relevant edges.
  std::vector<int> parent(static_cast<size_t>(nv));
  for (int i = 0; i < nv; ++i) parent[static_cast<size_t>(i)] = i;
  std::function<int(int)> find = [&](int x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  };
  for (int e : rel) {
    int a = find(oig.edges[static_cast<size_t>(e)].u), b = find(oig.edges[static_cast<size_t>(e)].v);
    if (a != b) parent[static_cast<size_t>(a)] = b;
  }

  // Either a single global brute force (exact lex-least witness) or one per
  // component when the graph is too big as a whole.
  bool global = nv <= cap;
  std::vector<std::vector<int>> comps;
  if (global) {
    std::vector<int> all(static_cast<size_t>(nv));
    for (int i = 0; i < nv; ++i) all[static_cast<size_t>(i)] = i;
    comps.push_back(std::move(all));
  } else {
    std::vector<std::vector<int>> by_root(static_cast<size_t>(nv));
    std::vector<char> touched(static_cast<size_t>(nv), 0);
    for (int e : rel) {
      touched[static_cast<size_t>(oig.edges[static_cast<size_t>(e)].u)] = 1;
      touched[static_cast<size_t>(oig.edges[static_cast<size_t>(e)].v)] = 1;
    }
    for (int i = 0; i < nv; ++i)
      if (touched[static_cast<size_t>(i)]) by_root[static_cast<size_t>(find(i))].push_back(i);
    for (auto& comp : by_root)
      if (!comp.empty()) comps.push_back(std::move(comp));
    std::sort(comps.begin(), comps.end());
  }

  ComponentBest best;
  best.witness = {0};
  bool have = false;
  for (const auto& comp : comps) {
    if (static_cast<int>(comp.size()) > cap)
      throw Error(Errc::GraphTooLarge,
                  "densest-subgraph component exceeds the brute-force cap");
    std::vector<int> pos(static_cast<size_t>(nv), -1);
    for (size_t i = 0; i < comp.size(); ++i) pos[static_cast<size_t>(comp[i])] = static_cast<int>(i);
    std::vector<uint32_t> adj(comp.size(), 0);
    for (int e : rel) {
      int a = pos[static_cast<size_t>(oig.edges[static_cast<size_t>(e)].u)];
      int b = pos[static_cast<size_t>(oig.edges[static_cast<size_t>(e)].v)];
      if (a >= 0 && b >= 0) {
        adj[static_cast<size_t>(a)] |= (1u << b);
        adj[static_cast<size_t>(b)] |= (1u << a);
      }
    }
    ComponentBest cb = densest_subset(adj, comp);
    if (!have) {
      best = std::move(cb);
      have = true;
      continue;
    }
    long long lhs = cb.edges_count * static_cast<long long>(best.size);
    long long rhs = best.edges_count * static_cast<long long>(cb.size);
    if (lhs > rhs || (lhs == rhs && witness_less(cb.witness, best.witness)))
      best = std::move(cb);
  }

  report.density = Rat(Int(best.edges_count), Int(best.size));
  report.witness = best.witness;
  return report;
}

bool verify_density_bound(const Oig& oig, int d, int cap) {
  DensityReport r = max_subgraph_density(oig, oig.dom.full_mask(), cap);
  return r.density <= Rat(Int(d));
}

std::string oig_to_dot(const Oig& oig) {
  std::ostringstream os;
  os << "graph oig {\n";
  for (size_t i = 0; i < oig.vertices.size(); ++i)
    os << "  v" << i << " [label=\"" << bits_str(oig.vertices[i], oig.dom.m) << "\"];\n";
  for (const auto& e : oig.edges)
    os << "  v" << e.u << " -- v" << e.v << " [label=\"x" << e.coord << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string oig_to_json(const Oig& oig) {
  nlohmann::json j;
  j["m"] = oig.dom.m;
  j["vertices"] = nlohmann::json::array();
  for (uint32_t v : oig.vertices) j["vertices"].push_back(bits_str(v, oig.dom.m));
  j["edges"] = nlohmann::json::array();
  for (const auto& e : oig.edges)
    j["edges"].push_back({{"u", e.u}, {"v", e.v}, {"coord", e.coord}});
  j["groups"] = nlohmann::json::array();
  for (size_t g = 0; g < oig.group_masks.size(); ++g)
    j["groups"].push_back({{"mask", bits_str(oig.group_masks[g], oig.dom.m)},
                           {"edges", oig.group_edges[g]}});
  return j.dump(2);
}

}  // namespace mgoig
