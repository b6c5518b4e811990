#include "mgoig/agnostic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "json.hpp"

namespace mgoig {

int behavior_credit(uint32_t u, const std::vector<uint32_t>& hypotheses_on_positions,
                    uint32_t g_positions) {
  int best = -1;
  for (uint32_t h : hypotheses_on_positions) {
    int d = popcount32((u ^ h) & g_positions);
    if (best < 0 || d < best) best = d;
    if (best == 0) break;
  }
  return best < 0 ? 0 : best;
}

Rat discounted_density(const AgnosticContext& ctx, const std::vector<int>& vertex_ids,
                       size_t mask_idx) {
  if (vertex_ids.empty()) throw std::invalid_argument("discounted density needs a nonempty set");
  std::vector<char> in(ctx.oig.vertices.size(), 0);
  long long credit_sum = 0;
  for (int v : vertex_ids) {
    in[static_cast<size_t>(v)] = 1;
    credit_sum += ctx.credits[mask_idx][static_cast<size_t>(v)];
  }
  long long edge_count = 0;
  for (int e : ctx.oig.group_edges[mask_idx]) {
    const OigEdge& ed = ctx.oig.edges[static_cast<size_t>(e)];
    if (in[static_cast<size_t>(ed.u)] && in[static_cast<size_t>(ed.v)]) ++edge_count;
  }
  return Rat(Int(edge_count - credit_sum), Int(static_cast<long long>(vertex_ids.size())));
}

namespace {

// Arc values are averaged over the coordinate permutations that permute
// positions of equal points. The instance is symmetric under these, so the
// averaged matching is still feasible and prediction sufficient, and the
// predictor's output no longer depends on which duplicate position a label
// sits on. Orbits are keyed by (per-block popcounts of the endpoint, block
// of the flipped coordinate, endpoint bit at that coordinate).
void symmetrize_over_duplicates(const std::vector<int>& points, const Oig& oig, Matching& m) {
  int n = static_cast<int>(points.size());
  std::vector<int> block(static_cast<size_t>(n));  // block id per coordinate
  int nblocks = 0;
  bool any_dup = false;
  for (int i = 0; i < n; ++i) {
    if (i > 0 && points[static_cast<size_t>(i)] == points[static_cast<size_t>(i - 1)]) {
      block[static_cast<size_t>(i)] = nblocks - 1;
      any_dup = true;
    } else {
      block[static_cast<size_t>(i)] = nblocks++;
    }
  }
  if (!any_dup) return;

  using Key = std::pair<std::vector<int>, std::pair<int, int>>;
  std::map<Key, std::pair<Rat, long long>> orbit;  // sum, count
  auto key_of = [&](size_t e, int side) {
    const OigEdge& ed = oig.edges[e];
    uint32_t w = oig.vertices[static_cast<size_t>(side == 0 ? ed.u : ed.v)];
    std::vector<int> counts(static_cast<size_t>(nblocks), 0);
    for (int i = 0; i < n; ++i)
      if (bit_get(w, i)) ++counts[static_cast<size_t>(block[static_cast<size_t>(i)])];
    int wc = bit_get(w, ed.coord) ? 1 : 0;
    return Key{std::move(counts), {block[static_cast<size_t>(ed.coord)], wc}};
  };

  for (size_t e = 0; e < oig.edges.size(); ++e)
    for (int side : {0, 1}) {
      auto& slot = orbit[key_of(e, side)];
      slot.first += m.f[e][static_cast<size_t>(side)];
      slot.second += 1;
    }
  for (size_t e = 0; e < oig.edges.size(); ++e)
    for (int side : {0, 1}) {
      const auto& slot = orbit[key_of(e, side)];
      m.f[e][static_cast<size_t>(side)] = slot.first / Rat(Int(slot.second));
    }
}

}  // namespace

AgnosticSolver::AgnosticSolver(ConceptClass hypotheses, GroupFamily groups, bool enable_cache)
    : hypotheses_(std::move(hypotheses)),
      groups_(std::move(groups)),
      cache_enabled_(enable_cache) {
  if (!(hypotheses_.domain() == groups_.domain()))
    throw std::invalid_argument("hypotheses and groups must share a domain");
}

std::shared_ptr<const AgnosticContext> AgnosticSolver::context(std::vector<int> points) const {
  if (points.empty()) throw std::invalid_argument("context needs at least one position");
  std::sort(points.begin(), points.end());
  for (int p : points)
    if (p < 0 || p >= domain().m) throw std::invalid_argument("position out of domain");
  if (static_cast<int>(points.size()) > kAgnosticCap)
    throw Error(Errc::InstanceTooLarge, "agnostic graph exceeds the position cap");

  if (cache_enabled_) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(points);
    if (it != cache_.end()) return it->second;
  }

  auto ctx = std::make_shared<AgnosticContext>();
  ctx->points = points;
  int n = ctx->n();

  // group masks over positions, deduplicated with the family mapping kept
  ctx->group_to_mask.assign(groups_.size(), -1);
  std::map<uint32_t, int> seen;
  for (size_t gi = 0; gi < groups_.size(); ++gi) {
    uint32_t mask = 0;
    for (int i = 0; i < n; ++i)
      if (bit_get(groups_.at(gi), points[static_cast<size_t>(i)])) mask |= (1u << i);
    if (mask == 0) continue;
    auto it = seen.find(mask);
    if (it == seen.end()) {
      int idx = static_cast<int>(ctx->position_masks.size());
      ctx->position_masks.push_back(mask);
      seen.emplace(mask, idx);
      ctx->group_to_mask[gi] = idx;
    } else {
      ctx->group_to_mask[gi] = it->second;
    }
  }

  for (uint32_t h : hypotheses_.members()) {
    uint32_t hp = 0;
    for (int i = 0; i < n; ++i)
      if (bit_get(h, points[static_cast<size_t>(i)])) hp |= (1u << i);
    ctx->hypotheses_positions.push_back(hp);
  }
  std::sort(ctx->hypotheses_positions.begin(), ctx->hypotheses_positions.end());
  ctx->hypotheses_positions.erase(
      std::unique(ctx->hypotheses_positions.begin(), ctx->hypotheses_positions.end()),
      ctx->hypotheses_positions.end());

  ConceptClass cube = make_full_cube(Domain(n));
  ctx->oig = build_oig(cube, ctx->position_masks);

  size_t nv = ctx->oig.vertices.size();
  ctx->credits.assign(ctx->position_masks.size(), std::vector<int>(nv, 0));
  ctx->phi.assign(ctx->position_masks.size(), Rat(0));
  std::vector<std::vector<Rat>> cap(ctx->position_masks.size(), std::vector<Rat>(nv));
  for (size_t g = 0; g < ctx->position_masks.size(); ++g) {
    long long credit_sum = 0;
    for (size_t v = 0; v < nv; ++v) {
      int c = behavior_credit(ctx->oig.vertices[v], ctx->hypotheses_positions,
                              ctx->position_masks[g]);
      ctx->credits[g][v] = c;
      credit_sum += c;
    }
    long long rel_edges = static_cast<long long>(ctx->oig.group_edges[g].size());
    ctx->phi[g] = Rat(Int(rel_edges - credit_sum), Int(static_cast<long long>(nv)));
    for (size_t v = 0; v < nv; ++v)
      cap[g][v] = ctx->phi[g] + Rat(ctx->credits[g][v]);
  }

  ctx->net = build_network_explicit(ctx->oig, cap);
  ctx->solve_info = solve_matching(ctx->net);
  if (!ctx->solve_info.prediction_sufficient)
    throw Error(Errc::SolverStuck,
                "no prediction-sufficient matching exists at the discounted-density capacities");
  ctx->matching = ctx->solve_info.matching;
  symmetrize_over_duplicates(ctx->points, ctx->oig, ctx->matching);

  if (cache_enabled_) {
    std::lock_guard<std::mutex> lock(mu_);
    auto [it, inserted] = cache_.emplace(points, ctx);
    return it->second;
  }
  return ctx;
}

AgnosticLayout agnostic_layout(const LabeledSample& s, int x) {
  std::vector<std::pair<int, int>> items;  // (point, rank) with test rank 2
  items.reserve(s.size() + 1);
  for (auto& [p, y] : s.entries) items.emplace_back(p, y);
  items.emplace_back(x, 2);
  std::sort(items.begin(), items.end());
  AgnosticLayout layout;
  layout.points.reserve(items.size());
  for (size_t i = 0; i < items.size(); ++i) {
    layout.points.push_back(items[i].first);
    if (items[i].second == 2)
      layout.test_coord = static_cast<int>(i);
    else if (items[i].second == 1)
      layout.pinned |= (1u << i);
  }
  return layout;
}

Prediction AgnosticPredictor::predict_prob(const LabeledSample& s, int x) const {
  s.validate_against(solver_->domain());
  if (x < 0 || x >= solver_->domain().m) throw std::invalid_argument("test point out of domain");
  AgnosticLayout layout = agnostic_layout(s, x);
  auto ctx = solver_->context(layout.points);
  // both completions exist in the cube, so this is always an edge query
  uint32_t w0 = layout.pinned;
  uint32_t w1 = layout.pinned | (1u << layout.test_coord);
  int i0 = ctx->oig.vertex_index(w0);
  int i1 = ctx->oig.vertex_index(w1);
  int e = ctx->oig.edge_between(i0, i1);
  return {ctx->matching.f[static_cast<size_t>(e)][0], false};
}

int mixture_prefix_count(size_t n, double delta, int d) {
  if (delta <= 0.0 || delta >= 1.0) throw std::invalid_argument("delta must be in (0,1)");
  double l = std::log(2.0 / delta);
  double k = std::ceil(l * static_cast<double>(n) / (8.0 * d + l));
  auto kk = static_cast<long long>(k);
  if (kk < 1 || kk > static_cast<long long>(n) - 1)
    throw Error(Errc::KOutOfRange, "mixture prefix count outside [1, n-1]");
  return static_cast<int>(kk);
}

Prediction AgnosticMixturePredictor::predict_prob(const LabeledSample& s, int x) const {
  int k = mixture_prefix_count(s.size(), delta_, d_);
  Rat total(0);
  bool forced = true;
  for (int j = 0; j < k; ++j) {
    Prediction p = base_->predict_prob(s.prefix(s.size() - static_cast<size_t>(k) + static_cast<size_t>(j)), x);
    total += p.prob_one;
    forced = forced && p.forced;
  }
  Rat prob = total / Rat(k);
  return {prob, forced && (prob == Rat(0) || prob == Rat(1))};
}

int AgnosticMixturePredictor::predict(const LabeledSample& s, int x, Rng& rng) const {
  int k = mixture_prefix_count(s.size(), delta_, d_);
  int j = static_cast<int>(rng.below(static_cast<uint64_t>(k)));
  return base_->predict(s.prefix(s.size() - static_cast<size_t>(k) + static_cast<size_t>(j)), x, rng);
}

std::string agnostic_audit_json(const AgnosticContext& ctx) {
  nlohmann::json j;
  j["n"] = ctx.n();
  j["points"] = ctx.points;
  j["groups"] = nlohmann::json::array();
  for (size_t g = 0; g < ctx.position_masks.size(); ++g) {
    nlohmann::json row;
    row["position_mask"] = bits_str(ctx.position_masks[g], ctx.n());
    row["phi"] = rat_str(ctx.phi[g]);
    nlohmann::json credits = nlohmann::json::array();
    nlohmann::json caps = nlohmann::json::array();
    for (size_t v = 0; v < ctx.oig.vertices.size(); ++v) {
      credits.push_back(ctx.credits[g][v]);
      caps.push_back(rat_str(ctx.capacity_of(g, static_cast<int>(v))));
    }
    row["credits"] = credits;
    row["capacities"] = caps;
    j["groups"].push_back(row);
  }
  j["matching_value"] = rat_str(ctx.matching.value());
  return j.dump(2);
}

}  // namespace mgoig
