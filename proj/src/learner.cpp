#include "mgoig/learner.hpp"

#include <algorithm>

namespace mgoig {

std::string to_string(LearnerKind k) {
  switch (k) {
    case LearnerKind::Base: return "mgoig";
    case LearnerKind::PrefixMajority: return "majority";
    case LearnerKind::AgnosticBase: return "agnostic";
    case LearnerKind::AgnosticMixture: return "agnostic-mixture";
    case LearnerKind::ErmBaseline: return "erm";
  }
  return "?";
}

int RealizableContext::coord_of(int point) const {
  auto it = std::lower_bound(points.begin(), points.end(), point);
  if (it == points.end() || *it != point) return -1;
  return static_cast<int>(it - points.begin());
}

Prediction RealizableContext::query(uint32_t pinned, int free_coord) const {
  uint32_t w0 = pinned & ~(1u << free_coord);
  uint32_t w1 = pinned | (1u << free_coord);
  int i0 = oig.vertex_index(w0);
  int i1 = oig.vertex_index(w1);
  if (i0 < 0 && i1 < 0)
    throw Error(Errc::InconsistentSample, "no group-realizable concept matches the sample");
  if (i0 < 0) return {Rat(1), true};
  if (i1 < 0) return {Rat(0), true};
  int e = oig.edge_between(i0, i1);
  // w0 is lexicographically below w1, so i0 < i1 and w0 sits on the u side.
  // The prediction takes w1's label (1) exactly when the edge is charged to w0.
  return {matching.f[static_cast<size_t>(e)][0], false};
}

Prediction RealizableContext::query_pinned(uint32_t pinned, int coord_of_test) const {
  if (oig.vertex_index(pinned) < 0)
    throw Error(Errc::InconsistentSample, "no group-realizable concept matches the sample");
  return {Rat(bit_get(pinned, coord_of_test) ? 1 : 0), true};
}

RealizableSolver::RealizableSolver(ConceptClass hypotheses, GroupFamily groups, CapacityMode mode,
                                   bool enable_cache)
    : hypotheses_(std::move(hypotheses)),
      groups_(std::move(groups)),
      mode_(mode),
      cache_enabled_(enable_cache) {
  if (!(hypotheses_.domain() == groups_.domain()))
    throw std::invalid_argument("hypotheses and groups must share a domain");
}

std::shared_ptr<const RealizableContext> RealizableSolver::context(uint32_t point_mask) const {
  if (point_mask == 0) throw std::invalid_argument("context needs at least one point");
  if (cache_enabled_) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(point_mask);
    if (it != cache_.end()) return it->second;
  }

  std::vector<int> points;
  for (int i = 0; i < domain().m; ++i)
    if (bit_get(point_mask, i)) points.push_back(i);

  auto ctx = std::make_shared<RealizableContext>();
  ctx->points = points;
  ConceptClass h_proj = project_class(hypotheses_, points);
  std::vector<uint32_t> masks = project_masks(groups_, points);
  ConceptClass concepts =
      enumerate_group_realizable(h_proj, GroupFamily(h_proj.domain(), masks));
  ctx->oig = build_oig(concepts, masks);
  ctx->net = build_network(ctx->oig, mode_);
  ctx->solve_info = solve_matching(ctx->net);
  if (!ctx->solve_info.prediction_sufficient)
    throw Error(Errc::SolverStuck,
                "no prediction-sufficient matching exists at these capacities");
  ctx->matching = ctx->solve_info.matching;

  if (cache_enabled_) {
    std::lock_guard<std::mutex> lock(mu_);
    auto [it, inserted] = cache_.emplace(point_mask, ctx);
    return it->second;
  }
  return ctx;
}

int Predictor::predict(const LabeledSample& s, int x, Rng& rng) const {
  Prediction p = predict_prob(s, x);
  if (p.forced) return p.prob_one == Rat(1) ? 1 : 0;
  return rng.bernoulli(p.prob_one) ? 1 : 0;
}

namespace {

struct PreparedQuery {
  uint32_t point_mask = 0;
  uint32_t pinned = 0;   // labels over context coords (test coord possibly too)
  bool test_seen = false;
};

PreparedQuery prepare(const RealizableSolver& solver, const LabeledSample& s, int x) {
  s.validate_against(solver.domain());
  if (x < 0 || x >= solver.domain().m) throw std::invalid_argument("test point out of domain");
  if (!s.duplicates_consistent())
    throw Error(Errc::InconsistentSample, "duplicate sample points carry conflicting labels");
  PreparedQuery q;
  for (auto& [p, y] : s.entries) {
    (void)y;
    q.point_mask |= (1u << p);
  }
  q.test_seen = bit_get(q.point_mask, x);
  q.point_mask |= (1u << x);
  return q;
}

uint32_t pin_labels(const RealizableContext& ctx, const LabeledSample& s) {
  uint32_t pinned = 0;
  for (auto& [p, y] : s.entries)
    if (y) pinned |= (1u << ctx.coord_of(p));
  return pinned;
}

}  // namespace

Prediction MgoigPredictor::predict_prob(const LabeledSample& s, int x) const {
  PreparedQuery q = prepare(*solver_, s, x);
  auto ctx = solver_->context(q.point_mask);
  uint32_t pinned = pin_labels(*ctx, s);
  int xc = ctx->coord_of(x);
  if (q.test_seen) return ctx->query_pinned(pinned, xc);
  return ctx->query(pinned, xc);
}

Prediction ErmPredictor::predict_prob(const LabeledSample& s, int x) const {
  PreparedQuery q = prepare(*solver_, s, x);
  auto ctx = solver_->context(q.point_mask);
  uint32_t pinned = pin_labels(*ctx, s);
  int xc = ctx->coord_of(x);
  if (q.test_seen) return ctx->query_pinned(pinned, xc);
  // Least consistent concept: the 0-completion when it exists.
  uint32_t w0 = pinned & ~(1u << xc);
  uint32_t w1 = pinned | (1u << xc);
  if (ctx->oig.vertex_index(w0) >= 0) return {Rat(0), true};
  if (ctx->oig.vertex_index(w1) >= 0) return {Rat(1), true};
  throw Error(Errc::InconsistentSample, "no group-realizable concept matches the sample");
}

Rat majority_prob_one(const std::vector<Rat>& ps, int ones, int voters) {
  // distribution of the number of 1-votes among the fractional voters
  std::vector<Rat> dist{Rat(1)};
  for (const Rat& p : ps) {
    std::vector<Rat> next(dist.size() + 1, Rat(0));
    for (size_t j = 0; j < dist.size(); ++j) {
      next[j] += dist[j] * (Rat(1) - p);
      next[j + 1] += dist[j] * p;
    }
    dist = std::move(next);
  }
  Rat out(0);
  for (size_t j = 0; j < dist.size(); ++j)
    if (2 * (ones + static_cast<int>(j)) > voters) out += dist[j];
  return out;
}

Prediction PrefixMajorityPredictor::predict_prob(const LabeledSample& s, int x) const {
  size_t n = s.size();
  if (n < 4) throw std::invalid_argument("prefix majority needs a sample of size at least 4");
  size_t start = (n + 3) / 4;  // ceil(n/4)
  int ones = 0, voters = 0;
  bool all_forced = true;
  std::vector<Rat> fractional;
  for (size_t t = start; t <= n - 1; ++t) {
    Prediction p = base_->predict_prob(s.prefix(t), x);
    ++voters;
    if (p.prob_one == Rat(1))
      ++ones;
    else if (p.prob_one != Rat(0))
      fractional.push_back(p.prob_one);
    all_forced = all_forced && p.forced;
  }
  Rat prob = majority_prob_one(fractional, ones, voters);
  return {prob, all_forced && fractional.empty()};
}

int PrefixMajorityPredictor::predict(const LabeledSample& s, int x, Rng& rng) const {
  size_t n = s.size();
  if (n < 4) throw std::invalid_argument("prefix majority needs a sample of size at least 4");
  size_t start = (n + 3) / 4;
  int ones = 0, voters = 0;
  for (size_t t = start; t <= n - 1; ++t) {
    ones += base_->predict(s.prefix(t), x, rng);
    ++voters;
  }
  return 2 * ones > voters ? 1 : 0;
}

}  // namespace mgoig
