#pragma once

#include "mgoig/learner.hpp"

namespace mgoig {

// Position count cap for the full-hypercube graph (2^n vertices).
inline constexpr int kAgnosticCap = 12;

// Minimum disagreements between labeling u and any hypothesis, counted on
// the positions selected by g_positions.
int behavior_credit(uint32_t u, const std::vector<uint32_t>& hypotheses_on_positions,
                    uint32_t g_positions);

// Full-hypercube graph over the sample positions (duplicates keep their own
// position), with per-(vertex, group) credits, discounted densities, and the
// solved matching. Capacities are phi_g + credit.
struct AgnosticContext {
  std::vector<int> points;                 // sorted, duplicates allowed
  std::vector<uint32_t> position_masks;    // deduped group masks over positions
  std::vector<int> group_to_mask;          // family index -> mask index, -1 if empty
  std::vector<uint32_t> hypotheses_positions;  // deduped projections of H
  Oig oig;                                 // cube over positions
  MgNetwork net;
  Matching matching;                       // symmetrized over duplicate positions
  SolveResult solve_info;
  std::vector<std::vector<int>> credits;   // [mask index][vertex]
  std::vector<Rat> phi;                    // [mask index]

  int n() const { return static_cast<int>(points.size()); }
  Rat capacity_of(size_t mask_idx, int vertex) const {
    return phi[mask_idx] + Rat(credits[mask_idx][static_cast<size_t>(vertex)]);
  }
};

// (|E_g^W| - total credit of W) / |W| for a vertex subset of the cube.
Rat discounted_density(const AgnosticContext& ctx, const std::vector<int>& vertex_ids,
                       size_t mask_idx);

class AgnosticSolver {
 public:
  AgnosticSolver(ConceptClass hypotheses, GroupFamily groups, bool enable_cache = false);

  // `points` is the multiset of sample positions (any order).
  std::shared_ptr<const AgnosticContext> context(std::vector<int> points) const;

  const ConceptClass& hypotheses() const { return hypotheses_; }
  const GroupFamily& groups() const { return groups_; }
  const Domain& domain() const { return hypotheses_.domain(); }

 private:
  ConceptClass hypotheses_;
  GroupFamily groups_;
  bool cache_enabled_;
  mutable std::mutex mu_;
  mutable std::map<std::vector<int>, std::shared_ptr<const AgnosticContext>> cache_;
};

// Canonical position layout for a prediction query: positions sorted by
// point, label-0 entries before label-1 entries, the test slot last within
// its point's block.
struct AgnosticLayout {
  std::vector<int> points;  // sorted positions including the test point
  int test_coord = 0;
  uint32_t pinned = 0;      // labels of the training entries at their coords
};

AgnosticLayout agnostic_layout(const LabeledSample& s, int x);

class AgnosticPredictor : public Predictor {
 public:
  explicit AgnosticPredictor(std::shared_ptr<AgnosticSolver> solver) : solver_(std::move(solver)) {}
  Prediction predict_prob(const LabeledSample& s, int x) const override;
  LearnerKind kind() const override { return LearnerKind::AgnosticBase; }
  const AgnosticSolver& solver() const { return *solver_; }

 private:
  std::shared_ptr<AgnosticSolver> solver_;
};

// Number of prefix predictors the mixture uses for sample size n.
int mixture_prefix_count(size_t n, double delta, int d);

// Uniform mixture over the base agnostic predictor trained on the k longest
// proper prefixes of the sample.
class AgnosticMixturePredictor : public Predictor {
 public:
  AgnosticMixturePredictor(std::shared_ptr<const Predictor> base, double delta, int d)
      : base_(std::move(base)), delta_(delta), d_(d) {}
  Prediction predict_prob(const LabeledSample& s, int x) const override;
  int predict(const LabeledSample& s, int x, Rng& rng) const override;
  LearnerKind kind() const override { return LearnerKind::AgnosticMixture; }

 private:
  std::shared_ptr<const Predictor> base_;
  double delta_;
  int d_;
};

std::string agnostic_audit_json(const AgnosticContext& ctx);

}  // namespace mgoig
