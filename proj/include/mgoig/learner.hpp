#pragma once

#include <memory>
#include <mutex>
#include <map>
#include <string>
#include <vector>

#include "mgoig/matching.hpp"
#include "mgoig/rng.hpp"

namespace mgoig {

enum class LearnerKind { Base, PrefixMajority, AgnosticBase, AgnosticMixture, ErmBaseline };

std::string to_string(LearnerKind k);

struct Prediction {
  Rat prob_one;        // exact Bernoulli parameter of outputting label 1
  bool forced = true;  // label pinned by the sample, no randomness consumed
};

// A solved instance over one point set: group-realizable concepts, their
// graph, and a prediction sufficient matching. The matching is deterministic
// in the point set and (H, G, mode), which is what makes caching sound.
struct RealizableContext {
  std::vector<int> points;  // ascending domain point ids
  Oig oig;
  MgNetwork net;
  Matching matching;
  SolveResult solve_info;

  int coord_of(int point) const;  // position of a domain point, -1 if absent
  // Exact outcome with every coordinate pinned except free_coord.
  Prediction query(uint32_t pinned, int free_coord) const;
  // Outcome when the free coordinate's label is pinned too.
  Prediction query_pinned(uint32_t pinned, int coord_of_test) const;
};

// Builds (and optionally caches) realizable contexts for a fixed
// (hypotheses, groups, capacity-mode) triple.
class RealizableSolver {
 public:
  RealizableSolver(ConceptClass hypotheses, GroupFamily groups, CapacityMode mode,
                   bool enable_cache = false);

  std::shared_ptr<const RealizableContext> context(uint32_t point_mask) const;

  const ConceptClass& hypotheses() const { return hypotheses_; }
  const GroupFamily& groups() const { return groups_; }
  CapacityMode mode() const { return mode_; }
  const Domain& domain() const { return hypotheses_.domain(); }

 private:
  ConceptClass hypotheses_;
  GroupFamily groups_;
  CapacityMode mode_;
  bool cache_enabled_;
  mutable std::mutex mu_;
  mutable std::map<uint32_t, std::shared_ptr<const RealizableContext>> cache_;
};

class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual Prediction predict_prob(const LabeledSample& s, int x) const = 0;
  virtual int predict(const LabeledSample& s, int x, Rng& rng) const;
  virtual LearnerKind kind() const = 0;
};

// Rebuilds the one-inclusion graph of the group-realizable concepts on the
// sample's distinct points plus the test point, then reads the prediction
// off the solved matching: a pinned vertex answers directly, a pinned edge
// answers with the matching's exact arc split.
class MgoigPredictor : public Predictor {
 public:
  explicit MgoigPredictor(std::shared_ptr<RealizableSolver> solver) : solver_(std::move(solver)) {}
  Prediction predict_prob(const LabeledSample& s, int x) const override;
  LearnerKind kind() const override { return LearnerKind::Base; }
  const RealizableSolver& solver() const { return *solver_; }

 private:
  std::shared_ptr<RealizableSolver> solver_;
};

// Lexicographically least group-realizable concept consistent with the
// sample, evaluated at the test point.
class ErmPredictor : public Predictor {
 public:
  explicit ErmPredictor(std::shared_ptr<RealizableSolver> solver) : solver_(std::move(solver)) {}
  Prediction predict_prob(const LabeledSample& s, int x) const override;
  LearnerKind kind() const override { return LearnerKind::ErmBaseline; }

 private:
  std::shared_ptr<RealizableSolver> solver_;
};

// Majority vote of the base predictor over sample prefixes from ceil(n/4)
// to n-1; ties go to label 0.
class PrefixMajorityPredictor : public Predictor {
 public:
  explicit PrefixMajorityPredictor(std::shared_ptr<const Predictor> base) : base_(std::move(base)) {}
  Prediction predict_prob(const LabeledSample& s, int x) const override;
  int predict(const LabeledSample& s, int x, Rng& rng) const override;
  LearnerKind kind() const override { return LearnerKind::PrefixMajority; }

 private:
  std::shared_ptr<const Predictor> base_;
};

// Exact P[sum of independent Bernoulli(ps) + ones > (voters)/2]; the tie
// goes to label 0.
Rat majority_prob_one(const std::vector<Rat>& ps, int ones, int voters);

}  // namespace mgoig
