#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mgoig/agnostic.hpp"

namespace mgoig {

// Discrete marginal over the domain plus either a realizable target concept
// or per-point label probabilities (agnostic mode).
struct DiscreteTask {
  Domain dom = Domain(1);
  std::vector<Rat> masses;      // exact, sum to 1
  bool agnostic = false;
  uint32_t target = 0;          // realizable target labels
  std::vector<Rat> prob_one;    // agnostic: P[y=1 | x] per point

  void validate() const;
  uint32_t support_mask() const;
  Rat mass_of_mask(uint32_t mask) const;
  Rat label_one_prob(int point) const;  // P[y=1 | x]; 0/1 in realizable mode
};

bool is_group_realizable_task(const DiscreteTask& task, const ConceptClass& hypotheses,
                              const GroupFamily& groups);

LabeledSample draw_sample(const DiscreteTask& task, int n, Rng& rng);

// Runs fn(trial) for trial in [0, trials) across `jobs` threads. Each trial
// derives its own seed, so scheduling does not affect results.
void parallel_trials(int trials, int jobs, const std::function<void(int)>& fn);

// ---------------------------------------------------------------- transductive

// Closed-form leave-one-position-out error for a sample labeled by a
// group-realizable concept: only multiplicity-one points can be missed, and
// each contributes its matching arc into the target's vertex.
Rat transductive_error_exact(const RealizableSolver& solver, const LabeledSample& s,
                             uint32_t g_mask);

// Independent route: explicit average over all index permutations, driving
// the real predictor. Exponential in n (guarded).
Rat transductive_error_permutation(const Predictor& predictor, const LabeledSample& s,
                                   uint32_t g_mask, int max_n = 8);

// Permutation-averaged mistake rate minus the sample's best-hypothesis
// disagreement count on g, both exact.
Rat agnostic_transductive_error_exact(const AgnosticSolver& solver, const LabeledSample& s,
                                      uint32_t g_mask);
Rat agnostic_transductive_error_permutation(const Predictor& predictor,
                                            const ConceptClass& hypotheses,
                                            const LabeledSample& s, uint32_t g_mask,
                                            int max_n = 7);

// min_h sum_i g(x_i) [h(x_i) != y_i]
int sample_hypothesis_distance(const ConceptClass& hypotheses, const LabeledSample& s,
                               uint32_t g_mask);

// ------------------------------------------------------------------ prediction

struct ErrorEstimate {
  bool exact = false;
  Rat exact_value;
  double estimate = 0.0;
  double halfwidth = 0.0;  // 99% normal-approximation half width (MC only)
  double as_double() const { return exact ? rat_double(exact_value) : estimate; }
};

// Exact group error of the trained classifier for a fixed sample.
Rat group_error_given_sample(const Predictor& predictor, const DiscreteTask& task,
                             const LabeledSample& s, uint32_t g_mask);

// Expected group error over samples of size n: exact enumeration of all
// weighted samples within `budget`, else BudgetExceeded.
ErrorEstimate prediction_error_exact(const Predictor& predictor, const DiscreteTask& task,
                                     uint32_t g_mask, int n, long long budget = 10'000'000);
ErrorEstimate prediction_error_mc(const Predictor& predictor, const DiscreteTask& task,
                                  uint32_t g_mask, int n, int trials, uint64_t seed,
                                  int jobs = 1);

// Mean over trials of max_g err_g(A(S)), the per-trial max taken exactly.
ErrorEstimate sup_group_error(const Predictor& predictor, const DiscreteTask& task,
                              const GroupFamily& groups, int n, int trials, uint64_t seed,
                              int jobs = 1);

// -------------------------------------------------------------------- covering

Rat l1_distance(uint32_t g1, uint32_t g2, const DiscreteTask& task);

struct CoverResult {
  std::vector<size_t> cover;  // indices into the family
  double size_bound = 0.0;    // e(d+1)(2e/eps)^d packing bound
  bool size_bound_ok = true;
};
CoverResult greedy_l1_cover(const GroupFamily& groups, const DiscreteTask& task,
                            const Rat& epsilon);

struct MgCoverResult {
  int number = 0;
  std::vector<size_t> witness;  // indices into the family
  bool exact = true;            // false when only the greedy upper bound was taken
};
MgCoverResult mg_covering_number(const GroupFamily& groups, const DiscreteTask& task,
                                 const Rat& epsilon, size_t brute_cap = 20);

// ----------------------------------------------------------------- lower bound

struct LowerBoundInstance {
  int points = 0;
  Rat epsilon;
  DiscreteTask base_task;   // masses only; the target varies with b
  ConceptClass hypotheses;  // full cube: both labels realizable everywhere
  GroupFamily groups;       // pairwise-disjoint singletons
  double n1 = 0.0;          // (d_restricted - 1) / (4 eps)
  double n2 = 0.0;          // ln(points/2) / (2 eps)
};

LowerBoundInstance build_lower_bound_instance(int points, const Rat& epsilon);

struct FailureProbe {
  double max_estimate = 0.0;
  uint32_t worst_b = 0;
  std::vector<double> per_b;
};

// Worst case over target labelings b (exhaustive for small instances) of the
// Monte Carlo probability that some group's error reaches epsilon.
FailureProbe lower_bound_failure_prob(const LowerBoundInstance& instance,
                                      const Predictor& predictor, int n, int trials,
                                      uint64_t seed, int jobs = 1, int exhaustive_cap = 10);

struct TailEstimate {
  double estimate = 0.0;
  double bound = 0.0;  // e^{-t}
  double stderr_ = 0.0;
  double threshold = 0.0;
};

// Tail of the coupon-collection time: sum of independent geometrics with
// success delta * (1 - (i-1)/k).
TailEstimate coupon_tail_estimate(int k, double delta, double t, int trials, uint64_t seed);

// ------------------------------------------------------------------- PAC audit

struct PacRow {
  uint32_t g_mask = 0;
  double quantile = 0.0;  // empirical (1-delta)-quantile of err_g (or excess)
  double bound = 0.0;
  bool ok = false;
};

std::vector<PacRow> pac_audit(const Predictor& predictor, const DiscreteTask& task,
                              const GroupFamily& groups, const ConceptClass& hypotheses,
                              int n, double delta, int trials, uint64_t seed, int jobs = 1);

}  // namespace mgoig
