#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "helpers.hpp"

using namespace mgoig;
using mgoig::testing::ConstantPredictor;
using mgoig::testing::random_class;
using mgoig::testing::random_disjoint_family;
using mgoig::testing::random_family;

namespace {

DiscreteTask uniform_task(int m, uint32_t target) {
  DiscreteTask task;
  task.dom = Domain(m);
  task.masses.assign(static_cast<size_t>(m), Rat(1, m));
  task.target = target;
  task.validate();
  return task;
}

// Inclusion-exclusion oracle for the exact prediction error of predictors
// whose output depends on the sample only through its distinct point set:
// P[distinct(S)=T] = sum over R subseteq T of (-1)^{|T \ R|} P(R)^n.
Rat prediction_error_ie_oracle(const Predictor& predictor, const DiscreteTask& task,
                               uint32_t g_mask, int n) {
  uint32_t support = task.support_mask();
  std::vector<int> pts;
  for (int i = 0; i < task.dom.m; ++i)
    if (bit_get(support, i)) pts.push_back(i);
  size_t k = pts.size();
  Rat total(0);
  for (uint32_t t = 1; t < (1u << k); ++t) {
    Rat p_exact(0);
    for (uint32_t r = t;; r = (r - 1) & t) {
      Rat pr(0);
      for (size_t i = 0; i < k; ++i)
        if (r & (1u << i)) pr += task.masses[static_cast<size_t>(pts[i])];
      Rat power(1);
      for (int j = 0; j < n; ++j) power *= pr;
      int sign_bits = popcount32(t) - popcount32(r);
      p_exact += (sign_bits % 2 == 0) ? power : -power;
      if (r == 0) break;
    }
    LabeledSample s;
    for (size_t i = 0; i < k; ++i)
      if (t & (1u << i)) s.entries.emplace_back(pts[i], bit_get(task.target, pts[i]) ? 1 : 0);
    total += p_exact * group_error_given_sample(predictor, task, s, g_mask);
  }
  return total;
}

}  // namespace

TEST_CASE("task validation and group realizability") {
  DiscreteTask task = uniform_task(2, 0b01);
  CHECK(task.support_mask() == 0b11);
  CHECK(task.mass_of_mask(0b01) == Rat(1, 2));
  ConceptClass h = make_explicit(Domain(2), {"00", "11"});
  GroupFamily singles(Domain(2), {0b01, 0b10});
  GroupFamily full(Domain(2), {0b11});
  CHECK(is_group_realizable_task(task, h, singles));
  CHECK_FALSE(is_group_realizable_task(task, h, full));
  DiscreteTask inside = uniform_task(2, 0b11);
  CHECK(is_group_realizable_task(inside, h, full));

  DiscreteTask bad;
  bad.dom = Domain(2);
  bad.masses = {Rat(1, 2), Rat(1, 3)};
  CHECK_THROWS(bad.validate());
}

TEST_CASE("transductive error on the threshold path") {
  auto solver = std::make_shared<RealizableSolver>(make_thresholds(Domain(3)),
                                                   GroupFamily(Domain(3), {0b111}),
                                                   CapacityMode::Ceil, true);
  MgoigPredictor predictor(solver);
  uint32_t full = Domain(3).full_mask();

  // target 001 (the second path vertex): the deterministic matching charges
  // exactly one incident arc to it
  LabeledSample s{{{0, 0}, {1, 0}, {2, 1}}};
  Rat closed = transductive_error_exact(*solver, s, full);
  CHECK(closed == Rat(1, 3));
  CHECK(closed == transductive_error_permutation(predictor, s, full));

  // a singleton class never errs
  auto pinned = std::make_shared<RealizableSolver>(make_explicit(Domain(2), {"01"}),
                                                   GroupFamily(Domain(2), {0b11}),
                                                   CapacityMode::Ceil, false);
  LabeledSample t{{{0, 0}, {1, 1}}};
  CHECK(transductive_error_exact(*pinned, t, 0b11) == Rat(0));
}

TEST_CASE("transductive error on the square instance with singleton groups") {
  auto solver = std::make_shared<RealizableSolver>(make_full_cube(Domain(2)),
                                                   GroupFamily(Domain(2), {0b01, 0b10}),
                                                   CapacityMode::Exact, true);
  MgoigPredictor predictor(solver);
  LabeledSample s{{{0, 0}, {1, 1}}};
  for (uint32_t g : {0b01u, 0b10u}) {
    Rat closed = transductive_error_exact(*solver, s, g);
    CHECK(closed == Rat(1, 4));  // (1/2 miss chance) * (1/2 of drawing the point last)
    CHECK(closed == transductive_error_permutation(predictor, s, g));
  }
}

TEST_CASE("duplicated points are pinned and never missed") {
  auto solver = std::make_shared<RealizableSolver>(make_full_cube(Domain(2)),
                                                   GroupFamily(Domain(2), {0b01, 0b10}),
                                                   CapacityMode::Exact, true);
  MgoigPredictor predictor(solver);
  LabeledSample s{{{0, 1}, {0, 1}, {1, 0}}};
  uint32_t full = Domain(2).full_mask();
  Rat closed = transductive_error_exact(*solver, s, full);
  CHECK(closed == transductive_error_permutation(predictor, s, full));
  // only the multiplicity-one point can be missed: 1/2 * 1/3
  CHECK(closed == Rat(1, 6));
}

TEST_CASE("closed form equals the permutation average across a small suite") {
  Rng rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    int m = 2 + static_cast<int>(rng.below(3));
    ConceptClass h = random_class(rng, m, 6);
    CapacityMode mode = rng.below(2) == 0 ? CapacityMode::Exact : CapacityMode::Ceil;
    GroupFamily g = mode == CapacityMode::Exact ? mgoig::testing::random_disjoint_family(rng, m)
                                                : random_family(rng, m);
    auto solver = std::make_shared<RealizableSolver>(h, g, mode, true);
    MgoigPredictor predictor(solver);
    ConceptClass concepts = enumerate_group_realizable(h, g);
    uint32_t target = concepts.at(rng.below(concepts.size()));
    int n = 2 + static_cast<int>(rng.below(3));
    LabeledSample s;
    for (int i = 0; i < n; ++i) {
      int p = static_cast<int>(rng.below(static_cast<uint64_t>(m)));
      s.entries.emplace_back(p, bit_get(target, p) ? 1 : 0);
    }
    for (uint32_t mask : g.masks()) {
      Rat closed = transductive_error_exact(*solver, s, mask);
      Rat averaged = transductive_error_permutation(predictor, s, mask);
      CHECK(closed == averaged);
      // capacity chain
      uint32_t distinct_mask = 0;
      for (auto& [p, y] : s.entries) {
        (void)y;
        distinct_mask |= (1u << p);
      }
      (void)distinct_mask;
      CHECK(closed <= Rat(vc_restricted(h, mask)) / Rat(n));
    }
  }
}

TEST_CASE("agnostic transductive error on the one-point instance") {
  auto solver = std::make_shared<AgnosticSolver>(make_explicit(Domain(1), {"1"}),
                                                 GroupFamily(Domain(1), {0b1}), true);
  LabeledSample s{{{0, 0}}};
  CHECK(agnostic_transductive_error_exact(*solver, s, 0b1) == Rat(0));
  LabeledSample agree{{{0, 1}}};
  CHECK(agnostic_transductive_error_exact(*solver, agree, 0b1) == Rat(0));
}

TEST_CASE("agnostic closed form equals the permutation average") {
  Rng rng(62);
  for (int trial = 0; trial < 12; ++trial) {
    int m = 2 + static_cast<int>(rng.below(2));
    ConceptClass h = random_class(rng, m, 4);
    GroupFamily g = random_disjoint_family(rng, m);
    auto solver = std::make_shared<AgnosticSolver>(h, g, true);
    AgnosticPredictor predictor(solver);
    int n = 2 + static_cast<int>(rng.below(3));
    LabeledSample s;
    for (int i = 0; i < n; ++i)
      s.entries.emplace_back(static_cast<int>(rng.below(static_cast<uint64_t>(m))),
                             static_cast<int>(rng.below(2)));
    for (uint32_t mask : g.masks()) {
      Rat closed = agnostic_transductive_error_exact(*solver, s, mask);
      Rat averaged = agnostic_transductive_error_permutation(predictor, h, s, mask);
      CHECK(closed == averaged);
    }
  }
}

TEST_CASE("agnostic transductive error respects the discounted-density bound") {
  Rng rng(63);
  for (int trial = 0; trial < 12; ++trial) {
    int m = 2 + static_cast<int>(rng.below(2));
    ConceptClass h = random_class(rng, m, 4);
    GroupFamily g = random_disjoint_family(rng, m);
    auto solver = std::make_shared<AgnosticSolver>(h, g, true);
    int n = 1 + static_cast<int>(rng.below(4));
    LabeledSample s;
    for (int i = 0; i < n; ++i)
      s.entries.emplace_back(static_cast<int>(rng.below(static_cast<uint64_t>(m))),
                             static_cast<int>(rng.below(2)));
    AgnosticLayout layout = agnostic_layout(s.prefix(s.size() - 1), s.entries.back().first);
    auto ctx = solver->context(layout.points);
    for (size_t gi = 0; gi < g.size(); ++gi) {
      int mi = ctx->group_to_mask[gi];
      if (mi < 0) continue;
      Rat err = agnostic_transductive_error_exact(*solver, s, g.at(gi));
      CHECK(err <= ctx->phi[static_cast<size_t>(mi)] / Rat(n));
      int d = vc_restricted(h, g.at(gi));
      CHECK(rat_double(err) <= 16.0 * std::sqrt(static_cast<double>(std::max(1, d)) / n) + 1e-12);
    }
  }
}

TEST_CASE("prediction error of a constant target predictor is zero") {
  DiscreteTask task = uniform_task(3, 0b101);
  ConstantPredictor oracle(0b101);
  ErrorEstimate est = prediction_error_exact(oracle, task, Domain(3).full_mask(), 3);
  CHECK(est.exact_value == Rat(0));
}

TEST_CASE("exact prediction error obeys its dimension bound") {
  // two-point square task with singleton groups at n=1
  DiscreteTask square = uniform_task(2, 0b01);
  auto solver = std::make_shared<RealizableSolver>(make_full_cube(Domain(2)),
                                                   GroupFamily(Domain(2), {0b01, 0b10}),
                                                   CapacityMode::Exact, true);
  MgoigPredictor learner(solver);
  for (uint32_t g : {0b01u, 0b10u}) {
    ErrorEstimate est = prediction_error_exact(learner, square, g, 1);
    CHECK(est.exact_value <= Rat(1, 2));
  }

  // thresholds at n=3: err <= d/(n+1) = 1/4
  DiscreteTask thr = uniform_task(4, bits_parse("0111"));
  auto tsolver = std::make_shared<RealizableSolver>(make_thresholds(Domain(4)),
                                                    GroupFamily(Domain(4), {Domain(4).full_mask()}),
                                                    CapacityMode::Ceil, true);
  MgoigPredictor tlearner(tsolver);
  ErrorEstimate est = prediction_error_exact(tlearner, thr, Domain(4).full_mask(), 3);
  CHECK(est.exact_value <= Rat(1, 4));
}

TEST_CASE("exact prediction error matches the inclusion-exclusion oracle") {
  DiscreteTask task = uniform_task(3, 0b011);
  auto solver = std::make_shared<RealizableSolver>(make_full_cube(Domain(3)),
                                                   GroupFamily(Domain(3), {0b001, 0b010, 0b100}),
                                                   CapacityMode::Exact, true);
  MgoigPredictor learner(solver);
  for (int n : {1, 2, 3}) {
    for (uint32_t g : {0b001u, 0b111u}) {
      ErrorEstimate est = prediction_error_exact(learner, task, g, n);
      CHECK(est.exact_value == prediction_error_ie_oracle(learner, task, g, n));
    }
  }
}

TEST_CASE("exact enumeration rejects oversized budgets") {
  DiscreteTask task = uniform_task(4, 0b1111);
  ConstantPredictor oracle(0b1111);
  CHECK_THROWS_AS(prediction_error_exact(oracle, task, 0b1111, 20, 1000), Error);
}

TEST_CASE("group-conditional and group-only errors differ by the group mass") {
  DiscreteTask task = uniform_task(4, 0b0101);
  ConstantPredictor wrong(0b0000);
  LabeledSample s;
  uint32_t g = 0b0011;
  Rat joint = group_error_given_sample(wrong, task, s, g);
  Rat mass = task.mass_of_mask(g);
  Rat conditional = joint / mass;
  CHECK(conditional * mass == joint);
  CHECK(joint == Rat(1, 4));  // only point 0 is mislabeled inside g
  CHECK(conditional == Rat(1, 2));
}

TEST_CASE("monte carlo prediction error approaches the exact value") {
  DiscreteTask task = uniform_task(2, 0b01);
  auto solver = std::make_shared<RealizableSolver>(make_full_cube(Domain(2)),
                                                   GroupFamily(Domain(2), {0b01, 0b10}),
                                                   CapacityMode::Exact, true);
  MgoigPredictor learner(solver);
  ErrorEstimate exact = prediction_error_exact(learner, task, 0b01, 2);
  ErrorEstimate mc = prediction_error_mc(learner, task, 0b01, 2, 4000, 99, 2);
  CHECK(mc.estimate == doctest::Approx(rat_double(exact.exact_value)).epsilon(0.25));
  // same seed, same estimate, any job count
  ErrorEstimate mc2 = prediction_error_mc(learner, task, 0b01, 2, 4000, 99, 1);
  CHECK(mc.estimate == mc2.estimate);
}

TEST_CASE("sup group error of the target itself is zero") {
  DiscreteTask task = uniform_task(3, 0b010);
  ConstantPredictor oracle(0b010);
  GroupFamily singles(Domain(3), {0b001, 0b010, 0b100});
  ErrorEstimate est = sup_group_error(oracle, task, singles, 4, 200, 7);
  CHECK(est.estimate == 0.0);
}

TEST_CASE("greedy cover keeps far groups and drops near ones") {
  DiscreteTask task = uniform_task(4, 0);
  // identical groups on the support collapse
  GroupFamily dup(Domain(4), {0b0011, 0b0011 | 0b0000, 0b1100});
  CoverResult all = greedy_l1_cover(dup, task, Rat(1, 10));
  CHECK(all.cover.size() == 2);  // the duplicate mask was already deduped by the family

  DiscreteTask mass;
  mass.dom = Domain(4);
  mass.masses = {Rat(3, 10), Rat(3, 10), Rat(3, 10), Rat(1, 10)};
  mass.target = 0;
  mass.validate();
  GroupFamily disjoint(Domain(4), {0b0001, 0b0010, 0b0100});
  CHECK(greedy_l1_cover(disjoint, mass, Rat(1, 10)).cover.size() == 3);
  // epsilon above every pairwise distance collapses to one representative
  CHECK(greedy_l1_cover(disjoint, mass, Rat(9, 10)).cover.size() == 1);
}

TEST_CASE("groups equal on the support collapse in the cover") {
  DiscreteTask task;
  task.dom = Domain(3);
  task.masses = {Rat(1, 2), Rat(1, 2), Rat(0)};
  task.target = 0;
  task.validate();
  GroupFamily g(Domain(3), {0b001, 0b101});  // differ only on the massless point
  CHECK(greedy_l1_cover(g, task, Rat(1, 4)).cover.size() == 1);
}

TEST_CASE("multi-group covering number on a hierarchical family") {
  // three towers of nested groups over 9 points, uniform mass
  int m = 9;
  DiscreteTask task = uniform_task(m, 0);
  std::vector<uint32_t> masks;
  for (int tower = 0; tower < 3; ++tower) {
    uint32_t root = 0b111u << (3 * tower);
    masks.push_back(root);
    masks.push_back(0b011u << (3 * tower));
    masks.push_back(0b001u << (3 * tower));
  }
  GroupFamily g(Domain(m), masks);
  Rat eps(1, 20);
  CoverResult cover = greedy_l1_cover(g, task, eps);
  CHECK(cover.cover.size() == 9);
  MgCoverResult mg = mg_covering_number(g, task, eps);
  CHECK(mg.exact);
  CHECK(mg.number == 3);
  for (size_t idx : mg.witness) CHECK(popcount32(g.at(idx)) == 3);  // the roots

  GroupFamily lone(Domain(m), {0b111});
  CHECK(mg_covering_number(lone, task, eps).number == 1);

  // disjoint groups of real mass cannot represent each other
  GroupFamily disjoint(Domain(m), {0b000000111, 0b000111000, 0b111000000});
  CHECK(mg_covering_number(disjoint, task, eps).number == 3);
}

TEST_CASE("lower bound instance shapes") {
  LowerBoundInstance inst = build_lower_bound_instance(4, Rat(1, 10));
  CHECK(inst.base_task.masses[0] == Rat(4, 10));
  CHECK(inst.base_task.masses[1] == Rat(2, 10));
  CHECK(inst.n2 == doctest::Approx(std::log(2.0) / 0.2));
  CHECK(inst.n1 == 0.0);
  CHECK(build_lower_bound_instance(2, Rat(1, 10)).n2 == doctest::Approx(0.0));
  CHECK_THROWS_AS(build_lower_bound_instance(8, Rat(1, 10)), Error);
  CHECK_THROWS_AS(build_lower_bound_instance(4, Rat(2, 3)), Error);
}

TEST_CASE("with no data some labeling always fails") {
  LowerBoundInstance inst = build_lower_bound_instance(3, Rat(1, 10));
  auto solver = std::make_shared<RealizableSolver>(inst.hypotheses, inst.groups,
                                                   CapacityMode::Exact, true);
  ErmPredictor erm(solver);
  FailureProbe probe = lower_bound_failure_prob(inst, erm, 1, 50, 5, 1);
  // sample size 1 cannot cover the three points
  CHECK(probe.max_estimate == 1.0);
}

TEST_CASE("coupon tail estimates stay under the analytic bound") {
  TailEstimate zero = coupon_tail_estimate(1, 0.5, std::log(2.0), 2000, 13);
  CHECK(zero.threshold == doctest::Approx(0.0));
  CHECK(zero.estimate == 0.0);

  TailEstimate mid = coupon_tail_estimate(3, 0.3, 0.5, 20000, 14);
  CHECK(mid.estimate <= mid.bound + 3.0 * mid.stderr_ + 1e-9);

  TailEstimate far = coupon_tail_estimate(2, 0.4, 50.0, 1000, 15);
  CHECK(far.estimate == 0.0);
}

TEST_CASE("pac audit of the target predictor reports zero quantiles") {
  DiscreteTask task = uniform_task(3, 0b011);
  ConstantPredictor oracle(0b011);
  GroupFamily g(Domain(3), {0b111});
  auto rows = pac_audit(oracle, task, g, make_thresholds(Domain(3)), 8, 0.1, 200, 3);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].quantile == 0.0);
  CHECK(rows[0].ok);
}

TEST_CASE("pac audit of the majority learner respects the stated bound") {
  DiscreteTask task = uniform_task(3, bits_parse("011"));
  auto solver = std::make_shared<RealizableSolver>(make_thresholds(Domain(3)),
                                                   GroupFamily(Domain(3), {0b111}),
                                                   CapacityMode::Ceil, true);
  auto base = std::make_shared<MgoigPredictor>(solver);
  PrefixMajorityPredictor majority(base);
  GroupFamily g(Domain(3), {0b111});
  auto rows = pac_audit(majority, task, g, make_thresholds(Domain(3)), 16, 0.1, 400, 5, 2);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].ok);
}
