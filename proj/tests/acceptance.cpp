// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "helpers.hpp"
#include "mgoig/descriptors.hpp"
#include "mgoig/lp_oracle.hpp"

using namespace mgoig;
using mgoig::testing::random_class;
using mgoig::testing::random_disjoint_family;
using mgoig::testing::random_family;

namespace {

int g_jobs = 1;

struct Check {
  bool ok = true;
  long long checks = 0;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    ++checks;
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

// ---------------------------------------------------------------- criterion 1

// density of the one-inclusion graph never exceeds the VC dimension
bool criterion_density(Check& c) {
  Rng rng(1001);
  for (int trial = 0; trial < 200; ++trial) {
    int m = 2 + static_cast<int>(rng.below(9));  // 2..10 points
    ConceptClass cls = random_class(rng, m, 18);
    Oig oig = build_oig(cls, std::vector<uint32_t>{Domain(m).full_mask()});
    DensityReport rep = max_subgraph_density(oig, Domain(m).full_mask());
    int d = vc_dimension(cls);
    c.expect(rep.density <= Rat(d), "density exceeded the vc dimension");
  }
  return c.ok;
}

// ---------------------------------------------------------------- criterion 2

bool criterion_matching(Check& c) {
  Rng rng(2002);
  int solved = 0, oracle_checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    int m = 2 + static_cast<int>(rng.below(3));
    ConceptClass h = random_class(rng, m, 7);
    CapacityMode mode = trial % 2 == 0 ? CapacityMode::Ceil : CapacityMode::Exact;
    GroupFamily g = mode == CapacityMode::Exact ? random_disjoint_family(rng, m)
                                                : random_family(rng, m);
    ConceptClass concepts = enumerate_group_realizable(h, g);
    Oig oig = build_oig(concepts, g);
    MgNetwork net = build_network(oig, mode);
    SolveResult res = solve_matching(net);
    ++solved;

    Rat edges(Int(static_cast<long long>(net.n_edges())));
    c.expect(res.value == edges, "solver value below |E|");
    c.expect(res.prediction_sufficient, "matching not prediction sufficient");
    c.expect(is_feasible(net, res.matching), "matching infeasible");
    DualCertificate dual = trivial_dual(net);
    c.expect(dual.value(net) - res.value == Rat(0), "nonzero duality gap");
    c.expect(verify_optimality(net, res.matching, dual), "optimality certificate rejected");

    bool integer_caps = true;
    for (const auto& row : net.cap)
      for (const Rat& cap : row)
        if (cap.denominator() != 1) integer_caps = false;
    if (integer_caps) c.expect(res.integral, "integer capacities gave a fractional matching");

    if (net.n_edges() > 0 && net.n_edges() <= 8) {
      c.expect(lp_optimum_oracle(net) == res.value, "solver disagrees with the lp oracle");
      ++oracle_checked;
    }
  }
  c.expect(solved >= 50, "too few instances");
  c.expect(oracle_checked >= 10, "too few oracle-sized instances");
  return c.ok;
}

// ---------------------------------------------------------------- criterion 3

struct TransductiveSuite {
  ConceptClass hypotheses;
  GroupFamily groups;
  std::vector<int> points;
  CapacityMode mode;
};

bool criterion_transductive(Check& c) {
  std::vector<TransductiveSuite> suites;
  suites.push_back({make_thresholds(Domain(4)), GroupFamily(Domain(4), {0b1111}),
                    {0, 1, 2, 3}, CapacityMode::Exact});
  suites.push_back({make_thresholds(Domain(4)), GroupFamily(Domain(4), {0b1111}),
                    {0, 1, 2, 3}, CapacityMode::Ceil});
  suites.push_back({make_full_cube(Domain(3)), GroupFamily(Domain(3), {0b001, 0b010, 0b100}),
                    {0, 1, 2}, CapacityMode::Exact});
  // duplicated sample points
  suites.push_back({make_full_cube(Domain(3)), GroupFamily(Domain(3), {0b001, 0b010, 0b100}),
                    {0, 0, 1, 2, 1}, CapacityMode::Exact});
  // two nested towers
  suites.push_back({make_full_cube(Domain(4)),
                    GroupFamily(Domain(4), {0b0011, 0b0001, 0b1100, 0b0100}),
                    {0, 1, 2, 3}, CapacityMode::Ceil});
  suites.push_back({make_thresholds(Domain(4)),
                    GroupFamily(Domain(4), {0b0011, 0b0001, 0b1100, 0b0100, 0b1111}),
                    {0, 1, 2, 3, 2, 1}, CapacityMode::Ceil});

  for (const auto& suite : suites) {
    auto solver = std::make_shared<RealizableSolver>(suite.hypotheses, suite.groups, suite.mode,
                                                     true);
    MgoigPredictor predictor(solver);
    uint32_t distinct_mask = 0;
    for (int p : suite.points) distinct_mask |= (1u << p);
    auto ctx = solver->context(distinct_mask);
    int n = static_cast<int>(suite.points.size());

    for (uint32_t concept_bits : ctx->oig.vertices) {
      LabeledSample s;
      for (int p : suite.points)
        s.entries.emplace_back(p, bit_get(concept_bits, ctx->coord_of(p)) ? 1 : 0);
      for (uint32_t g : suite.groups.masks()) {
        Rat err = transductive_error_exact(*solver, s, g);
        Rat perm = transductive_error_permutation(predictor, s, g);
        c.expect(err == perm, "closed form disagrees with the permutation average");

        uint32_t proj = 0;
        for (size_t i = 0; i < ctx->points.size(); ++i)
          if (bit_get(g, ctx->points[i])) proj |= (1u << i);
        Rat cap(0);
        for (size_t gi = 0; gi < ctx->net.n_groups(); ++gi)
          if (ctx->net.group_masks[gi] == proj) cap = ctx->net.capacity(gi, 0);
        c.expect(err <= cap / Rat(n), "error above capacity/n");
        c.expect(cap <= Rat(vc_restricted(suite.hypotheses, g)),
                 "capacity above the restricted vc dimension");
      }
    }
  }
  return c.ok;
}

// ---------------------------------------------------------------- criterion 4

bool criterion_prediction(Check& c) {
  struct Task {
    ConceptClass hypotheses;
    GroupFamily groups;
    DiscreteTask task;
    CapacityMode mode;
  };
  std::vector<Task> tasks;

  auto uniform = [](int m, uint32_t target) {
    DiscreteTask t;
    t.dom = Domain(m);
    t.masses.assign(static_cast<size_t>(m), Rat(1, m));
    t.target = target;
    t.validate();
    return t;
  };

  tasks.push_back({make_full_cube(Domain(2)), GroupFamily(Domain(2), {0b01, 0b10}),
                   uniform(2, 0b01), CapacityMode::Exact});
  tasks.push_back({make_explicit(Domain(3), {"000", "111"}),
                   GroupFamily(Domain(3), {0b001, 0b010, 0b100}), uniform(3, 0b110),
                   CapacityMode::Exact});
  tasks.push_back({make_thresholds(Domain(4)), GroupFamily(Domain(4), {0b1111}),
                   uniform(4, bits_parse("0111")), CapacityMode::Exact});
  tasks.push_back({make_full_cube(Domain(4)),
                   GroupFamily(Domain(4), {0b0011, 0b0001, 0b1100, 0b0100}),
                   uniform(4, 0b1010), CapacityMode::Ceil});

  for (const auto& t : tasks) {
    c.expect(is_group_realizable_task(t.task, t.hypotheses, t.groups), "task not realizable");
    auto solver = std::make_shared<RealizableSolver>(t.hypotheses, t.groups, t.mode, true);
    MgoigPredictor learner(solver);
    for (int n = 1; n <= 6; ++n) {
      for (uint32_t g : t.groups.masks()) {
        ErrorEstimate est = prediction_error_exact(learner, t.task, g, n);
        Rat bound = Rat(vc_restricted(t.hypotheses, g)) / Rat(n + 1);
        c.expect(est.exact_value <= bound, "expected error above d/(n+1)");
      }
    }
  }
  return c.ok;
}

// ---------------------------------------------------------------- criterion 5

bool criterion_pac(Check& c) {
  DiscreteTask task;
  task.dom = Domain(4);
  task.masses.assign(4, Rat(1, 4));
  task.target = bits_parse("0111");
  task.validate();
  GroupFamily groups(Domain(4), {0b1111});
  ConceptClass hypotheses = make_thresholds(Domain(4));

  auto solver = std::make_shared<RealizableSolver>(hypotheses, groups, CapacityMode::Ceil, true);
  auto base = std::make_shared<MgoigPredictor>(solver);
  PrefixMajorityPredictor majority(base);

  const int trials = 10000;
  for (int n : {16, 64, 256}) {
    for (double delta : {0.1, 0.01}) {
      uint64_t seed = derive_seed(5005, static_cast<uint64_t>(n));
      auto rows = pac_audit(majority, task, groups, hypotheses, n, delta, trials, seed, g_jobs);
      for (const auto& row : rows)
        c.expect(row.ok, "quantile above the stated bound at n=" + std::to_string(n));
    }
  }
  return c.ok;
}

// ---------------------------------------------------------------- criterion 6

bool criterion_agnostic(Check& c) {
  struct Instance {
    ConceptClass hypotheses;
    GroupFamily groups;
    std::vector<int> points;
  };
  std::vector<Instance> instances;
  instances.push_back({make_thresholds(Domain(3)), GroupFamily(Domain(3), {0b111}), {0, 1, 2}});
  instances.push_back({make_explicit(Domain(2), {"10", "01"}),
                       GroupFamily(Domain(2), {0b01, 0b10}), {0, 1, 0, 1}});
  instances.push_back({make_explicit(Domain(3), {"000", "111"}),
                       GroupFamily(Domain(3), {0b001, 0b110}), {0, 1, 2, 0}});
  instances.push_back({make_thresholds(Domain(4)), GroupFamily(Domain(4), {0b1111}),
                       {0, 1, 2, 3, 0, 1, 2}});  // n+1 = 8 at prediction time

  for (const auto& inst : instances) {
    auto solver = std::make_shared<AgnosticSolver>(inst.hypotheses, inst.groups, true);
    int n = static_cast<int>(inst.points.size());
    std::vector<int> sorted = inst.points;
    std::sort(sorted.begin(), sorted.end());
    auto ctx = solver->context(sorted);

    // direct phi formula vs the exhaustive subset oracle (small cubes only)
    if (n <= 4) {
      for (size_t mi = 0; mi < ctx->position_masks.size(); ++mi) {
        size_t nv = ctx->oig.vertices.size();
        Rat best;
        bool have = false;
        for (uint64_t w = 1; w < (1ull << nv); ++w) {
          std::vector<int> ids;
          for (size_t v = 0; v < nv; ++v)
            if (w & (1ull << v)) ids.push_back(static_cast<int>(v));
          Rat dens = discounted_density(*ctx, ids, mi);
          if (!have || dens > best) {
            best = dens;
            have = true;
          }
        }
        c.expect(best == ctx->phi[mi], "phi formula disagrees with the subset oracle");
      }
    }

    for (uint32_t labels = 0; labels < (1u << n); ++labels) {
      LabeledSample s;
      for (int i = 0; i < n; ++i)
        s.entries.emplace_back(sorted[static_cast<size_t>(i)], bit_get(labels, i) ? 1 : 0);
      for (size_t gi = 0; gi < inst.groups.size(); ++gi) {
        int mi = ctx->group_to_mask[gi];
        if (mi < 0) continue;
        Rat err = agnostic_transductive_error_exact(*solver, s, inst.groups.at(gi));
        Rat phi_n = ctx->phi[static_cast<size_t>(mi)] / Rat(n);
        c.expect(err <= phi_n, "agnostic transductive error above phi/n");
        int d = vc_restricted(inst.hypotheses, inst.groups.at(gi));
        c.expect(rat_double(phi_n) <=
                     16.0 * std::sqrt(static_cast<double>(std::max(1, d)) / n) + 1e-12,
                 "phi/n above the square-root bound");
      }
    }
  }
  return c.ok;
}

// ---------------------------------------------------------------- criterion 7

bool criterion_covering(Check& c) {
  // 3 roots, 5 nested subgroups each: 18 groups over 18 points
  int m = 18;
  DiscreteTask task;
  task.dom = Domain(m);
  task.masses.assign(static_cast<size_t>(m), Rat(1, m));
  task.target = 0;
  task.validate();

  std::vector<uint32_t> masks;
  std::set<uint32_t> roots;
  for (int tower = 0; tower < 3; ++tower) {
    int base = 6 * tower;
    uint32_t root = 0;
    for (int i = 0; i < 6; ++i) root |= (1u << (base + i));
    roots.insert(root);
    masks.push_back(root);
    for (int depth = 1; depth <= 5; ++depth) {
      uint32_t nested = 0;
      for (int i = 0; i < 6 - depth; ++i) nested |= (1u << (base + i));
      masks.push_back(nested);
    }
  }
  GroupFamily groups(Domain(m), masks);
  c.expect(groups.size() == 18, "family size is not 18");

  Rat eps(1, 40);
  CoverResult cover = greedy_l1_cover(groups, task, eps);
  c.expect(cover.cover.size() == 18, "greedy cover dropped a group");
  MgCoverResult mg = mg_covering_number(groups, task, eps);
  c.expect(mg.exact, "covering number was not exhaustive");
  c.expect(mg.number == 3, "covering number is not 3");
  for (size_t idx : mg.witness)
    c.expect(roots.count(groups.at(idx)) == 1, "witness is not a tower root");
  c.expect(mg.number <= static_cast<int>(cover.cover.size()), "chain broken: mg > cover");
  c.expect(cover.cover.size() <= groups.size(), "chain broken: cover > family");
  return c.ok;
}

// ---------------------------------------------------------------- criterion 8

bool criterion_lowerbound(Check& c) {
  LowerBoundInstance inst = build_lower_bound_instance(8, Rat(1, 20));
  int n = static_cast<int>(std::floor(inst.n2)) - 1;
  c.expect(n == 12, "unexpected sample-size threshold");
  const int trials = 10000;
  double sigma = std::sqrt(0.25 / trials);
  double threshold = 0.5 - 3.0 * sigma;

  std::vector<LearnerHandle> learners;
  learners.push_back(make_learner(LearnerKind::ErmBaseline, inst.hypotheses, inst.groups,
                                  CapacityMode::Exact, true));
  learners.push_back(make_learner(LearnerKind::Base, inst.hypotheses, inst.groups,
                                  CapacityMode::Exact, true));
  learners.push_back(make_learner(LearnerKind::PrefixMajority, inst.hypotheses, inst.groups,
                                  CapacityMode::Exact, true));
  for (const auto& handle : learners) {
    FailureProbe probe =
        lower_bound_failure_prob(inst, *handle.predictor, n, trials, 8008, g_jobs);
    c.expect(probe.max_estimate >= threshold,
             "failure probability below 1/2 - 3 sigma for " + to_string(handle.kind));
  }

  for (int k : {1, 3, 10})
    for (double delta : {0.2, 0.5, 0.8})
      for (double t : {0.25, 0.7, 1.5}) {
        TailEstimate est = coupon_tail_estimate(k, delta, t, 20000, 8009);
        c.expect(est.estimate <= est.bound + 3.0 * std::max(est.stderr_, 1e-3),
                 "coupon tail estimate above e^{-t}");
      }
  return c.ok;
}

// ---------------------------------------------------------------- criterion 9

bool criterion_rate_separation(Check& c) {
  DiscreteTask task;
  task.dom = Domain(4);
  task.masses.assign(4, Rat(1, 4));
  task.target = 0b1111;
  task.validate();
  ConceptClass hypotheses = make_full_cube(Domain(4));
  GroupFamily groups(Domain(4), {0b0001, 0b0010, 0b0100, 0b1000});

  LearnerHandle mgoig =
      make_learner(LearnerKind::Base, hypotheses, groups, CapacityMode::Exact, true);
  LearnerHandle erm =
      make_learner(LearnerKind::ErmBaseline, hypotheses, groups, CapacityMode::Exact, true);

  const int trials = 3000;
  for (int n : {8, 16, 32, 64, 128}) {
    uint64_t seed = derive_seed(9009, static_cast<uint64_t>(n));
    ErrorEstimate em = sup_group_error(*mgoig.predictor, task, groups, n, trials, seed, g_jobs);
    ErrorEstimate ee = sup_group_error(*erm.predictor, task, groups, n, trials, seed, g_jobs);
    c.expect(em.estimate <= ee.estimate,
             "mgoig mean above erm mean at n=" + std::to_string(n));
  }
  return c.ok;
}

// --------------------------------------------------------------- criterion 10

bool criterion_permutation_invariance(Check& c) {
  struct Config {
    ConceptClass hypotheses;
    GroupFamily groups;
    CapacityMode mode;
  };
  std::vector<Config> configs;
  configs.push_back({make_thresholds(Domain(4)),
                     GroupFamily(Domain(4), {0b0011, 0b1100, 0b1111}), CapacityMode::Ceil});
  configs.push_back({make_full_cube(Domain(4)),
                     GroupFamily(Domain(4), {0b0001, 0b0010, 0b0100, 0b1000}),
                     CapacityMode::Exact});

  for (const auto& config : configs) {
    auto solver =
        std::make_shared<RealizableSolver>(config.hypotheses, config.groups, config.mode, true);
    MgoigPredictor learner(solver);
    ConceptClass concepts = enumerate_group_realizable(config.hypotheses, config.groups);

    // all sorted point tuples of size 1..5 over the 4-point domain
    std::function<void(std::vector<int>&, int)> visit = [&](std::vector<int>& tuple, int lo) {
      if (!tuple.empty()) {
        // all labelings induced by some group-realizable concept, deduplicated
        std::set<std::vector<int>> labelings;
        for (uint32_t cb : concepts.members()) {
          std::vector<int> labels;
          for (int p : tuple) labels.push_back(bit_get(cb, p) ? 1 : 0);
          labelings.insert(labels);
        }
        for (const auto& labels : labelings) {
          LabeledSample sorted_sample;
          for (size_t i = 0; i < tuple.size(); ++i)
            sorted_sample.entries.emplace_back(tuple[i], labels[i]);
          for (int x = 0; x < 4; ++x) {
            Prediction expected = learner.predict_prob(sorted_sample, x);
            std::vector<int> idx(tuple.size());
            for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
            do {
              LabeledSample perm;
              for (int i : idx)
                perm.entries.push_back(sorted_sample.entries[static_cast<size_t>(i)]);
              Prediction got = learner.predict_prob(perm, x);
              c.expect(got.prob_one == expected.prob_one && got.forced == expected.forced,
                       "permutation changed the output distribution");
            } while (std::next_permutation(idx.begin(), idx.end()));
          }
        }
      }
      if (tuple.size() == 5) return;
      for (int p = lo; p < 4; ++p) {
        tuple.push_back(p);
        visit(tuple, p);
        tuple.pop_back();
      }
    };
    std::vector<int> tuple;
    visit(tuple, 0);
  }
  return c.ok;
}

}  // namespace

int main() {
  unsigned hw = std::thread::hardware_concurrency();
  g_jobs = hw == 0 ? 1 : static_cast<int>(std::min(hw, 4u));

  struct Criterion {
    const char* name;
    std::function<bool(Check&)> run;
    double budget_seconds;
  };
  std::vector<Criterion> criteria = {
      {"density-vs-vc", criterion_density, 60.0},
      {"matching-optimality", criterion_matching, 0.0},
      {"transductive-bound", criterion_transductive, 0.0},
      {"prediction-bound", criterion_prediction, 0.0},
      {"pac-audit", criterion_pac, 600.0},
      {"agnostic-chain", criterion_agnostic, 0.0},
      {"covering-number", criterion_covering, 0.0},
      {"lower-bound", criterion_lowerbound, 0.0},
      {"rate-separation", criterion_rate_separation, 0.0},
      {"permutation-invariance", criterion_permutation_invariance, 0.0},
  };

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Check check;
    auto start = std::chrono::steady_clock::now();
    bool ok = false;
    std::string error;
    try {
      ok = criteria[i].run(check);
    } catch (const std::exception& e) {
      ok = false;
      error = e.what();
    }
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (criteria[i].budget_seconds > 0 && seconds > criteria[i].budget_seconds) {
      ok = false;
      if (check.detail.empty()) check.detail = "time budget exceeded";
    }
    if (!ok) ++failures;
    std::printf("[%2zu] %-24s %s  (%lld checks, %.1fs)%s%s\n", i + 1, criteria[i].name,
                ok ? "PASS" : "FAIL", check.checks, seconds,
                check.detail.empty() && error.empty() ? "" : " - ",
                error.empty() ? check.detail.c_str() : error.c_str());
    std::fflush(stdout);
  }
  if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
