#include "mgoig/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

namespace mgoig {

void DiscreteTask::validate() const {
  if (masses.size() != static_cast<size_t>(dom.m))
    throw std::invalid_argument("task needs one mass per point");
  Rat total(0);
  for (const Rat& p : masses) {
    if (p < Rat(0)) throw std::invalid_argument("negative point mass");
    total += p;
  }
  if (total != Rat(1)) throw std::invalid_argument("point masses must sum to 1");
  if (agnostic) {
    if (prob_one.size() != static_cast<size_t>(dom.m))
      throw std::invalid_argument("agnostic task needs P[y=1|x] per point");
    for (const Rat& p : prob_one)
      if (p < Rat(0) || p > Rat(1)) throw std::invalid_argument("label probability out of [0,1]");
  }
}

uint32_t DiscreteTask::support_mask() const {
  uint32_t mask = 0;
  for (int i = 0; i < dom.m; ++i)
    if (masses[static_cast<size_t>(i)] > Rat(0)) mask |= (1u << i);
  return mask;
}

Rat DiscreteTask::mass_of_mask(uint32_t mask) const {
  Rat total(0);
  for (int i = 0; i < dom.m; ++i)
    if (bit_get(mask, i)) total += masses[static_cast<size_t>(i)];
  return total;
}

Rat DiscreteTask::label_one_prob(int point) const {
  if (agnostic) return prob_one[static_cast<size_t>(point)];
  return Rat(bit_get(target, point) ? 1 : 0);
}

bool is_group_realizable_task(const DiscreteTask& task, const ConceptClass& hypotheses,
                              const GroupFamily& groups) {
  if (task.agnostic) return false;
  uint32_t support = task.support_mask();
  for (uint32_t g : groups.masks()) {
    uint32_t probe = g & support;
    if (probe == 0) continue;
    bool witness = false;
    for (uint32_t h : hypotheses.members())
      if (((h ^ task.target) & probe) == 0) {
        witness = true;
        break;
      }
    if (!witness) return false;
  }
  return true;
}

LabeledSample draw_sample(const DiscreteTask& task, int n, Rng& rng) {
  LabeledSample s;
  s.entries.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    // inverse-CDF over the exact masses with a 64-bit uniform
    Int r(rng.next_u64());
    Rat u(r, Int(1) << 64);
    int point = task.dom.m - 1;
    Rat acc(0);
    for (int p = 0; p < task.dom.m; ++p) {
      acc += task.masses[static_cast<size_t>(p)];
      if (u < acc) {
        point = p;
        break;
      }
    }
    int label;
    if (task.agnostic)
      label = rng.bernoulli(task.prob_one[static_cast<size_t>(point)]) ? 1 : 0;
    else
      label = bit_get(task.target, point) ? 1 : 0;
    s.entries.emplace_back(point, label);
  }
  return s;
}

void parallel_trials(int trials, int jobs, const std::function<void(int)>& fn) {
  if (jobs <= 1) {
    for (int t = 0; t < trials; ++t) fn(t);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(static_cast<size_t>(jobs));
  for (int w = 0; w < jobs; ++w)
    workers.emplace_back([&, w]() {
      for (int t = w; t < trials; t += jobs) fn(t);
    });
  for (auto& th : workers) th.join();
}

// ---------------------------------------------------------------- transductive

Rat transductive_error_exact(const RealizableSolver& solver, const LabeledSample& s,
                             uint32_t g_mask) {
  if (s.size() == 0) throw std::invalid_argument("transductive error needs a nonempty sample");
  s.validate_against(solver.domain());
  if (!s.duplicates_consistent())
    throw Error(Errc::InconsistentSample, "transductive sample has conflicting duplicates");

  uint32_t point_mask = 0;
  std::map<int, int> multiplicity;
  for (auto& [p, y] : s.entries) {
    (void)y;
    point_mask |= (1u << p);
    ++multiplicity[p];
  }
  auto ctx = solver.context(point_mask);

  uint32_t behavior = 0;
  for (auto& [p, y] : s.entries)
    if (y) behavior |= (1u << ctx->coord_of(p));
  int v_idx = ctx->oig.vertex_index(behavior);
  if (v_idx < 0)
    throw Error(Errc::InconsistentSample, "sample is not labeled by a group-realizable concept");

  Rat total(0);
  for (auto& [p, count] : multiplicity) {
    if (count != 1) continue;            // repeated points are always pinned
    if (!bit_get(g_mask, p)) continue;   // mistakes outside g do not count
    int coord = ctx->coord_of(p);
    int u_idx = ctx->oig.vertex_index(behavior ^ (1u << coord));
    if (u_idx < 0) continue;             // label forced, never missed
    int e = ctx->oig.edge_between(v_idx, u_idx);
    int side = v_idx < u_idx ? 0 : 1;
    total += ctx->matching.f[static_cast<size_t>(e)][static_cast<size_t>(side)];
  }
  return total / Rat(Int(static_cast<long long>(s.size())));
}

Rat transductive_error_permutation(const Predictor& predictor, const LabeledSample& s,
                                   uint32_t g_mask, int max_n) {
  int n = static_cast<int>(s.size());
  if (n > max_n) throw Error(Errc::BudgetExceeded, "permutation average too large");
  std::vector<int> idx(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = i;
  Rat total(0);
  long long count = 0;
  do {
    auto [test_point, truth] = s.entries[static_cast<size_t>(idx[static_cast<size_t>(n - 1)])];
    ++count;
    if (!bit_get(g_mask, test_point)) continue;
    LabeledSample train;
    train.entries.reserve(static_cast<size_t>(n - 1));
    for (int i = 0; i + 1 < n; ++i)
      train.entries.push_back(s.entries[static_cast<size_t>(idx[static_cast<size_t>(i)])]);
    Prediction pred = predictor.predict_prob(train, test_point);
    total += truth ? Rat(1) - pred.prob_one : pred.prob_one;
  } while (std::next_permutation(idx.begin(), idx.end()));
  return total / Rat(Int(count));
}

int sample_hypothesis_distance(const ConceptClass& hypotheses, const LabeledSample& s,
                               uint32_t g_mask) {
  int best = -1;
  for (uint32_t h : hypotheses.members()) {
    int d = 0;
    for (auto& [p, y] : s.entries)
      if (bit_get(g_mask, p) && (bit_get(h, p) ? 1 : 0) != y) ++d;
    if (best < 0 || d < best) best = d;
    if (best == 0) break;
  }
  return best < 0 ? 0 : best;
}

Rat agnostic_transductive_error_exact(const AgnosticSolver& solver, const LabeledSample& s,
                                      uint32_t g_mask) {
  int n = static_cast<int>(s.size());
  if (n == 0) throw std::invalid_argument("agnostic transductive error needs a nonempty sample");
  s.validate_against(solver.domain());

  Rat mistakes(0);
  for (int i = 0; i < n; ++i) {
    auto [p, y] = s.entries[static_cast<size_t>(i)];
    if (!bit_get(g_mask, p)) continue;
    LabeledSample train;
    train.entries.reserve(static_cast<size_t>(n - 1));
    for (int j = 0; j < n; ++j)
      if (j != i) train.entries.push_back(s.entries[static_cast<size_t>(j)]);
    AgnosticLayout layout = agnostic_layout(train, p);
    auto ctx = solver.context(layout.points);
    uint32_t w0 = layout.pinned;
    uint32_t w1 = layout.pinned | (1u << layout.test_coord);
    int e = ctx->oig.edge_between(ctx->oig.vertex_index(w0), ctx->oig.vertex_index(w1));
    const Rat& prob_one = ctx->matching.f[static_cast<size_t>(e)][0];
    mistakes += y ? Rat(1) - prob_one : prob_one;
  }
  int dist = sample_hypothesis_distance(solver.hypotheses(), s, g_mask);
  return (mistakes - Rat(dist)) / Rat(n);
}

Rat agnostic_transductive_error_permutation(const Predictor& predictor,
                                            const ConceptClass& hypotheses,
                                            const LabeledSample& s, uint32_t g_mask,
                                            int max_n) {
  int n = static_cast<int>(s.size());
  if (n > max_n) throw Error(Errc::BudgetExceeded, "permutation average too large");
  std::vector<int> idx(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = i;
  Rat total(0);
  long long count = 0;
  do {
    auto [test_point, truth] = s.entries[static_cast<size_t>(idx[static_cast<size_t>(n - 1)])];
    ++count;
    if (!bit_get(g_mask, test_point)) continue;
    LabeledSample train;
    for (int i = 0; i + 1 < n; ++i)
      train.entries.push_back(s.entries[static_cast<size_t>(idx[static_cast<size_t>(i)])]);
    Prediction pred = predictor.predict_prob(train, test_point);
    total += truth ? Rat(1) - pred.prob_one : pred.prob_one;
  } while (std::next_permutation(idx.begin(), idx.end()));
  int dist = sample_hypothesis_distance(hypotheses, s, g_mask);
  return total / Rat(Int(count)) - Rat(dist) / Rat(n);
}

// ------------------------------------------------------------------ prediction

Rat group_error_given_sample(const Predictor& predictor, const DiscreteTask& task,
                             const LabeledSample& s, uint32_t g_mask) {
  Rat err(0);
  for (int x = 0; x < task.dom.m; ++x) {
    if (!bit_get(g_mask, x)) continue;
    const Rat& mass = task.masses[static_cast<size_t>(x)];
    if (mass == Rat(0)) continue;
    Prediction pred = predictor.predict_prob(s, x);
    Rat p1 = task.label_one_prob(x);
    // mistake ∧ x: predict 0 against label 1 or predict 1 against label 0
    Rat mistake = p1 * (Rat(1) - pred.prob_one) + (Rat(1) - p1) * pred.prob_one;
    err += mass * mistake;
  }
  return err;
}

namespace {

void enumerate_samples(const DiscreteTask& task, const std::vector<int>& support, int n,
                       LabeledSample& s, const Rat& weight,
                       const std::function<void(const LabeledSample&, const Rat&)>& sink) {
  if (static_cast<int>(s.size()) == n) {
    sink(s, weight);
    return;
  }
  for (int x : support) {
    const Rat& mass = task.masses[static_cast<size_t>(x)];
    if (task.agnostic) {
      for (int y : {0, 1}) {
        Rat py = y ? task.prob_one[static_cast<size_t>(x)]
                   : Rat(1) - task.prob_one[static_cast<size_t>(x)];
        if (py == Rat(0)) continue;
        s.entries.emplace_back(x, y);
        enumerate_samples(task, support, n, s, weight * mass * py, sink);
        s.entries.pop_back();
      }
    } else {
      s.entries.emplace_back(x, bit_get(task.target, x) ? 1 : 0);
      enumerate_samples(task, support, n, s, weight * mass, sink);
      s.entries.pop_back();
    }
  }
}

}  // namespace

ErrorEstimate prediction_error_exact(const Predictor& predictor, const DiscreteTask& task,
                                     uint32_t g_mask, int n, long long budget) {
  task.validate();
  std::vector<int> support;
  for (int i = 0; i < task.dom.m; ++i)
    if (task.masses[static_cast<size_t>(i)] > Rat(0)) support.push_back(i);
  double states = std::pow(static_cast<double>(support.size()) * (task.agnostic ? 2.0 : 1.0),
                           static_cast<double>(n));
  if (states > static_cast<double>(budget))
    throw Error(Errc::BudgetExceeded, "exact enumeration exceeds the sample budget");

  ErrorEstimate out;
  out.exact = true;
  out.exact_value = Rat(0);
  LabeledSample scratch;
  enumerate_samples(task, support, n, scratch, Rat(1),
                    [&](const LabeledSample& s, const Rat& weight) {
                      out.exact_value += weight * group_error_given_sample(predictor, task, s, g_mask);
                    });
  out.estimate = rat_double(out.exact_value);
  return out;
}

namespace {

ErrorEstimate summarize_mc(const std::vector<Rat>& values) {
  ErrorEstimate out;
  out.exact = false;
  double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (const Rat& v : values) mean += rat_double(v);
  mean /= n;
  double var = 0.0;
  for (const Rat& v : values) {
    double d = rat_double(v) - mean;
    var += d * d;
  }
  var /= std::max(1.0, n - 1.0);
  out.estimate = mean;
  out.halfwidth = 2.576 * std::sqrt(var / n);
  return out;
}

}  // namespace

ErrorEstimate prediction_error_mc(const Predictor& predictor, const DiscreteTask& task,
                                  uint32_t g_mask, int n, int trials, uint64_t seed, int jobs) {
  task.validate();
  std::vector<Rat> values(static_cast<size_t>(trials));
  parallel_trials(trials, jobs, [&](int t) {
    Rng rng(derive_seed(seed, static_cast<uint64_t>(t)));
    LabeledSample s = draw_sample(task, n, rng);
    values[static_cast<size_t>(t)] = group_error_given_sample(predictor, task, s, g_mask);
  });
  return summarize_mc(values);
}

ErrorEstimate sup_group_error(const Predictor& predictor, const DiscreteTask& task,
                              const GroupFamily& groups, int n, int trials, uint64_t seed,
                              int jobs) {
  task.validate();
  std::vector<Rat> values(static_cast<size_t>(trials));
  parallel_trials(trials, jobs, [&](int t) {
    Rng rng(derive_seed(seed, static_cast<uint64_t>(t)));
    LabeledSample s = draw_sample(task, n, rng);
    Rat worst(0);
    for (uint32_t g : groups.masks()) {
      Rat e = group_error_given_sample(predictor, task, s, g);
      if (e > worst) worst = e;
    }
    values[static_cast<size_t>(t)] = worst;
  });
  return summarize_mc(values);
}

// -------------------------------------------------------------------- covering

Rat l1_distance(uint32_t g1, uint32_t g2, const DiscreteTask& task) {
  return task.mass_of_mask(g1 ^ g2);
}

CoverResult greedy_l1_cover(const GroupFamily& groups, const DiscreteTask& task,
                            const Rat& epsilon) {
  if (epsilon <= Rat(0) || epsilon >= Rat(1))
    throw Error(Errc::EpsilonOutOfRange, "epsilon must lie in (0,1)");
  CoverResult out;
  for (size_t j = 0; j < groups.size(); ++j) {
    bool far = true;
    for (size_t kept : out.cover)
      if (l1_distance(groups.at(j), groups.at(kept), task) <= epsilon) {
        far = false;
        break;
      }
    if (far) out.cover.push_back(j);
  }
  ConceptClass as_class(groups.domain(), groups.masks());
  int d = vc_dimension(as_class);
  double e = std::exp(1.0);
  out.size_bound = e * (d + 1) * std::pow(2.0 * e / rat_double(epsilon), d);
  out.size_bound_ok = static_cast<double>(out.cover.size()) <= out.size_bound;
  return out;
}

MgCoverResult mg_covering_number(const GroupFamily& groups, const DiscreteTask& task,
                                 const Rat& epsilon, size_t brute_cap) {
  CoverResult cover = greedy_l1_cover(groups, task, epsilon);
  const std::vector<size_t>& base = cover.cover;
  size_t c = base.size();
  MgCoverResult out;

  // coverage[j] = set of cover members i with P(g_i \ g_j) <= epsilon
  std::vector<uint64_t> coverage(c, 0);
  for (size_t j = 0; j < c; ++j)
    for (size_t i = 0; i < c; ++i) {
      uint32_t gi = groups.at(base[i]), gj = groups.at(base[j]);
      if (task.mass_of_mask(gi & ~gj) <= epsilon) coverage[j] |= (1ull << i);
    }
  uint64_t want = (c == 64) ? ~0ull : ((1ull << c) - 1);

  if (c > brute_cap) {
    // greedy set cover as an upper bound
    uint64_t covered = 0;
    while (covered != want) {
      size_t pick = c;
      int gain = -1;
      for (size_t j = 0; j < c; ++j) {
        int g = popcount32(static_cast<uint32_t>((coverage[j] & ~covered) & 0xffffffffull)) +
                popcount32(static_cast<uint32_t>(((coverage[j] & ~covered) >> 32) & 0xffffffffull));
        if (g > gain) {
          gain = g;
          pick = j;
        }
      }
      out.witness.push_back(base[pick]);
      covered |= coverage[pick];
    }
    out.number = static_cast<int>(out.witness.size());
    out.exact = false;
    return out;
  }

  // exhaustive, ascending subset size, lexicographically first witness
  for (size_t k = 1; k <= c; ++k) {
    std::vector<size_t> idx(k);
    for (size_t i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
      uint64_t covered = 0;
      for (size_t i : idx) covered |= coverage[i];
      if (covered == want) {
        out.number = static_cast<int>(k);
        for (size_t i : idx) out.witness.push_back(base[i]);
        out.exact = true;
        return out;
      }
      size_t i = k;
      while (i > 0 && idx[i - 1] == c - k + (i - 1)) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  out.number = static_cast<int>(c);
  out.exact = true;
  out.witness = base;
  return out;
}

// ----------------------------------------------------------------- lower bound

LowerBoundInstance build_lower_bound_instance(int points, const Rat& epsilon) {
  if (epsilon <= Rat(0) || epsilon >= Rat(1, 2))
    throw Error(Errc::EpsilonOutOfRange, "epsilon must lie in (0, 1/2)");
  if (Rat(points) > Rat(1) / (Rat(2) * epsilon))
    throw Error(Errc::EpsilonOutOfRange, "instance needs points <= 1/(2 epsilon)");
  if (points < 2) throw std::invalid_argument("instance needs at least 2 points");

  Domain dom(points);
  Rat eps0 = Rat(2) * epsilon;

  DiscreteTask task;
  task.dom = dom;
  task.masses.assign(static_cast<size_t>(points), eps0);
  task.masses[0] = Rat(1) - eps0 * Rat(points - 1);
  task.agnostic = false;
  task.target = 0;
  task.validate();

  std::vector<uint32_t> singles;
  for (int i = 0; i < points; ++i) singles.push_back(1u << i);

  LowerBoundInstance inst{points,
                          epsilon,
                          std::move(task),
                          make_full_cube(dom),
                          GroupFamily(dom, singles),
                          0.0,
                          0.0};
  int d_restricted = 0;
  for (uint32_t g : inst.groups.masks())
    d_restricted = std::max(d_restricted, vc_restricted(inst.hypotheses, g));
  inst.n1 = (d_restricted - 1) / (4.0 * rat_double(epsilon));
  inst.n2 = std::log(points / 2.0) / (2.0 * rat_double(epsilon));
  return inst;
}

FailureProbe lower_bound_failure_prob(const LowerBoundInstance& instance,
                                      const Predictor& predictor, int n, int trials,
                                      uint64_t seed, int jobs, int exhaustive_cap) {
  const DiscreteTask& task = instance.base_task;
  int m = instance.points;

  // positions drawn once per trial; b changes only the labels
  std::vector<std::vector<int>> positions(static_cast<size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, static_cast<uint64_t>(t)));
    DiscreteTask unlabeled = task;
    LabeledSample s = draw_sample(unlabeled, n, rng);
    positions[static_cast<size_t>(t)].reserve(static_cast<size_t>(n));
    for (auto& [p, y] : s.entries) {
      (void)y;
      positions[static_cast<size_t>(t)].push_back(p);
    }
  }

  std::vector<uint32_t> b_values;
  if (m <= exhaustive_cap) {
    for (uint32_t b = 0; b < (1u << m); ++b) b_values.push_back(b);
  } else {
    // adversarial heuristic: label each point against the learner's majority
    // answer on samples that miss it (label 1 beats the lexicographic base)
    b_values.push_back((1u << m) - 1);
  }

  FailureProbe probe;
  probe.per_b.assign(b_values.size(), 0.0);
  std::vector<std::vector<char>> fails(b_values.size(),
                                       std::vector<char>(static_cast<size_t>(trials), 0));

  parallel_trials(trials, jobs, [&](int t) {
    const std::vector<int>& pos = positions[static_cast<size_t>(t)];
    uint32_t seen = 0;
    for (int p : pos) seen |= (1u << p);
    // mistake probabilities depend on b only through labels on seen ∪ {x}
    std::map<std::pair<int, uint32_t>, Rat> memo;
    for (size_t bi = 0; bi < b_values.size(); ++bi) {
      uint32_t b = b_values[bi];
      bool fail = false;
      for (int x = 0; x < m && !fail; ++x) {
        uint32_t relevant = seen | (1u << x);
        uint32_t key = b & relevant;
        auto it = memo.find({x, key});
        Rat mistake;
        if (it != memo.end()) {
          mistake = it->second;
        } else {
          LabeledSample s;
          s.entries.reserve(pos.size());
          for (int p : pos) s.entries.emplace_back(p, bit_get(b, p) ? 1 : 0);
          Prediction pred = predictor.predict_prob(s, x);
          mistake = bit_get(b, x) ? Rat(1) - pred.prob_one : pred.prob_one;
          memo.emplace(std::make_pair(x, key), mistake);
        }
        Rat err = task.masses[static_cast<size_t>(x)] * mistake;
        if (err >= instance.epsilon) fail = true;
      }
      fails[bi][static_cast<size_t>(t)] = fail ? 1 : 0;
    }
  });

  for (size_t bi = 0; bi < b_values.size(); ++bi) {
    long long count = 0;
    for (char c : fails[bi]) count += c;
    probe.per_b[bi] = static_cast<double>(count) / static_cast<double>(trials);
    if (probe.per_b[bi] > probe.max_estimate) {
      probe.max_estimate = probe.per_b[bi];
      probe.worst_b = b_values[bi];
    }
  }
  return probe;
}

TailEstimate coupon_tail_estimate(int k, double delta, double t, int trials, uint64_t seed) {
  if (k < 1 || delta <= 0.0 || delta >= 1.0 || t <= 0.0)
    throw std::invalid_argument("coupon tail needs k >= 1, delta in (0,1), t > 0");
  TailEstimate out;
  out.threshold = (k * std::log(k + 1.0) - k * t) / delta;
  out.bound = std::exp(-t);
  long long hits = 0;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(derive_seed(seed, static_cast<uint64_t>(trial)));
    long long total = 0;
    for (int i = 1; i <= k; ++i)
      total += rng.geometric(delta * (1.0 - (i - 1.0) / k));
    if (static_cast<double>(total) <= out.threshold) ++hits;
  }
  out.estimate = static_cast<double>(hits) / static_cast<double>(trials);
  out.stderr_ = std::sqrt(out.estimate * (1.0 - out.estimate) / trials);
  return out;
}

// ------------------------------------------------------------------- PAC audit

std::vector<PacRow> pac_audit(const Predictor& predictor, const DiscreteTask& task,
                              const GroupFamily& groups, const ConceptClass& hypotheses,
                              int n, double delta, int trials, uint64_t seed, int jobs) {
  task.validate();
  size_t ng = groups.size();

  // benchmark error per group (zero in the realizable case)
  std::vector<Rat> opt(ng, Rat(0));
  if (task.agnostic) {
    for (size_t g = 0; g < ng; ++g) {
      Rat best(-1);
      for (uint32_t h : hypotheses.members()) {
        Rat err(0);
        for (int x = 0; x < task.dom.m; ++x) {
          if (!bit_get(groups.at(g), x)) continue;
          Rat p1 = task.prob_one[static_cast<size_t>(x)];
          Rat mistake = bit_get(h, x) ? Rat(1) - p1 : p1;
          err += task.masses[static_cast<size_t>(x)] * mistake;
        }
        if (best < Rat(0) || err < best) best = err;
      }
      opt[g] = best < Rat(0) ? Rat(0) : best;
    }
  }

  std::vector<std::vector<Rat>> excess(ng, std::vector<Rat>(static_cast<size_t>(trials), Rat(0)));
  parallel_trials(trials, jobs, [&](int t) {
    Rng rng(derive_seed(seed, static_cast<uint64_t>(t)));
    LabeledSample s = draw_sample(task, n, rng);
    for (size_t g = 0; g < ng; ++g)
      excess[g][static_cast<size_t>(t)] =
          group_error_given_sample(predictor, task, s, groups.at(g)) - opt[g];
  });

  std::vector<PacRow> rows;
  size_t qidx = static_cast<size_t>(std::ceil((1.0 - delta) * trials));
  if (qidx == 0) qidx = 1;
  for (size_t g = 0; g < ng; ++g) {
    std::sort(excess[g].begin(), excess[g].end());
    PacRow row;
    row.g_mask = groups.at(g);
    row.quantile = rat_double(excess[g][qidx - 1]);
    int d = vc_restricted(hypotheses, groups.at(g));
    if (task.agnostic)
      row.bound = 16.0 * std::sqrt((4.0 * d + std::log(2.0 / delta)) / n);
    else
      row.bound = 9.64 * (static_cast<double>(d) / (n + 1) + std::log(2.0 / delta) / n);
    row.ok = row.quantile <= row.bound;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace mgoig
