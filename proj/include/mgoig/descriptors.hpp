#pragma once

#include <memory>
#include <string>

#include "json.hpp"
#include "mgoig/evaluation.hpp"

namespace mgoig {

using Json = nlohmann::json;

// JSON descriptors:
//   domain:  {"m": 4}
//   class:   {"kind":"explicit","bits":["010",...]} | {"kind":"thresholds"} |
//            {"kind":"intervals"} | {"kind":"singletons"} | {"kind":"full_cube"}
//   groups:  explicit | singletons | thresholds | intervals | full_domain
//   task:    {"masses":["1/4",...], "target":"0111"} or
//            {"masses":[...], "agnostic":true, "p_one":["1/2",...]}
Domain parse_domain(const Json& j);
ConceptClass parse_class(const Json& desc, Domain d);
GroupFamily parse_family(const Json& desc, Domain d);
DiscreteTask parse_task(const Json& desc, Domain d);
LabeledSample parse_sample(const Json& j);
CapacityMode parse_mode(const std::string& s);
LearnerKind parse_learner(const std::string& s);

struct LearnerHandle {
  LearnerKind kind = LearnerKind::Base;
  std::shared_ptr<RealizableSolver> realizable;  // null for agnostic learners
  std::shared_ptr<AgnosticSolver> agnostic;      // null for realizable learners
  std::shared_ptr<const Predictor> predictor;
};

LearnerHandle make_learner(LearnerKind kind, const ConceptClass& hypotheses,
                           const GroupFamily& groups, CapacityMode mode, bool enable_cache,
                           double delta = 0.1, int d = -1);

}  // namespace mgoig
