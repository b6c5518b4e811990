#include "mgoig/descriptors.hpp"

#include <algorithm>

namespace mgoig {

namespace {

[[noreturn]] void bad_config(const std::string& what) { throw Error(Errc::ConfigInvalid, what); }

Rat parse_rat_field(const Json& j) {
  try {
    if (j.is_string()) return rat_parse(j.get<std::string>());
    if (j.is_number_integer()) return Rat(Int(j.get<long long>()));
    if (j.is_number_float()) return rat_parse(std::to_string(j.get<double>()));
  } catch (const std::exception& e) {
    bad_config(std::string("bad rational: ") + e.what());
  }
  bad_config("expected a rational as \"p/q\" string or number");
}

}  // namespace

Domain parse_domain(const Json& j) {
  if (!j.is_object() || !j.contains("m") || !j["m"].is_number_integer())
    bad_config("domain must be {\"m\": <int>}");
  int m = j["m"].get<int>();
  if (m < 1 || m > kMaxPoints) bad_config("domain size out of range");
  return Domain(m);
}

ConceptClass parse_class(const Json& desc, Domain d) {
  if (!desc.is_object() || !desc.contains("kind")) bad_config("class descriptor needs a kind");
  std::string kind = desc["kind"].get<std::string>();
  if (kind == "explicit") {
    if (!desc.contains("bits") || !desc["bits"].is_array())
      bad_config("explicit class needs a bits array");
    std::vector<std::string> bits;
    for (const auto& b : desc["bits"]) bits.push_back(b.get<std::string>());
    return make_explicit(d, bits);
  }
  if (kind == "thresholds") return make_thresholds(d);
  if (kind == "intervals") return make_intervals(d);
  if (kind == "singletons") return make_singletons(d);
  if (kind == "full_cube") return make_full_cube(d);
  bad_config("unknown class kind: " + kind);
}

GroupFamily parse_family(const Json& desc, Domain d) {
  if (!desc.is_object() || !desc.contains("kind")) bad_config("group descriptor needs a kind");
  std::string kind = desc["kind"].get<std::string>();
  if (kind == "full_domain") return GroupFamily(d, {d.full_mask()});
  if (kind == "explicit") {
    if (!desc.contains("bits") || !desc["bits"].is_array())
      bad_config("explicit groups need a bits array");
    std::vector<uint32_t> masks;
    for (const auto& b : desc["bits"]) {
      std::string s = b.get<std::string>();
      if (static_cast<int>(s.size()) != d.m) bad_config("group bitstring length mismatch");
      masks.push_back(bits_parse(s));
    }
    return GroupFamily(d, masks);
  }
  if (kind == "singletons" || kind == "thresholds" || kind == "intervals") {
    ConceptClass as_class = kind == "singletons" ? make_singletons(d)
                            : kind == "thresholds" ? make_thresholds(d)
                                                   : make_intervals(d);
    std::vector<uint32_t> masks;
    for (uint32_t b : as_class.members())
      if (b != 0) masks.push_back(b);
    return GroupFamily(d, masks);
  }
  bad_config("unknown group kind: " + kind);
}

DiscreteTask parse_task(const Json& desc, Domain d) {
  if (!desc.is_object() || !desc.contains("masses")) bad_config("task needs masses");
  DiscreteTask task;
  task.dom = d;
  for (const auto& m : desc["masses"]) task.masses.push_back(parse_rat_field(m));
  task.agnostic = desc.value("agnostic", false);
  if (task.agnostic) {
    if (!desc.contains("p_one")) bad_config("agnostic task needs p_one");
    for (const auto& p : desc["p_one"]) task.prob_one.push_back(parse_rat_field(p));
  } else {
    if (!desc.contains("target")) bad_config("realizable task needs a target");
    std::string t = desc["target"].get<std::string>();
    if (static_cast<int>(t.size()) != d.m) bad_config("target length mismatch");
    task.target = bits_parse(t);
  }
  try {
    task.validate();
  } catch (const std::exception& e) {
    bad_config(std::string("invalid task: ") + e.what());
  }
  return task;
}

LabeledSample parse_sample(const Json& j) {
  const Json* entries = nullptr;
  if (j.is_array())
    entries = &j;
  else if (j.is_object() && j.contains("entries"))
    entries = &j["entries"];
  else
    bad_config("sample must be an array of [point, label] pairs");
  LabeledSample s;
  for (const auto& e : *entries) {
    if (!e.is_array() || e.size() != 2) bad_config("sample entry must be [point, label]");
    s.entries.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return s;
}

CapacityMode parse_mode(const std::string& s) {
  if (s == "exact") return CapacityMode::Exact;
  if (s == "ceil") return CapacityMode::Ceil;
  bad_config("mode must be exact or ceil");
}

LearnerKind parse_learner(const std::string& s) {
  if (s == "mgoig") return LearnerKind::Base;
  if (s == "majority") return LearnerKind::PrefixMajority;
  if (s == "agnostic") return LearnerKind::AgnosticBase;
  if (s == "agnostic-mixture") return LearnerKind::AgnosticMixture;
  if (s == "erm") return LearnerKind::ErmBaseline;
  bad_config("unknown learner: " + s);
}

LearnerHandle make_learner(LearnerKind kind, const ConceptClass& hypotheses,
                           const GroupFamily& groups, CapacityMode mode, bool enable_cache,
                           double delta, int d) {
  LearnerHandle handle;
  handle.kind = kind;
  switch (kind) {
    case LearnerKind::Base: {
      handle.realizable = std::make_shared<RealizableSolver>(hypotheses, groups, mode, enable_cache);
      handle.predictor = std::make_shared<MgoigPredictor>(handle.realizable);
      break;
    }
    case LearnerKind::ErmBaseline: {
      handle.realizable = std::make_shared<RealizableSolver>(hypotheses, groups, mode, enable_cache);
      handle.predictor = std::make_shared<ErmPredictor>(handle.realizable);
      break;
    }
    case LearnerKind::PrefixMajority: {
      handle.realizable = std::make_shared<RealizableSolver>(hypotheses, groups, mode, enable_cache);
      auto base = std::make_shared<MgoigPredictor>(handle.realizable);
      handle.predictor = std::make_shared<PrefixMajorityPredictor>(base);
      break;
    }
    case LearnerKind::AgnosticBase: {
      handle.agnostic = std::make_shared<AgnosticSolver>(hypotheses, groups, enable_cache);
      handle.predictor = std::make_shared<AgnosticPredictor>(handle.agnostic);
      break;
    }
    case LearnerKind::AgnosticMixture: {
      handle.agnostic = std::make_shared<AgnosticSolver>(hypotheses, groups, enable_cache);
      auto base = std::make_shared<AgnosticPredictor>(handle.agnostic);
      if (d < 0) {
        d = 0;
        for (uint32_t g : groups.masks()) d = std::max(d, vc_restricted(hypotheses, g));
      }
      handle.predictor = std::make_shared<AgnosticMixturePredictor>(base, delta, d);
      break;
    }
  }
  return handle;
}

}  // namespace mgoig
