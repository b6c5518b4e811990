#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "mgoig/experiments.hpp"
#include "mgoig/lp_oracle.hpp"

namespace {

using mgoig::Json;

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw mgoig::Error(mgoig::Errc::ConfigInvalid, "cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw mgoig::Error(mgoig::Errc::ConfigInvalid, std::string("invalid JSON: ") + e.what());
  }
  return j;
}

struct InstanceArgs {
  mgoig::Domain dom = mgoig::Domain(1);
  mgoig::ConceptClass hypotheses;
  mgoig::GroupFamily groups;

  explicit InstanceArgs(const Json& config)
      : dom(mgoig::parse_domain(config.at("domain"))),
        hypotheses(mgoig::parse_class(config.at("hypotheses"), dom)),
        groups(mgoig::parse_family(config.at("groups"), dom)) {}
};

int cmd_predict(const std::string& config_path, const std::string& sample_path, int point,
                uint64_t seed, const std::string& learner, const std::string& mode_name,
                double delta, int d, bool show_prob) {
  Json config = load_json(config_path);
  InstanceArgs inst(config);
  mgoig::LabeledSample sample = mgoig::parse_sample(load_json(sample_path));
  mgoig::LearnerHandle handle =
      mgoig::make_learner(mgoig::parse_learner(learner), inst.hypotheses, inst.groups,
                          mgoig::parse_mode(mode_name), false, delta, d);
  mgoig::Rng rng(seed);
  int label = handle.predictor->predict(sample, point, rng);
  if (show_prob) {
    mgoig::Prediction p = handle.predictor->predict_prob(sample, point);
    std::cout << "label=" << label << " p_one=" << mgoig::rat_str(p.prob_one)
              << " forced=" << (p.forced ? 1 : 0) << "\n";
  } else {
    std::cout << label << "\n";
  }
  return 0;
}

int cmd_match_solve(const std::string& config_path, const std::string& mode_name,
                    const std::string& dump_prefix) {
  Json config = load_json(config_path);
  InstanceArgs inst(config);
  std::vector<int> points;
  if (config.contains("points"))
    for (const auto& p : config["points"]) points.push_back(p.get<int>());
  else
    for (int i = 0; i < inst.dom.m; ++i) points.push_back(i);

  mgoig::ConceptClass h_proj = mgoig::project_class(inst.hypotheses, points);
  std::vector<uint32_t> masks = mgoig::project_masks(inst.groups, points);
  mgoig::ConceptClass concepts = mgoig::enumerate_group_realizable(
      h_proj, mgoig::GroupFamily(h_proj.domain(), masks));
  mgoig::Oig oig = mgoig::build_oig(concepts, masks);
  mgoig::MgNetwork net = mgoig::build_network(oig, mgoig::parse_mode(mode_name));
  mgoig::SolveResult res = mgoig::solve_matching(net);

  std::cout << "value=" << mgoig::rat_str(res.value) << " edges=" << net.n_edges()
            << " integral=" << (res.integral ? 1 : 0) << " iterations=" << res.unit_steps.str()
            << " paths=" << res.paths << " scale=" << res.scale.str() << "\n";
  if (net.capacity_warning)
    std::cerr << "warning: capacities below the exact density; completeness not guaranteed\n";
  if (!dump_prefix.empty()) {
    std::ofstream(dump_prefix + ".network.json") << mgoig::network_to_json(net);
    std::ofstream(dump_prefix + ".matching.json") << mgoig::matching_to_json(net, res.matching);
  }
  return 0;
}

int cmd_agnostic_predict(const std::string& config_path, const std::string& sample_path, int point,
                         uint64_t seed, bool show_prob) {
  return cmd_predict(config_path, sample_path, point, seed, "agnostic", "ceil", 0.1, -1,
                     show_prob);
}

int cmd_agnostic_audit(const std::string& config_path, const std::string& sample_path, int point,
                       const std::string& out_path) {
  Json config = load_json(config_path);
  InstanceArgs inst(config);
  mgoig::LabeledSample sample = mgoig::parse_sample(load_json(sample_path));
  auto solver = std::make_shared<mgoig::AgnosticSolver>(inst.hypotheses, inst.groups, false);
  mgoig::AgnosticLayout layout = mgoig::agnostic_layout(sample, point);
  auto ctx = solver->context(layout.points);
  std::string text = mgoig::agnostic_audit_json(*ctx);
  if (out_path.empty())
    std::cout << text << "\n";
  else
    std::ofstream(out_path) << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-group one-inclusion-graph learner and experiment runner"};
  app.require_subcommand(0, 1);

  // predict
  auto* predict = app.add_subcommand("predict", "predict a label for a test point");
  std::string p_config, p_sample, p_learner = "mgoig", p_mode = "ceil";
  int p_point = 0, p_d = -1;
  uint64_t p_seed = 0;
  double p_delta = 0.1;
  bool p_prob = false;
  predict->add_option("--config", p_config, "task config JSON")->required();
  predict->add_option("--sample", p_sample, "sample JSON")->required();
  predict->add_option("--point,-k", p_point, "test point index")->required();
  predict->add_option("--seed,-s", p_seed, "randomness seed");
  predict->add_option("--learner", p_learner, "mgoig|majority|agnostic|agnostic-mixture|erm");
  predict->add_option("--mode", p_mode, "capacity mode: exact|ceil");
  predict->add_option("--delta", p_delta, "mixture confidence parameter");
  predict->add_option("--d", p_d, "mixture dimension parameter (default: restricted VC)");
  predict->add_flag("--prob", p_prob, "also print the exact Bernoulli parameter");

  // match solve
  auto* match = app.add_subcommand("match", "matching solver");
  auto* solve = match->add_subcommand("solve", "solve the multi-group matching");
  std::string m_config, m_mode = "ceil", m_dump;
  solve->add_option("--config", m_config, "instance config JSON")->required();
  solve->add_option("--mode", m_mode, "capacity mode: exact|ceil");
  solve->add_option("--dump", m_dump, "write network/matching JSON with this prefix");

  // agnostic predict / audit
  auto* agn = app.add_subcommand("agnostic", "agnostic graph learner");
  auto* agn_predict = agn->add_subcommand("predict", "predict with the agnostic learner");
  std::string a_config, a_sample, a_out;
  int a_point = 0;
  uint64_t a_seed = 0;
  bool a_prob = false;
  agn_predict->add_option("--config", a_config)->required();
  agn_predict->add_option("--sample", a_sample)->required();
  agn_predict->add_option("--point,-k", a_point)->required();
  agn_predict->add_option("--seed,-s", a_seed);
  agn_predict->add_flag("--prob", a_prob);
  auto* agn_audit = agn->add_subcommand("audit", "dump credits, phi and capacities");
  agn_audit->add_option("--config", a_config)->required();
  agn_audit->add_option("--sample", a_sample)->required();
  agn_audit->add_option("--point,-k", a_point)->required();
  agn_audit->add_option("--out", a_out, "output file (default stdout)");

  // run / describe
  auto* run = app.add_subcommand("run", "run an experiment config");
  std::string r_config, r_out_dir, r_mode;
  uint64_t r_seed = 0;
  bool r_seed_set = false, r_mode_set = false;
  int r_jobs = 1;
  run->add_option("config", r_config, "experiment config JSON")->required();
  run->add_option("--seed,-s", r_seed)->each([&](const std::string&) { r_seed_set = true; });
  run->add_option("--jobs,-j", r_jobs, "trial-level parallelism");
  run->add_option("--mode", r_mode)->each([&](const std::string&) { r_mode_set = true; });
  run->add_option("--out", r_out_dir, "output directory (default $MGOIG_OUT_DIR or .)");

  auto* describe = app.add_subcommand("describe", "print instance sizes without running");
  std::string d_config;
  describe->add_option("config", d_config, "experiment config JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*predict)
      return cmd_predict(p_config, p_sample, p_point, p_seed, p_learner, p_mode, p_delta, p_d,
                         p_prob);
    if (*solve) return cmd_match_solve(m_config, m_mode, m_dump);
    if (*agn_predict) return cmd_agnostic_predict(a_config, a_sample, a_point, a_seed, a_prob);
    if (*agn_audit) return cmd_agnostic_audit(a_config, a_sample, a_point, a_out);
    if (*run) {
      mgoig::RunOptions options;
      if (r_seed_set) options.seed = r_seed;
      if (r_mode_set) options.mode = mgoig::parse_mode(r_mode);
      options.jobs = r_jobs;
      options.out_dir = r_out_dir;
      mgoig::RunOutcome outcome = mgoig::run_experiment_file(r_config, options);
      std::cout << "experiment_id=" << outcome.experiment_id << " rows=" << outcome.rows.size()
                << " exact_failures=" << outcome.exact_failures << "\n"
                << "csv=" << outcome.csv_path << "\n"
                << "manifest=" << outcome.manifest_path << "\n";
      return outcome.exact_failures > 0 ? 1 : 0;
    }
    if (*describe) {
      std::cout << mgoig::describe_file(d_config);
      return 0;
    }
    std::cout << app.help();
    return 0;
  } catch (const mgoig::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == mgoig::Errc::ConfigInvalid ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
