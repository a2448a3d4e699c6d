#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "duograph/duograph.hpp"

namespace {

using nlohmann::ordered_json;

ordered_json beta_json(const duograph::BetaResult& r) {
  return ordered_json{{"lambda1", r.lambda1},
                      {"lambda2", r.lambda2},
                      {"beta", r.beta},
                      {"positive_root_count", r.positive_root_count},
                      {"residual", r.residual},
                      {"local_max_location", r.local_max_location},
                      {"local_max_value", r.local_max_value}};
}

ordered_json record_json(const duograph::TrialRecord& r) {
  ordered_json j{{"n", r.config.n},
                 {"lambda1", r.config.lambda1},
                 {"lambda2", r.config.lambda2},
                 {"seed", r.config.seed},
                 {"largest", r.largest},
                 {"second_largest", r.second_largest},
                 {"count_size1", r.count_size1},
                 {"count_size2", r.count_size2},
                 {"count_mid", r.count_mid}};
  j["tadpole_core"] =
      r.tadpole_core_size ? ordered_json(*r.tadpole_core_size) : ordered_json(nullptr);
  j["size_core"] =
      r.size_core_size ? ordered_json(*r.size_core_size) : ordered_json(nullptr);
  j["br_fraction"] =
      r.br_fraction ? ordered_json(*r.br_fraction) : ordered_json(nullptr);
  j["beta_predicted"] = r.beta_predicted;
  j["gen_ms"] = r.gen_ms;
  j["decomp_ms"] = r.decomp_ms;
  return j;
}

std::vector<duograph::TrialConfig> parse_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw duograph::io_error("cannot open config file " + path);
  ordered_json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw duograph::parameter_error(std::string("malformed config JSON: ") + e.what());
  }
  if (!doc.is_array()) throw duograph::parameter_error("config must be a JSON array");
  std::vector<duograph::TrialConfig> grid;
  for (const auto& item : doc) {
    if (!item.is_object())
      throw duograph::parameter_error("config entries must be JSON objects");
    duograph::TrialConfig cfg;
    try {
      cfg.n = item.at("n").get<std::uint32_t>();
      cfg.lambda1 = item.at("lambda1").get<double>();
      cfg.lambda2 = item.at("lambda2").get<double>();
      cfg.seed = item.at("seed").get<std::uint64_t>();
      if (item.contains("theta")) cfg.theta = item["theta"].get<std::uint32_t>();
      if (item.contains("s")) cfg.s = item["s"].get<std::int32_t>();
      if (item.contains("compute_cores"))
        cfg.compute_cores = item["compute_cores"].get<bool>();
    } catch (const std::exception& e) {
      throw duograph::parameter_error(std::string("bad config entry: ") + e.what());
    }
    grid.push_back(cfg);
  }
  return grid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"binomial double graphs: joint components, giant-size analytics, "
               "branching-process experiments"};
  app.require_subcommand(1);

  // beta
  double l1 = 0.0, l2 = 0.0, tol = 1e-12;
  auto* cmd_beta = app.add_subcommand("beta", "solve the giant-fraction equation");
  cmd_beta->add_option("--l1", l1)->required();
  cmd_beta->add_option("--l2", l2)->required();
  cmd_beta->add_option("--tol", tol);

  // bd
  std::uint32_t dmax = 0;
  auto* cmd_bd = app.add_subcommand("bd", "witness-event probability recursion");
  cmd_bd->add_option("--l1", l1)->required();
  cmd_bd->add_option("--l2", l2)->required();
  cmd_bd->add_option("--dmax", dmax)->required();

  // diagonal-critical
  double diag_tol = 1e-6;
  auto* cmd_diag =
      app.add_subcommand("diagonal-critical", "critical intensity on the diagonal");
  cmd_diag->add_option("--tol", diag_tol);

  // curve
  double l1_min = 0.0, l1_max = 0.0, step = 0.0, curve_tol = 1e-8;
  std::string out_path;
  auto* cmd_curve = app.add_subcommand("curve", "trace the threshold curve to CSV");
  cmd_curve->add_option("--l1-min", l1_min)->required();
  cmd_curve->add_option("--l1-max", l1_max)->required();
  cmd_curve->add_option("--step", step)->required();
  cmd_curve->add_option("--out", out_path)->required();
  cmd_curve->add_option("--tol", curve_tol);

  // phase
  duograph::PhaseDiagramOptions phase_opt;
  std::string phase_csv;
  std::string phase_svg;
  auto* cmd_phase = app.add_subcommand("phase", "beta heat map plus threshold overlay");
  cmd_phase->add_option("--out-csv", phase_csv)->required();
  cmd_phase->add_option("--out-svg", phase_svg);
  cmd_phase->add_option("--res", phase_opt.resolution);
  cmd_phase->add_option("--l1-min", phase_opt.l1_min);
  cmd_phase->add_option("--l1-max", phase_opt.l1_max);
  cmd_phase->add_option("--l2-min", phase_opt.l2_min);
  cmd_phase->add_option("--l2-max", phase_opt.l2_max);

  // simulate
  duograph::TrialConfig trial;
  bool cores = false;
  std::int32_t br_depth = -1;
  auto* cmd_sim = app.add_subcommand("simulate", "one generate-and-decompose trial");
  cmd_sim->add_option("--n", trial.n)->required();
  cmd_sim->add_option("--l1", trial.lambda1)->required();
  cmd_sim->add_option("--l2", trial.lambda2)->required();
  cmd_sim->add_option("--seed", trial.seed)->required();
  cmd_sim->add_flag("--cores", cores);
  cmd_sim->add_option("--br-depth", br_depth);
  cmd_sim->add_option("--theta", trial.theta);

  // sweep
  std::string config_path;
  unsigned threads = 0;
  auto* cmd_sweep = app.add_subcommand("sweep", "run a Monte Carlo grid to CSV");
  cmd_sweep->add_option("--config", config_path)->required();
  cmd_sweep->add_option("--out", out_path)->required();
  cmd_sweep->add_option("--threads", threads);

  // census
  std::uint32_t num_seeds = 0;
  std::uint64_t master_seed = 0;
  auto* cmd_census = app.add_subcommand("census", "component-size census over seeds");
  cmd_census->add_option("--n", trial.n)->required();
  cmd_census->add_option("--l1", l1)->required();
  cmd_census->add_option("--l2", l2)->required();
  cmd_census->add_option("--seeds", num_seeds)->required();
  cmd_census->add_option("--out", out_path)->required();
  cmd_census->add_option("--seed", master_seed);

  // branching
  std::string event_name;
  std::uint32_t level = 0;
  std::uint64_t trials = 0, seed = 0;
  auto* cmd_branch = app.add_subcommand("branching", "estimate a tree event probability");
  cmd_branch->add_option("--l1", l1)->required();
  cmd_branch->add_option("--l2", l2)->required();
  cmd_branch->add_option("--event", event_name)
      ->required()
      ->check(CLI::IsMember({"bd", "rb"}));
  cmd_branch->add_option("--level", level)->required();
  cmd_branch->add_option("--trials", trials)->required();
  cmd_branch->add_option("--seed", seed)->required();
  cmd_branch->add_option("--threads", threads);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*cmd_beta) {
      std::cout << beta_json(duograph::beta(l1, l2, tol)).dump() << '\n';
    } else if (*cmd_bd) {
      const auto q = duograph::bd_prob(l1, l2, dmax);
      std::cout << ordered_json(q).dump() << '\n';
    } else if (*cmd_diag) {
      const auto dc = duograph::diagonal_critical(diag_tol);
      std::cout << ordered_json{{"lambda_star", dc.lambda_star},
                                {"beta_star", dc.beta_star}}
                       .dump()
                << '\n';
    } else if (*cmd_curve) {
      const auto pts = duograph::trace_curve(l1_min, l1_max, step, curve_tol);
      std::ofstream out(out_path);
      if (!out) throw duograph::io_error("cannot open " + out_path);
      out << "lambda1,lambda2_critical,beta_at_critical\n";
      for (const auto& p : pts)
        out << duograph::format_double(p.lambda1) << ','
            << duograph::format_double(p.lambda2_critical) << ','
            << duograph::format_double(p.beta_at_critical) << '\n';
      if (!out) throw duograph::io_error("write failed for " + out_path);
    } else if (*cmd_phase) {
      duograph::emit_phase_diagram(
          phase_opt, phase_csv,
          phase_svg.empty() ? std::nullopt : std::optional<std::string>(phase_svg));
    } else if (*cmd_sim) {
      trial.compute_cores = cores;
      trial.s = br_depth;
      std::cout << record_json(duograph::run_trial(trial, 0)).dump() << '\n';
    } else if (*cmd_sweep) {
      duograph::sweep(parse_sweep_config(config_path), threads, out_path);
    } else if (*cmd_census) {
      duograph::census_experiment(trial.n, l1, l2, num_seeds, master_seed, out_path,
                                  threads);
    } else if (*cmd_branch) {
      const auto event = event_name == "bd" ? duograph::TreeEvent::binary_rb
                                            : duograph::TreeEvent::robust_rb;
      const auto rep = duograph::estimate_event(l1, l2, event, level, trials, seed,
                                                threads);
      std::cout << ordered_json{{"event", rep.event},
                                {"trials", rep.trials},
                                {"successes", rep.successes},
                                {"estimate", rep.estimate},
                                {"std_error", rep.std_error},
                                {"resamples", rep.resamples}}
                       .dump()
                << '\n';
    }
  } catch (const duograph::parameter_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const duograph::numeric_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const duograph::io_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
