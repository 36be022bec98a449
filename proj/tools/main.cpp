#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "robust_sysid/bounds.hpp"
#include "robust_sysid/certifier.hpp"
#include "robust_sysid/estimator.hpp"
#include "robust_sysid/experiment.hpp"
#include "robust_sysid/io.hpp"
#include "robust_sysid/plot.hpp"
#include "robust_sysid/rng.hpp"
#include "robust_sysid/types.hpp"

namespace {

using namespace robust_sysid;

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw std::invalid_argument("empty entry in list '" + text + "'");
    std::size_t used = 0;
    out.push_back(std::stoi(item, &used));
    if (used != item.size())
      throw std::invalid_argument("cannot parse integer '" + item + "'");
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw std::invalid_argument("empty entry in list '" + text + "'");
    std::size_t used = 0;
    out.push_back(std::stod(item, &used));
    if (used != item.size())
      throw std::invalid_argument("cannot parse number '" + item + "'");
  }
  return out;
}

void emit(const std::string& content, const std::string& output_path) {
  if (output_path.empty())
    std::cout << content;
  else
    write_text_file(output_path, content);
}

ExperimentConfig load_config(const std::string& path) {
  return experiment_config_from_map(parse_flat_config(read_text_file(path)));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"robust-sysid: sparse-attack-robust LTI identification"};
  app.require_subcommand(1);

  // simulate
  auto* cmd_sim = app.add_subcommand(
      "simulate", "Draw one experiment trial and write its trajectory CSV");
  std::string sim_config, sim_output;
  int sim_trial = 0;
  cmd_sim->add_option("--config", sim_config, "flat key=value config file")
      ->required();
  cmd_sim->add_option("--trial", sim_trial, "trial index (default 0)");
  cmd_sim->add_option("--output", sim_output, "CSV path (default stdout)");

  // estimate
  auto* cmd_est = app.add_subcommand(
      "estimate", "Solve the sum-of-column-norms program on a trajectory");
  std::string est_traj, est_output;
  SolverConfig est_solver;
  bool est_no_polish = false, est_no_adaptive = false;
  cmd_est->add_option("--trajectory", est_traj, "trajectory CSV")->required();
  cmd_est->add_option("--penalty", est_solver.penalty, "splitting penalty");
  cmd_est->add_option("--max-iters", est_solver.max_iters, "iteration cap");
  cmd_est->add_option("--tol-abs", est_solver.tol_abs, "absolute tolerance");
  cmd_est->add_option("--tol-rel", est_solver.tol_rel, "relative tolerance");
  cmd_est->add_flag("--no-polish", est_no_polish,
                    "skip the support-restricted refit");
  cmd_est->add_flag("--no-adaptive", est_no_adaptive,
                    "freeze the penalty parameter");
  cmd_est->add_option("--output", est_output, "JSON path (default stdout)");

  // certify
  auto* cmd_cert = app.add_subcommand(
      "certify", "Run recovery certificates for an attack support");
  std::string cert_traj, cert_support, cert_method = "verdict", cert_output;
  double cert_c = 1.0;
  long long cert_cap = 1000000;
  cmd_cert->add_option("--trajectory", cert_traj, "trajectory CSV")->required();
  cmd_cert->add_option("--support", cert_support,
                       "attack times, e.g. 3,17,40 (empty = no attacks)");
  cmd_cert
      ->add_option("--method", cert_method,
                   "verdict | all | sv | xi_s | xi_1")
      ->check(CLI::IsMember({"verdict", "all", "sv", "xi_s", "xi_1"}));
  cmd_cert->add_option("--c", cert_c, "NSP constant for the sv check");
  cmd_cert->add_option("--subset-cap", cert_cap,
                       "max index sets enumerated by xi_s");
  cmd_cert->add_option("--output", cert_output, "JSON path (default stdout)");

  // bound
  auto* cmd_bound = app.add_subcommand(
      "bound", "Evaluate the error bound, or Monte-Carlo check the "
               "concentration threshold (--mc)");
  std::string bound_traj, bound_support, bound_output;
  double bound_c = 0.5;
  bool bound_mc = false;
  std::string bound_config, bound_etas = "0.1,0.25,0.5";
  int bound_trials = 1000, bound_support_size = 0;
  double bound_epsilon = 1.0, bound_sigma = 1.0;
  cmd_bound->add_option("--trajectory", bound_traj,
                        "trajectory CSV (bound mode)");
  cmd_bound->add_option("--support", bound_support, "attack times");
  cmd_bound->add_option("--c", bound_c, "certified NSP constant in (0,1)");
  cmd_bound->add_flag("--mc", bound_mc, "Monte-Carlo threshold check");
  cmd_bound->add_option("--config", bound_config, "config file (mc mode)");
  cmd_bound->add_option("--etas", bound_etas, "tail levels, e.g. 0.1,0.25");
  cmd_bound->add_option("--trials", bound_trials, "mc trials (>= 100)");
  cmd_bound->add_option("--support-size", bound_support_size,
                        "attack support size (mc mode)");
  cmd_bound->add_option("--epsilon", bound_epsilon, "noise scale (mc mode)");
  cmd_bound->add_option("--sigma", bound_sigma, "input scale (mc mode)");
  cmd_bound->add_option("--output", bound_output,
                        "JSON/CSV path (default stdout)");

  // experiment
  auto* cmd_exp = app.add_subcommand(
      "experiment", "Estimation-error curves over prefix lengths (CSV)");
  std::string exp_config, exp_output;
  cmd_exp->add_option("--config", exp_config, "config file")->required();
  cmd_exp->add_option("--output", exp_output, "CSV path (default stdout)");

  // sweep
  auto* cmd_sweep = app.add_subcommand(
      "sweep", "Certification frequency across attack-set sizes (CSV)");
  std::string sweep_config, sweep_sizes, sweep_output;
  bool sweep_with_xi = false;
  long long sweep_cap = 1000000;
  cmd_sweep->add_option("--config", sweep_config, "config file")->required();
  cmd_sweep->add_option("--s-sizes", sweep_sizes, "sizes, e.g. 0,5,20,60")
      ->required();
  cmd_sweep->add_flag("--with-xi", sweep_with_xi,
                      "also run the xi certificates (LP-heavy)");
  cmd_sweep->add_option("--subset-cap", sweep_cap, "xi_s enumeration cap");
  cmd_sweep->add_option("--output", sweep_output, "CSV path (default stdout)");

  // plot
  auto* cmd_plot = app.add_subcommand(
      "plot", "Render an experiment or sweep CSV as an SVG");
  std::string plot_input, plot_output;
  cmd_plot->add_option("--input", plot_input, "CSV file")->required();
  cmd_plot->add_option("--output", plot_output, "SVG path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (cmd_sim->parsed()) {
      const ExperimentConfig config = load_config(sim_config);
      const ExperimentInstance inst = make_instance(config, sim_trial);
      emit(trajectory_to_csv(inst.traj), sim_output);
      std::ostringstream support;
      for (std::size_t i = 0; i < inst.support.indices().size(); ++i)
        support << (i ? "," : "") << inst.support.indices()[i];
      std::cerr << "support=" << support.str() << "\n";
    } else if (cmd_est->parsed()) {
      est_solver.polish = !est_no_polish;
      est_solver.adaptive_penalty = !est_no_adaptive;
      const Trajectory traj = read_trajectory_csv(est_traj);
      const EstimationResult result = solve_lasso(traj, est_solver);
      emit(estimation_to_json(result), est_output);
    } else if (cmd_cert->parsed()) {
      const Trajectory traj = read_trajectory_csv(cert_traj);
      const IndexSet s_set(parse_int_list(cert_support), traj.horizon());
      NspOptions options;
      options.subset_cap = cert_cap;
      std::string payload;
      if (cert_method == "verdict") {
        payload = certificate_to_json(nsp_verdict(traj, s_set, options));
      } else if (cert_method == "all") {
        payload = "[\n";
        const auto reports = nsp_all_methods(traj, s_set, options);
        for (std::size_t i = 0; i < reports.size(); ++i) {
          std::string one = certificate_to_json(reports[i]);
          one.pop_back();  // newline
          payload += one + (i + 1 < reports.size() ? ",\n" : "\n");
        }
        payload += "]\n";
      } else if (cert_method == "sv") {
        payload = certificate_to_json(check_singular_value_nsp(traj, s_set, cert_c));
      } else if (cert_method == "xi_s") {
        payload = certificate_to_json(
            certify_via_xi(traj, s_set, XiMode::xi_s, cert_cap));
      } else {
        payload = certificate_to_json(
            certify_via_xi(traj, s_set, XiMode::xi_1, cert_cap));
      }
      emit(payload, cert_output);
    } else if (cmd_bound->parsed()) {
      if (bound_mc) {
        if (bound_config.empty())
          throw std::invalid_argument("bound --mc needs --config");
        const ExperimentConfig config = load_config(bound_config);
        const SystemMatrices sys = make_instance(config, 0).sys;
        Rng rng(config.rng_seed ^ 0xa77acc11ull);
        const AttackModel model(
            IndexSet::random_subset(config.horizon, bound_support_size, rng),
            Eigen::MatrixXd::Zero(config.n, config.n),
            Eigen::MatrixXd::Zero(config.n, config.m), bound_epsilon,
            bound_sigma);
        const IndexSet full = IndexSet::full(config.horizon);
        std::vector<SweepRow> rows;
        for (double eta : parse_double_list(bound_etas)) {
          const McSigmaReport mc = monte_carlo_sigma_check(
              model, sys, full, eta, bound_trials, config.rng_seed);
          rows.push_back(SweepRow{"eta", eta, "exceed_rate",
                                  mc.empirical_exceed_rate,
                                  mc.binomial_slack});
          rows.push_back(SweepRow{"eta", eta, "threshold", mc.threshold, 0.0});
        }
        emit(sweep_to_csv(rows), bound_output);
      } else {
        if (bound_traj.empty())
          throw std::invalid_argument("bound needs --trajectory (or --mc)");
        const Trajectory traj = read_trajectory_csv(bound_traj);
        const IndexSet s_set(parse_int_list(bound_support), traj.horizon());
        emit(error_bound_to_json(theorem2_bound(bound_c, traj, s_set)),
             bound_output);
      }
    } else if (cmd_exp->parsed()) {
      const ExperimentConfig config = load_config(exp_config);
      emit(error_curve_to_csv(run_error_curve(config)), exp_output);
    } else if (cmd_sweep->parsed()) {
      const ExperimentConfig config = load_config(sweep_config);
      NspOptions options;
      options.run_xi = sweep_with_xi;
      options.subset_cap = sweep_cap;
      emit(certification_to_csv(run_certification_sweep(
               config, parse_int_list(sweep_sizes), options)),
           sweep_output);
    } else if (cmd_plot->parsed()) {
      const std::string text = read_text_file(plot_input);
      const std::size_t eol = text.find('\n');
      const std::string header = text.substr(0, eol);
      std::string svg;
      if (header == "trial,t,method,err_fro,objective,converged,seed") {
        svg = render_error_curve_svg(error_curve_from_csv(text));
      } else if (header ==
                 "trial,s_size,horizon,method,certified,c_achieved,seed") {
        svg = render_certification_svg(certification_from_csv(text));
      } else {
        throw IoError("line 1: unrecognized CSV header '" + header + "'");
      }
      emit(svg, plot_output);
    }
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
