#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "robust_sysid/io.hpp"
#include "robust_sysid/rng.hpp"

using namespace robust_sysid;

namespace {

Trajectory random_traj(int n, int m, int t_end, bool with_dist,
                       std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd states = rng.normal_matrix(n, t_end + 1);
  states(0, 0) = 1.0 / 3.0;  // a value with no short decimal form
  Eigen::MatrixXd inputs = rng.normal_matrix(m, t_end);
  if (with_dist)
    return Trajectory(states, inputs, rng.normal_matrix(n, t_end));
  return Trajectory(states, inputs);
}

}  // namespace

TEST_CASE("trajectory CSV round trips bit for bit") {
  const std::pair<int, bool> combos[] = {
      {1, true}, {0, true}, {1, false}, {0, false}};
  for (const auto& [m, with_dist] : combos) {
    const Trajectory traj = random_traj(2, m, 6, with_dist, 60 + m);
    const Trajectory back = trajectory_from_csv(trajectory_to_csv(traj));
    CHECK(back.states == traj.states);
    CHECK(back.inputs == traj.inputs);
    CHECK(back.disturbances.has_value() == with_dist);
    if (with_dist) CHECK(*back.disturbances == *traj.disturbances);
  }
}

TEST_CASE("trajectory CSV file round trip and I/O failures") {
  const std::string path = "io_test_traj.csv";
  const Trajectory traj = random_traj(3, 2, 5, true, 61);
  write_trajectory_csv(traj, path);
  const Trajectory back = read_trajectory_csv(path);
  CHECK(back.states == traj.states);
  CHECK(*back.disturbances == *traj.disturbances);
  std::remove(path.c_str());

  CHECK_THROWS_WITH_AS(read_trajectory_csv("definitely_missing_dir/x.csv"),
                       doctest::Contains("cannot open"), IoError);
}

TEST_CASE("trajectory CSV rejects malformed input with line numbers") {
  auto reject = [](const std::string& text, const char* needle) {
    CHECK_THROWS_WITH_AS(trajectory_from_csv(text), doctest::Contains(needle),
                         IoError);
  };
  reject("", "line 1");
  reject("x_0,t\n", "must start with 't'");
  reject("t,u_0\n0,1\n1,\n", "no x_ columns");
  reject("t,x_0,z_9\n0,1,1\n1,2,2\n", "unrecognized trajectory column");
  reject("t,x_0,x_1,d_0\n0,1,1,1\n1,1,1,\n", "expected 2 d_ columns");
  reject("t,x_0\n0,1\n", "at least steps");
  reject("t,x_0\n0,1\n1,2,9\n", "line 3");
  reject("t,x_0\n0,1\n2,2\n", "out of order");
  reject("t,x_0,u_0\n0,1,1\n1,2,3\n", "blank at the final step");
  reject("t,x_0\n0,abc\n1,2\n", "cannot parse");
}

TEST_CASE("estimation JSON is row major with all scalars present") {
  Eigen::MatrixXd a(2, 2);
  a << 1, 2, 3, 4;
  Eigen::MatrixXd b(2, 1);
  b << 5, 6;
  Eigen::MatrixXd d(2, 3);
  d << 0, 0, 7, 0, 0, 8;
  EstimationResult res{SystemMatrices(a, b), d, 10.63, 42, 1e-10, 2e-10,
                       true,  SolverDiagnostics{}};

  const nlohmann::json j = nlohmann::json::parse(estimation_to_json(res));
  CHECK(j.at("a_hat") == nlohmann::json({{1.0, 2.0}, {3.0, 4.0}}));
  CHECK(j.at("b_hat") == nlohmann::json({{5.0}, {6.0}}));
  CHECK(j.at("d_hat")[0][2] == 7.0);
  CHECK(j.at("d_hat")[1][2] == 8.0);
  CHECK(j.at("objective") == 10.63);
  CHECK(j.at("iterations") == 42);
  CHECK(j.at("converged") == true);
  CHECK(j.at("primal_residual") == 1e-10);
  CHECK(j.at("dual_residual") == 2e-10);
}

TEST_CASE("certificate JSON maps optionals to null and flags into details") {
  CertificateReport rep;
  rep.method = "xi_1";
  rep.c_achieved = 0.5;
  rep.xi_value = 0.2;
  rep.applicable = true;
  rep.certified = true;
  rep.recovery_certified = true;
  rep.details["denominator"] = 0.8;

  nlohmann::json j = nlohmann::json::parse(certificate_to_json(rep));
  CHECK(j.at("method") == "xi_1");
  CHECK(j.at("c_achieved") == 0.5);
  CHECK(j.at("xi_value") == 0.2);
  CHECK(j.at("recovery_certified") == true);
  CHECK(j.at("details").at("denominator") == 0.8);
  CHECK(j.at("details").at("certified") == 1.0);
  CHECK(j.at("details").at("applicable") == 1.0);
  CHECK(j.at("inapplicable_reasons").empty());

  CertificateReport empty;
  empty.method = "singular_value";
  empty.applicable = false;
  empty.inapplicable_reasons.push_back("complement too small");
  j = nlohmann::json::parse(certificate_to_json(empty));
  CHECK(j.at("c_achieved").is_null());
  CHECK(j.at("xi_value").is_null());
  CHECK(j.at("details").at("applicable") == 0.0);
  CHECK(j.at("inapplicable_reasons")[0] == "complement too small");
}

TEST_CASE("error bound and MC reports serialize completely") {
  ErrorBound eb;
  eb.c = 0.5;
  eb.noise_mass = 0.2;
  eb.sigma_min_data = 4.0;
  eb.bound = 0.3;
  const nlohmann::json j = nlohmann::json::parse(error_bound_to_json(eb));
  CHECK(j.at("c") == 0.5);
  CHECK(j.at("noise_mass") == 0.2);
  CHECK(j.at("sigma_min_data") == 4.0);
  CHECK(j.at("bound") == 0.3);

  McSigmaReport mc;
  mc.empirical_exceed_rate = 0.01;
  mc.threshold = 5.5;
  mc.eta = 0.25;
  mc.trials = 1000;
  mc.binomial_slack = 0.041;
  const nlohmann::json k = nlohmann::json::parse(mc_sigma_to_json(mc));
  CHECK(k.at("empirical_exceed_rate") == 0.01);
  CHECK(k.at("threshold") == 5.5);
  CHECK(k.at("eta") == 0.25);
  CHECK(k.at("trials") == 1000);
  CHECK(k.at("binomial_slack") == 0.041);
}

TEST_CASE("error curve CSV round trips, including NaN failure rows") {
  std::vector<ErrorCurveRow> rows;
  rows.push_back(ErrorCurveRow{0, 11, "lasso", 1.0 / 3.0, 0.125, true, 7});
  rows.push_back(ErrorCurveRow{0, 11, "least_squares",
                               std::numeric_limits<double>::quiet_NaN(),
                               std::numeric_limits<double>::quiet_NaN(), false,
                               7});
  rows.push_back(ErrorCurveRow{1, 200, "lasso", 4e-9, 17.25, true,
                               18446744073709551615ull});

  const std::string text = error_curve_to_csv(rows);
  CHECK(text.rfind("trial,t,method,err_fro,objective,converged,seed\n", 0) ==
        0);
  const std::vector<ErrorCurveRow> back = error_curve_from_csv(text);
  REQUIRE(back.size() == 3);
  CHECK(back[0].err_fro == rows[0].err_fro);
  CHECK(back[0].method == "lasso");
  CHECK(back[0].converged);
  CHECK(std::isnan(back[1].err_fro));
  CHECK(std::isnan(back[1].objective));
  CHECK_FALSE(back[1].converged);
  CHECK(back[2].seed == 18446744073709551615ull);
  CHECK(back[2].err_fro == 4e-9);

  CHECK_THROWS_WITH_AS(error_curve_from_csv("param,value\n"),
                       doctest::Contains("expected header"), IoError);
  CHECK_THROWS_WITH_AS(
      error_curve_from_csv("trial,t,method,err_fro,objective,converged,seed\n"),
      doctest::Contains("no data rows"), IoError);
  CHECK_THROWS_WITH_AS(
      error_curve_from_csv(
          "trial,t,method,err_fro,objective,converged,seed\n"
          "0,1,lasso,0,0,2,5\n"),
      doctest::Contains("0 or 1"), IoError);
}

TEST_CASE("certification CSV round trips") {
  std::vector<CertificationRow> rows;
  rows.push_back(CertificationRow{0, 5, 40, "singular_value", true, 0.25, 3});
  rows.push_back(CertificationRow{0, 40, 40, "none", false,
                                  std::numeric_limits<double>::quiet_NaN(), 3});
  rows.push_back(CertificationRow{1, 0, 40, "xi_s", true, 0.0, 99});

  const std::string text = certification_to_csv(rows);
  CHECK(text.rfind("trial,s_size,horizon,method,certified,c_achieved,seed\n",
                   0) == 0);
  const std::vector<CertificationRow> back = certification_from_csv(text);
  REQUIRE(back.size() == 3);
  CHECK(back[0].method == "singular_value");
  CHECK(back[0].certified);
  CHECK(back[0].c_achieved == 0.25);
  CHECK(back[0].horizon == 40);
  CHECK(std::isnan(back[1].c_achieved));
  CHECK_FALSE(back[1].certified);
  CHECK(back[2].s_size == 0);
  CHECK(back[2].seed == 99);

  CHECK_THROWS_WITH_AS(certification_from_csv("bad\n0\n"),
                       doctest::Contains("expected header"), IoError);
}

TEST_CASE("sweep CSV round trips") {
  std::vector<SweepRow> rows;
  rows.push_back(SweepRow{"eta", 0.1, "exceed_rate", 0.004, 0.0284});
  rows.push_back(SweepRow{"eta", 0.1, "threshold", 123.456, 0.0});

  const std::string text = sweep_to_csv(rows);
  CHECK(text.rfind("param,value,metric,estimate,slack\n", 0) == 0);
  const std::vector<SweepRow> back = sweep_from_csv(text);
  REQUIRE(back.size() == 2);
  CHECK(back[0].param == "eta");
  CHECK(back[0].value == 0.1);
  CHECK(back[0].metric == "exceed_rate");
  CHECK(back[0].estimate == 0.004);
  CHECK(back[0].slack == 0.0284);
  CHECK(back[1].metric == "threshold");
  CHECK(back[1].estimate == 123.456);

  CHECK_THROWS_WITH_AS(sweep_from_csv("param,value,metric,estimate\n"),
                       doctest::Contains("expected header"), IoError);
  CHECK_THROWS_WITH_AS(sweep_from_csv("param,value,metric,estimate,slack\n"),
                       doctest::Contains("no data rows"), IoError);
}

TEST_CASE("flat config parsing: comments, trimming, and rejections") {
  const auto values = parse_flat_config(
      "# reference setup\n"
      "\n"
      "schema_version = 1\n"
      "n=4\n"
      "  horizon = 33  \n");
  CHECK(values.at("schema_version") == "1");
  CHECK(values.at("n") == "4");
  CHECK(values.at("horizon") == "33");
  CHECK(values.size() == 3);

  CHECK_THROWS_WITH_AS(parse_flat_config("n=1\nn=2\n"),
                       doctest::Contains("duplicate key"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_flat_config("just words\n"),
                       doctest::Contains("expected key=value"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_flat_config("=5\n"), doctest::Contains("empty key"),
                       std::invalid_argument);
}

TEST_CASE("experiment config from map applies defaults and validates") {
  std::map<std::string, std::string> values{{"schema_version", "1"}};
  const ExperimentConfig defaults = experiment_config_from_map(values);
  CHECK(defaults.n == 10);
  CHECK(defaults.m == 0);
  CHECK(defaults.horizon == 200);
  CHECK(defaults.attack_probability == 0.3);
  CHECK(defaults.attack_scale == 10.0);
  CHECK_FALSE(defaults.noise_on);
  CHECK(defaults.trials == 20);
  CHECK(defaults.rng_seed == 0);
  CHECK(defaults.eigenvalue_law == "uniform01");
  CHECK(defaults.grid_step == 5);

  values = {{"schema_version", "1"}, {"n", "2"},         {"m", "1"},
            {"horizon", "50"},       {"noise_on", "true"}, {"rng_seed", "9"},
            {"attack_probability", "0.25"}};
  const ExperimentConfig custom = experiment_config_from_map(values);
  CHECK(custom.n == 2);
  CHECK(custom.m == 1);
  CHECK(custom.horizon == 50);
  CHECK(custom.noise_on);
  CHECK(custom.rng_seed == 9);
  CHECK(custom.attack_probability == 0.25);

  auto reject = [](std::map<std::string, std::string> bad, const char* needle) {
    CHECK_THROWS_WITH_AS(experiment_config_from_map(bad),
                         doctest::Contains(needle), std::invalid_argument);
  };
  reject({{"n", "4"}}, "missing schema_version");
  reject({{"schema_version", "2"}}, "unsupported schema_version");
  reject({{"schema_version", "1"}, {"color", "red"}}, "unknown key");
  reject({{"schema_version", "1"}, {"n", "four"}}, "cannot parse integer");
  reject({{"schema_version", "1"}, {"noise_on", "maybe"}}, "true/false");
  reject({{"schema_version", "1"}, {"rng_seed", "-5"}}, "cannot parse seed");
  reject({{"schema_version", "1"}, {"attack_scale", "x"}}, "cannot parse number");
  reject({{"schema_version", "1"}, {"n", "0"}}, "experiment config");
}

TEST_CASE("experiment config text round trip") {
  ExperimentConfig config;
  config.n = 7;
  config.m = 2;
  config.horizon = 61;
  config.attack_probability = 0.3;
  config.attack_scale = 2.5;
  config.noise_on = true;
  config.trials = 4;
  config.rng_seed = 1234567890123456789ull;
  config.grid_step = 9;

  const ExperimentConfig back =
      experiment_config_from_map(parse_flat_config(
          experiment_config_to_text(config)));
  CHECK(back.n == config.n);
  CHECK(back.m == config.m);
  CHECK(back.horizon == config.horizon);
  CHECK(back.attack_probability == config.attack_probability);
  CHECK(back.attack_scale == config.attack_scale);
  CHECK(back.noise_on == config.noise_on);
  CHECK(back.trials == config.trials);
  CHECK(back.rng_seed == config.rng_seed);
  CHECK(back.eigenvalue_law == config.eigenvalue_law);
  CHECK(back.grid_step == config.grid_step);
}
