#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "robust_sysid/bounds.hpp"
#include "robust_sysid/certifier.hpp"
#include "robust_sysid/estimator.hpp"
#include "robust_sysid/experiment.hpp"
#include "robust_sysid/types.hpp"

namespace robust_sysid {

// File-system and parse failures (CSV/config), with the line number in the
// message where one exists. Distinct from argument errors so the CLI can map
// exit codes faithfully.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// ---- trajectory CSV ----
// Header `t,x_0..x_{n-1},u_0..u_{m-1},d_0..d_{n-1}` (u and d columns appear
// only when m > 0 / disturbances are stored), one row per step t = 0..T;
// inputs and disturbances are blank at t = T. Values print as %.17g, so a
// write-read round trip reproduces every double bit for bit.
std::string trajectory_to_csv(const Trajectory& traj);
Trajectory trajectory_from_csv(const std::string& text);
void write_trajectory_csv(const Trajectory& traj, const std::string& path);
Trajectory read_trajectory_csv(const std::string& path);

// ---- result JSON ----
// a_hat/b_hat/d_hat as row-major nested arrays.
std::string estimation_to_json(const EstimationResult& result);
// method, c_achieved, xi_value, recovery_certified, details,
// inapplicable_reasons; absent optionals serialize as null.
std::string certificate_to_json(const CertificateReport& report);
std::string error_bound_to_json(const ErrorBound& bound);
std::string mc_sigma_to_json(const McSigmaReport& report);

// ---- experiment CSVs ----
// Header `trial,t,method,err_fro,objective,converged,seed`.
std::string error_curve_to_csv(const std::vector<ErrorCurveRow>& rows);
std::vector<ErrorCurveRow> error_curve_from_csv(const std::string& text);

// Header `trial,s_size,horizon,method,certified,c_achieved,seed`.
std::string certification_to_csv(const std::vector<CertificationRow>& rows);
std::vector<CertificationRow> certification_from_csv(const std::string& text);

// ---- parameter sweep CSV ----
// Header `param,value,metric,estimate,slack`.
struct SweepRow {
  std::string param;
  double value = 0.0;
  std::string metric;
  double estimate = 0.0;
  double slack = 0.0;
};
std::string sweep_to_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> sweep_from_csv(const std::string& text);

// ---- flat key=value config ----
// One `key=value` per line; blank lines and lines starting with '#' are
// skipped; duplicate keys are rejected. A `schema_version` key equal to "1"
// is required.
std::map<std::string, std::string> parse_flat_config(const std::string& text);
ExperimentConfig experiment_config_from_map(
    const std::map<std::string, std::string>& values);
std::string experiment_config_to_text(const ExperimentConfig& config);

}  // namespace robust_sysid
