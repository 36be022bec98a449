#include "robust_sysid/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace robust_sysid {

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string current;
  for (char ch : text) {
    if (ch == '\n') {
      if (!current.empty() && current.back() == '\r') current.pop_back();
      lines.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  if (!current.empty()) {
    if (current.back() == '\r') current.pop_back();
    lines.push_back(std::move(current));
  }
  return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      fields.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return fields;
}

[[noreturn]] void fail_line(int line_no, const std::string& what) {
  throw IoError("line " + std::to_string(line_no) + ": " + what);
}

double parse_double_field(const std::string& s, int line_no, const char* what) {
  if (s.empty()) fail_line(line_no, std::string("empty ") + what + " field");
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + s.size())
    fail_line(line_no, std::string("cannot parse ") + what + " '" + s + "'");
  return v;
}

long long parse_int_field(const std::string& s, int line_no, const char* what) {
  if (s.empty()) fail_line(line_no, std::string("empty ") + what + " field");
  const char* begin = s.c_str();
  char* end = nullptr;
  const long long v = std::strtoll(begin, &end, 10);
  if (end != begin + s.size())
    fail_line(line_no, std::string("cannot parse ") + what + " '" + s + "'");
  return v;
}

std::uint64_t parse_u64_field(const std::string& s, int line_no,
                              const char* what) {
  if (s.empty() || s[0] == '-')
    fail_line(line_no, std::string("cannot parse ") + what + " '" + s + "'");
  const char* begin = s.c_str();
  char* end = nullptr;
  const unsigned long long v = std::strtoull(begin, &end, 10);
  if (end != begin + s.size())
    fail_line(line_no, std::string("cannot parse ") + what + " '" + s + "'");
  return static_cast<std::uint64_t>(v);
}

bool parse_bool01(const std::string& s, int line_no, const char* what) {
  if (s == "1") return true;
  if (s == "0") return false;
  fail_line(line_no, std::string(what) + " must be 0 or 1, got '" + s + "'");
}

nlohmann::json matrix_rows(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("read failure on '" + path + "'");
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("write failure on '" + path + "'");
}

std::string trajectory_to_csv(const Trajectory& traj) {
  const int n = traj.state_dim();
  const int m = traj.input_dim();
  const int t_end = traj.horizon();
  const bool has_d = traj.disturbances.has_value();

  std::ostringstream out;
  out << "t";
  for (int j = 0; j < n; ++j) out << ",x_" << j;
  for (int j = 0; j < m; ++j) out << ",u_" << j;
  if (has_d)
    for (int j = 0; j < n; ++j) out << ",d_" << j;
  out << "\n";

  for (int t = 0; t <= t_end; ++t) {
    out << t;
    for (int j = 0; j < n; ++j) out << "," << g17(traj.states(j, t));
    for (int j = 0; j < m; ++j) {
      out << ",";
      if (t < t_end) out << g17(traj.inputs(j, t));
    }
    if (has_d) {
      for (int j = 0; j < n; ++j) {
        out << ",";
        if (t < t_end) out << g17((*traj.disturbances)(j, t));
      }
    }
    out << "\n";
  }
  return out.str();
}

Trajectory trajectory_from_csv(const std::string& text) {
  const std::vector<std::string> lines = split_lines(text);
  if (lines.empty()) throw IoError("line 1: missing trajectory header");
  const std::vector<std::string> header = split_fields(lines[0]);
  if (header.empty() || header[0] != "t")
    fail_line(1, "trajectory header must start with 't'");

  // Header layout: x_0..x_{n-1}, then optional u_0..u_{m-1}, d_0..d_{n-1}.
  std::size_t pos = 1;
  int n = 0;
  while (pos < header.size() && header[pos] == "x_" + std::to_string(n)) {
    ++n;
    ++pos;
  }
  if (n == 0) fail_line(1, "trajectory header has no x_ columns");
  int m = 0;
  while (pos < header.size() && header[pos] == "u_" + std::to_string(m)) {
    ++m;
    ++pos;
  }
  int d_count = 0;
  while (pos < header.size() && header[pos] == "d_" + std::to_string(d_count)) {
    ++d_count;
    ++pos;
  }
  if (pos != header.size())
    fail_line(1, "unrecognized trajectory column '" + header[pos] + "'");
  if (d_count != 0 && d_count != n)
    fail_line(1, "expected " + std::to_string(n) + " d_ columns, found " +
                     std::to_string(d_count));
  const bool has_d = d_count == n;

  const int rows = static_cast<int>(lines.size()) - 1;
  if (rows < 2) throw IoError("trajectory needs at least steps t=0 and t=1");
  const int t_end = rows - 1;

  Eigen::MatrixXd states(n, t_end + 1);
  Eigen::MatrixXd inputs(m, t_end);
  Eigen::MatrixXd dist(has_d ? n : 0, has_d ? t_end : 0);

  for (int r = 0; r < rows; ++r) {
    const int line_no = r + 2;
    const std::vector<std::string> fields = split_fields(lines[r + 1]);
    if (fields.size() != header.size())
      fail_line(line_no, "expected " + std::to_string(header.size()) +
                             " fields, found " +
                             std::to_string(fields.size()));
    if (parse_int_field(fields[0], line_no, "t") != r)
      fail_line(line_no, "time index out of order: expected " +
                             std::to_string(r) + ", got '" + fields[0] + "'");
    std::size_t f = 1;
    for (int j = 0; j < n; ++j)
      states(j, r) = parse_double_field(fields[f++], line_no, "state");
    for (int j = 0; j < m; ++j, ++f) {
      if (r < t_end) {
        inputs(j, r) = parse_double_field(fields[f], line_no, "input");
      } else if (!fields[f].empty()) {
        fail_line(line_no, "input fields must be blank at the final step");
      }
    }
    if (has_d) {
      for (int j = 0; j < n; ++j, ++f) {
        if (r < t_end) {
          dist(j, r) = parse_double_field(fields[f], line_no, "disturbance");
        } else if (!fields[f].empty()) {
          fail_line(line_no,
                    "disturbance fields must be blank at the final step");
        }
      }
    }
  }

  return Trajectory(std::move(states), std::move(inputs),
                    has_d ? std::optional<Eigen::MatrixXd>(std::move(dist))
                          : std::nullopt);
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  write_text_file(path, trajectory_to_csv(traj));
}

Trajectory read_trajectory_csv(const std::string& path) {
  return trajectory_from_csv(read_text_file(path));
}

std::string estimation_to_json(const EstimationResult& result) {
  nlohmann::json j;
  j["a_hat"] = matrix_rows(result.sys_hat.a);
  j["b_hat"] = matrix_rows(result.sys_hat.b);
  j["d_hat"] = matrix_rows(result.d_hat);
  j["objective"] = result.objective;
  j["iterations"] = result.iterations;
  j["converged"] = result.converged;
  j["primal_residual"] = result.primal_residual;
  j["dual_residual"] = result.dual_residual;
  return j.dump(2) + "\n";
}

std::string certificate_to_json(const CertificateReport& report) {
  nlohmann::json j;
  j["method"] = report.method;
  j["c_achieved"] = report.c_achieved ? nlohmann::json(*report.c_achieved)
                                      : nlohmann::json(nullptr);
  j["xi_value"] = report.xi_value ? nlohmann::json(*report.xi_value)
                                  : nlohmann::json(nullptr);
  j["recovery_certified"] = report.recovery_certified;
  nlohmann::json details(report.details);
  details["certified"] = report.certified ? 1.0 : 0.0;
  details["applicable"] = report.applicable ? 1.0 : 0.0;
  j["details"] = std::move(details);
  j["inapplicable_reasons"] = report.inapplicable_reasons;
  return j.dump(2) + "\n";
}

std::string error_bound_to_json(const ErrorBound& bound) {
  nlohmann::json j;
  j["c"] = bound.c;
  j["noise_mass"] = bound.noise_mass;
  j["sigma_min_data"] = bound.sigma_min_data;
  j["bound"] = bound.bound;
  return j.dump(2) + "\n";
}

std::string mc_sigma_to_json(const McSigmaReport& report) {
  nlohmann::json j;
  j["empirical_exceed_rate"] = report.empirical_exceed_rate;
  j["threshold"] = report.threshold;
  j["eta"] = report.eta;
  j["trials"] = report.trials;
  j["binomial_slack"] = report.binomial_slack;
  return j.dump(2) + "\n";
}

namespace {
constexpr const char* kErrorCurveHeader =
    "trial,t,method,err_fro,objective,converged,seed";
constexpr const char* kCertificationHeader =
    "trial,s_size,horizon,method,certified,c_achieved,seed";
constexpr const char* kSweepHeader = "param,value,metric,estimate,slack";

void check_method_token(const std::string& s, int line_no) {
  if (s.empty()) fail_line(line_no, "empty method field");
  if (s.find(',') != std::string::npos)
    fail_line(line_no, "method may not contain commas");
}
}  // namespace

std::string error_curve_to_csv(const std::vector<ErrorCurveRow>& rows) {
  std::ostringstream out;
  out << kErrorCurveHeader << "\n";
  for (const ErrorCurveRow& row : rows) {
    out << row.trial << "," << row.t << "," << row.method << ","
        << g17(row.err_fro) << "," << g17(row.objective) << ","
        << (row.converged ? 1 : 0) << "," << row.seed << "\n";
  }
  return out.str();
}

std::vector<ErrorCurveRow> error_curve_from_csv(const std::string& text) {
  const std::vector<std::string> lines = split_lines(text);
  if (lines.empty() || lines[0] != kErrorCurveHeader)
    fail_line(1, std::string("expected header '") + kErrorCurveHeader + "'");
  if (lines.size() < 2) throw IoError("no data rows");
  std::vector<ErrorCurveRow> rows;
  rows.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const int line_no = static_cast<int>(i) + 1;
    const std::vector<std::string> f = split_fields(lines[i]);
    if (f.size() != 7)
      fail_line(line_no,
                "expected 7 fields, found " + std::to_string(f.size()));
    ErrorCurveRow row;
    row.trial = static_cast<int>(parse_int_field(f[0], line_no, "trial"));
    row.t = static_cast<int>(parse_int_field(f[1], line_no, "t"));
    check_method_token(f[2], line_no);
    row.method = f[2];
    row.err_fro = parse_double_field(f[3], line_no, "err_fro");
    row.objective = parse_double_field(f[4], line_no, "objective");
    row.converged = parse_bool01(f[5], line_no, "converged");
    row.seed = parse_u64_field(f[6], line_no, "seed");
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string certification_to_csv(const std::vector<CertificationRow>& rows) {
  std::ostringstream out;
  out << kCertificationHeader << "\n";
  for (const CertificationRow& row : rows) {
    out << row.trial << "," << row.s_size << "," << row.horizon << ","
        << row.method << "," << (row.certified ? 1 : 0) << ","
        << g17(row.c_achieved) << "," << row.seed << "\n";
  }
  return out.str();
}

std::vector<CertificationRow> certification_from_csv(const std::string& text) {
  const std::vector<std::string> lines = split_lines(text);
  if (lines.empty() || lines[0] != kCertificationHeader)
    fail_line(1, std::string("expected header '") + kCertificationHeader + "'");
  if (lines.size() < 2) throw IoError("no data rows");
  std::vector<CertificationRow> rows;
  rows.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const int line_no = static_cast<int>(i) + 1;
    const std::vector<std::string> f = split_fields(lines[i]);
    if (f.size() != 7)
      fail_line(line_no,
                "expected 7 fields, found " + std::to_string(f.size()));
    CertificationRow row;
    row.trial = static_cast<int>(parse_int_field(f[0], line_no, "trial"));
    row.s_size = static_cast<int>(parse_int_field(f[1], line_no, "s_size"));
    row.horizon = static_cast<int>(parse_int_field(f[2], line_no, "horizon"));
    check_method_token(f[3], line_no);
    row.method = f[3];
    row.certified = parse_bool01(f[4], line_no, "certified");
    row.c_achieved = parse_double_field(f[5], line_no, "c_achieved");
    row.seed = parse_u64_field(f[6], line_no, "seed");
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << kSweepHeader << "\n";
  for (const SweepRow& row : rows) {
    out << row.param << "," << g17(row.value) << "," << row.metric << ","
        << g17(row.estimate) << "," << g17(row.slack) << "\n";
  }
  return out.str();
}

std::vector<SweepRow> sweep_from_csv(const std::string& text) {
  const std::vector<std::string> lines = split_lines(text);
  if (lines.empty() || lines[0] != kSweepHeader)
    fail_line(1, std::string("expected header '") + kSweepHeader + "'");
  if (lines.size() < 2) throw IoError("no data rows");
  std::vector<SweepRow> rows;
  rows.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const int line_no = static_cast<int>(i) + 1;
    const std::vector<std::string> f = split_fields(lines[i]);
    if (f.size() != 5)
      fail_line(line_no,
                "expected 5 fields, found " + std::to_string(f.size()));
    SweepRow row;
    check_method_token(f[0], line_no);
    row.param = f[0];
    row.value = parse_double_field(f[1], line_no, "value");
    check_method_token(f[2], line_no);
    row.metric = f[2];
    row.estimate = parse_double_field(f[3], line_no, "estimate");
    row.slack = parse_double_field(f[4], line_no, "slack");
    rows.push_back(std::move(row));
  }
  return rows;
}

std::map<std::string, std::string> parse_flat_config(const std::string& text) {
  std::map<std::string, std::string> values;
  const std::vector<std::string> lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const int line_no = static_cast<int>(i) + 1;
    const std::string line = trim(lines[i]);
    if (line.empty() || line[0] == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key=value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": empty key");
    if (!values.emplace(key, value).second)
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": duplicate key '" + key + "'");
  }
  return values;
}

namespace {

int config_int(const std::string& value, const std::string& key) {
  const char* begin = value.c_str();
  char* end = nullptr;
  const long v = std::strtol(begin, &end, 10);
  if (value.empty() || end != begin + value.size())
    throw std::invalid_argument("config key '" + key +
                                "': cannot parse integer '" + value + "'");
  return static_cast<int>(v);
}

double config_double(const std::string& value, const std::string& key) {
  const char* begin = value.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (value.empty() || end != begin + value.size())
    throw std::invalid_argument("config key '" + key +
                                "': cannot parse number '" + value + "'");
  return v;
}

bool config_bool(const std::string& value, const std::string& key) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::invalid_argument("config key '" + key +
                              "': expected true/false, got '" + value + "'");
}

std::uint64_t config_u64(const std::string& value, const std::string& key) {
  const char* begin = value.c_str();
  char* end = nullptr;
  const unsigned long long v = std::strtoull(begin, &end, 10);
  if (value.empty() || value[0] == '-' || end != begin + value.size())
    throw std::invalid_argument("config key '" + key +
                                "': cannot parse seed '" + value + "'");
  return static_cast<std::uint64_t>(v);
}

}  // namespace

ExperimentConfig experiment_config_from_map(
    const std::map<std::string, std::string>& values) {
  const auto version = values.find("schema_version");
  if (version == values.end())
    throw std::invalid_argument("config: missing schema_version key");
  if (version->second != "1")
    throw std::invalid_argument("config: unsupported schema_version '" +
                                version->second + "' (supported: 1)");

  ExperimentConfig config;
  for (const auto& [key, value] : values) {
    if (key == "schema_version") continue;
    if (key == "n")
      config.n = config_int(value, key);
    else if (key == "m")
      config.m = config_int(value, key);
    else if (key == "horizon")
      config.horizon = config_int(value, key);
    else if (key == "attack_probability")
      config.attack_probability = config_double(value, key);
    else if (key == "attack_scale")
      config.attack_scale = config_double(value, key);
    else if (key == "noise_on")
      config.noise_on = config_bool(value, key);
    else if (key == "trials")
      config.trials = config_int(value, key);
    else if (key == "rng_seed")
      config.rng_seed = config_u64(value, key);
    else if (key == "eigenvalue_law")
      config.eigenvalue_law = value;
    else if (key == "grid_step")
      config.grid_step = config_int(value, key);
    else
      throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  config.validate();
  return config;
}

std::string experiment_config_to_text(const ExperimentConfig& config) {
  std::ostringstream out;
  out << "schema_version=1\n";
  out << "attack_probability=" << g17(config.attack_probability) << "\n";
  out << "attack_scale=" << g17(config.attack_scale) << "\n";
  out << "eigenvalue_law=" << config.eigenvalue_law << "\n";
  out << "grid_step=" << config.grid_step << "\n";
  out << "horizon=" << config.horizon << "\n";
  out << "m=" << config.m << "\n";
  out << "n=" << config.n << "\n";
  out << "noise_on=" << (config.noise_on ? "true" : "false") << "\n";
  out << "rng_seed=" << config.rng_seed << "\n";
  out << "trials=" << config.trials << "\n";
  return out.str();
}

}  // namespace robust_sysid
