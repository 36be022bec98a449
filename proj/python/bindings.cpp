#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "robust_sysid/bounds.hpp"
#include "robust_sysid/certifier.hpp"
#include "robust_sysid/estimator.hpp"
#include "robust_sysid/experiment.hpp"
#include "robust_sysid/norms.hpp"
#include "robust_sysid/simulate.hpp"
#include "robust_sysid/types.hpp"

namespace py = pybind11;
using namespace robust_sysid;

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "LTI system identification under sparse adversarial "
              "disturbances: estimator, recovery certificates, error and "
              "concentration bounds.";

  py::class_<Rng>(mod, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("uniform", &Rng::uniform)
      .def("normal", &Rng::normal)
      .def("normal_matrix", &Rng::normal_matrix, py::arg("rows"),
           py::arg("cols"));

  py::class_<SystemMatrices>(mod, "SystemMatrices")
      .def(py::init<Eigen::MatrixXd, Eigen::MatrixXd>(), py::arg("a"),
           py::arg("b"))
      .def(py::init<Eigen::MatrixXd>(), py::arg("a"))
      .def_readonly("a", &SystemMatrices::a)
      .def_readonly("b", &SystemMatrices::b)
      .def_property_readonly("state_dim", &SystemMatrices::state_dim)
      .def_property_readonly("input_dim", &SystemMatrices::input_dim);

  py::class_<IndexSet>(mod, "IndexSet")
      .def(py::init<std::vector<int>, int>(), py::arg("indices"),
           py::arg("horizon"))
      .def_static("empty", &IndexSet::empty, py::arg("horizon"))
      .def_static("full", &IndexSet::full, py::arg("horizon"))
      .def_static("bernoulli", &IndexSet::bernoulli, py::arg("horizon"),
                  py::arg("p"), py::arg("rng"))
      .def_static("random_subset", &IndexSet::random_subset, py::arg("horizon"),
                  py::arg("size"), py::arg("rng"))
      .def("complement", &IndexSet::complement)
      .def("contains", &IndexSet::contains, py::arg("i"))
      .def("__len__", &IndexSet::size)
      .def("__eq__", &IndexSet::operator==)
      .def_property_readonly("horizon", &IndexSet::horizon)
      .def_property_readonly("indices",
                             [](const IndexSet& s) { return s.indices(); });

  py::class_<Trajectory>(mod, "Trajectory")
      .def(py::init<Eigen::MatrixXd, Eigen::MatrixXd,
                    std::optional<Eigen::MatrixXd>>(),
           py::arg("states"), py::arg("inputs"),
           py::arg("disturbances") = std::nullopt)
      .def_readonly("states", &Trajectory::states)
      .def_readonly("inputs", &Trajectory::inputs)
      .def_readonly("disturbances", &Trajectory::disturbances)
      .def_property_readonly("horizon", &Trajectory::horizon)
      .def_property_readonly("state_dim", &Trajectory::state_dim)
      .def_property_readonly("input_dim", &Trajectory::input_dim)
      .def("stacked_data", &Trajectory::stacked_data)
      .def("prefix", &Trajectory::prefix, py::arg("t"));

  py::class_<AttackModel>(mod, "AttackModel")
      .def(py::init<IndexSet, Eigen::MatrixXd, Eigen::MatrixXd, double,
                    double>(),
           py::arg("support"), py::arg("p_mat"), py::arg("q_mat"),
           py::arg("epsilon"), py::arg("sigma"))
      .def_readonly("support", &AttackModel::support)
      .def_readonly("p_mat", &AttackModel::p_mat)
      .def_readonly("q_mat", &AttackModel::q_mat)
      .def_readonly("epsilon", &AttackModel::epsilon)
      .def_readonly("sigma", &AttackModel::sigma);

  py::class_<SolverConfig>(mod, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("penalty", &SolverConfig::penalty)
      .def_readwrite("max_iters", &SolverConfig::max_iters)
      .def_readwrite("tol_abs", &SolverConfig::tol_abs)
      .def_readwrite("tol_rel", &SolverConfig::tol_rel)
      .def_readwrite("adaptive_penalty", &SolverConfig::adaptive_penalty)
      .def_readwrite("ridge", &SolverConfig::ridge)
      .def_readwrite("polish", &SolverConfig::polish)
      .def_readwrite("checkpoint_every", &SolverConfig::checkpoint_every);

  py::class_<SolverDiagnostics>(mod, "SolverDiagnostics")
      .def_readonly("degenerate_data", &SolverDiagnostics::degenerate_data)
      .def_readonly("uniqueness_unverified",
                    &SolverDiagnostics::uniqueness_unverified)
      .def_readonly("polished", &SolverDiagnostics::polished)
      .def_readonly("final_penalty", &SolverDiagnostics::final_penalty)
      .def_readonly("checkpoints", &SolverDiagnostics::checkpoints)
      .def_readonly("scaled_dual", &SolverDiagnostics::scaled_dual);

  py::class_<EstimationResult>(mod, "EstimationResult")
      .def_readonly("sys_hat", &EstimationResult::sys_hat)
      .def_readonly("d_hat", &EstimationResult::d_hat)
      .def_readonly("objective", &EstimationResult::objective)
      .def_readonly("iterations", &EstimationResult::iterations)
      .def_readonly("primal_residual", &EstimationResult::primal_residual)
      .def_readonly("dual_residual", &EstimationResult::dual_residual)
      .def_readonly("converged", &EstimationResult::converged)
      .def_readonly("diagnostics", &EstimationResult::diagnostics);

  py::enum_<XiMode>(mod, "XiMode")
      .value("xi_s", XiMode::xi_s)
      .value("xi_1", XiMode::xi_1);

  py::class_<DecompositionWitness>(mod, "DecompositionWitness")
      .def_readonly("index_set", &DecompositionWitness::index_set)
      .def_readonly("gamma", &DecompositionWitness::gamma)
      .def_readonly("amplitude", &DecompositionWitness::amplitude);

  py::class_<XiResult>(mod, "XiResult")
      .def_readonly("decomposable", &XiResult::decomposable)
      .def_readonly("value", &XiResult::value)
      .def_readonly("witnesses", &XiResult::witnesses)
      .def_readonly("failed_set", &XiResult::failed_set)
      .def_readonly("failed_column", &XiResult::failed_column)
      .def_readonly("failed_residual", &XiResult::failed_residual);

  py::class_<CertificateReport>(mod, "CertificateReport")
      .def_readonly("method", &CertificateReport::method)
      .def_readonly("c_achieved", &CertificateReport::c_achieved)
      .def_readonly("xi_value", &CertificateReport::xi_value)
      .def_readonly("applicable", &CertificateReport::applicable)
      .def_readonly("certified", &CertificateReport::certified)
      .def_readonly("recovery_certified", &CertificateReport::recovery_certified)
      .def_readonly("details", &CertificateReport::details)
      .def_readonly("inapplicable_reasons",
                    &CertificateReport::inapplicable_reasons);

  py::class_<NspOptions>(mod, "NspOptions")
      .def(py::init<>())
      .def_readwrite("run_singular_value", &NspOptions::run_singular_value)
      .def_readwrite("run_xi", &NspOptions::run_xi)
      .def_readwrite("subset_cap", &NspOptions::subset_cap);

  py::class_<ErrorBound>(mod, "ErrorBound")
      .def_readonly("c", &ErrorBound::c)
      .def_readonly("noise_mass", &ErrorBound::noise_mass)
      .def_readonly("sigma_min_data", &ErrorBound::sigma_min_data)
      .def_readonly("bound", &ErrorBound::bound);

  py::class_<EnvelopeConstants>(mod, "EnvelopeConstants")
      .def(py::init<>())
      .def_readwrite("alpha_min", &EnvelopeConstants::alpha_min)
      .def_readwrite("alpha_max", &EnvelopeConstants::alpha_max)
      .def_readwrite("beta_max", &EnvelopeConstants::beta_max)
      .def_readwrite("epsilon", &EnvelopeConstants::epsilon);

  py::class_<GramianEnvelope>(mod, "GramianEnvelope")
      .def_readonly("constants", &GramianEnvelope::constants)
      .def_readonly("gamma0", &GramianEnvelope::gamma0)
      .def_readonly("lower", &GramianEnvelope::lower)
      .def_readonly("upper", &GramianEnvelope::upper)
      .def("trace_upper_sum", &GramianEnvelope::trace_upper_sum,
           py::arg("idx"));

  py::class_<Prop1Quantities>(mod, "Prop1Quantities")
      .def_readonly("c_of_i", &Prop1Quantities::c_of_i)
      .def_readonly("sigma_max_threshold", &Prop1Quantities::sigma_max_threshold)
      .def_readonly("sigma_min_threshold", &Prop1Quantities::sigma_min_threshold)
      .def_readonly("tail_probability", &Prop1Quantities::tail_probability);

  py::class_<McSigmaReport>(mod, "McSigmaReport")
      .def_readonly("empirical_exceed_rate",
                    &McSigmaReport::empirical_exceed_rate)
      .def_readonly("threshold", &McSigmaReport::threshold)
      .def_readonly("eta", &McSigmaReport::eta)
      .def_readonly("trials", &McSigmaReport::trials)
      .def_readonly("binomial_slack", &McSigmaReport::binomial_slack);

  py::class_<ExperimentConfig>(mod, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("n", &ExperimentConfig::n)
      .def_readwrite("m", &ExperimentConfig::m)
      .def_readwrite("horizon", &ExperimentConfig::horizon)
      .def_readwrite("attack_probability", &ExperimentConfig::attack_probability)
      .def_readwrite("attack_scale", &ExperimentConfig::attack_scale)
      .def_readwrite("noise_on", &ExperimentConfig::noise_on)
      .def_readwrite("trials", &ExperimentConfig::trials)
      .def_readwrite("rng_seed", &ExperimentConfig::rng_seed)
      .def_readwrite("eigenvalue_law", &ExperimentConfig::eigenvalue_law)
      .def_readwrite("grid_step", &ExperimentConfig::grid_step)
      .def("validate", &ExperimentConfig::validate);

  py::class_<ExperimentInstance>(mod, "ExperimentInstance")
      .def_readonly("sys", &ExperimentInstance::sys)
      .def_readonly("traj", &ExperimentInstance::traj)
      .def_readonly("support", &ExperimentInstance::support);

  py::class_<ErrorCurveRow>(mod, "ErrorCurveRow")
      .def_readonly("trial", &ErrorCurveRow::trial)
      .def_readonly("t", &ErrorCurveRow::t)
      .def_readonly("method", &ErrorCurveRow::method)
      .def_readonly("err_fro", &ErrorCurveRow::err_fro)
      .def_readonly("objective", &ErrorCurveRow::objective)
      .def_readonly("converged", &ErrorCurveRow::converged)
      .def_readonly("seed", &ErrorCurveRow::seed);

  py::class_<CertificationRow>(mod, "CertificationRow")
      .def_readonly("trial", &CertificationRow::trial)
      .def_readonly("s_size", &CertificationRow::s_size)
      .def_readonly("horizon", &CertificationRow::horizon)
      .def_readonly("method", &CertificationRow::method)
      .def_readonly("certified", &CertificationRow::certified)
      .def_readonly("c_achieved", &CertificationRow::c_achieved)
      .def_readonly("seed", &CertificationRow::seed);

  mod.def("col_group_norm", &col_group_norm, py::arg("d"),
          "Sum of Euclidean column norms, the program objective.");
  mod.def("block_soft_threshold", &block_soft_threshold, py::arg("v"),
          py::arg("tau"));
  mod.def("simulate", &simulate, py::arg("sys"), py::arg("x0"),
          py::arg("inputs"), py::arg("disturbances"));
  mod.def("sample_attack_disturbances", &sample_attack_disturbances,
          py::arg("model"), py::arg("sys"), py::arg("x0"), py::arg("rng_seed"));
  mod.def(
      "solve_lasso",
      [](const Trajectory& traj, const SolverConfig& config) {
        return solve_lasso(traj, config);
      },
      py::arg("traj"), py::arg("config") = SolverConfig{},
      "Sum-of-column-norms estimator of (A, B).");
  mod.def("solve_least_squares", &solve_least_squares, py::arg("traj"));
  mod.def("estimation_error", &estimation_error, py::arg("estimate"),
          py::arg("truth"));
  mod.def("xi_1", &xi_1, py::arg("traj"));
  mod.def("xi_s", &xi_s, py::arg("traj"), py::arg("s"),
          py::arg("subset_cap") = 1000000LL);
  mod.def("certify_via_xi", &certify_via_xi, py::arg("traj"), py::arg("s_set"),
          py::arg("mode"), py::arg("subset_cap") = 1000000LL);
  mod.def("check_singular_value_nsp", &check_singular_value_nsp,
          py::arg("traj"), py::arg("s_set"), py::arg("c"));
  mod.def("nsp_all_methods", &nsp_all_methods, py::arg("traj"),
          py::arg("s_set"), py::arg("options") = NspOptions{});
  mod.def("nsp_verdict", &nsp_verdict, py::arg("traj"), py::arg("s_set"),
          py::arg("options") = NspOptions{},
          "Strongest certificate across the methods.");
  mod.def("theorem2_bound", &theorem2_bound, py::arg("c"), py::arg("traj"),
          py::arg("s_set"));
  mod.def("envelope_constants", &envelope_constants, py::arg("sys"),
          py::arg("model"));
  mod.def("gramian_envelope", &gramian_envelope, py::arg("constants"),
          py::arg("gamma0"), py::arg("horizon"));
  mod.def("prop1_quantities", &prop1_quantities, py::arg("model"),
          py::arg("sys"), py::arg("gamma0"), py::arg("idx"), py::arg("eta"),
          py::arg("k") = 1);
  mod.def("monte_carlo_sigma_check", &monte_carlo_sigma_check, py::arg("model"),
          py::arg("sys"), py::arg("idx"), py::arg("eta"), py::arg("trials"),
          py::arg("rng_seed"));
  mod.def("generate_random_system", &generate_random_system, py::arg("n"),
          py::arg("rng_seed"));
  mod.def("make_instance", &make_instance, py::arg("config"), py::arg("trial"));
  mod.def("run_error_curve", &run_error_curve, py::arg("config"));
  mod.def("run_certification_sweep", &run_certification_sweep,
          py::arg("config"), py::arg("s_sizes"),
          py::arg("options") = NspOptions{true, false, 1000000});

  mod.attr("BMSB_SMALL_BALL") = kBmsbSmallBall;
  mod.attr("__version__") = "0.1.0";
}
