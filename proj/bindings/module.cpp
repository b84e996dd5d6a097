#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mmiq/asymptotics.hpp"
#include "mmiq/chain.hpp"
#include "mmiq/model1.hpp"
#include "mmiq/model2.hpp"
#include "mmiq/simulator.hpp"

namespace py = pybind11;
using namespace mmiq;

PYBIND11_MODULE(_mmiq, m) {
    m.doc() = "Markov-modulated infinite-server queues: exact moments, scaled limits, simulation";

    py::register_exception<SingularSystem>(m, "SingularSystem", PyExc_ArithmeticError);
    py::register_exception<QuadratureFailure>(m, "QuadratureFailure", PyExc_ArithmeticError);
    py::register_exception<OdeToleranceFailure>(m, "OdeToleranceFailure", PyExc_ArithmeticError);
    py::register_exception<DimensionMismatch>(m, "DimensionMismatch", PyExc_ValueError);
    py::register_exception<NotPsd>(m, "NotPsd", PyExc_ArithmeticError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<InsufficientReplications>(m, "InsufficientReplications",
                                                     PyExc_ValueError);
    py::register_exception<Error>(m, "MmiqError", PyExc_RuntimeError);

    py::class_<Generator>(m, "Generator")
        .def(py::init<Matrix>(), py::arg("rates"))
        .def_property_readonly("dim", &Generator::dim)
        .def_property_readonly("rates", &Generator::rates);

    py::class_<ChainAnalysis>(m, "ChainAnalysis")
        .def_static("analyze", &ChainAnalysis::analyze, py::arg("generator"))
        .def_readonly("pi", &ChainAnalysis::pi)
        .def_readonly("Pi", &ChainAnalysis::Pi)
        .def_readonly("D", &ChainAnalysis::D)
        .def_readonly("F", &ChainAnalysis::F)
        .def_readonly("gap", &ChainAnalysis::gap);

    py::class_<ScalingParams>(m, "ScalingParams")
        .def(py::init<double, double>(), py::arg("N") = 1.0, py::arg("alpha") = 1.0)
        .def_readwrite("N", &ScalingParams::n)
        .def_readwrite("alpha", &ScalingParams::alpha)
        .def_property_readonly("beta", &ScalingParams::beta)
        .def_property_readonly("growth", &ScalingParams::growth);

    py::class_<QueueSpec>(m, "QueueSpec")
        .def(py::init<Generator, Vector, Vector>(), py::arg("generator"), py::arg("lam"),
             py::arg("mu"))
        .def_property_readonly("dim", &QueueSpec::dim)
        .def_readonly("lam", &QueueSpec::lambda)
        .def_readonly("mu", &QueueSpec::mu)
        .def("scaled", &QueueSpec::scaled, py::arg("scaling"));

    m.def("stationary_distribution", &stationary_distribution);
    m.def("transition_matrix", &transition_matrix, py::arg("generator"), py::arg("t"));
    m.def("deviation_matrix", &deviation_matrix);
    m.def("weighted_deviation_matrix", &weighted_deviation_matrix, py::arg("generator"),
          py::arg("gamma"));
    m.def("spectral_gap", &spectral_gap);
    m.def("kron_sum", &kron_sum);
    m.def(
        "vec", [](const Matrix& a) { return vec(a); }, py::arg("a"));

    py::class_<MeanTrajectory>(m, "MeanTrajectory")
        .def_readonly("t_grid", &MeanTrajectory::t_grid)
        .def_readonly("m", &MeanTrajectory::m)
        .def_readonly("total", &MeanTrajectory::total);
    m.def(
        "mean_trajectory",
        [](const QueueSpec& s, const ScalingParams& sc, const std::vector<double>& grid) {
            return mean_trajectory(s, sc, grid);
        },
        py::arg("spec"), py::arg("scaling"), py::arg("t_grid"));

    py::class_<JointMomentState>(m, "JointMomentState")
        .def_readonly("u", &JointMomentState::u)
        .def_readonly("t_grid", &JointMomentState::t_grid)
        .def_readonly("e", &JointMomentState::e)
        .def_readonly("g", &JointMomentState::g)
        .def_readonly("c", &JointMomentState::c)
        .def_readonly("k", &JointMomentState::k);
    m.def(
        "joint_moment_odes",
        [](const QueueSpec& s, double u, const std::vector<double>& grid) {
            return joint_moment_odes(s, u, grid);
        },
        py::arg("spec"), py::arg("u"), py::arg("t_grid"));

    m.def(
        "covariance",
        [](const QueueSpec& s, double t, double u) { return covariance(s, t, u); },
        py::arg("spec"), py::arg("t"), py::arg("u"));
    m.def("stationary_mean", &stationary_mean);
    m.def("stationary_covariance", &stationary_covariance, py::arg("spec"), py::arg("u"));
    m.def("refined_mean", &refined_mean, py::arg("spec"), py::arg("scaling"), py::arg("t"));

    m.def("mean_m2", &mean_m2, py::arg("spec"), py::arg("t"));
    m.def("script_K", &script_K, py::arg("spec"), py::arg("t"), py::arg("u"));
    m.def("script_L", &script_L, py::arg("spec"), py::arg("t"), py::arg("u"));
    m.def("covariance_m2", &covariance_m2, py::arg("spec"), py::arg("t"), py::arg("u"));
    m.def("stationary_covariance_m2", &stationary_covariance_m2, py::arg("spec"), py::arg("u"));
    m.def("stationary_variance_m2", &stationary_variance_m2);

    m.def("rho1", &rho1);
    m.def("rho1_t", &rho1_t, py::arg("spec"), py::arg("t"));
    m.def("varsigma1", &varsigma1, py::arg("spec"), py::arg("t"));
    m.def("v1", &v1, py::arg("spec"), py::arg("alpha"), py::arg("t"), py::arg("u"));
    m.def("rho2_i", &rho2_i, py::arg("spec"), py::arg("i"), py::arg("t"));
    m.def("varsigma2_i", &varsigma2_i, py::arg("spec"), py::arg("i"), py::arg("t"));
    m.def("v2", &v2, py::arg("spec"), py::arg("alpha"), py::arg("t"), py::arg("u"));
    m.def("diffusion_W", &diffusion_W, py::arg("spec"), py::arg("t"));
    m.def("diffusion_W_rate", &diffusion_W_rate, py::arg("spec"), py::arg("t"));
    m.def("diffusion_V_matrix", &diffusion_V_matrix);
    m.def("diffusion_V_factor", &diffusion_V_factor);
    m.def("variance_clock", &variance_clock, py::arg("spec"), py::arg("t"));
    m.def("variance_clock_rate", &variance_clock_rate, py::arg("spec"), py::arg("t"));
    m.def("poisson_clock_type", &poisson_clock_type, py::arg("spec"), py::arg("i"), py::arg("t"));
    m.def("poisson_clock_rate_type", &poisson_clock_rate_type, py::arg("spec"), py::arg("i"),
          py::arg("t"));
    py::enum_<OuBranch>(m, "OuBranch").value("slow", OuBranch::slow).value("fast", OuBranch::fast);
    m.def("ou_cov_m2", &ou_cov_m2, py::arg("spec"), py::arg("i"), py::arg("j"), py::arg("t"),
          py::arg("branch"));

    py::enum_<Model>(m, "Model").value("I", Model::I).value("II", Model::II);

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init([](const QueueSpec& spec, const ScalingParams& scaling, double horizon,
                         const std::vector<double>& sample_times, double lag,
                         std::int64_t replications, std::uint64_t seed, int threads) {
                 SimConfig cfg{spec, scaling, horizon, sample_times, lag, replications, seed,
                               threads};
                 cfg.validate();
                 return cfg;
             }),
             py::arg("spec"), py::arg("scaling"), py::arg("horizon"), py::arg("sample_times"),
             py::arg("lag") = 0.0, py::arg("replications") = 1000, py::arg("seed") = 0,
             py::arg("threads") = 0)
        .def_readonly("horizon", &SimConfig::horizon)
        .def_readonly("sample_times", &SimConfig::sample_times)
        .def_readonly("lag", &SimConfig::lag)
        .def_readonly("replications", &SimConfig::replications)
        .def_readonly("seed", &SimConfig::seed);

    py::class_<MomentEstimate>(m, "MomentEstimate")
        .def_readonly("t", &MomentEstimate::t)
        .def_readonly("lag", &MomentEstimate::lag)
        .def_readonly("mean", &MomentEstimate::mean)
        .def_readonly("se_mean", &MomentEstimate::se_mean)
        .def_readonly("var", &MomentEstimate::var)
        .def_readonly("se_var", &MomentEstimate::se_var)
        .def_readonly("cov", &MomentEstimate::cov)
        .def_readonly("se_cov", &MomentEstimate::se_cov);

    py::class_<SimBatch>(m, "SimBatch")
        .def_readonly("times", &SimBatch::times)
        .def_readonly("lag", &SimBatch::lag)
        .def_property_readonly("counts",
                               [](const SimBatch& b) { return Eigen::MatrixXd(b.counts.cast<double>()); })
        .def_property_readonly(
            "lag_counts",
            [](const SimBatch& b) { return Eigen::MatrixXd(b.lag_counts.cast<double>()); })
        .def_property_readonly(
            "type_counts",
            [](const SimBatch& b) { return Eigen::MatrixXd(b.type_counts.cast<double>()); })
        .def_readonly("normalized", &SimBatch::normalized)
        .def_readonly("moments", &SimBatch::moments)
        .def_readonly("occupation", &SimBatch::occupation)
        .def_readonly("occupation_se", &SimBatch::occupation_se);

    m.def("simulate_model1", &simulate_model1, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def("simulate_model2", &simulate_model2, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def("sample_poisson_mixture", &sample_poisson_mixture, py::arg("config"), py::arg("model"),
          py::arg("max_events") = 0, py::call_guard<py::gil_scoped_release>());

    py::class_<FcltRow>(m, "FcltRow")
        .def_readonly("t", &FcltRow::t)
        .def_readonly("mean", &FcltRow::mean)
        .def_readonly("se_mean", &FcltRow::se_mean)
        .def_readonly("var", &FcltRow::var)
        .def_readonly("target_var", &FcltRow::target_var)
        .def_readonly("skew", &FcltRow::skew)
        .def_readonly("exkurt", &FcltRow::exkurt)
        .def_readonly("cov", &FcltRow::cov)
        .def_readonly("target_cov", &FcltRow::target_cov)
        .def_readonly("var_ok", &FcltRow::var_ok)
        .def_readonly("skew_ok", &FcltRow::skew_ok)
        .def_readonly("kurt_ok", &FcltRow::kurt_ok)
        .def_readonly("cov_ok", &FcltRow::cov_ok);
    py::class_<FcltReport>(m, "FcltReport")
        .def_readonly("rows", &FcltReport::rows)
        .def_readonly("pass_", &FcltReport::pass);
    py::class_<FcltTolerances>(m, "FcltTolerances")
        .def(py::init<>())
        .def_readwrite("var_rtol", &FcltTolerances::var_rtol)
        .def_readwrite("skew_tol", &FcltTolerances::skew_tol)
        .def_readwrite("kurt_tol", &FcltTolerances::kurt_tol)
        .def_readwrite("cov_rtol", &FcltTolerances::cov_rtol);
    m.def("fclt_diagnostics", &fclt_diagnostics, py::arg("batch"), py::arg("config"),
          py::arg("model"), py::arg("tolerances") = FcltTolerances{});

    py::class_<SweepRow>(m, "SweepRow")
        .def_readonly("alpha", &SweepRow::alpha)
        .def_readonly("N", &SweepRow::n)
        .def_readonly("var_scaled", &SweepRow::var_scaled)
        .def_readonly("se_scaled", &SweepRow::se_scaled)
        .def_readonly("limit", &SweepRow::limit)
        .def_readonly("over_budget", &SweepRow::over_budget)
        .def_readonly("projected_events", &SweepRow::projected_events);
    py::class_<SweepTable>(m, "SweepTable")
        .def_readonly("t_star", &SweepTable::t_star)
        .def_readonly("rows", &SweepTable::rows)
        .def_readonly("sup_ordering_ok", &SweepTable::sup_ordering_ok)
        .def_readonly("flagged_alphas", &SweepTable::flagged_alphas);
    m.def(
        "variance_scaling_sweep",
        [](const QueueSpec& spec, const std::vector<double>& alphas, const std::vector<double>& ns,
           double t_star, std::int64_t replications, Model model, std::uint64_t seed, int threads,
           std::uint64_t max_events_per_arm) {
            return variance_scaling_sweep(spec, alphas, ns, t_star, replications, model, seed,
                                          threads, max_events_per_arm);
        },
        py::arg("spec"), py::arg("alphas"), py::arg("Ns"), py::arg("t_star"),
        py::arg("replications"), py::arg("model"), py::arg("seed"), py::arg("threads") = 0,
        py::arg("max_events_per_arm") = 0, py::call_guard<py::gil_scoped_release>());
    m.def("default_t_star", &default_t_star);

    m.attr("__version__") = "0.1.0";
}
