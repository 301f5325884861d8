#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "slucb/accounting.hpp"
#include "slucb/engine.hpp"
#include "slucb/experiment.hpp"
#include "slucb/protocol_amp.hpp"
#include "slucb/protocol_vec.hpp"
#include "slucb/tree.hpp"

namespace py = pybind11;
using namespace slucb;

namespace {

ExperimentConfig single_cell_config(const std::string& algo, double epsilon,
                                    double delta, std::int64_t horizon,
                                    int batch, int baseline_batch, int dim,
                                    int num_arms, double alpha, bool returning,
                                    int m0, std::optional<double> vec_constant) {
  ExperimentConfig cfg;
  cfg.algos = {algo};
  cfg.epsilons = {epsilon};
  cfg.delta = delta;
  cfg.horizon = horizon;
  cfg.batch = batch;
  cfg.baseline_batch = baseline_batch;
  cfg.dim = dim;
  cfg.num_arms = num_arms;
  cfg.alpha = alpha;
  cfg.returning_users = returning;
  cfg.m0 = m0;
  cfg.vec_constant_override = vec_constant;
  return cfg;
}

std::vector<double> simulate(const std::string& algo, double epsilon,
                             double delta, std::int64_t horizon, int batch,
                             int baseline_batch, int dim, int num_arms,
                             double alpha, std::uint64_t seed, bool returning,
                             int m0, std::optional<double> vec_constant,
                             double tree_constant, double lambda_scale) {
  ExperimentConfig cfg =
      single_cell_config(algo, epsilon, delta, horizon, batch, baseline_batch,
                         dim, num_arms, alpha, returning, m0, vec_constant);
  cfg.tree_constant = tree_constant;
  cfg.lambda_scale = lambda_scale;
  ProtocolSetup setup = make_protocol(cfg, algo, epsilon);
  EngineConfig engine;
  engine.horizon = horizon;
  engine.batch = setup.batch;
  engine.ridge.alpha = alpha;
  engine.ridge.lambda =
      lambda_scale * select_lambda(setup.protocol->sigma_total(horizon), dim,
                                   horizon, setup.batch, alpha);
  const BanditInstance instance = generate_instance(dim, num_arms, seed);
  return run_episode(instance, *setup.protocol, engine, seed).trace.cumulative;
}

std::string budget_text_py(const std::string& algo, double epsilon,
                           double delta, std::int64_t horizon, int batch,
                           bool returning, int m0,
                           std::optional<double> vec_constant) {
  ExperimentConfig cfg = single_cell_config(algo, epsilon, delta, horizon,
                                            batch, 1, 5, 100, 0.1, returning,
                                            m0, vec_constant);
  return budget_text(cfg);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Shuffle-private batched LinUCB: calibrations, accounting and "
            "simulation";

  py::class_<amp::AmpNoiseSpec>(m, "AmpNoiseSpec")
      .def_readonly("sigma1", &amp::AmpNoiseSpec::sigma1)
      .def_readonly("sigma2", &amp::AmpNoiseSpec::sigma2)
      .def_readonly("epsilon", &amp::AmpNoiseSpec::epsilon)
      .def_readonly("delta", &amp::AmpNoiseSpec::delta)
      .def_readonly("batch", &amp::AmpNoiseSpec::batch)
      .def_readonly("epsilon_in_range", &amp::AmpNoiseSpec::epsilon_in_range);

  py::class_<vec::VecParams>(m, "VecParams")
      .def_readonly("g", &vec::VecParams::g)
      .def_readonly("b", &vec::VecParams::b)
      .def_readonly("p", &vec::VecParams::p)
      .def_readonly("batch", &vec::VecParams::batch)
      .def_readonly("constant", &vec::VecParams::constant);

  py::class_<AmplifiedBudget>(m, "AmplifiedBudget")
      .def_readonly("epsilon", &AmplifiedBudget::epsilon)
      .def_readonly("delta", &AmplifiedBudget::delta)
      .def_readonly("applicable", &AmplifiedBudget::applicable);

  m.def("calibrate_amp", &amp::calibrate_amp, py::arg("epsilon"),
        py::arg("delta"), py::arg("batch"));
  m.def("calibrate_amp_returning", &amp::calibrate_amp_returning,
        py::arg("epsilon"), py::arg("delta"), py::arg("batch"),
        py::arg("horizon"));
  m.def("calibrate_amp_ldp", &amp::calibrate_amp_ldp, py::arg("epsilon0"),
        py::arg("delta0"));
  m.def("calibrate_vec", &vec::calibrate_vec, py::arg("epsilon"),
        py::arg("delta"), py::arg("batch"), py::arg("dim"),
        py::arg("constant") = vec::kTheoryConstant);
  m.def("calibrate_vec_returning", &vec::calibrate_vec_returning,
        py::arg("epsilon"), py::arg("delta"), py::arg("batch"),
        py::arg("horizon"), py::arg("dim"),
        py::arg("constant") = vec::kTheoryConstantReturning);
  m.def("calibrate_tree", &calibrate_tree, py::arg("epsilon"),
        py::arg("delta"), py::arg("leaves"), py::arg("m0") = 1,
        py::arg("constant") = kConservativeTreeConstant);
  m.def("amplified_epsilon", &amplified_epsilon, py::arg("epsilon0"),
        py::arg("delta0"), py::arg("n"), py::arg("delta_prime"));
  m.def("advanced_composition", &advanced_composition,
        py::arg("epsilon_total"), py::arg("delta_prime"), py::arg("k"));
  m.def("confidence_radius", &confidence_radius, py::arg("alpha"),
        py::arg("d"), py::arg("t"), py::arg("lambda_"));
  m.def("select_lambda", &select_lambda, py::arg("sigma_total"), py::arg("d"),
        py::arg("horizon"), py::arg("batch"), py::arg("alpha"));
  m.def("simulate", &simulate, py::arg("algo"), py::arg("epsilon") = 1.0,
        py::arg("delta") = 0.1, py::arg("horizon") = 1000, py::arg("batch") = 20,
        py::arg("baseline_batch") = 1, py::arg("dim") = 5,
        py::arg("num_arms") = 100, py::arg("alpha") = 0.1, py::arg("seed") = 1,
        py::arg("returning") = false, py::arg("m0") = 1,
        py::arg("vec_constant") = std::nullopt, py::arg("tree_constant") = 1.25,
        py::arg("lambda_scale") = 2.0,
        "Run one episode; returns the cumulative-regret trace.");
  m.def("budget_text", &budget_text_py, py::arg("algo"), py::arg("epsilon"),
        py::arg("delta") = 0.1, py::arg("horizon") = 20000,
        py::arg("batch") = 20, py::arg("returning") = false, py::arg("m0") = 1,
        py::arg("vec_constant") = std::nullopt,
        "Privacy budget report as a key-value text block.");
}
