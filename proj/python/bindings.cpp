#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "saferoute/config.hpp"
#include "saferoute/error.hpp"
#include "saferoute/instance_io.hpp"
#include "saferoute/instances.hpp"
#include "saferoute/oracle.hpp"
#include "saferoute/phase1.hpp"
#include "saferoute/phase2.hpp"
#include "saferoute/queueing.hpp"
#include "saferoute/solution_io.hpp"
#include "saferoute/solver.hpp"

namespace py = pybind11;
namespace sr = saferoute;
namespace q = saferoute::queueing;

namespace {

py::dict evaluation_dict(const sr::Evaluation& e) {
  py::dict d;
  d["feasible"] = e.feasible;
  d["objective"] = e.objective;
  d["routes"] = e.solution.routes;
  return d;
}

sr::EvaluationOptions options_for(const sr::Instance& instance, const std::string& objective, int grid) {
  sr::SolverConfig config;
  config.objective = sr::parse_objective(objective);
  config.schedule_grid = grid;
  return sr::evaluation_options(config, instance);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Safe time-dependent vehicle routing";

  auto base = py::register_exception<sr::Error>(m, "Error");
  py::register_exception<sr::SpecError>(m, "SpecError", base.ptr());
  py::register_exception<sr::ParseError>(m, "ParseError", base.ptr());
  py::register_exception<sr::LoadError>(m, "LoadError", base.ptr());
  py::register_exception<sr::SaturationError>(m, "SaturationError", base.ptr());
  py::register_exception<sr::DomainError>(m, "DomainError", base.ptr());
  py::register_exception<sr::OracleRefusal>(m, "OracleRefusal", base.ptr());
  py::register_exception<sr::BudgetExceeded>(m, "BudgetExceeded", base.ptr());
  py::register_exception<sr::ScheduleInfeasible>(m, "ScheduleInfeasible", base.ptr());

  py::class_<q::QueueModel>(m, "QueueModel")
      .def(py::init<double, double, double>(), py::arg("nominal_speed"), py::arg("jam_density"),
           py::arg("beta") = 1.0)
      .def_property_readonly("nominal_speed", &q::QueueModel::nominal_speed)
      .def_property_readonly("jam_density", &q::QueueModel::jam_density)
      .def_property_readonly("beta", &q::QueueModel::beta);
  m.def("waiting_time", &q::waiting_time, py::arg("model"), py::arg("density"));
  m.def("speed_from_density", &q::speed_from_density, py::arg("model"), py::arg("density"));
  m.def("max_flow", &q::max_flow, py::arg("model"));
  m.def(
      "speeds_from_flow",
      [](const q::QueueModel& model, double flow) {
        const auto r = q::speeds_from_flow(model, flow);
        return py::make_tuple(r.congested, r.uncongested);
      },
      py::arg("model"), py::arg("flow"));

  py::class_<sr::Instance, std::shared_ptr<sr::Instance>>(m, "Instance")
      .def_property_readonly("name", &sr::Instance::name)
      .def_property_readonly("customer_count", &sr::Instance::customer_count)
      .def_property_readonly("dummy_count", &sr::Instance::dummy_count)
      .def_property_readonly("vehicle_count", [](const sr::Instance& i) { return i.fleet().count; })
      .def("to_text", [](const sr::Instance& i) { return sr::write_instance(i); })
      .def("format_route", [](const sr::Instance& i, const std::vector<int>& r) { return sr::format_route(i, r); });

  m.def("read_instance", [](const std::string& path) {
    return std::make_shared<sr::Instance>(sr::read_instance_file(path));
  });
  m.def("read_solomon", [](const std::string& path) {
    return std::make_shared<sr::Instance>(sr::read_solomon_file(path));
  });
  m.def("load_case_study", [](const std::string& directory) {
    return std::make_shared<sr::Instance>(sr::load_case_study(directory).instance);
  });
  m.def(
      "generate_instance",
      [](int customers, std::uint64_t seed) {
        sr::GeneratorSpec spec;
        spec.name = "generated";
        spec.customers = customers;
        spec.seed = seed;
        return std::make_shared<sr::Instance>(sr::generate_instance(spec));
      },
      py::arg("customers"), py::arg("seed") = 1);

  m.def(
      "evaluate",
      [](const sr::Instance& instance, const std::vector<std::vector<int>>& routes, double hour,
         const std::string& objective, int grid) {
        const sr::Evaluator evaluator(instance, hour, options_for(instance, objective, grid));
        return evaluation_dict(evaluator.evaluate(sr::make_solution(routes)));
      },
      py::arg("instance"), py::arg("routes"), py::arg("hour") = 0.0, py::arg("objective") = "weighted",
      py::arg("grid") = 3);

  m.def(
      "solve",
      [](const sr::Instance& instance, double hour, const std::string& objective, std::uint64_t seed,
         const std::string& config_path) {
        sr::SolverConfig config = config_path.empty() ? sr::SolverConfig{} : sr::load_solver_config(config_path);
        config.objective = sr::parse_objective(objective);
        config.seed = seed;
        sr::SolveResult result;
        {
          py::gil_scoped_release release;
          result = sr::solve(instance, hour, config);
        }
        py::dict d = evaluation_dict(result.best);
        d["evaluations"] = result.evaluations;
        d["history"] = result.incumbent_history;
        return d;
      },
      py::arg("instance"), py::arg("hour") = 0.0, py::arg("objective") = "weighted", py::arg("seed") = 1,
      py::arg("config") = "");

  m.def(
      "oracle",
      [](const sr::Instance& instance, double hour, const std::string& objective, int grid) {
        const auto r = sr::enumerate_routes(instance, hour, options_for(instance, objective, grid));
        py::dict d;
        d["feasible"] = r.feasible;
        d["objective"] = r.objective;
        d["enumerated"] = r.enumerated;
        py::list optima;
        for (const auto& e : r.optima) optima.append(e.solution.routes);
        d["optima"] = optima;
        return d;
      },
      py::arg("instance"), py::arg("hour") = 0.0, py::arg("objective") = "weighted", py::arg("grid") = 3);
}
