#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "eaog/benchmarks.hpp"
#include "eaog/planner_loop.hpp"
#include "eaog/report.hpp"
#include "eaog/scenario_dsl.hpp"

namespace py = pybind11;
using namespace eaog;

namespace {

struct RunResult {
  std::string status;
  std::size_t depth = 0;
  long plan_motion_calls = 0;
  std::string metrics_json;
  std::string trace;
};

RunResult run_scenario(const Scenario& s, std::uint64_t seed, std::size_t depth_cap, int retries) {
  RunConfig config;
  config.seed = seed;
  config.depth_cap = depth_cap;
  config.retries = retries;
  PlanTrace t;
  {
    py::gil_scoped_release release;
    t = run(s, config);
  }
  return {std::string(to_string(t.final_status)), t.metrics.depth, static_cast<long>(t.metrics.plan_motion_calls),
          metrics_document(t).dump(), trace_jsonl(t)};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "AND/OR graph network task-motion planner";

  // module-lifetime handles; released so interpreter teardown never touches them
  static PyObject* planner_error = py::exception<Error>(m, "PlannerError", PyExc_RuntimeError).release().ptr();
  static PyObject* syntax_error = py::exception<DslError>(m, "ScenarioSyntaxError", planner_error).release().ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const DslError& e) {
      PyErr_SetString(syntax_error, e.diagnostic().c_str());
    } catch (const Error& e) {
      PyErr_SetString(planner_error, (std::string(to_string(e.code())) + ": " + e.what()).c_str());
    }
  });

  py::class_<Scenario>(m, "Scenario")
      .def_property_readonly("name", [](const Scenario& s) { return s.name; })
      .def_property_readonly("objects", [](const Scenario& s) {
        std::vector<std::string> ids;
        for (const auto& o : s.objects) ids.push_back(o.id);
        return ids;
      })
      .def_property_readonly("agents", [](const Scenario& s) {
        std::vector<std::string> ids;
        for (const auto& a : s.agents) ids.push_back(a.id);
        return ids;
      })
      .def_property_readonly("goal", [](const Scenario& s) {
        std::vector<std::string> facts;
        for (const auto& f : s.goal.required_facts) facts.push_back(f.str());
        return facts;
      })
      .def("to_text", [](const Scenario& s) { return serialize(s); })
      .def("__eq__", [](const Scenario& a, const Scenario& b) { return a == b; })
      .def("__repr__", [](const Scenario& s) { return "<Scenario " + s.name + ">"; });

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("status", &RunResult::status)
      .def_readonly("depth", &RunResult::depth)
      .def_readonly("plan_motion_calls", &RunResult::plan_motion_calls)
      .def_readonly("metrics_json", &RunResult::metrics_json)
      .def_readonly("trace", &RunResult::trace);

  m.def("gen_hanoi", [](int n, bool omnipotent) { return gen_hanoi(n, default_hanoi_layout(omnipotent)); },
        py::arg("n"), py::arg("omnipotent") = false);
  m.def("gen_habitat",
        [](int samples, int glassware) {
          HabitatConfig c;
          c.samples = samples;
          c.glassware = glassware;
          return gen_habitat(c);
        },
        py::arg("samples") = 2, py::arg("glassware") = 1);
  m.def("parse_scenario", [](const std::string& text) { return parse_scenario(text); }, py::arg("text"));
  m.def("run", &run_scenario, py::arg("scenario"), py::arg("seed") = 0, py::arg("depth_cap") = 512,
        py::arg("retries") = 5);
  m.def("mask_timings_jsonl", &mask_timings_jsonl, py::arg("text"));
  m.def("dot", [](const Scenario& s) { return to_dot(augment(build_graph(s.graph))); }, py::arg("scenario"));
}
