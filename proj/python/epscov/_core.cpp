#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "epscov/cli.hpp"
#include "epscov/serialize.hpp"

namespace py = pybind11;
using namespace epscov;

namespace {

// Documents cross the boundary as JSON text; the Python package decodes them.
std::string text(const Json& j) { return j.dump(); }

Json parse(const std::string& s) { return s.empty() ? Json::object() : Json::parse(s); }

SearchBudget budget_of(std::size_t max_states, std::size_t max_points) {
  SearchBudget b;
  if (max_states) b.max_states = max_states;
  b.max_points = max_points;
  return b;
}

FiniteMetricSpace space(const std::vector<std::vector<double>>& m) { return FiniteMetricSpace::from_matrix(m); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Discrete homotopy of metric graphs";
  m.attr("FORMAT_VERSION") = kFormatVersion;

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<UnresolvedError>(m, "UnresolvedError", PyExc_RuntimeError);

  py::class_<MetricGraph>(m, "Graph")
      .def_static("named", &make_named, py::arg("spec"))
      .def_static("load", &load_graph, py::arg("path"))
      .def_static("parse",
                  [](const std::string& s) {
                    std::istringstream in(s);
                    return parse_graph(in);
                  },
                  py::arg("text"))
      .def_property_readonly("num_vertices", &MetricGraph::num_vertices)
      .def_property_readonly("num_edges", &MetricGraph::num_edges)
      .def_property_readonly("total_length", &MetricGraph::total_length)
      .def_property_readonly("diameter", &MetricGraph::diameter)
      .def("distance",
           [](const MetricGraph& g, const std::string& p, const std::string& q) {
             return g.distance(point_from_json(g, parse(p)), point_from_json(g, parse(q)));
           })
      .def("to_text", [](const MetricGraph& g) {
        std::ostringstream out;
        write_graph(out, g);
        return out.str();
      });

  py::class_<HomotopyEngine>(m, "Engine")
      .def(py::init<const MetricGraph&, double, int>(), py::arg("graph"), py::arg("resolution"),
           py::arg("basepoint") = 0)
      .def_property_readonly("net_size", [](const HomotopyEngine& e) { return e.net().size(); })
      .def_property_readonly("resolution", [](const HomotopyEngine& e) { return e.net().resolution(); })
      .def("is_null",
           [](const HomotopyEngine& e, const std::string& chain, std::size_t max_states, std::size_t max_points) {
             Chain c = chain_from_json(e.graph(), parse(chain));
             Verdict v;
             {
               py::gil_scoped_release release;
               v = e.is_null(c, budget_of(max_states, max_points));
             }
             Json j = to_json(v);
             j["audited"] = e.audit(c, v);
             return text(j);
           },
           py::arg("chain"), py::arg("max_states") = 0, py::arg("max_points") = 0)
      .def("h1_class",
           [](const HomotopyEngine& e, const std::string& chain) {
             return text(to_json(e.h1_class(chain_from_json(e.graph(), parse(chain)))));
           },
           py::arg("chain"));

  m.def("spectrum",
        [](const HomotopyEngine& e, double min_scale, double max_scale, double eta, unsigned threads) {
          SpectrumOptions o{min_scale, max_scale, eta, {}, threads};
          py::gil_scoped_release release;
          return text(to_json(critical_spectrum(e, o)));
        },
        py::arg("engine"), py::arg("min_scale"), py::arg("max_scale"), py::arg("eta"), py::arg("threads") = 0);

  m.def("cover_ball",
        [](const HomotopyEngine& e, double eps, double radius, const std::string& kernel) {
          KernelSpec k = kernel.empty() ? KernelSpec{} : kernel_from_json(e.net(), parse(kernel));
          py::gil_scoped_release release;
          return text(to_json(cover_ball(e, eps, radius, k)));
        },
        py::arg("engine"), py::arg("eps"), py::arg("radius"), py::arg("kernel") = "");

  m.def("generators",
        [](const HomotopyEngine& e, double eps, double eta, unsigned threads) {
          py::gil_scoped_release release;
          return text(to_json(lollichain_generators(e, eps, eta, {}, threads)));
        },
        py::arg("engine"), py::arg("eps"), py::arg("eta"), py::arg("threads") = 0);

  m.def("gh_exact", [](const std::vector<std::vector<double>>& x, const std::vector<std::vector<double>>& y) {
    return gh_distance_exact(space(x), space(y));
  });
  m.def("gh_bounds", [](const std::vector<std::vector<double>>& x, const std::vector<std::vector<double>>& y) {
    GhBounds b = gh_bounds(space(x), space(y));
    return py::make_tuple(b.lower, b.upper, b.correspondence);
  });

  m.def("experiment",
        [](const std::string& config) {
          ExperimentConfig c = experiment_from_json(parse(config));
          py::gil_scoped_release release;
          return text(to_json(run_convergence_experiment(c)));
        },
        py::arg("config") = "");

  m.def("run_cli",
        [](std::vector<std::string> args) {
          args.insert(args.begin(), "epscov");
          std::vector<const char*> argv;
          for (const auto& a : args) argv.push_back(a.c_str());
          std::ostringstream out, err;
          int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
          return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
