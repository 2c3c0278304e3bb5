#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "soue/cli.hpp"
#include "soue/dtw.hpp"
#include "soue/errors.hpp"
#include "soue/evalharness.hpp"
#include "soue/report.hpp"
#include "soue/rules.hpp"
#include "soue/screening.hpp"
#include "soue/topology.hpp"

namespace py = pybind11;

namespace {

py::dict warp_dict(const soue::WarpResult& w) {
  py::dict d;
  d["cumulative_distance"] = w.cumulative_distance;
  d["path_length"] = w.path_length;
  d["similarity"] = w.similarity;
  return d;
}

soue::RuleSet rules_from_text(const std::string& text) {
  std::istringstream in(text);
  return soue::parse_rules(in, "<rules>");
}

// Returns the report JSON text for in-memory CSV tables.
std::string detect_text(const std::string& nodes_csv, const std::string& sensors_csv, const std::string& obs_csv,
                        const std::string& rules_text, double beta, double delta, std::size_t eta,
                        const std::string& predicates) {
  std::istringstream ns(nodes_csv), ss(sensors_csv), os(obs_csv);
  soue::NetworkTables t;
  t.nodes = soue::read_nodes(ns, "<nodes>");
  t.sensors = soue::read_sensors(ss, "<sensors>", t.nodes);
  t.observations = soue::read_observations(os, "<observations>", t.sensors);
  soue::DetectionConfig c;
  c.beta = beta;
  c.delta_m = delta;
  c.eta = eta;
  c.active_predicates = soue::parse_predicate_list(predicates);
  const auto range = soue::observation_span(t, c.grid_step);
  if (range.empty()) return soue::dump_report(soue::empty_report(c, range, {"no observations"}));
  const auto result = soue::run_detection(t, rules_from_text(rules_text), c, range);
  return soue::dump_report(soue::build_report(result, range));
}

py::dict generate(const std::string& mode, std::uint64_t seed, std::size_t nodes, std::size_t days) {
  soue::CleanConfig cc;
  cc.seed = seed;
  cc.nodes = nodes;
  cc.days = days;
  soue::InjectedDataset data{soue::generate_clean(cc), {}};
  if (mode != "clean") {
    const auto m = soue::injection_mode_from_string(mode);
    if (!m) throw soue::ConfigError("unknown mode '" + mode + "'");
    data = soue::inject(data.dataset, soue::InjectionSpec::defaults(*m, seed));
  }
  std::ostringstream n, s, o, t;
  soue::write_nodes(n, data.dataset.nodes);
  soue::write_sensors(s, data.dataset.sensors);
  soue::write_observations(o, data.dataset.observations());
  soue::write_truth_csv(t, data.truth);
  py::dict d;
  d["nodes"] = n.str();
  d["sensors"] = s.str();
  d["observations"] = o.str();
  d["truth"] = t.str();
  d["segments"] = data.truth.segments.size();
  return d;
}

}  // namespace

PYBIND11_MODULE(_soue, m) {
  m.doc() = "Segment outlier and unusual event detection for sensor networks";

  py::register_exception<soue::InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<soue::ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("geo_distance", &soue::geo_distance, py::arg("lat_a"), py::arg("lon_a"), py::arg("lat_b"),
        py::arg("lon_b"), "Great-circle distance in meters");

  m.def(
      "dtw_align",
      [](const std::vector<double>& a, const std::vector<double>& b, double value_scale) {
        const auto va = soue::to_trend_vectors(std::span<const double>(a), value_scale);
        const auto vb = soue::to_trend_vectors(std::span<const double>(b), value_scale);
        return warp_dict(soue::dtw_align(va, vb));
      },
      py::arg("window_a"), py::arg("window_b"), py::arg("value_scale") = 1.0,
      "Angle-based DTW of two equal-length windows of values");

  m.def(
      "trend_similarity",
      [](const std::vector<double>& a, const std::vector<double>& b, double value_scale) {
        return soue::trend_similarity(std::span<const double>(a), std::span<const double>(b), value_scale);
      },
      py::arg("window_a"), py::arg("window_b"), py::arg("value_scale") = 1.0);

  m.def(
      "plan_windows",
      [](std::size_t g, std::size_t eta) {
        const auto plan = soue::plan_windows(g, eta);
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t l = 0; l < plan.count; ++l) out.emplace_back(plan.first_slot(l), plan.last_slot(l));
        return out;
      },
      py::arg("slots"), py::arg("eta") = 12, "0-based inclusive slot range of each window");

  m.def(
      "ask_correlated",
      [](const std::string& rules, const std::string& a, const std::string& b, const std::string& predicates) {
        return soue::ask_correlated(rules_from_text(rules), soue::PropertyKind(a), soue::PropertyKind(b),
                                    soue::parse_predicate_list(predicates));
      },
      py::arg("rules"), py::arg("prop_a"), py::arg("prop_b"), py::arg("predicates") = "strong,medium");

  m.def("detect_json", &detect_text, py::arg("nodes"), py::arg("sensors"), py::arg("observations"),
        py::arg("rules") = "", py::arg("beta") = 0.90, py::arg("delta") = 300.0, py::arg("eta") = 12,
        py::arg("predicates") = "strong,medium", py::call_guard<py::gil_scoped_release>());

  m.def("generate", &generate, py::arg("mode"), py::arg("seed") = 1, py::arg("nodes") = 36, py::arg("days") = 30);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = soue::run_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs a soue command; returns (exit_code, stdout, stderr)");

  m.attr("__version__") = soue::version_string();
}
