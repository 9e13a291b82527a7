#include <sstream>

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spinqec/circuit.hpp"
#include "spinqec/device.hpp"
#include "spinqec/error_table.hpp"
#include "spinqec/harness.hpp"
#include "spinqec/lattice.hpp"

namespace py = pybind11;
using namespace spinqec;

namespace {

py::object to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

CheckBasis basis_from_string(const std::string& s) {
  if (s == "x" || s == "X") return CheckBasis::x;
  if (s == "z" || s == "Z") return CheckBasis::z;
  throw std::invalid_argument("unknown basis: " + s);
}

SweepSpec make_spec(const std::vector<int>& distances, const std::string& scan, double start, double stop, double step,
                    double fixed, const std::string& gate, const std::string& leak_model,
                    const std::map<int, std::uint64_t>& shots, std::uint64_t seed) {
  SweepSpec s;
  s.distances = distances;
  s.scan_variable = scan_variable_from_string(scan);
  s.start = start;
  s.stop = stop;
  s.step = step;
  s.fixed = fixed;
  s.flavour = gate_flavour_from_string(gate);
  s.leak_model = leak_model_from_string(leak_model);
  s.shots = shots;
  s.seed = seed;
  s.validate();
  return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Circuit-level surface-code simulator for mediated-exchange spin qubits";
  m.attr("__version__") = kVersion;
  m.attr("CSV_HEADER") = kCsvHeader;
  m.attr("WORKERS_ENV") = kWorkersEnv;

  py::register_exception<std::invalid_argument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<std::domain_error>(m, "DomainError", PyExc_ValueError);

  py::class_<SweepRow>(m, "SweepRow")
      .def(py::init<>())
      .def_readwrite("d", &SweepRow::d)
      .def_readwrite("p2", &SweepRow::p2)
      .def_readwrite("p_leak", &SweepRow::p_leak)
      .def_readwrite("shots", &SweepRow::shots)
      .def_readwrite("failures", &SweepRow::failures)
      .def_readwrite("p_logical", &SweepRow::p_logical)
      .def_readwrite("stderr", &SweepRow::stderr_)
      .def("__repr__", [](const SweepRow& r) {
        std::ostringstream os;
        os << "SweepRow(d=" << r.d << ", p2=" << r.p2 << ", p_leak=" << r.p_leak << ", failures=" << r.failures << "/"
           << r.shots << ")";
        return os.str();
      });

  m.def(
      "estimate",
      [](int d, double p2, double p_leak, const std::string& gate, const std::string& leak_model, std::uint64_t shots,
         std::uint64_t seed, int workers) {
        SweepPoint p{d, p2, p_leak, gate_flavour_from_string(gate), leak_model_from_string(leak_model), shots, seed};
        py::gil_scoped_release release;
        return estimate_logical_rate(p, resolve_workers(workers));
      },
      py::arg("d"), py::arg("p2"), py::arg("p_leak") = 0.0, py::arg("gate") = "s", py::arg("leak_model") = "worst_case",
      py::arg("shots") = 1000, py::arg("seed") = 0, py::arg("workers") = 1);

  m.def(
      "run_sweep",
      [](const std::vector<int>& distances, const std::string& scan, double start, double stop, double step,
         double fixed, const std::string& gate, const std::string& leak_model,
         const std::map<int, std::uint64_t>& shots, std::uint64_t seed, int workers) {
        const auto spec = make_spec(distances, scan, start, stop, step, fixed, gate, leak_model, shots, seed);
        py::gil_scoped_release release;
        return run_sweep(spec, resolve_workers(workers));
      },
      py::arg("distances"), py::arg("scan") = "p2", py::arg("start"), py::arg("stop"), py::arg("step"),
      py::arg("fixed") = 0.0, py::arg("gate") = "s", py::arg("leak_model") = "worst_case",
      py::arg("shots") = std::map<int, std::uint64_t>{}, py::arg("seed") = 0, py::arg("workers") = 1);

  m.def(
      "fit_threshold",
      [](const std::vector<SweepRow>& rows, const std::string& norm) {
        return to_py(fit_threshold(rows, rate_normalisation_from_string(norm)).to_json());
      },
      py::arg("rows"), py::arg("normalisation") = "per_round");

  m.def("format_csv", &format_csv, py::arg("rows"));
  m.def(
      "parse_csv",
      [](const std::string& text) {
        std::istringstream in(text);
        return parse_csv(in);
      },
      py::arg("text"));

  m.def(
      "lattice_json", [](int d) { return to_py(build_lattice(d).to_json()); }, py::arg("d"));

  m.def(
      "error_table_json",
      [](const std::string& basis, const std::string& gate, double p2, double p_leak, const std::string& leak_model,
         unsigned mask) {
        const auto f = gate_flavour_from_string(gate);
        const auto c = build_check_circuit(basis_from_string(basis), f, mask);
        return to_py(compile_error_table(c, ErrorModelParams::standard(p2, p_leak, f, leak_model_from_string(leak_model)))
                         .to_json());
      },
      py::arg("basis"), py::arg("gate") = "s", py::arg("p2") = 0.01, py::arg("p_leak") = 0.0,
      py::arg("leak_model") = "worst_case", py::arg("mask") = kAllData);

  m.def("verify_cz_decompositions", []() {
    py::list out;
    for (const auto& c : verify_cz_decompositions())
      out.append(py::dict(py::arg("name") = c.name, py::arg("passed") = c.passed,
                          py::arg("max_deviation") = c.max_deviation));
    return out;
  });

  m.def("mediated_exchange", &mediated_exchange_estimate, py::arg("t"), py::arg("delta_side"), py::arg("delta_m"));
  m.def(
      "residual_exchange_ratio",
      [](double on, double off, const std::string& kind) {
        if (kind != "mediated" && kind != "direct") throw std::invalid_argument("kind must be mediated or direct");
        return residual_exchange_ratio(on, off, kind == "mediated" ? ExchangeKind::mediated : ExchangeKind::direct);
      },
      py::arg("delta_on"), py::arg("delta_off"), py::arg("kind") = "mediated");
  m.def("leakage_oscillation", &leakage_oscillation, py::arg("t"), py::arg("u"), py::arg("elapsed"));
  m.def(
      "gate_error_pair",
      [](double p2) {
        const auto g = gate_error_pair(p2);
        return py::make_tuple(g.p_s, g.p_sw);
      },
      py::arg("p2"));
  m.def(
      "cycle_time",
      [](const std::string& gate, double t_j, double t_z, double t_h) {
        TimingParams tp;
        tp.t_j = t_j;
        tp.t_z = t_z;
        tp.t_h = t_h;
        return cycle_time(gate_flavour_from_string(gate), tp);
      },
      py::arg("gate"), py::arg("t_j"), py::arg("t_z") = 0.0, py::arg("t_h") = 0.0);
  m.def("dephasing_per_cycle", &dephasing_per_cycle, py::arg("cycle"), py::arg("t2"));
}
