#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mecdep/config.hpp"
#include "mecdep/coverage.hpp"
#include "mecdep/ctmc.hpp"
#include "mecdep/errors.hpp"
#include "mecdep/kpi.hpp"
#include "mecdep/spatial_sim.hpp"
#include "mecdep/specfun.hpp"
#include "mecdep/vm_optimizer.hpp"

namespace py = pybind11;
using namespace mecdep;

namespace {

// Parameters cross the boundary as plain dicts, validated through the JSON loader.
SystemParams to_params(const py::object& obj) {
  if (obj.is_none()) return validate(SystemParams{});
  auto text = py::module_::import("json").attr("dumps")(obj).cast<std::string>();
  auto base = params_to_json(validate(SystemParams{}));
  auto overrides = nlohmann::json::parse(text);
  if (!overrides.is_object()) throw ConfigError("parameters must be a dict");
  // Setting one side of an exclusive pair drops the default on the other side.
  if (overrides.contains("t_s")) base.erase("p_a_override");
  if (overrides.contains("mu_r")) base.erase("mu_loc");
  base.update(overrides);
  return params_from_json(base);
}

py::dict system_dict(const kpi::SystemKpis& k) {
  py::dict d;
  d["arrival_rate"] = k.arrival_rate;
  d["service_rate"] = k.service_rate;
  d["blocking"] = k.blocking;
  d["mean_occupied"] = k.mean_occupied;
  d["admission_rate"] = k.admission_rate;
  d["forced_termination"] = k.forced_termination;
  d["throughput"] = k.throughput;
  d["retainability"] = k.retainability ? py::object(py::float_(*k.retainability)) : py::none();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dependability model of MEC task offloading";

  auto base = py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<UndefinedKpiError>(m, "UndefinedKpiError", PyExc_ArithmeticError);
  (void)base;

  m.def("default_params", [] {
    auto text = params_to_json(validate(SystemParams{})).dump();
    return py::module_::import("json").attr("loads")(text);
  });

  m.def(
      "osp",
      [](const py::object& params) {
        auto b = coverage::osp_analytical(to_params(params));
        py::dict d;
        d["osp"] = b.osp;
        d["noise_factor"] = b.noise_factor;
        d["lt_out"] = b.lt_out;
        d["lt_in"] = b.lt_in;
        return d;
      },
      py::arg("params") = py::none());

  m.def(
      "kpis",
      [](const py::object& params, std::optional<double> osp) {
        auto r = kpi::evaluate(to_params(params), osp);
        py::dict d;
        d["osp"] = r.osp;
        d["cra"] = r.cra;
        d["tec"] = r.tec;
        d["ter"] = r.ter;
        d["mec"] = system_dict(r.mec);
        d["local"] = system_dict(r.loc);
        return d;
      },
      py::arg("params") = py::none(), py::arg("osp") = py::none());

  m.def(
      "optimize",
      [](const py::object& params, double osp, int m_max) {
        auto r = opt::optimal_vm_count(to_params(params), osp, m_max);
        return py::make_tuple(r.m_star, r.c_star, r.trace);
      },
      py::arg("params") = py::none(), py::arg("osp") = 0.83, py::arg("m_max") = 200,
      "Hill climb over the MEC VM count; returns (m_star, c_star, trace).");

  m.def(
      "exhaustive_scan",
      [](const py::object& params, double osp, int m_max) {
        return opt::exhaustive_scan(to_params(params), osp, m_max);
      },
      py::arg("params") = py::none(), py::arg("osp") = 0.83, py::arg("m_max") = 30);

  m.def(
      "steady_state",
      [](int m_v, double arrival, double service, double failure, double repair,
         bool task_migrates) {
        auto model = ctmc::build_generator(
            m_v, {arrival, service, failure, repair},
            task_migrates ? ctmc::HandoverRule::kTaskMigrates : ctmc::HandoverRule::kTaskLost);
        ctmc::SolveOptions opts;
        opts.initial = ctmc::VmState{m_v, 0, 0};
        auto ss = ctmc::steady_state(model, opts);
        std::vector<std::tuple<int, int, int>> states;
        for (const auto& s : model.states) states.emplace_back(s.idle, s.occupied, s.failed);
        return py::make_tuple(states, ss.probabilities);
      },
      py::arg("m_v"), py::arg("arrival"), py::arg("service"), py::arg("failure"),
      py::arg("repair"), py::arg("task_migrates") = true,
      "Stationary distribution; returns ([(idle, occupied, failed)], probabilities).");

  m.def(
      "simulate_osp",
      [](const py::object& params, std::int64_t trials, std::uint64_t seed, double window_km) {
        sim::SimConfig cfg;
        cfg.trials = trials;
        cfg.seed = seed;
        cfg.window_km = window_km;
        SystemParams p = to_params(params);
        sim::OspEstimate e;
        {
          py::gil_scoped_release release;
          e = sim::simulate_osp(p, cfg);
        }
        return py::make_tuple(e.mean, e.std_error);
      },
      py::arg("params") = py::none(), py::arg("trials") = 2000, py::arg("seed") = 1,
      py::arg("window_km") = 80.0, "Monte Carlo OSP; returns (mean, std_error).");

  m.def("hyp2f1_coverage", [](double eta, double theta) {
    return specfun::gauss_2f1_coverage({eta, theta});
  });
}
