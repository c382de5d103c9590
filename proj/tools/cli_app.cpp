#include "cli_app.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mecdep/config.hpp"
#include "mecdep/coverage.hpp"
#include "mecdep/ctmc.hpp"
#include "mecdep/errors.hpp"
#include "mecdep/kpi.hpp"
#include "mecdep/parallel.hpp"
#include "mecdep/spatial_sim.hpp"
#include "mecdep/specfun.hpp"
#include "mecdep/vm_optimizer.hpp"

namespace mecdep::cli {

namespace {

using nlohmann::json;

const std::vector<std::string> kSweepParameters = {
    "theta_db", "p_a", "lambda_a", "kappa", "gamma_repair", "delta_fail", "m_mec", "mu_r"};
const std::vector<std::string> kKpiNames = {"osp", "cra", "tec", "ter"};

json breakdown_json(const coverage::OspBreakdown& b) {
  return json{{"osp", b.osp}, {"noise_factor", b.noise_factor}, {"lt_out", b.lt_out},
              {"lt_in", b.lt_in}};
}

json system_json(const kpi::SystemKpis& k) {
  json j{{"arrival_rate", k.arrival_rate},
         {"service_rate", k.service_rate},
         {"blocking", k.blocking},
         {"mean_occupied", k.mean_occupied},
         {"admission_rate", k.admission_rate},
         {"forced_termination", k.forced_termination},
         {"throughput", k.throughput}};
  j["retainability"] = k.retainability ? json(*k.retainability) : json(nullptr);
  return j;
}

json steady_json(const kpi::SolvedSystem& sys) {
  json rows = json::array();
  for (std::size_t i = 0; i < sys.model.states.size(); ++i) {
    const auto& s = sys.model.states[i];
    rows.push_back({{"idle", s.idle}, {"occupied", s.occupied}, {"failed", s.failed},
                    {"probability", sys.steady.probabilities[i]}});
  }
  return json{{"vms", sys.model.m_v}, {"residual", sys.steady.residual}, {"states", rows}};
}

double kpi_value(const std::string& name, const kpi::KpiReport& r) {
  if (name == "osp") return r.osp;
  if (name == "cra") return r.cra;
  if (name == "tec") return r.tec;
  return r.ter;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void check(bool ok, const std::string& name, const std::string& detail, std::ostream& out,
           int& failures) {
  out << (ok ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
  if (!ok) ++failures;
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<double> SweepSpec::values() const {
  if (!(step > 0.0)) throw ConfigError("sweep step must be > 0");
  if (start > stop) throw ConfigError("sweep start must not exceed stop");
  auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = start + static_cast<double>(i) * step;
  return out;
}

SystemParams set_sweep_parameter(const SystemParams& p, const std::string& name, double value) {
  SystemParams q = p;
  if (name == "theta_db") {
    q.theta_db = value;
  } else if (name == "p_a") {
    q.p_a_override = value;
    q.t_s.reset();
  } else if (name == "lambda_a") {
    q.lambda_a = value;
  } else if (name == "kappa" || name == "kappa-scaler") {
    // kappa = lambda_d / (lambda_b C); the device density carries the change.
    q.lambda_d = value * q.lambda_b * q.channels;
  } else if (name == "gamma_repair") {
    q.gamma_repair = value;
  } else if (name == "delta_fail") {
    q.delta_fail = value;
  } else if (name == "m_mec") {
    if (value != std::round(value)) throw ConfigError("m_mec sweep values must be integers");
    q.m_mec = static_cast<int>(value);
  } else if (name == "mu_r") {
    q.mu_r = value;
    q.mu_loc.reset();
  } else {
    throw ConfigError("unknown sweep parameter '" + name + "'");
  }
  return validate(q);
}

json cmd_osp(const SystemParams& p, std::optional<double> theta_db) {
  SystemParams q = p;
  if (theta_db) q.theta_db = *theta_db;
  q = validate(q);
  auto dp = derive(q);
  json j = breakdown_json(coverage::osp_analytical(q));
  j["theta_db"] = q.theta_db;
  j["p_a"] = dp.p_a;
  j["kappa"] = dp.kappa;
  return j;
}

std::string cmd_osp_verify(const SystemParams& p, const OspVerifyOptions& o) {
  SystemParams q = validate(p);
  std::vector<double> p_a = o.p_a;
  const bool multi = p_a.size() > 1;
  if (p_a.empty()) p_a.push_back(derive(q).p_a);
  sim::SimConfig cfg;
  cfg.trials = o.trials;
  cfg.seed = o.seed;
  cfg.window_km = o.window_km;
  auto grid = sim::simulate_osp_grid(q, cfg, p_a, o.theta_db);

  std::ostringstream out;
  if (multi) out << "p_a,";
  out << "theta_db,osp_analytical,osp_sim,stderr,abs_diff\n";
  for (std::size_t j = 0; j < p_a.size(); ++j) {
    for (std::size_t k = 0; k < o.theta_db.size(); ++k) {
      SystemParams r = q;
      r.p_a_override = p_a[j];
      r.t_s.reset();
      r.theta_db = o.theta_db[k];
      double analytical = coverage::osp_analytical(validate(r)).osp;
      const auto& e = grid.estimates[j][k];
      if (multi) out << format_number(p_a[j]) << ',';
      out << format_number(o.theta_db[k]) << ',' << format_number(analytical) << ','
          << format_number(e.mean) << ',' << format_number(e.std_error) << ','
          << format_number(std::abs(analytical - e.mean)) << '\n';
    }
  }
  return out.str();
}

json cmd_kpis(const SystemParams& p, std::optional<double> osp, bool verbose) {
  auto r = kpi::evaluate(validate(p), osp);
  json j{{"osp", r.osp}, {"cra", r.cra}, {"tec", r.tec}, {"ter", r.ter},
         {"mec", system_json(r.mec)}, {"local", system_json(r.loc)}};
  if (verbose) {
    j["mec"]["steady_state"] = steady_json(r.mec_system);
    j["local"]["steady_state"] = steady_json(r.loc_system);
  }
  return j;
}

json cmd_optimize(const SystemParams& p, std::optional<double> osp, int m_max) {
  SystemParams q = validate(p);
  double o = osp ? *osp : coverage::osp_analytical(q).osp;
  auto res = opt::optimal_vm_count(q, o, m_max);
  json trace = json::array();
  for (auto [m, c] : res.trace) trace.push_back({{"m", m}, {"tec", c}});
  return json{{"osp", o}, {"m_star", res.m_star}, {"c_star", res.c_star}, {"trace", trace}};
}

std::string cmd_sweep(const SystemParams& p, const SweepSpec& spec,
                      const std::vector<std::string>& kpis, std::optional<double> osp) {
  if (std::find(kSweepParameters.begin(), kSweepParameters.end(), spec.parameter) ==
          kSweepParameters.end() &&
      spec.parameter != "kappa-scaler") {
    throw ConfigError("unknown sweep parameter '" + spec.parameter + "'");
  }
  for (const auto& k : kpis) {
    if (std::find(kKpiNames.begin(), kKpiNames.end(), k) == kKpiNames.end()) {
      throw ConfigError("unknown KPI '" + k + "'");
    }
  }
  auto values = spec.values();
  std::vector<SystemParams> points;
  points.reserve(values.size());
  for (double v : values) points.push_back(set_sweep_parameter(p, spec.parameter, v));

  std::vector<kpi::KpiReport> reports(values.size());
  parallel_for(values.size(), [&](std::size_t i) { reports[i] = kpi::evaluate(points[i], osp); });

  std::ostringstream out;
  out << spec.parameter;
  for (const auto& k : kpis) out << ',' << k;
  out << '\n';
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << format_number(values[i]);
    for (const auto& k : kpis) out << ',' << format_number(kpi_value(k, reports[i]));
    out << '\n';
  }
  return out.str();
}

int cmd_selftest(std::ostream& out) {
  int failures = 0;

  bool counts = true;
  for (int m = 1; m <= 60; ++m) {
    counts &= ctmc::enumerate_states(m).size() == static_cast<std::size_t>((m + 1) * (m + 2) / 2);
  }
  check(counts, "state-count", "(M+1)(M+2)/2 for M in [1, 60]", out, failures);

  SystemParams p = validate(SystemParams{});
  auto dp = with_osp(derive(p), coverage::osp_analytical(p).osp);
  auto mec = kpi::solve_mec(p, dp, 20);
  double row = (mec.model.generator.rowwise().sum()).cwiseAbs().maxCoeff();
  check(row < 1e-12, "generator-rows", "max |row sum| = " + format_number(row), out, failures);

  double mass = 0.0;
  for (double x : mec.steady.probabilities) mass += x;
  check(std::abs(mass - 1.0) < 1e-12 && mec.steady.residual <= 1e-9, "steady-state",
        "mass " + format_number(mass) + ", residual " + format_number(mec.steady.residual), out,
        failures);

  double pmf = 0.0;
  for (int n = 0; n <= 2000; ++n) pmf += coverage::neighbor_pmf(n, p.lambda_d, p.lambda_b);
  check(std::abs(pmf - 1.0) <= 1e-9, "neighbor-pmf", "sum = " + format_number(pmf), out,
        failures);

  double worst_atan = 0.0;
  double worst_tail = 0.0;
  for (double e = -3.0; e <= 3.0 + 1e-9; e += 0.25) {
    double theta = std::pow(10.0, e);
    double f = specfun::gauss_2f1_coverage({4.0, theta});
    double closed = std::atan(std::sqrt(theta)) / std::sqrt(theta);
    worst_atan = std::max(worst_atan, std::abs(f - closed) / closed);
    for (double eta : {3.0, 4.0, 6.0}) {
      double f2 = specfun::gauss_2f1_coverage({eta, theta});
      double lhs = specfun::tail_integral(eta, std::pow(theta, -1.0 / eta));
      double rhs = std::pow(theta, 1.0 - 2.0 / eta) / (eta - 2.0) * f2;
      worst_tail = std::max(worst_tail, std::abs(lhs - rhs) / rhs);
    }
  }
  check(worst_atan <= 1e-10, "hypergeometric-arctan", "max rel err " + format_number(worst_atan),
        out, failures);
  check(worst_tail <= 1e-9, "tail-integral", "max rel err " + format_number(worst_tail), out,
        failures);

  auto loss = ctmc::build_generator(6, ctmc::Rates{4.0, 1.0, 0.0, 0.0});
  ctmc::SolveOptions opts;
  opts.initial = ctmc::VmState{6, 0, 0};
  auto ss = ctmc::steady_state(loss, opts);
  double erlang = 1.0;
  for (int k = 1; k <= 6; ++k) erlang = 4.0 * erlang / (k + 4.0 * erlang);
  double blocked = ss.probabilities[loss.index_of({0, 6, 0})];
  check(std::abs(blocked - erlang) <= 1e-9, "erlang-b",
        "B(6, 4) = " + format_number(blocked) + " vs " + format_number(erlang), out, failures);

  double lt_closed = coverage::laplace_in(0.1, 0.25, 4.0);
  double lt_series = coverage::laplace_in_series(0.1, 0.25, 6.4, 0.1, 16, 4000);
  check(std::abs(lt_closed - lt_series) <= 1e-9, "in-cell-laplace",
        format_number(lt_closed) + " vs " + format_number(lt_series), out, failures);

  out << (failures == 0 ? "selftest passed\n" : "selftest failed\n");
  return failures;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dependability analysis of MEC task offloading"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::uint64_t seed = 1;
  std::int64_t trials = 20'000;
  std::string out_path;
  bool verbose = false;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "JSON parameter file (default: built-in defaults)");
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--trials", trials, "Monte Carlo trials per point")->check(CLI::PositiveNumber);
  app.add_option("--out", out_path, "Output file (default: stdout)");
  app.add_flag("--verbose", verbose, "Verbose output");
  app.add_option("--set", overrides, "Parameter override key=value (repeatable)");

  auto* osp_cmd = app.add_subcommand("osp", "Analytical offloading success probability");
  std::optional<double> theta_db;
  osp_cmd->add_option("--theta-db", theta_db, "SINR threshold override, dB");

  auto* verify_cmd = app.add_subcommand("osp-verify", "Analysis against Monte Carlo");
  double th_start = -20.0, th_stop = 0.0, th_step = 1.0, window = 80.0;
  std::string p_a_list;
  verify_cmd->add_option("--theta-start", th_start);
  verify_cmd->add_option("--theta-stop", th_stop);
  verify_cmd->add_option("--theta-step", th_step);
  verify_cmd->add_option("--p-a", p_a_list, "Comma separated activity probabilities");
  verify_cmd->add_option("--window-km", window, "Side of the simulation window");

  auto* kpis_cmd = app.add_subcommand("kpis", "Dependability KPIs");
  std::optional<double> osp;
  kpis_cmd->add_option("--osp", osp, "Fix the OSP instead of computing it");

  auto* opt_cmd = app.add_subcommand("optimize", "TEC-maximizing MEC VM count");
  int m_max = 200;
  opt_cmd->add_option("--osp", osp, "Fix the OSP instead of computing it");
  opt_cmd->add_option("--m-max", m_max)->check(CLI::PositiveNumber);

  auto* sweep_cmd = app.add_subcommand("sweep", "Parameter sweep, CSV output");
  SweepSpec spec;
  std::string kpi_list = "osp,cra,tec,ter";
  sweep_cmd->add_option("--param", spec.parameter)->required();
  sweep_cmd->add_option("--start", spec.start)->required();
  sweep_cmd->add_option("--stop", spec.stop)->required();
  sweep_cmd->add_option("--step", spec.step)->required();
  sweep_cmd->add_option("--kpis", kpi_list, "Comma separated subset of osp,cra,tec,ter");
  sweep_cmd->add_option("--osp", osp, "Fix the OSP instead of recomputing it per point");

  auto* self_cmd = app.add_subcommand("selftest", "Run the built-in invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    SystemParams p = config_path.empty() ? validate(SystemParams{}) : load_params(config_path);
    for (const auto& o : overrides) p = apply_override(p, o);

    std::string text;
    if (osp_cmd->parsed()) {
      text = cmd_osp(p, theta_db).dump(2) + "\n";
    } else if (verify_cmd->parsed()) {
      OspVerifyOptions o;
      o.theta_db = SweepSpec{"theta_db", th_start, th_stop, th_step}.values();
      for (const auto& s : split_list(p_a_list)) o.p_a.push_back(std::stod(s));
      o.trials = trials;
      o.seed = seed;
      o.window_km = window;
      text = cmd_osp_verify(p, o);
    } else if (kpis_cmd->parsed()) {
      text = cmd_kpis(p, osp, verbose).dump(2) + "\n";
    } else if (opt_cmd->parsed()) {
      text = cmd_optimize(p, osp, m_max).dump(2) + "\n";
    } else if (sweep_cmd->parsed()) {
      text = cmd_sweep(p, spec, split_list(kpi_list), osp);
    } else if (self_cmd->parsed()) {
      std::ostringstream report;
      int failures = cmd_selftest(report);
      text = report.str();
      if (failures > 0) {
        out << text;
        return 3;
      }
    }

    if (out_path.empty()) {
      out << text;
    } else {
      std::ofstream f(out_path, std::ios::binary);
      if (!f) throw ConfigError("cannot open output file " + out_path);
      f << text;
    }
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "config error: bad number in list: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return 3;
  } catch (const UndefinedKpiError& e) {
    err << "undefined KPI: " << e.what() << '\n';
    return 4;
  }
}

}  // namespace mecdep::cli
