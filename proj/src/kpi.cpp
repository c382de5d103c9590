#include "mecdep/kpi.hpp"

#include "mecdep/coverage.hpp"
#include "mecdep/errors.hpp"

namespace mecdep::kpi {

namespace {

template <typename Pred, typename Weight>
double weighted_mass(const SolvedSystem& sys, Pred pred, Weight weight) {
  double sum = 0.0;
  const auto& states = sys.model.states;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (pred(states[i])) sum += weight(states[i]) * sys.steady.probabilities[i];
  }
  return sum;
}

void check_osp(double osp) {
  if (!(osp >= 0.0 && osp <= 1.0)) throw ConfigError("osp must lie in [0, 1]");
}

// Without failures and repairs the failed count is frozen; the system starts fully idle.
ctmc::SolveOptions start_empty(ctmc::SolveOptions options, int m) {
  if (!options.initial) options.initial = ctmc::VmState{m, 0, 0};
  return options;
}

}  // namespace

double blocking_mass(const SolvedSystem& sys) {
  return weighted_mass(
      sys, [](const ctmc::VmState& s) { return s.idle == 0; },
      [](const ctmc::VmState&) { return 1.0; });
}

double mean_occupied(const SolvedSystem& sys) {
  return weighted_mass(
      sys, [](const ctmc::VmState& s) { return s.occupied > 0; },
      [](const ctmc::VmState& s) { return static_cast<double>(s.occupied); });
}

double forced_termination_rate(const SolvedSystem& sys) {
  return sys.model.rates.failure *
         weighted_mass(
             sys, [](const ctmc::VmState& s) { return s.occupied > 0 && s.idle == 0; },
             [](const ctmc::VmState& s) { return static_cast<double>(s.occupied); });
}

double effective_admission_rate(const SolvedSystem& sys) {
  return sys.model.rates.arrival * (1.0 - blocking_mass(sys));
}

SystemKpis components(const SolvedSystem& sys) {
  SystemKpis k;
  k.arrival_rate = sys.model.rates.arrival;
  k.service_rate = sys.model.rates.service;
  k.blocking = blocking_mass(sys);
  k.mean_occupied = mean_occupied(sys);
  k.admission_rate = effective_admission_rate(sys);
  k.forced_termination = forced_termination_rate(sys);
  k.throughput = k.service_rate * k.mean_occupied;
  if (k.admission_rate > 0.0) k.retainability = 1.0 - k.forced_termination / k.admission_rate;
  return k;
}

double cra(const SolvedSystem& mec, const SolvedSystem& loc, double osp) {
  check_osp(osp);
  return 1.0 - (osp * blocking_mass(mec) + (1.0 - osp) * blocking_mass(loc));
}

double tec(const SolvedSystem& mec, const SolvedSystem& loc, double osp) {
  check_osp(osp);
  return osp * mec.model.rates.service * mean_occupied(mec) +
         (1.0 - osp) * loc.model.rates.service * mean_occupied(loc);
}

double ter(const SystemKpis& mec, const SystemKpis& loc, double osp) {
  check_osp(osp);
  double loss = 0.0;
  auto add = [&](const SystemKpis& k, double weight, const char* name) {
    if (weight == 0.0) return;
    if (!(k.admission_rate > 0.0)) {
      throw UndefinedKpiError(std::string("TER undefined: ") + name +
                              " admission rate is zero while its weight is " +
                              std::to_string(weight));
    }
    loss += weight * (k.forced_termination / k.admission_rate);
  };
  add(mec, osp, "MEC");
  add(loc, 1.0 - osp, "local");
  return 1.0 - loss;
}

ctmc::HandoverRule handover_rule(const SystemParams& p) {
  return p.handover_keeps_task ? ctmc::HandoverRule::kTaskMigrates
                               : ctmc::HandoverRule::kTaskLost;
}

SolvedSystem solve_mec(const SystemParams& p, const DerivedParams& dp, int m_mec,
                       const ctmc::SolveOptions& options) {
  if (!dp.lambda_mec) throw ConfigError("MEC arrival rate requires an OSP");
  ctmc::Rates rates{*dp.lambda_mec, mec_service_rate(p.mu_o, p.deg_factor, m_mec),
                    p.failure_rate(), p.repair_rate()};
  SolvedSystem sys{ctmc::build_generator(m_mec, rates, handover_rule(p)), {}};
  sys.steady = ctmc::steady_state(sys.model, start_empty(options, m_mec));
  return sys;
}

SolvedSystem solve_local(const SystemParams& p, const DerivedParams& dp,
                         const ctmc::SolveOptions& options) {
  if (!dp.lambda_loc) throw ConfigError("local arrival rate requires an OSP");
  ctmc::Rates rates{*dp.lambda_loc, dp.mu_loc_eff, p.failure_rate(), p.repair_rate()};
  SolvedSystem sys{ctmc::build_generator(p.m_loc, rates, handover_rule(p)), {}};
  sys.steady = ctmc::steady_state(sys.model, start_empty(options, p.m_loc));
  return sys;
}

KpiReport evaluate(const SystemParams& p, std::optional<double> osp) {
  KpiReport r;
  r.osp = osp ? *osp : coverage::osp_analytical(p).osp;
  check_osp(r.osp);
  DerivedParams dp = with_osp(derive(p), r.osp);
  r.mec_system = solve_mec(p, dp, p.m_mec);
  r.loc_system = solve_local(p, dp);
  r.mec = components(r.mec_system);
  r.loc = components(r.loc_system);
  r.cra = cra(r.mec_system, r.loc_system, r.osp);
  r.tec = tec(r.mec_system, r.loc_system, r.osp);
  r.ter = ter(r.mec, r.loc, r.osp);
  return r;
}

}  // namespace mecdep::kpi
