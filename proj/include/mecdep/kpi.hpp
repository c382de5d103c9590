#pragma once

#include <optional>

#include "mecdep/ctmc.hpp"
#include "mecdep/params.hpp"

namespace mecdep::kpi {

/// A CTMC together with its stationary distribution.
struct SolvedSystem {
  ctmc::CtmcModel model;
  ctmc::SteadyState steady;
};

/// Per-system dependability components.
struct SystemKpis {
  double arrival_rate = 0.0;        // lambda_v
  double service_rate = 0.0;        // mu_v
  double blocking = 0.0;            // mass of states with no idle VM
  double mean_occupied = 0.0;       // sum x_O tau
  double admission_rate = 0.0;      // Lambda_v
  double forced_termination = 0.0;  // F_v
  double throughput = 0.0;          // mu_v * mean_occupied
  std::optional<double> retainability;  // 1 - F_v / Lambda_v, unset when Lambda_v == 0
};

struct KpiReport {
  double osp = 0.0;
  double cra = 0.0;
  double tec = 0.0;
  double ter = 0.0;
  SystemKpis mec;
  SystemKpis loc;
  SolvedSystem mec_system;
  SolvedSystem loc_system;
};

double blocking_mass(const SolvedSystem& sys);
double mean_occupied(const SolvedSystem& sys);
/// F_v = delta * sum over {x_O > 0, x_I = 0} of x_O tau.
double forced_termination_rate(const SolvedSystem& sys);
/// Lambda_v = lambda_v (1 - blocking).
double effective_admission_rate(const SolvedSystem& sys);

SystemKpis components(const SolvedSystem& sys);

/// Computation resource availability: O (1 - B_mec) + (1 - O)(1 - B_loc).
double cra(const SolvedSystem& mec, const SolvedSystem& loc, double osp);
/// Task execution capacity: O mu_mec E[x_O]_mec + (1 - O) mu_loc E[x_O]_loc.
double tec(const SolvedSystem& mec, const SolvedSystem& loc, double osp);
/// Task execution retainability: O R_mec + (1 - O) R_loc. A system with zero weight is
/// skipped; one with nonzero weight and Lambda_v == 0 raises UndefinedKpiError.
double ter(const SystemKpis& mec, const SystemKpis& loc, double osp);

/// Builds and solves the MEC CTMC for a given VM count and the configured rates.
SolvedSystem solve_mec(const SystemParams& p, const DerivedParams& dp, int m_mec,
                       const ctmc::SolveOptions& options = {});
SolvedSystem solve_local(const SystemParams& p, const DerivedParams& dp,
                         const ctmc::SolveOptions& options = {});

/// Full report. The OSP defaults to the analytical value for p.
KpiReport evaluate(const SystemParams& p, std::optional<double> osp = {});

ctmc::HandoverRule handover_rule(const SystemParams& p);

}  // namespace mecdep::kpi
