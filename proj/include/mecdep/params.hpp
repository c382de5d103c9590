#pragma once

#include <optional>
#include <utility>

namespace mecdep {

/// Raw model inputs. Densities are per km^2, rates per unit time, powers in dBm.
struct SystemParams {
  double lambda_b = 0.1;
  double lambda_d = 6.4;
  int channels = 16;
  double rho_dbm = -90.0;
  double sigma2_dbm = -110.0;
  double eta = 4.0;
  double theta_db = -10.0;
  double lambda_a = 0.15;
  // Exactly one of t_s / p_a_override.
  std::optional<double> t_s;
  std::optional<double> p_a_override = 0.25;
  double mu_o = 3.0;
  double deg_factor = 0.1;
  int m_mec = 5;
  int m_loc = 1;
  // Exactly one of mu_loc / mu_r.
  std::optional<double> mu_loc = 0.1;
  std::optional<double> mu_r;
  double delta_fail = 0.1;
  double gamma_repair = 1.0;
  // Exchanges the failure and repair rates, for inputs that list them the other way round.
  bool swap_failure_repair = false;
  // true: a failing occupied VM hands its task to an idle VM, (xI-1, xO, xF+1).
  // false: the task is lost and two VMs go down, (xI-1, xO-1, xF+2).
  bool handover_keeps_task = true;

  /// Failure and repair rates after applying swap_failure_repair.
  double failure_rate() const { return swap_failure_repair ? gamma_repair : delta_fail; }
  double repair_rate() const { return swap_failure_repair ? delta_fail : gamma_repair; }
};

struct DerivedParams {
  double p_a = 0.0;
  double kappa = 0.0;
  double theta_lin = 0.0;
  double rho_lin = 0.0;     // mW
  double sigma2_lin = 0.0;  // mW
  double mu_mec = 0.0;
  double mu_loc_eff = 0.0;
  double mu_r_eff = 0.0;
  double lambda_a = 0.0;
  double devices_per_bs = 0.0;  // lambda_d / lambda_b
  std::optional<double> lambda_mec;
  std::optional<double> lambda_loc;
};

/// Checks every invariant and returns the input unchanged; throws ConfigError naming the
/// first violated field.
SystemParams validate(const SystemParams& raw);

/// All derived quantities except the arrival rates, which need an OSP (see arrival_rates).
DerivedParams derive(const SystemParams& p);

/// (lambda_mec, lambda_loc) for a given offloading success probability.
std::pair<double, double> arrival_rates(const DerivedParams& dp, double osp);

/// Copy of dp with lambda_mec / lambda_loc populated.
DerivedParams with_osp(DerivedParams dp, double osp);

double device_activity(double t_s, double lambda_a);
double mec_service_rate(double mu_o, double deg_factor, int m_mec);
double dbm_to_mw(double dbm);
double db_to_linear(double db);

}  // namespace mecdep
