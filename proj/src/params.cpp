#include "mecdep/params.hpp"

#include <cmath>
#include <string>

#include "mecdep/errors.hpp"

namespace mecdep {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

void require_rate(double v, const char* name) {
  require(std::isfinite(v) && v >= 0.0, std::string(name) + " must be finite and >= 0");
}

}  // namespace

SystemParams validate(const SystemParams& raw) {
  require(std::isfinite(raw.eta) && raw.eta > 2.0, "eta must exceed 2");
  require_rate(raw.lambda_b, "lambda_b");
  require_rate(raw.lambda_d, "lambda_d");
  require(raw.lambda_b > 0.0, "lambda_b must be > 0");
  require(raw.channels >= 1, "channels must be >= 1");
  require(std::isfinite(raw.rho_dbm), "rho_dbm must be finite");
  require(std::isfinite(raw.sigma2_dbm) || raw.sigma2_dbm == -INFINITY,
          "sigma2_dbm must be finite or -inf");
  require(std::isfinite(raw.theta_db) || raw.theta_db == -INFINITY,
          "theta_db must be finite or -inf");
  require_rate(raw.lambda_a, "lambda_a");
  require_rate(raw.mu_o, "mu_o");
  require_rate(raw.deg_factor, "deg_factor");
  require(raw.m_mec >= 1, "m_mec must be >= 1");
  require(raw.m_loc >= 1, "m_loc must be >= 1");
  require_rate(raw.delta_fail, "delta_fail");
  require_rate(raw.gamma_repair, "gamma_repair");

  require(raw.mu_loc.has_value() != raw.mu_r.has_value(),
          "mu_loc and mu_r are mutually exclusive; exactly one must be given");
  if (raw.mu_loc) require_rate(*raw.mu_loc, "mu_loc");
  if (raw.mu_r) {
    require(std::isfinite(*raw.mu_r) && *raw.mu_r > 0.0, "mu_r must be > 0");
  }

  require(raw.t_s.has_value() != raw.p_a_override.has_value(),
          "t_s and p_a_override are mutually exclusive; exactly one must be given");
  if (raw.t_s) require_rate(*raw.t_s, "t_s");
  if (raw.p_a_override) {
    double pa = *raw.p_a_override;
    require(pa >= 0.0 && pa <= 1.0, "p_a_override must lie in [0, 1]");
  }
  return raw;
}

double device_activity(double t_s, double lambda_a) {
  return -std::expm1(-2.0 * t_s * lambda_a);
}

double mec_service_rate(double mu_o, double deg_factor, int m_mec) {
  return mu_o / std::pow(1.0 + deg_factor, m_mec - 1);
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

DerivedParams derive(const SystemParams& p) {
  DerivedParams dp;
  dp.p_a = p.p_a_override ? *p.p_a_override : device_activity(*p.t_s, p.lambda_a);
  dp.kappa = p.lambda_d / (p.lambda_b * p.channels);
  dp.theta_lin = db_to_linear(p.theta_db);
  dp.rho_lin = dbm_to_mw(p.rho_dbm);
  dp.sigma2_lin = dbm_to_mw(p.sigma2_dbm);
  dp.mu_mec = mec_service_rate(p.mu_o, p.deg_factor, p.m_mec);
  if (p.mu_loc) {
    dp.mu_loc_eff = *p.mu_loc;
    dp.mu_r_eff = dp.mu_loc_eff > 0.0 ? dp.mu_mec / dp.mu_loc_eff : INFINITY;
  } else {
    dp.mu_r_eff = *p.mu_r;
    dp.mu_loc_eff = dp.mu_mec / dp.mu_r_eff;
  }
  dp.lambda_a = p.lambda_a;
  dp.devices_per_bs = p.lambda_d / p.lambda_b;
  return dp;
}

std::pair<double, double> arrival_rates(const DerivedParams& dp, double osp) {
  if (!(osp >= 0.0 && osp <= 1.0)) throw ConfigError("osp must lie in [0, 1]");
  return {osp * dp.lambda_a * dp.devices_per_bs, (1.0 - osp) * dp.lambda_a};
}

DerivedParams with_osp(DerivedParams dp, double osp) {
  auto [mec, loc] = arrival_rates(dp, osp);
  dp.lambda_mec = mec;
  dp.lambda_loc = loc;
  return dp;
}

}  // namespace mecdep
