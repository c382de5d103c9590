#include "mecdep/coverage.hpp"

#include <cmath>

#include "mecdep/errors.hpp"
#include "mecdep/specfun.hpp"

namespace mecdep::coverage {

double neighbor_pmf(int n, double lambda_d, double lambda_b) {
  if (n < 0) return 0.0;
  const double c = kVoronoiConstant;
  const double bc = lambda_b * c;
  double log_p = c * std::log(bc) + specfun::log_gamma(n + c) -
                 (n + c) * std::log(lambda_d + bc) - specfun::log_gamma(n + 1.0) -
                 specfun::log_gamma(c);
  if (n > 0) log_p += n * std::log(lambda_d);
  return std::exp(log_p);
}

double laplace_out(double theta_lin, double p_a, double kappa, double eta) {
  if (theta_lin == 0.0 || p_a == 0.0 || kappa == 0.0) return 1.0;
  double f = specfun::gauss_2f1_coverage({eta, theta_lin});
  return std::exp(-2.0 * theta_lin * p_a * kappa / (eta - 2.0) * f);
}

double laplace_out_integral(double theta_lin, double p_a, double kappa, double eta) {
  if (theta_lin == 0.0 || p_a == 0.0 || kappa == 0.0) return 1.0;
  double tail = specfun::tail_integral(eta, std::pow(theta_lin, -1.0 / eta));
  return std::exp(-2.0 * p_a * kappa * std::pow(theta_lin, 2.0 / eta) * tail);
}

double laplace_in(double theta_lin, double p_a, double kappa) {
  const double c = kVoronoiConstant;
  if (std::isinf(theta_lin)) return std::pow(1.0 + p_a * kappa / c, -c);
  return std::pow(1.0 + theta_lin * p_a * kappa / ((1.0 + theta_lin) * c), -c);
}

double laplace_in_series(double theta_lin, double p_a, double lambda_d, double lambda_b,
                         int channels, int n_max) {
  double ratio = std::isinf(theta_lin) ? 1.0 : theta_lin / (1.0 + theta_lin);
  double z = 1.0 - (p_a / channels) * ratio;
  double mass = 0.0;
  double sum = 0.0;
  double zn = 1.0;
  for (int n = 0; n <= n_max; ++n) {
    double pmf = neighbor_pmf(n, lambda_d, lambda_b);
    mass += pmf;
    sum += pmf * zn;
    zn *= z;
  }
  if (mass < 1.0 - 1e-9) {
    throw NumericError("laplace_in_series: n_max too small, neighbor pmf mass " +
                       std::to_string(mass));
  }
  return sum;
}

namespace {

OspBreakdown assemble(const SystemParams& p, bool allow_fast_path) {
  DerivedParams dp = derive(p);
  OspBreakdown b;
  double theta = dp.theta_lin;
  b.noise_factor = std::exp(-dp.sigma2_lin * theta / dp.rho_lin);
  if (allow_fast_path && p.eta == 4.0) {
    double root = std::sqrt(theta);
    b.lt_out = theta == 0.0 ? 1.0 : std::exp(-dp.p_a * dp.kappa * root * std::atan(root));
  } else {
    b.lt_out = laplace_out(theta, dp.p_a, dp.kappa, p.eta);
  }
  b.lt_in = laplace_in(theta, dp.p_a, dp.kappa);
  b.osp = b.noise_factor * b.lt_out * b.lt_in;
  return b;
}

}  // namespace

OspBreakdown osp_analytical(const SystemParams& p) { return assemble(p, true); }

OspBreakdown osp_analytical_general(const SystemParams& p) { return assemble(p, false); }

}  // namespace mecdep::coverage
