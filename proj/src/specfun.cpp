#include "mecdep/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "mecdep/errors.hpp"

namespace mecdep::specfun {

namespace {

constexpr int kMaxTerms = 10'000;
constexpr double kRelTol = 1e-16;

// With b = 1 - 2/eta the target is F(theta) = 2F1(1, b; b + 1; -theta).

// sum_n b (-theta)^n / (n + b), used for theta <= 0.5.
double direct_series(double b, double theta) {
  double sum = 0.0;
  double power = 1.0;
  for (int n = 0; n < kMaxTerms; ++n) {
    double term = power * b / (n + b);
    sum += term;
    if (std::abs(term) < kRelTol * std::abs(sum)) return sum;
    power *= -theta;
  }
  throw NumericError("2F1 direct series did not converge");
}

// Pfaff: F = (1 + theta)^-1 2F1(1, 1; b + 1; x), x = theta / (1 + theta).
double pfaff_series(double b, double theta) {
  double x = theta / (1.0 + theta);
  double sum = 0.0;
  double term = 1.0;
  for (int n = 0; n < kMaxTerms; ++n) {
    sum += term;
    // (1)_n (1)_n / ((b+1)_n n!) x^n; ratio of consecutive terms is (n+1) x / (n + b + 1).
    double next = term * (n + 1.0) * x / (n + b + 1.0);
    if (next < kRelTol * sum) return sum / (1.0 + theta);
    term = next;
  }
  throw NumericError("2F1 Pfaff series did not converge");
}

// Continuation to large theta:
// F = b theta^-b [pi / sin(pi b) - sum_k (-1)^k theta^(b-1-k) / (k + 1 - b)].
double inverse_series(double b, double theta) {
  double sum = 0.0;
  double power = std::pow(theta, b - 1.0);
  for (int k = 0; k < kMaxTerms; ++k) {
    double term = power / (k + 1.0 - b);
    sum += (k % 2 == 0) ? term : -term;
    if (term < kRelTol * std::abs(sum)) {
      double reflection = std::numbers::pi / std::sin(std::numbers::pi * b);
      return b * std::pow(theta, -b) * (reflection - sum);
    }
    power /= theta;
  }
  throw NumericError("2F1 inverse series did not converge");
}

}  // namespace

double gauss_2f1_coverage(HypergeoArgs args) {
  if (!(args.eta > 2.0)) throw ConfigError("eta must exceed 2");
  if (!(args.theta_lin >= 0.0)) throw ConfigError("theta must be >= 0");
  double b = 1.0 - 2.0 / args.eta;
  double theta = args.theta_lin;
  if (theta == 0.0) return 1.0;
  if (std::isinf(theta)) return 0.0;
  if (theta <= 0.5) return direct_series(b, theta);
  if (theta <= 4.0) return pfaff_series(b, theta);
  return inverse_series(b, theta);
}

double tail_integral(double eta, double lower) {
  if (!(eta > 2.0)) throw ConfigError("eta must exceed 2");
  if (!(lower >= 0.0)) throw ConfigError("lower limit must be >= 0");
  if (std::isinf(lower)) return 0.0;
  // u = y^-eta maps [lower, inf) onto (0, lower^-eta]; the integrable u^(-2/eta) endpoint
  // singularity is then removed with u = w^(eta / (eta - 2)), leaving
  // 1/(eta - 2) * integral over [0, lower^-(eta-2)] of dw / (1 + w^(eta / (eta - 2))).
  double p = eta / (eta - 2.0);
  double upper = lower == 0.0 ? std::numeric_limits<double>::infinity()
                              : std::pow(lower, -(eta - 2.0));
  auto integrand = [p](double w) { return 1.0 / (1.0 + std::pow(w, p)); };
  double err = 0.0;
  double l1 = 0.0;
  boost::math::quadrature::tanh_sinh<double> quad;
  double value = quad.integrate(integrand, 0.0, upper, 1e-13, &err, &l1);
  if (!(err <= 1e-10 * std::max(1.0, value))) {
    throw NumericError("tail integral quadrature did not converge (error estimate " +
                       std::to_string(err) + ")");
  }
  return value / (eta - 2.0);
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw ConfigError("log_gamma requires x > 0");
  return std::lgamma(x);
}

}  // namespace mecdep::specfun
