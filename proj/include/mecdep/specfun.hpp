#pragma once

namespace mecdep::specfun {

struct HypergeoArgs {
  double eta;        // > 2
  double theta_lin;  // >= 0
};

/// 2F1(1, 1 - 2/eta; 2 - 2/eta; -theta), the hypergeometric factor of the out-of-cell
/// interference exponent. Accurate to ~1e-14 relative over theta in [0, 1e6].
double gauss_2f1_coverage(HypergeoArgs args);

/// Integral of y / (y^eta + 1) over [lower, inf).
double tail_integral(double eta, double lower);

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

}  // namespace mecdep::specfun
