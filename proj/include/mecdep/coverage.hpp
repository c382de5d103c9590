#pragma once

#include "mecdep/params.hpp"

namespace mecdep::coverage {

/// Fitting constant of the approximate Voronoi cell-area law (gamma shape and rate).
inline constexpr double kVoronoiConstant = 3.575;

/// The offloading success probability and its three factors; osp = noise * lt_out * lt_in.
struct OspBreakdown {
  double noise_factor = 1.0;
  double lt_out = 1.0;
  double lt_in = 1.0;
  double osp = 1.0;
};

/// P{N_d = n}: number of other devices sharing the typical BS's cell, a gamma-mixed Poisson
/// with mean lambda_d / lambda_b. Evaluated in log space.
double neighbor_pmf(int n, double lambda_d, double lambda_b);

/// Out-of-cell interference factor
/// exp{-2 theta p_a kappa / (eta - 2) * 2F1(1, 1 - 2/eta; 2 - 2/eta; -theta)}.
double laplace_out(double theta_lin, double p_a, double kappa, double eta);

/// Same factor through the tail integral: exp{-2 p_a kappa theta^(2/eta) T(eta, theta^(-1/eta))}.
double laplace_out_integral(double theta_lin, double p_a, double kappa, double eta);

/// In-cell interference factor, the closed form (1 + theta p_a kappa / ((1 + theta) c))^-c.
double laplace_in(double theta_lin, double p_a, double kappa);

/// In-cell factor as the truncated neighbor sum sum_n pmf(n) (1 - (p_a/C) theta/(1+theta))^n.
/// Throws NumericError when the pmf mass up to n_max falls short of 1 - 1e-9.
double laplace_in_series(double theta_lin, double p_a, double lambda_d, double lambda_b,
                         int channels, int n_max);

/// Analytical OSP for validated parameters. For eta == 4 the arctan closed form is used.
OspBreakdown osp_analytical(const SystemParams& p);

/// Same as osp_analytical but always through the hypergeometric route.
OspBreakdown osp_analytical_general(const SystemParams& p);

}  // namespace mecdep::coverage
