#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mecdep/params.hpp"

namespace mecdep::sim {

struct SimConfig {
  double window_km = 80.0;
  std::int64_t trials = 20'000;
  std::uint64_t seed = 1;
  bool torus = true;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// One realization of the network seen from the tagged device's channel. Devices are the
/// tagged-channel sub-process (intensity lambda_d / C), each with an activity mark u
/// (active iff u < P_a) and an interference fading gain g.
struct Realization {
  std::vector<Point> bs;
  std::vector<Point> devices;
  std::vector<int> serving;        // nearest-BS index per device
  std::vector<double> distance;    // km to serving BS
  std::vector<double> tx_power;    // rho * distance^eta, mW
  std::vector<double> activity_u;  // uniform(0,1) mark
  std::vector<double> fading;      // unit-mean exponential g
  Point tagged_device;
  int tagged_bs = -1;
  double tagged_distance = 0.0;
  double tagged_fading = 0.0;  // h
  int resampled = 0;           // empty-BS draws discarded before this realization
};

struct OspEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  double ci95_low = 0.0;
  double ci95_high = 0.0;
  std::int64_t trials = 0;
  std::int64_t resampled = 0;
  /// Resampled (BS-free) windows exceeded 0.1% of trials.
  bool resample_warning = false;
};

/// Success estimates on a (P_a x theta) grid, all computed from the same realizations.
struct OspGrid {
  std::vector<double> p_a;
  std::vector<double> theta_db;
  std::vector<std::vector<OspEstimate>> estimates;  // [p_a index][theta index]
};

/// Homogeneous PPP on the square [0, window)^2.
std::vector<Point> sample_ppp(double intensity_per_km2, double window_km, std::mt19937_64& rng);

/// Deterministic per-trial generator derived from (seed, trial).
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial);

/// Distance under the torus metric (or plain Euclidean when torus is false).
double distance(Point a, Point b, double window_km, bool torus);

/// Draws trial `trial`'s realization. Only devices with u < max_p_a get their serving BS
/// resolved; the rest keep serving = -1. Pass 1.0 to resolve every device.
void sample_realization(const SystemParams& p, const SimConfig& cfg, std::uint64_t trial,
                        double max_p_a, Realization& out);

/// Empirical OSP at the parameters' own P_a and theta.
OspEstimate simulate_osp(const SystemParams& p, const SimConfig& cfg);

/// Empirical OSP over a grid, sharing random numbers across every grid point.
OspGrid simulate_osp_grid(const SystemParams& p, const SimConfig& cfg,
                          const std::vector<double>& p_a_values,
                          const std::vector<double>& theta_db_values);

OspEstimate make_estimate(std::int64_t successes, std::int64_t trials, std::int64_t resampled);

}  // namespace mecdep::sim
