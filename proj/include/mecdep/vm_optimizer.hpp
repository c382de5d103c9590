#pragma once

#include <utility>
#include <vector>

#include "mecdep/params.hpp"

namespace mecdep::opt {

struct OptimizationResult {
  int m_star = 1;
  double c_star = 0.0;
  std::vector<std::pair<int, double>> trace;  // every (m, TEC) evaluated, in order
};

/// Hill climb over the MEC VM count: starts at m = 1, keeps going while TEC improves by more
/// than a relative 1e-12, and returns the last improving m. Never evaluates beyond m_star + 1.
OptimizationResult optimal_vm_count(const SystemParams& p, double osp, int m_max = 200);

/// TEC(m) for m = 1..m_max (index m - 1), evaluated in parallel.
std::vector<double> exhaustive_scan(const SystemParams& p, double osp, int m_max);

/// TEC for one VM count with the local system already folded in.
double tec_at(const SystemParams& p, double osp, int m_mec);

}  // namespace mecdep::opt
