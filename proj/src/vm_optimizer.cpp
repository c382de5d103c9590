#include "mecdep/vm_optimizer.hpp"

#include <cmath>
#include <limits>

#include "mecdep/errors.hpp"
#include "mecdep/kpi.hpp"
#include "mecdep/parallel.hpp"

namespace mecdep::opt {

namespace {

constexpr double kTieTolerance = 1e-12;

struct TecContext {
  SystemParams p;
  DerivedParams dp;
  double osp;
  double local_part;  // (1 - O) mu_loc E[x_O]_loc, independent of m

  TecContext(const SystemParams& params, double o) : p(validate(params)), osp(o) {
    if (!(o >= 0.0 && o <= 1.0)) throw ConfigError("osp must lie in [0, 1]");
    dp = with_osp(derive(p), osp);
    auto loc = kpi::solve_local(p, dp);
    local_part = (1.0 - osp) * loc.model.rates.service * kpi::mean_occupied(loc);
  }

  double operator()(int m) const {
    auto mec = kpi::solve_mec(p, dp, m);
    return osp * mec.model.rates.service * kpi::mean_occupied(mec) + local_part;
  }
};

}  // namespace

double tec_at(const SystemParams& p, double osp, int m_mec) { return TecContext(p, osp)(m_mec); }

OptimizationResult optimal_vm_count(const SystemParams& p, double osp, int m_max) {
  if (m_max < 1) throw ConfigError("m_max must be at least 1");
  TecContext tec(p, osp);
  OptimizationResult r;
  double previous = -std::numeric_limits<double>::infinity();
  for (int m = 1; m <= m_max; ++m) {
    double c = tec(m);
    r.trace.emplace_back(m, c);
    bool improved = m == 1 || c > previous + std::abs(previous) * kTieTolerance;
    if (!improved) break;
    r.m_star = m;
    r.c_star = c;
    previous = c;
  }
  return r;
}

std::vector<double> exhaustive_scan(const SystemParams& p, double osp, int m_max) {
  if (m_max < 1) throw ConfigError("m_max must be at least 1");
  TecContext tec(p, osp);
  std::vector<double> out(static_cast<std::size_t>(m_max));
  parallel_for(out.size(), [&](std::size_t i) { out[i] = tec(static_cast<int>(i) + 1); });
  return out;
}

}  // namespace mecdep::opt
