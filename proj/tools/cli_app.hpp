#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mecdep/params.hpp"

namespace mecdep::cli {

struct SweepSpec {
  std::string parameter;
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  /// Grid values start, start + step, ... up to stop (inclusive, with a small slack).
  std::vector<double> values() const;
};

struct OspVerifyOptions {
  std::vector<double> theta_db;
  std::vector<double> p_a;  // empty: the configured P_a
  std::int64_t trials = 20'000;
  std::uint64_t seed = 1;
  double window_km = 80.0;
};

nlohmann::json cmd_osp(const SystemParams& p, std::optional<double> theta_db = {});
std::string cmd_osp_verify(const SystemParams& p, const OspVerifyOptions& options);
nlohmann::json cmd_kpis(const SystemParams& p, std::optional<double> osp, bool verbose);
nlohmann::json cmd_optimize(const SystemParams& p, std::optional<double> osp, int m_max);
std::string cmd_sweep(const SystemParams& p, const SweepSpec& spec,
                      const std::vector<std::string>& kpis, std::optional<double> osp = {});
/// Runs the built-in invariant checks, printing one line each. Returns the failure count.
int cmd_selftest(std::ostream& out);

/// Sets one sweepable parameter on a copy of p.
SystemParams set_sweep_parameter(const SystemParams& p, const std::string& name, double value);

/// Formats with 12 significant digits.
std::string format_number(double v);

/// Entry point shared by the executable and tests. Returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mecdep::cli
