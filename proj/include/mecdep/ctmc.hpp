#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace mecdep::ctmc {

/// VM occupancy tuple (idle, occupied, failed); the three counts sum to the system's VM total.
struct VmState {
  int idle = 0;
  int occupied = 0;
  int failed = 0;
  friend auto operator<=>(const VmState&, const VmState&) = default;
};

/// What happens when an occupied VM fails while an idle VM is available.
enum class HandoverRule {
  kTaskMigrates,  // (xI-1, xO, xF+1): the task resumes on the idle VM
  kTaskLost,      // (xI-1, xO-1, xF+2): the task is lost along with an idle VM
};

struct Rates {
  double arrival = 0.0;
  double service = 0.0;  // per occupied VM
  double failure = 0.0;  // per VM
  double repair = 0.0;   // per failed VM
};

struct CtmcModel {
  int m_v = 0;
  Rates rates;
  HandoverRule handover = HandoverRule::kTaskMigrates;
  std::vector<VmState> states;
  Eigen::MatrixXd generator;

  std::size_t size() const { return states.size(); }
  /// Ordinal of s in `states`.
  std::size_t index_of(const VmState& s) const;
};

struct SteadyState {
  std::vector<double> probabilities;
  double residual = 0.0;  // max |(tau Q)_j|
  bool closed_form_checked = false;
  double closed_form_gap = 0.0;  // max |tau - 1 (Q + ones)^-1| when checked
};

struct SolveOptions {
  bool closed_form_check = true;
  /// Restrict to the closed class reachable from this state (needed when the chain has
  /// several closed classes, e.g. no failures and no repairs).
  std::optional<VmState> initial;
};

/// All (idle, occupied, failed) compositions of m_v, ordered by idle descending, then
/// occupied descending. Index 0 is (m_v, 0, 0).
std::vector<VmState> enumerate_states(int m_v);

/// Ordinal of s among enumerate_states(s.idle + s.occupied + s.failed).
std::size_t state_index(const VmState& s);

CtmcModel build_generator(int m_v, const Rates& rates,
                          HandoverRule handover = HandoverRule::kTaskMigrates);

/// Stationary distribution via dense LU with one balance equation replaced by the
/// normalisation. Throws NumericError on a reducible chain (listing two closed classes),
/// on negative mass below -1e-12, on residual above 1e-9 (scaled by the largest exit rate),
/// or when the all-ones closed form disagrees by more than 1e-8.
SteadyState steady_state(const CtmcModel& model, const SolveOptions& options = {});

struct GillespieResult {
  std::vector<double> occupancy;  // time-weighted, aligned with model.states
  double observed_time = 0.0;
  std::int64_t events = 0;
  std::int64_t arrivals = 0;  // attempted, including blocked
  std::int64_t admitted = 0;
  std::int64_t completed = 0;
  std::int64_t handovers = 0;
  std::int64_t aborted = 0;
};

/// Event-driven simulation of the VM process, sampling the failure/repair/service events
/// directly rather than reading the generator. Statistics cover (burn_in, horizon].
GillespieResult gillespie_occupancy(const CtmcModel& model, double horizon, double burn_in,
                                    std::uint64_t seed, std::optional<VmState> start = {});

/// Half the L1 distance between two distributions.
double total_variation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace mecdep::ctmc
