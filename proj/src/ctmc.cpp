#include "mecdep/ctmc.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "mecdep/errors.hpp"

namespace mecdep::ctmc {

namespace {

std::string to_string(const VmState& s) {
  std::ostringstream os;
  os << '(' << s.idle << ',' << s.occupied << ',' << s.failed << ')';
  return os.str();
}

// Adds each transition out of s to `emit(dest, rate)`.
template <typename Emit>
void for_each_transition(const VmState& s, const Rates& r, HandoverRule rule, Emit&& emit) {
  const int xi = s.idle, xo = s.occupied, xf = s.failed;
  if (xi > 0) emit(VmState{xi - 1, xo + 1, xf}, r.arrival);
  if (xo > 0) emit(VmState{xi + 1, xo - 1, xf}, xo * r.service);
  if (xi > 0) emit(VmState{xi - 1, xo, xf + 1}, xi * r.failure);
  if (xo > 0 && xi > 0) {
    if (rule == HandoverRule::kTaskMigrates) {
      emit(VmState{xi - 1, xo, xf + 1}, xo * r.failure);
    } else {
      emit(VmState{xi - 1, xo - 1, xf + 2}, xo * r.failure);
    }
  }
  if (xo > 0 && xi == 0) emit(VmState{xi, xo - 1, xf + 1}, xo * r.failure);
  if (xf > 0) emit(VmState{xi + 1, xo, xf - 1}, xf * r.repair);
}

// Tarjan SCC over the positive off-diagonal pattern; returns component id per node.
std::vector<int> strongly_connected(const Eigen::MatrixXd& q, int& count) {
  const int n = static_cast<int>(q.rows());
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && q(i, j) > 0.0) adj[i].push_back(j);

  std::vector<int> index(n, -1), low(n, 0), comp(n, -1), stack;
  std::vector<char> on_stack(n, 0);
  int next_index = 0;
  count = 0;
  // Iterative DFS to stay safe on large chains.
  std::vector<std::pair<int, std::size_t>> frames;
  for (int root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    frames.push_back({root, 0});
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      auto& [v, edge] = frames.back();
      if (edge < adj[v].size()) {
        int w = adj[v][edge++];
        if (index[w] < 0) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = count;
        } while (w != v);
        ++count;
      }
      int finished = v;
      frames.pop_back();
      if (!frames.empty()) {
        int parent = frames.back().first;
        low[parent] = std::min(low[parent], low[finished]);
      }
    }
  }
  return comp;
}

std::vector<char> reachable_from(const Eigen::MatrixXd& q, int start) {
  const int n = static_cast<int>(q.rows());
  std::vector<char> seen(n, 0);
  std::vector<int> todo{start};
  seen[start] = 1;
  while (!todo.empty()) {
    int v = todo.back();
    todo.pop_back();
    for (int j = 0; j < n; ++j) {
      if (j != v && q(v, j) > 0.0 && !seen[j]) {
        seen[j] = 1;
        todo.push_back(j);
      }
    }
  }
  return seen;
}

}  // namespace

std::vector<VmState> enumerate_states(int m_v) {
  if (m_v < 1) throw ConfigError("VM count must be >= 1");
  std::vector<VmState> out;
  out.reserve(static_cast<std::size_t>(m_v + 1) * (m_v + 2) / 2);
  for (int idle = m_v; idle >= 0; --idle)
    for (int occupied = m_v - idle; occupied >= 0; --occupied)
      out.push_back({idle, occupied, m_v - idle - occupied});
  return out;
}

std::size_t state_index(const VmState& s) {
  // Block for "m - idle = a" starts at a(a+1)/2; within it occupied runs a..0.
  std::size_t a = static_cast<std::size_t>(s.occupied + s.failed);
  return a * (a + 1) / 2 + static_cast<std::size_t>(s.failed);
}

std::size_t CtmcModel::index_of(const VmState& s) const { return state_index(s); }

CtmcModel build_generator(int m_v, const Rates& rates, HandoverRule handover) {
  if (rates.arrival < 0 || rates.service < 0 || rates.failure < 0 || rates.repair < 0) {
    throw ConfigError("CTMC rates must be >= 0");
  }
  CtmcModel model;
  model.m_v = m_v;
  model.rates = rates;
  model.handover = handover;
  model.states = enumerate_states(m_v);
  const auto n = static_cast<Eigen::Index>(model.states.size());
  model.generator = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const VmState& s = model.states[static_cast<std::size_t>(k)];
    for_each_transition(s, rates, handover, [&](const VmState& dest, double rate) {
      if (rate <= 0.0) return;
      auto j = static_cast<Eigen::Index>(state_index(dest));
      model.generator(k, j) += rate;
    });
    model.generator(k, k) = -(model.generator.row(k).sum() - model.generator(k, k));
  }
  return model;
}

SteadyState steady_state(const CtmcModel& model, const SolveOptions& options) {
  const Eigen::MatrixXd& q = model.generator;
  const int n = static_cast<int>(q.rows());

  int n_comp = 0;
  std::vector<int> comp = strongly_connected(q, n_comp);
  std::vector<char> closed(n_comp, 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && q(i, j) > 0.0 && comp[i] != comp[j]) closed[comp[i]] = 0;

  std::vector<char> eligible(n, 1);
  if (options.initial) eligible = reachable_from(q, static_cast<int>(state_index(*options.initial)));
  std::vector<int> candidates;
  for (int c = 0; c < n_comp; ++c) {
    if (!closed[c]) continue;
    for (int i = 0; i < n; ++i) {
      if (comp[i] == c && eligible[i]) {
        candidates.push_back(c);
        break;
      }
    }
  }
  if (candidates.size() != 1) {
    std::string witness;
    for (std::size_t k = 0; k < std::min<std::size_t>(candidates.size(), 2); ++k) {
      for (int i = 0; i < n; ++i) {
        if (comp[i] == candidates[k]) {
          witness += " " + to_string(model.states[static_cast<std::size_t>(i)]);
          break;
        }
      }
    }
    throw NumericError("reducible chain: " + std::to_string(candidates.size()) +
                       " closed classes, e.g. containing" + witness);
  }

  std::vector<int> members;
  for (int i = 0; i < n; ++i)
    if (comp[i] == candidates[0]) members.push_back(i);
  const auto m = static_cast<Eigen::Index>(members.size());
  Eigen::MatrixXd sub(m, m);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b) sub(a, b) = q(members[a], members[b]);

  Eigen::MatrixXd system = sub.transpose();
  system.row(m - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  rhs(m - 1) = 1.0;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  Eigen::VectorXd tau = lu.solve(rhs);
  if (!tau.allFinite()) throw NumericError("steady-state solve produced non-finite values");

  for (Eigen::Index a = 0; a < m; ++a) {
    if (tau(a) < -1e-12) {
      throw NumericError("steady-state probability " + std::to_string(tau(a)) + " for state " +
                         to_string(model.states[static_cast<std::size_t>(members[a])]));
    }
    if (tau(a) < 0.0) tau(a) = 0.0;
  }
  tau /= tau.sum();

  SteadyState out;
  out.probabilities.assign(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index a = 0; a < m; ++a) out.probabilities[members[a]] = tau(a);

  Eigen::Map<const Eigen::RowVectorXd> full(out.probabilities.data(), n);
  out.residual = (full * q).cwiseAbs().maxCoeff();
  double scale = std::max(1.0, q.diagonal().cwiseAbs().maxCoeff());
  if (out.residual > 1e-9 * scale) {
    throw NumericError("steady-state residual " + std::to_string(out.residual) + " too large");
  }

  if (options.closed_form_check) {
    // tau = 1 (Q + ones)^-1, i.e. (Q + ones)^T tau^T = 1.
    Eigen::MatrixXd shifted = sub.transpose();
    shifted.array() += 1.0;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu2(shifted);
    if (lu2.rcond() > 1e-10) {
      Eigen::VectorXd alt = lu2.solve(Eigen::VectorXd::Ones(m));
      out.closed_form_checked = true;
      out.closed_form_gap = (alt - tau).cwiseAbs().maxCoeff();
      if (!(out.closed_form_gap <= 1e-8)) {
        throw NumericError("closed-form steady state disagrees by " +
                           std::to_string(out.closed_form_gap));
      }
    }
  }
  return out;
}

GillespieResult gillespie_occupancy(const CtmcModel& model, double horizon, double burn_in,
                                    std::uint64_t seed, std::optional<VmState> start) {
  if (!(horizon > burn_in && burn_in >= 0.0)) {
    throw ConfigError("gillespie requires horizon > burn_in >= 0");
  }
  const Rates& r = model.rates;
  GillespieResult out;
  out.occupancy.assign(model.size(), 0.0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  VmState s = start.value_or(VmState{model.m_v, 0, 0});
  if (s.idle + s.occupied + s.failed != model.m_v) throw ConfigError("start state has wrong VM total");
  double t = 0.0;
  for (;;) {
    const double arrival = r.arrival;  // arrivals in a full system are blocked, not removed
    const double service = s.occupied * r.service;
    const double idle_fail = s.idle * r.failure;
    const double busy_fail = s.occupied * r.failure;
    const double repair = s.failed * r.repair;
    const double total = arrival + service + idle_fail + busy_fail + repair;

    double dt = total > 0.0 ? -std::log1p(-unit(rng)) / total
                            : std::numeric_limits<double>::infinity();
    double t_next = std::min(t + dt, horizon);
    double overlap = t_next - std::max(t, burn_in);
    if (overlap > 0.0) out.occupancy[state_index(s)] += overlap;
    if (t + dt >= horizon) break;
    t += dt;

    const bool counting = t > burn_in;
    ++out.events;
    double pick = unit(rng) * total;
    if ((pick -= arrival) < 0.0) {
      if (counting) ++out.arrivals;
      if (s.idle > 0) {
        s = {s.idle - 1, s.occupied + 1, s.failed};
        if (counting) ++out.admitted;
      }
    } else if ((pick -= service) < 0.0) {
      s = {s.idle + 1, s.occupied - 1, s.failed};
      if (counting) ++out.completed;
    } else if ((pick -= idle_fail) < 0.0) {
      s = {s.idle - 1, s.occupied, s.failed + 1};
    } else if ((pick -= busy_fail) < 0.0) {
      if (s.idle > 0) {
        if (model.handover == HandoverRule::kTaskMigrates) {
          s = {s.idle - 1, s.occupied, s.failed + 1};
        } else {
          s = {s.idle - 1, s.occupied - 1, s.failed + 2};
        }
        if (counting) ++out.handovers;
      } else {
        s = {s.idle, s.occupied - 1, s.failed + 1};
        if (counting) ++out.aborted;
      }
    } else if (s.failed > 0) {
      s = {s.idle + 1, s.occupied, s.failed - 1};
    }
  }
  out.observed_time = horizon - burn_in;
  for (double& v : out.occupancy) v /= out.observed_time;
  return out;
}

double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw ConfigError("distributions differ in size");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return 0.5 * sum;
}

}  // namespace mecdep::ctmc
