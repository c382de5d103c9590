#include <cmath>
#include <random>

#include "doctest.h"
#include "mecdep/ctmc.hpp"
#include "mecdep/errors.hpp"

using namespace mecdep;
using ctmc::VmState;

namespace {

double erlang_b(int servers, double load) {
  double b = 1.0;
  for (int k = 1; k <= servers; ++k) b = load * b / (k + load * b);
  return b;
}

double binomial(int n, int k, double q) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)) *
         std::pow(q, k) * std::pow(1 - q, n - k);
}

double rate(const ctmc::CtmcModel& m, VmState from, VmState to) {
  return m.generator(static_cast<Eigen::Index>(m.index_of(from)),
                     static_cast<Eigen::Index>(m.index_of(to)));
}

}  // namespace

TEST_SUITE("ctmc") {
  TEST_CASE("state space layout") {
    for (int m = 1; m <= 60; ++m) {
      auto states = ctmc::enumerate_states(m);
      REQUIRE(states.size() == static_cast<std::size_t>((m + 1) * (m + 2) / 2));
      for (std::size_t i = 0; i < states.size(); ++i) {
        CHECK(ctmc::state_index(states[i]) == i);
        if (i > 0) CHECK(states[i] < states[i - 1]);
      }
      CHECK(states.front() == VmState{m, 0, 0});
      CHECK(states.back() == VmState{0, 0, m});
    }
  }

  TEST_CASE("generator rows and transitions") {
    ctmc::Rates r{2.0, 0.7, 0.1, 1.3};
    auto m = ctmc::build_generator(4, r);
    CHECK(m.generator.rowwise().sum().cwiseAbs().maxCoeff() < 1e-12);
    CHECK(rate(m, {2, 1, 1}, {1, 2, 1}) == 2.0);
    CHECK(rate(m, {2, 1, 1}, {3, 0, 1}) == doctest::Approx(0.7));
    CHECK(rate(m, {2, 1, 1}, {1, 1, 2}) == doctest::Approx(2 * 0.1 + 0.1));
    CHECK(rate(m, {2, 1, 1}, {3, 1, 0}) == doctest::Approx(1.3));
    CHECK(rate(m, {0, 3, 1}, {0, 2, 2}) == doctest::Approx(0.3));
    CHECK(rate(m, {0, 3, 1}, {1, 2, 1}) == doctest::Approx(2.1));

    auto lost = ctmc::build_generator(4, r, ctmc::HandoverRule::kTaskLost);
    CHECK(lost.generator.rowwise().sum().cwiseAbs().maxCoeff() < 1e-12);
    CHECK(rate(lost, {2, 1, 1}, {1, 1, 2}) == doctest::Approx(0.2));
    CHECK(rate(lost, {2, 1, 1}, {1, 0, 3}) == doctest::Approx(0.1));
  }

  TEST_CASE("Erlang-B without failures") {
    for (int servers : {1, 3, 8, 20}) {
      for (double load : {0.5, 4.0, 15.0}) {
        auto m = ctmc::build_generator(servers, {load, 1.0, 0.0, 0.0});
        ctmc::SolveOptions o;
        o.initial = VmState{servers, 0, 0};
        auto ss = ctmc::steady_state(m, o);
        CHECK(ss.probabilities[m.index_of({0, servers, 0})] ==
              doctest::Approx(erlang_b(servers, load)).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("failed count is binomial when tasks migrate") {
    const int vms = 7;
    const double delta = 0.3, gamma = 0.8;
    auto m = ctmc::build_generator(vms, {5.0, 0.9, delta, gamma});
    auto ss = ctmc::steady_state(m);
    CHECK(ss.residual <= 1e-9);
    std::vector<double> failed(vms + 1, 0.0);
    for (std::size_t i = 0; i < m.size(); ++i) failed[m.states[i].failed] += ss.probabilities[i];
    for (int k = 0; k <= vms; ++k) {
      CHECK(failed[k] == doctest::Approx(binomial(vms, k, delta / (delta + gamma))).epsilon(1e-10));
    }
  }

  TEST_CASE("steady state checks") {
    auto m = ctmc::build_generator(30, {9.0, 0.4, 0.1, 1.0});
    auto ss = ctmc::steady_state(m);
    double mass = 0.0;
    for (double x : ss.probabilities) {
      CHECK(x >= 0.0);
      mass += x;
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(ss.residual <= 1e-9);
    CHECK(ss.closed_form_checked);
    CHECK(ss.closed_form_gap <= 1e-8);

    auto frozen = ctmc::build_generator(3, {1.0, 1.0, 0.0, 0.0});
    CHECK_THROWS_AS(ctmc::steady_state(frozen), NumericError);
  }

  TEST_CASE("Gillespie agrees with the linear solve") {
    std::mt19937_64 pick(7);
    for (int trial = 0; trial < 3; ++trial) {
      std::uniform_real_distribution<double> u(0.1, 3.0);
      int vms = 2 + static_cast<int>(pick() % 5);
      auto m = ctmc::build_generator(vms, {u(pick), u(pick), u(pick) * 0.3, u(pick)},
                                     trial % 2 ? ctmc::HandoverRule::kTaskLost
                                               : ctmc::HandoverRule::kTaskMigrates);
      auto ss = ctmc::steady_state(m);
      auto g = ctmc::gillespie_occupancy(m, 2e5, 1e3, 11 + trial);
      CHECK(ctmc::total_variation(g.occupancy, ss.probabilities) < 0.02);
      CHECK(g.admitted <= g.arrivals);
    }
  }
}
