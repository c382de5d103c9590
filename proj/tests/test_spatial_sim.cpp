#include <cmath>
#include <cstdlib>

#include "doctest.h"
#include "mecdep/coverage.hpp"
#include "mecdep/errors.hpp"
#include "mecdep/spatial_sim.hpp"

using namespace mecdep;

namespace {

sim::SimConfig small(std::int64_t trials, std::uint64_t seed = 3) {
  sim::SimConfig c;
  c.window_km = 40.0;
  c.trials = trials;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_SUITE("spatial_sim") {
  TEST_CASE("PPP counts are Poisson") {
    std::mt19937_64 rng(5);
    double sum = 0.0, sq = 0.0;
    const int reps = 2000;
    for (int i = 0; i < reps; ++i) {
      double n = static_cast<double>(sim::sample_ppp(0.1, 20.0, rng).size());
      sum += n;
      sq += n * n;
    }
    double mean = sum / reps;
    double var = sq / reps - mean * mean;
    CHECK(mean == doctest::Approx(40.0).epsilon(0.02));
    CHECK(var == doctest::Approx(40.0).epsilon(0.1));
  }

  TEST_CASE("torus distance wraps") {
    CHECK(sim::distance({1, 1}, {9, 1}, 10.0, true) == doctest::Approx(2.0));
    CHECK(sim::distance({1, 1}, {9, 1}, 10.0, false) == doctest::Approx(8.0));
  }

  TEST_CASE("realizations use channel inversion and nearest-BS association") {
    auto p = validate(SystemParams{});
    sim::Realization r;
    sim::sample_realization(p, small(1), 0, 1.0, r);
    double rho = dbm_to_mw(p.rho_dbm);
    REQUIRE(!r.bs.empty());
    for (std::size_t i = 0; i < r.devices.size(); ++i) {
      double best = INFINITY;
      for (const auto& b : r.bs) best = std::min(best, sim::distance(r.devices[i], b, 40.0, true));
      CHECK(r.distance[i] == doctest::Approx(best));
      CHECK(r.tx_power[i] == doctest::Approx(rho * std::pow(r.distance[i], p.eta)));
    }
    CHECK(r.tagged_bs >= 0);
  }

  TEST_CASE("estimates") {
    auto one = sim::make_estimate(1, 1, 0);
    CHECK(one.std_error == 0.5);
    auto e = sim::make_estimate(30, 100, 0);
    CHECK(e.mean == 0.3);
    CHECK(e.std_error == doctest::Approx(std::sqrt(0.3 * 0.7 / 100)));
    CHECK(e.ci95_low < 0.3);
    CHECK(e.ci95_high > 0.3);
    CHECK(sim::make_estimate(10, 1000, 2).resample_warning);
  }

  TEST_CASE("deterministic and independent of the thread count") {
    auto p = validate(SystemParams{});
    setenv("MEC_DEPEND_THREADS", "1", 1);
    auto a = sim::simulate_osp(p, small(600));
    setenv("MEC_DEPEND_THREADS", "3", 1);
    auto b = sim::simulate_osp(p, small(600));
    unsetenv("MEC_DEPEND_THREADS");
    CHECK(a.mean == b.mean);
    auto c = sim::simulate_osp(p, small(600, 4));
    CHECK(c.trials == 600);
  }

  TEST_CASE("grid is monotone and near the analysis") {
    auto p = validate(SystemParams{});
    std::vector<double> pa = {0.1, 0.3, 0.5};
    std::vector<double> th = {-20.0, -10.0, -5.0, 0.0};
    auto g = sim::simulate_osp_grid(p, small(2000), pa, th);
    for (std::size_t j = 0; j < pa.size(); ++j) {
      for (std::size_t k = 0; k < th.size(); ++k) {
        const auto& e = g.estimates[j][k];
        if (k > 0) CHECK(e.mean <= g.estimates[j][k - 1].mean);
        if (j > 0) CHECK(e.mean <= g.estimates[j - 1][k].mean);
        SystemParams q = p;
        q.p_a_override = pa[j];
        q.theta_db = th[k];
        double a = coverage::osp_analytical(validate(q)).osp;
        CHECK(std::abs(a - e.mean) < 0.08);
      }
    }
  }

  TEST_CASE("bad configs") {
    auto p = validate(SystemParams{});
    auto c = small(10);
    c.trials = 0;
    CHECK_THROWS_AS(sim::simulate_osp(p, c), ConfigError);
  }
}
