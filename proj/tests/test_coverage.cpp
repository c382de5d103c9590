#include <cmath>

#include "doctest.h"
#include "mecdep/coverage.hpp"
#include "mecdep/errors.hpp"

using namespace mecdep;

TEST_SUITE("coverage") {
  TEST_CASE("neighbor pmf reference values and normalization") {
    CHECK(coverage::neighbor_pmf(0, 6.4, 0.1) ==
          doctest::Approx(2.73197499822337716e-5).epsilon(1e-12));
    CHECK(coverage::neighbor_pmf(1, 6.4, 0.1) ==
          doctest::Approx(9.25010550637822707e-5).epsilon(1e-12));
    CHECK(coverage::neighbor_pmf(64, 6.4, 0.1) ==
          doctest::Approx(0.0112056638014014891).epsilon(1e-12));
    for (double ratio : {0.5, 4.0, 64.0, 400.0}) {
      double sum = 0.0;
      double mean = 0.0;
      for (int n = 0; n < 20000; ++n) {
        double q = coverage::neighbor_pmf(n, ratio, 1.0);
        sum += q;
        mean += n * q;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(mean == doctest::Approx(ratio).epsilon(1e-9));
    }
  }

  TEST_CASE("interference factors at the reference point") {
    CHECK(coverage::laplace_out(0.1, 0.25, 4.0, 4.0) ==
          doctest::Approx(0.907689056122698506).epsilon(1e-14));
    CHECK(coverage::laplace_in(0.1, 0.25, 4.0) ==
          doctest::Approx(0.914139173185383228).epsilon(1e-14));
    auto b = coverage::osp_analytical(validate(SystemParams{}));
    CHECK(b.osp == doctest::Approx(0.828924783888954951).epsilon(1e-13));
    CHECK(b.osp == doctest::Approx(b.noise_factor * b.lt_out * b.lt_in));
  }

  TEST_CASE("hypergeometric and integral routes agree") {
    for (double eta : {2.5, 3.0, 4.0, 6.0}) {
      for (double t : {1e-3, 0.1, 1.0, 10.0, 1e3}) {
        CHECK(coverage::laplace_out(t, 0.4, 3.0, eta) ==
              doctest::Approx(coverage::laplace_out_integral(t, 0.4, 3.0, eta)).epsilon(1e-10));
      }
    }
    SystemParams p;
    p.theta_db = 3.0;
    auto fast = coverage::osp_analytical(validate(p));
    auto general = coverage::osp_analytical_general(validate(p));
    CHECK(fast.osp == doctest::Approx(general.osp).epsilon(1e-12));
  }

  TEST_CASE("in-cell closed form matches the neighbor sum") {
    for (double pa : {0.1, 0.25, 0.9}) {
      for (double t : {0.01, 1.0, 100.0}) {
        CHECK(coverage::laplace_in(t, pa, 4.0) ==
              doctest::Approx(coverage::laplace_in_series(t, pa, 6.4, 0.1, 16, 5000))
                  .epsilon(1e-9));
      }
    }
    CHECK_THROWS_AS(coverage::laplace_in_series(1.0, 0.25, 6.4, 0.1, 16, 10), NumericError);
  }

  TEST_CASE("limits and monotonicity") {
    SystemParams p;
    p.theta_db = -60.0;
    CHECK(coverage::osp_analytical(validate(p)).osp == doctest::Approx(1.0).epsilon(1e-5));
    p = SystemParams{};
    p.p_a_override = 0.0;
    p.sigma2_dbm = -INFINITY;
    CHECK(coverage::osp_analytical(validate(p)).osp == 1.0);

    double prev = 2.0;
    for (double th = -20.0; th <= 10.0; th += 1.0) {
      SystemParams q;
      q.theta_db = th;
      double o = coverage::osp_analytical(validate(q)).osp;
      CHECK(o < prev);
      prev = o;
    }
    prev = 2.0;
    for (double pa = 0.0; pa <= 1.0; pa += 0.1) {
      SystemParams q;
      q.p_a_override = pa;
      double o = coverage::osp_analytical(validate(q)).osp;
      CHECK(o < prev);
      prev = o;
    }
  }
}
