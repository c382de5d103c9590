#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mecdep/errors.hpp"
#include "mecdep/specfun.hpp"

using namespace mecdep;

namespace {

const double kThetas[] = {0.001, 0.1, 0.5, 1.0, 2.0, 10.0, 1000.0};

// Reference values computed with mpmath at 30 digits.
struct Row {
  double eta;
  double f[7];
  double tail[7];
};

const Row kRows[] = {
    {3.0,
     {0.99975014275721972, 0.97633568718963028, 0.90164425852750967, 0.83564884826472105,
      0.74821341921974863, 0.51314415587595592, 0.12042015749070536},
     {0.099975014275721972, 0.4531748823517047, 0.71563552224382803, 0.83564884826472105,
      0.94268983668877857, 1.1055355704062877, 1.2042015749070536}},
    {4.0,
     {0.99966686652392054, 0.96853408234038925, 0.8704197513671032, 0.78539816339744831,
      0.67551085885603996, 0.39987600505576614, 0.048673274462456586},
     {0.015806120998095595, 0.15313868458483473, 0.30773985433519367, 0.39269908169872415,
      0.47765830906225464, 0.63225947881261358, 0.76959204239935271}},
    {6.0,
     {0.99960024981832456, 0.96233138307221912, 0.84611568158053723, 0.74710145578284836,
      0.62185174099557647, 0.32576116537060393, 0.022184491237608465},
     {0.0024990006245458114, 0.051832002874928759, 0.13325486973368333, 0.18677536394571209,
      0.2467820269561586, 0.37801234690222027, 0.55461228094021163}},
};

}  // namespace

TEST_SUITE("specfun") {
  TEST_CASE("hypergeometric factor against reference values") {
    for (const auto& row : kRows) {
      for (int i = 0; i < 7; ++i) {
        double got = specfun::gauss_2f1_coverage({row.eta, kThetas[i]});
        CAPTURE(row.eta);
        CAPTURE(kThetas[i]);
        CHECK(got == doctest::Approx(row.f[i]).epsilon(1e-13));
      }
    }
  }

  TEST_CASE("tail integral against reference values") {
    for (const auto& row : kRows) {
      for (int i = 0; i < 7; ++i) {
        double lower = std::pow(kThetas[i], -1.0 / row.eta);
        CAPTURE(row.eta);
        CAPTURE(kThetas[i]);
        CHECK(specfun::tail_integral(row.eta, lower) == doctest::Approx(row.tail[i]).epsilon(1e-11));
      }
    }
    CHECK(specfun::tail_integral(4.0, 1.0) == doctest::Approx(std::numbers::pi / 8).epsilon(1e-12));
    CHECK(specfun::tail_integral(3.0, 0.0) == doctest::Approx(1.2091995761561452).epsilon(1e-11));
    CHECK(specfun::tail_integral(4.0, INFINITY) == 0.0);
  }

  TEST_CASE("eta = 4 reduces to arctan(sqrt(theta)) / sqrt(theta)") {
    for (double e = -3.0; e <= 3.0; e += 0.1) {
      double t = std::pow(10.0, e);
      double closed = std::atan(std::sqrt(t)) / std::sqrt(t);
      CHECK(specfun::gauss_2f1_coverage({4.0, t}) == doctest::Approx(closed).epsilon(1e-12));
    }
  }

  TEST_CASE("continuity across the evaluation regimes") {
    for (double eta : {2.5, 3.0, 4.0, 5.0, 8.0}) {
      for (double edge : {0.5, 4.0}) {
        double below = specfun::gauss_2f1_coverage({eta, edge * (1 - 1e-12)});
        double above = specfun::gauss_2f1_coverage({eta, edge * (1 + 1e-12)});
        CHECK(below == doctest::Approx(above).epsilon(1e-11));
      }
    }
    CHECK(specfun::gauss_2f1_coverage({4.0, 0.0}) == 1.0);
  }

  TEST_CASE("log gamma") {
    CHECK(specfun::log_gamma(3.575) == doctest::Approx(1.28463196485200362).epsilon(1e-14));
    CHECK(specfun::log_gamma(0.5) == doctest::Approx(0.5723649429247001).epsilon(1e-14));
    CHECK_THROWS_AS(specfun::log_gamma(0.0), ConfigError);
    CHECK_THROWS_AS(specfun::tail_integral(2.0, 1.0), ConfigError);
  }
}
