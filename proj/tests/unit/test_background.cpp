#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "sphereosc/background.hpp"
#include "sphereosc/errors.hpp"

using namespace sphereosc;
using doctest::Approx;

TEST_CASE("radius law") {
  const BackgroundModel still(5.0, {});
  CHECK(still.radius_at(17.3) == 5.0);
  const BackgroundModel one(5.0, {{0.01, 2.0}});
  CHECK(one.radius_at(0.0) == 5.0);
  CHECK(one.radius_at(std::numbers::pi / 4) == Approx(5.01).epsilon(1e-14));
}

TEST_CASE("curvature") {
  CHECK(BackgroundModel(5.0, {}).curvature_first_order(3.0) == Approx(0.04).epsilon(1e-15));
  const BackgroundModel one(5.0, {{0.01, 2.0}});
  CHECK(one.curvature_first_order(std::numbers::pi / 4) == Approx(0.03984).epsilon(1e-14));
  CHECK(one.lambda0() == Approx(0.04).epsilon(1e-15));

  // Remainder of the linearization is second order in alpha.
  auto remainder = [](double alpha) {
    const BackgroundModel m(5.0, {{alpha, 2.0}});
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
      const double t = 0.05 * k;
      worst = std::max(worst, std::abs(m.curvature_exact(t) - m.curvature_first_order(t)));
    }
    return worst;
  };
  for (double alpha : {0.02, 0.01, 0.005}) {
    CHECK(remainder(alpha) / remainder(alpha / 2) == Approx(4.0).epsilon(0.05));
  }
}

TEST_CASE("signals") {
  CHECK(BackgroundModel(5.0, {}).v0(1.3) == 0.0);
  CHECK(BackgroundModel(5.0, {}).v0_tilde(1.3) == 0.0);
  const BackgroundModel one(5.0, {{0.01, 2.0}});
  CHECK(one.v0(0.0) == Approx(0.004).epsilon(1e-14));
  CHECK(one.v0_tilde(std::numbers::pi / 4) == Approx(0.002).epsilon(1e-14));

  const BackgroundModel two(5.0, {{0.01, 2.0}, {0.02, 3.1}});
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> when(0.0, 20.0);
  for (int k = 0; k < 50; ++k) {
    const double t = when(rng);
    CHECK(two.v0(t) + two.vector_potential_amplitude(t) == 0.0);
  }

  // d/dt v0_tilde / omega = sqrt(lambda0) alpha cos(omega t) for a single mode.
  const double h = 1e-5;
  for (int k = 0; k < 20; ++k) {
    const double t = when(rng);
    const double fd = (one.v0_tilde(t + h) - one.v0_tilde(t - h)) / (2 * h) / 2.0;
    CHECK(fd == Approx(0.2 * 0.01 * std::cos(2.0 * t)).epsilon(1e-6).scale(1e-3));
  }
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(BackgroundModel(0.0, {}), ConfigError);
  CHECK_THROWS_AS(BackgroundModel(-1.0, {}), ConfigError);
  CHECK_THROWS_AS(BackgroundModel(5.0, {{-0.1, 1.0}}), ConfigError);
  CHECK_THROWS_AS(BackgroundModel(5.0, {{0.1, 0.0}}), ConfigError);
  CHECK_THROWS_AS(BackgroundModel(5.0, {{0.3, 1.0}, {0.3, 2.0}}), ConfigError);
  CHECK_NOTHROW(BackgroundModel(5.0, {{0.25, 1.0}, {0.25, 2.0}}));
  CHECK_NOTHROW(BackgroundModel(5.0, {{0.3, 1.0}, {0.3, 2.0}}, 1.0, 0.2));

  const BackgroundModel flat(std::numeric_limits<double>::infinity(), {{1.0, 1.0}});
  CHECK(flat.lambda0() == 0.0);
  CHECK(flat.v0(0.4) == 0.0);
}

TEST_CASE("close modes are reported") {
  const BackgroundModel m(5.0, {{0.01, 2.0}, {0.01, 2.01}, {0.01, 3.0}});
  const auto pairs = m.close_mode_pairs(100.0);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].first == 0);
  CHECK(pairs[0].second == 1);
  CHECK(m.close_mode_pairs(1000.0).empty());
}
