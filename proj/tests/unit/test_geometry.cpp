#include <doctest.h>

#include <cmath>
#include <random>

#include "sphereosc/errors.hpp"
#include "sphereosc/geometry.hpp"

using namespace sphereosc;
using doctest::Approx;

namespace {

double rel(const Vec3& a, const Vec3& b) { return (a - b).norm() / b.norm(); }

}  // namespace

TEST_CASE("embedding") {
  const Vec3 pole = embed({0.0, 0.0, 1}, 0.04);
  CHECK(pole.isApprox(Vec3(0, 0, 5), 1e-15));
  CHECK(chart_stretch({3.0, 4.0, 1}, 0.04) == Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(embed({3.0, 4.0, 1}, 0.04).isApprox(Vec3(3, 4, 5) / std::sqrt(2.0), 1e-15));
  CHECK(embed({3.0, 4.0, -1}, 0.04)[2] == Approx(-5.0 / std::sqrt(2.0)));
  CHECK_THROWS_AS(embed({1.0, 1.0, 1}, 0.0), ConfigError);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> c(-20.0, 20.0);
  for (int k = 0; k < 100; ++k) {
    const Vec3 r = embed({c(rng), c(rng), 1}, 0.04);
    CHECK(std::abs(r.squaredNorm() - 25.0) <= 1e-12 * 25.0);
  }
}

TEST_CASE("derivatives: static background and tangency") {
  const BackgroundModel still(5.0, {});
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> c(-3.0, 3.0);
  for (int k = 0; k < 50; ++k) {
    const ChartPoint p{c(rng), c(rng), 1};
    const auto d = geometry_derivatives(p, still, 1.7);
    CHECK(d.rt.norm() == 0.0);
    const Vec3 r = embed(p, 0.04);
    CHECK(std::abs(d.rx.dot(r)) <= 1e-13 * d.rx.norm() * r.norm());
    CHECK(std::abs(d.ry.dot(r)) <= 1e-13 * d.ry.norm() * r.norm());
  }
}

TEST_CASE("derivatives match centered finite differences") {
  const BackgroundModel model(5.0, {{0.02, 1.3}, {0.01, 2.9}});
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> c(-3.0, 3.0), when(0.0, 10.0);
  const double h = 1e-6;
  for (int k = 0; k < 100; ++k) {
    const ChartPoint p{c(rng), c(rng), k % 2 ? 1 : -1};
    const double t = when(rng);
    const double lam = model.curvature_exact(t);
    const auto d = geometry_derivatives(p, model, t);
    const Vec3 fx = (embed({p.x + h, p.y, p.hemisphere}, lam) - embed({p.x - h, p.y, p.hemisphere}, lam)) / (2 * h);
    const Vec3 fy = (embed({p.x, p.y + h, p.hemisphere}, lam) - embed({p.x, p.y - h, p.hemisphere}, lam)) / (2 * h);
    CHECK(rel(d.rx, fx) <= 1e-7);
    CHECK(rel(d.ry, fy) <= 1e-7);
    const double ht = 1e-2;
    auto at = [&](double s) { return embed(p, model.curvature_exact(t + s)); };
    const Vec3 ft = (45.0 * (at(ht) - at(-ht)) - 9.0 * (at(2 * ht) - at(-2 * ht)) + (at(3 * ht) - at(-3 * ht))) / (60.0 * ht);
    CHECK(rel(d.rt, ft) <= 1e-7);
  }
}

TEST_CASE("vector potential") {
  const BackgroundModel still(5.0, {});
  CHECK(exact_vector_potential({1.0, -2.0, 1}, still, 3.0).norm() == 0.0);
  CHECK(exact_phi({1.0, -2.0, 1}, still, 3.0) == 0.0);

  const BackgroundModel model(5.0, {{1e-3, 1.7}});
  for (double t : {0.0, 0.4, 2.2}) CHECK(exact_vector_potential({0.0, 0.0, 1}, model, t).norm() == 0.0);

  // Deviation from the first-order form is second order in alpha.
  auto deviation = [](double alpha) {
    const BackgroundModel m(5.0, {{alpha, 1.7}});
    double worst = 0.0;
    for (double x = -3.0; x <= 3.0; x += 0.5)
      for (double y = -3.0; y <= 3.0; y += 0.5)
        for (double t = 0.0; t < 4.0; t += 0.37) {
          const ChartPoint p{x, y, 1};
          worst = std::max(worst, (exact_vector_potential(p, m, t) - first_order_vector_potential(p, m, t)).norm());
        }
    return worst;
  };
  CHECK(deviation(2e-3) / deviation(1e-3) == Approx(4.0).epsilon(0.05));
  CHECK(deviation(1e-3) / deviation(5e-4) == Approx(4.0).epsilon(0.05));
}

TEST_CASE("scalar potential") {
  auto largest = [](double alpha) {
    const BackgroundModel m(5.0, {{alpha, 1.7}});
    double worst = 0.0;
    for (double x = -3.0; x <= 3.0; x += 0.5)
      for (double t = 0.0; t < 4.0; t += 0.37) worst = std::max(worst, std::abs(exact_phi({x, 0.7, 1}, m, t)));
    return worst;
  };
  CHECK(largest(2e-3) / largest(1e-3) == Approx(4.0).epsilon(1e-6));

  const BackgroundModel m(5.0, {{1e-3, 1.7}});
  for (double t : {0.3, 1.9}) CHECK(exact_phi({1.2, -0.4, 1}, m, t) == Approx(exact_phi({1.2, -0.4, -1}, m, t)).epsilon(1e-14));
}
