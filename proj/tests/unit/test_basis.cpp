#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "sphereosc/basis.hpp"
#include "sphereosc/errors.hpp"
#include "sphereosc/hamiltonian.hpp"

using namespace sphereosc;
using doctest::Approx;

namespace {

// Adaptive 2D integral over the plane, nested tanh-sinh.
template <class F>
double plane_integral(F f) {
  boost::math::quadrature::tanh_sinh<double> outer, inner;
  const double inf = std::numeric_limits<double>::infinity();
  return outer.integrate(
      [&](double x) {
        return inner.integrate([&](double y) { return f(x, y); }, -inf, inf, 1e-14);
      },
      -inf, inf, 1e-14);
}

}  // namespace

TEST_CASE("dimensions") {
  CHECK(level_dimension(0) == 1);
  CHECK(level_dimension(2) == 6);
  CHECK(level_dimension(12) == 91);
  const BasisSpec spec{12, 4, 0};
  CHECK(spec.core_dim() == 91);
  CHECK(spec.padded_dim() == level_dimension(16));
  CHECK(spec.quadrature_order() == 28);
  CHECK(enumerate_basis(spec).size() == 91);
}

TEST_CASE("index ordering") {
  const BasisIndex idx(3);
  CHECK(idx.index(0, 0) == 0);
  CHECK(idx.index(0, 1) == 1);
  CHECK(idx.index(1, 0) == 2);
  CHECK(idx.index(0, 2) == 3);
  CHECK(idx.index(3, 0) == 9);
  CHECK(idx.index(2, 2) == -1);
  for (int i = 0; i < idx.size(); ++i) CHECK(idx.index(idx.nx(i), idx.ny(i)) == i);
}

TEST_CASE("BasisSpec validation") {
  CHECK_THROWS_AS(BasisSpec({-1, 4, 0}).validate(), ConfigError);
  CHECK_THROWS_AS(BasisSpec({4, -1, 0}).validate(), ConfigError);
  CHECK_THROWS_AS(BasisSpec({4, 4, 8}).validate(), QuadratureOrderError);
  CHECK_NOTHROW(BasisSpec({4, 4, 9}).validate());
}

TEST_CASE("Gauss-Hermite rule") {
  for (int order : {1, 5, 20, 41}) {
    const auto rule = gauss_hermite(order);
    CHECK(rule.weights.sum() == Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
    for (int k = 0; k < order; ++k) CHECK(rule.nodes[k] == -rule.nodes[order - 1 - k]);
    // Exact for polynomials of degree 2 order - 1.
    for (int p = 0; p <= 2 * order - 2; p += 2) {
      double sum = 0.0;
      for (int k = 0; k < order; ++k) sum += rule.weights[k] * std::pow(rule.nodes[k], p);
      CHECK(sum == Approx(std::tgamma(0.5 * (p + 1))).epsilon(1e-12));
    }
  }
}

TEST_CASE("phase-space operators") {
  const BasisSpec spec{6, 4, 0};
  const auto ops = build_xy_ops(spec, 1.0);
  const BasisIndex idx(spec.padded_n_max());
  CHECK(ops.x(idx.index(0, 0), idx.index(1, 0)).real() == Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(std::abs(ops.px(0, 0)) == 0.0);

  for (double hbar : {1.0, 0.3}) {
    const auto o = build_xy_ops(spec, hbar);
    const ComplexMatrix comm = o.x * o.px - o.px * o.x;
    const ComplexMatrix commy = o.y * o.py - o.py * o.y;
    const ComplexMatrix mixed = o.x * o.py - o.py * o.x;
    for (int a = 0; a < idx.size(); ++a) {
      if (idx.level(a) > spec.padded_n_max() - 1) continue;
      for (int b = 0; b < idx.size(); ++b) {
        if (idx.level(b) > spec.padded_n_max() - 1) continue;
        const Complex expect = a == b ? Complex(0.0, hbar) : Complex(0.0, 0.0);
        CHECK(std::abs(comm(a, b) - expect) <= 1e-14);
        CHECK(std::abs(commy(a, b) - expect) <= 1e-14);
        CHECK(std::abs(mixed(a, b)) <= 1e-14);
      }
    }
  }
}

TEST_CASE("scalar functions of r^2") {
  const BasisSpec spec{6, 4, 0};
  const auto one = build_scalar_r2_function(spec, [](double) { return 1.0; });
  CHECK((one.entries - ComplexMatrix::Identity(one.dim(), one.dim())).cwiseAbs().maxCoeff() <= 1e-13);

  const auto ops = build_xy_ops(spec, 1.0);
  const auto r2 = build_scalar_r2_function(spec, [](double s) { return s; });
  const ComplexMatrix ladder = ops.x * ops.x + ops.y * ops.y;
  CHECK((project_to_core(r2.entries, spec) - project_to_core(ladder, spec)).cwiseAbs().maxCoeff() <=
        1e-12);
  CHECK(r2.hermiticity_defect() == 0.0);
}

TEST_CASE("quadrature against adaptive integration") {
  const double lambda = 0.04;
  const BasisSpec spec{8, 4, 0};
  const auto g = build_scalar_r2_function(
      spec, [lambda](double s) { return 1.0 / ((1.0 + lambda * s) * (1.0 + lambda * s)); });
  const double oracle = plane_integral([lambda](double x, double y) {
    const double s = 1.0 + lambda * (x * x + y * y);
    return std::exp(-x * x - y * y) / std::numbers::pi / (s * s);
  });
  CHECK(std::abs(g.entries(0, 0).real() - oracle) <= 1e-10);
}

TEST_CASE("projection") {
  const BasisSpec spec{5, 3, 0};
  OperatorMatrix id;
  id.entries = ComplexMatrix::Identity(spec.padded_dim(), spec.padded_dim());
  id.basis = spec;
  id.padded = true;
  const auto core = project_to_core(id);
  CHECK(core.dim() == spec.core_dim());
  CHECK(core.entries == ComplexMatrix::Identity(spec.core_dim(), spec.core_dim()));

  const ComplexMatrix a = ComplexMatrix::Random(spec.padded_dim(), spec.padded_dim());
  CHECK(project_to_core(ComplexMatrix(a.adjoint()), spec) == project_to_core(a, spec).adjoint());
}

TEST_CASE("H0 converges in the pad") {
  const double lambda = 0.04;
  const auto low = build_H0({10, 4, 0}, lambda);
  const auto high = build_H0({10, 8, 0}, lambda);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> a(low.entries), b(high.entries);
  for (int k = 0; k < 10; ++k) CHECK(std::abs(a.eigenvalues()[k] - b.eigenvalues()[k]) < 1e-8);
}

TEST_CASE("operator matrix hermiticity check") {
  OperatorMatrix m;
  m.entries = ComplexMatrix::Zero(2, 2);
  m.entries(0, 1) = 1.0;
  CHECK(m.hermiticity_defect() == Approx(1.0));
  CHECK_THROWS_AS(m.check_hermitian("test"), HermiticityError);
  m.hermitian = false;
  CHECK_NOTHROW(m.check_hermitian("test"));
}
