#include "sphereosc/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "sphereosc/errors.hpp"

namespace sphereosc {
namespace {

// h_{n}(xi) and h_{n-1}(xi) by the three-term recurrence.
std::pair<double, double> hermite_pair(int n, double xi) {
  double prev = 0.0;
  double cur = std::pow(std::numbers::pi, -0.25);
  for (int k = 0; k < n; ++k) {
    const double next = std::sqrt(2.0 / (k + 1)) * xi * cur - std::sqrt(double(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

}  // namespace

GaussHermiteRule gauss_hermite(int order) {
  if (order < 1) throw ConfigError("Gauss-Hermite order must be >= 1");
  const Eigen::Index n = order;
  RealMatrix jacobi = RealMatrix::Zero(n, n);
  for (Eigen::Index k = 1; k < n; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(0.5 * double(k));
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(jacobi, Eigen::EigenvaluesOnly);
  GaussHermiteRule rule;
  rule.nodes = solver.eigenvalues();
  rule.weights.resize(n);

  for (Eigen::Index i = 0; i < n; ++i) {
    double xi = rule.nodes(i);
    for (int it = 0; it < 3; ++it) {
      const auto [hn, hprev] = hermite_pair(order, xi);
      const double deriv = std::sqrt(2.0 * order) * hprev;
      if (deriv == 0.0) break;
      xi -= hn / deriv;
    }
    rule.nodes(i) = xi;
  }
  // Nodes symmetric about zero.
  for (Eigen::Index i = 0; i < n / 2; ++i) {
    const double a = 0.5 * (rule.nodes(n - 1 - i) - rule.nodes(i));
    rule.nodes(i) = -a;
    rule.nodes(n - 1 - i) = a;
  }
  if (n % 2 == 1) rule.nodes(n / 2) = 0.0;

  const RealMatrix table = hermite_function_table(rule.nodes, order - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    rule.weights(i) = 1.0 / table.col(i).squaredNorm();
  }
  return rule;
}

RealMatrix hermite_function_table(const RealVector& nodes, int max_level) {
  const Eigen::Index q = nodes.size();
  RealMatrix table(max_level + 1, q);
  const double h0 = std::pow(std::numbers::pi, -0.25);
  for (Eigen::Index i = 0; i < q; ++i) {
    const double xi = nodes(i);
    table(0, i) = h0;
    if (max_level >= 1) table(1, i) = std::sqrt(2.0) * xi * h0;
    for (int k = 1; k < max_level; ++k) {
      table(k + 1, i) = std::sqrt(2.0 / (k + 1)) * xi * table(k, i) -
                        std::sqrt(double(k) / (k + 1)) * table(k - 1, i);
    }
  }
  return table;
}

}  // namespace sphereosc
