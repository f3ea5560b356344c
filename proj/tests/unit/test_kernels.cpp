#include <doctest.h>

#include <cmath>

#include <omp.h>

#include "sphereosc/basis.hpp"
#include "sphereosc/dynamics.hpp"
#include "sphereosc/kernels.hpp"
#include "sphereosc/quadrature.hpp"

using namespace sphereosc;

namespace {

struct AssemblyInput {
  BasisIndex index;
  RealMatrix hermite;
  RealMatrix weighted;
};

AssemblyInput make_input(int n_max, int order) {
  const auto rule = gauss_hermite(order);
  AssemblyInput in{BasisIndex(n_max), hermite_function_table(rule.nodes, n_max),
                   RealMatrix(order, order)};
  for (int q = 0; q < order; ++q)
    for (int r = 0; r < order; ++r) {
      const double x = rule.nodes[q], y = rule.nodes[r];
      in.weighted(q, r) = rule.weights[q] * rule.weights[r] * x * std::exp(-0.1 * (x * x + y * y)) +
                          0.01 * y;
    }
  return in;
}

}  // namespace

TEST_CASE("assembly: sum-factorized kernel matches the direct sum") {
  const auto in = make_input(12, 30);
  const RealMatrix serial = kernels::assemble_position_function_serial(in.index, in.hermite, in.weighted);
  const RealMatrix omp = kernels::assemble_position_function_omp(in.index, in.hermite, in.weighted);
  CHECK((serial - omp).cwiseAbs().maxCoeff() <= 1e-13 * serial.cwiseAbs().maxCoeff());
  CHECK(serial == serial.transpose());
  CHECK(omp == omp.transpose());
}

TEST_CASE("assembly: OpenMP result does not depend on the thread count") {
  const auto in = make_input(14, 32);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const RealMatrix one = kernels::assemble_position_function_omp(in.index, in.hermite, in.weighted);
  omp_set_num_threads(4);
  const RealMatrix four = kernels::assemble_position_function_omp(in.index, in.hermite, in.weighted);
  omp_set_num_threads(saved);
  CHECK(one == four);
}

TEST_CASE("for_each_index visits every index once") {
  std::vector<int> hits(1000, 0);
  kernels::for_each_index(hits.size(), Execution::parallel, [&](std::size_t k) { hits[k] += 1; });
  for (int h : hits) CHECK(h == 1);
}

TEST_CASE("scan and rate tables: serial and parallel agree exactly") {
  const BasisSpec spec{6, 4, 40};
  const auto ops = build_operator_set(spec, 0.04);
  const auto spectrum = diagonalize(ops);
  const auto c = eigen_couplings(ops, spectrum);
  const BackgroundModel model(5.0, {{1e-3, 2.0}, {2e-3, 4.5}});

  std::vector<double> grid;
  for (int k = 0; k < 400; ++k) grid.push_back(0.5 + 0.01 * k);
  const std::vector<int> targets{5, 9, 14};
  const auto serial = scan_resonances(0, targets, grid, 80.0, 1e-3, c, model, Execution::serial);
  const auto parallel = scan_resonances(0, targets, grid, 80.0, 1e-3, c, model, Execution::parallel);
  CHECK(serial.rate == parallel.rate);

  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < c.size(); ++i)
    for (int j = 0; j < c.size(); ++j)
      if (i != j) pairs.emplace_back(i, j);
  const auto kernel = DeltaKernel::parse("lorentzian", 0.05);
  const auto rs = golden_rule_table(pairs, c, model, kernel, Execution::serial);
  const auto rp = golden_rule_table(pairs, c, model, kernel, Execution::parallel);
  REQUIRE(rs.size() == rp.size());
  for (std::size_t k = 0; k < rs.size(); ++k) CHECK(rs[k].total == rp[k].total);
}
