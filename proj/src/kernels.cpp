#include "sphereosc/kernels.hpp"

#include "sphereosc/basis.hpp"

namespace sphereosc::kernels {

RealMatrix assemble_position_function_serial(const BasisIndex& index, const RealMatrix& hermite,
                                             const RealMatrix& weighted) {
  const int dim = index.size();
  const Eigen::Index q = weighted.rows();
  RealMatrix out(dim, dim);
  for (int a = 0; a < dim; ++a) {
    for (int b = a; b < dim; ++b) {
      double sum = 0.0;
      for (Eigen::Index r = 0; r < q; ++r) {
        const double fy = hermite(index.ny(a), r) * hermite(index.ny(b), r);
        double inner = 0.0;
        for (Eigen::Index p = 0; p < q; ++p) {
          inner += hermite(index.nx(a), p) * hermite(index.nx(b), p) * weighted(p, r);
        }
        sum += fy * inner;
      }
      out(a, b) = out(b, a) = sum;
    }
  }
  return out;
}

RealMatrix assemble_position_function_omp(const BasisIndex& index, const RealMatrix& hermite,
                                          const RealMatrix& weighted) {
  const int levels = index.n_max() + 1;
  const Eigen::Index q = weighted.rows();
  const int dim = index.size();

  // products(ax * levels + bx, p) = h_ax(p) h_bx(p); contract the x axis once.
  RealMatrix products(levels * levels, q);
#pragma omp parallel for schedule(static)
  for (int ax = 0; ax < levels; ++ax) {
    for (int bx = 0; bx < levels; ++bx) {
      products.row(ax * levels + bx) = hermite.row(ax).cwiseProduct(hermite.row(bx));
    }
  }
  RealMatrix contracted(levels * levels, q);
#pragma omp parallel for schedule(static)
  for (int row = 0; row < levels * levels; ++row) {
    contracted.row(row) = products.row(row) * weighted;
  }

  RealMatrix out(dim, dim);
#pragma omp parallel for schedule(dynamic, 4)
  for (int a = 0; a < dim; ++a) {
    for (int b = a; b < dim; ++b) {
      const auto x_row = contracted.row(index.nx(a) * levels + index.nx(b));
      double sum = 0.0;
      for (Eigen::Index r = 0; r < q; ++r) {
        sum += x_row(r) * hermite(index.ny(a), r) * hermite(index.ny(b), r);
      }
      out(a, b) = sum;
    }
  }
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < a; ++b) out(a, b) = out(b, a);
  return out;
}

RealMatrix assemble_position_function(const BasisIndex& index, const RealMatrix& hermite,
                                      const RealMatrix& weighted, Execution exec) {
  return exec == Execution::serial ? assemble_position_function_serial(index, hermite, weighted)
                                   : assemble_position_function_omp(index, hermite, weighted);
}

}  // namespace sphereosc::kernels
