#pragma once

#include <cstddef>

#include <omp.h>

#include "sphereosc/types.hpp"

namespace sphereosc {

class BasisIndex;

enum class Execution { serial, parallel };

/// Data-parallel kernels. Each OpenMP kernel keeps a plain serial
/// implementation next to it; tests check they agree and bench/ times both.
/// Every OpenMP kernel computes each output entry with a fixed summation
/// order, so results do not depend on the thread count.
namespace kernels {

/// Matrix of a multiplication operator over a total-quanta basis.
///
/// `hermite` holds h_n(xi_q) (rows: level, cols: node); `weighted` holds
/// w_q w_r f(x_q, y_r). Entry (a, b) is
///   sum_{q,r} h_{ax}(q) h_{bx}(q) h_{ay}(r) h_{by}(r) weighted(q, r).
RealMatrix assemble_position_function_serial(const BasisIndex& index, const RealMatrix& hermite,
                                             const RealMatrix& weighted);

/// Sum-factorized version: contracts the x axis once per (ax, bx) pair, then
/// the y axis per matrix row in parallel.
RealMatrix assemble_position_function_omp(const BasisIndex& index, const RealMatrix& hermite,
                                          const RealMatrix& weighted);

RealMatrix assemble_position_function(const BasisIndex& index, const RealMatrix& hermite,
                                      const RealMatrix& weighted, Execution exec);

/// Calls fn(k) for k in [0, n). Parallel execution uses a static schedule.
template <class Fn>
void for_each_index(std::size_t n, Execution exec, Fn&& fn) {
  if (exec == Execution::serial) {
    for (std::size_t k = 0; k < n; ++k) fn(k);
    return;
  }
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
  for (long long k = 0; k < count; ++k) fn(static_cast<std::size_t>(k));
}

}  // namespace kernels
}  // namespace sphereosc
