#pragma once

#include "sphereosc/types.hpp"

namespace sphereosc {

/// Nodes and weights for the integral of f(xi) exp(-xi^2) over the real line.
struct GaussHermiteRule {
  RealVector nodes;
  RealVector weights;
};

/// Golub-Welsch nodes polished by Newton iteration; weights from the
/// Christoffel function of the normalized Hermite polynomials.
GaussHermiteRule gauss_hermite(int order);

/// Normalized Hermite polynomials h_n(xi) = (2^n n! sqrt(pi))^(-1/2) H_n(xi),
/// so that the oscillator eigenfunction is h_n(xi) exp(-xi^2/2).
/// Result has rows n = 0..max_level and one column per node.
RealMatrix hermite_function_table(const RealVector& nodes, int max_level);

}  // namespace sphereosc
