#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "sphereosc/background.hpp"
#include "sphereosc/basis.hpp"

namespace sphereosc {

/// Normalization of the first-order coupling operators.
///
/// `consistent` (default): V1 and V1tilde are the exact first-order terms of
/// H0(x, p - A(t); lambda(t)) + phi in the fluctuation amplitude, and
/// H_exact - H_first_order = O(alpha^2). Relative to `as_printed`, the
/// {p, m} and angular groups of V1 carry half the weight, the quartic group a
/// quarter, and V1tilde carries an extra factor lambda0.
///
/// `as_printed`: unit weight on every group, with the radial group of V1
/// symmetrized. The mismatch with the exact Hamiltonian is first order in alpha.
enum class CouplingConvention { consistent, as_printed };

/// Operator algebra over the padded basis. All products are formed here and
/// projected to the core afterwards.
class OperatorAlgebra {
 public:
  OperatorAlgebra(const BasisSpec& spec, double hbar);

  const BasisSpec& basis() const { return ops_.basis; }
  double hbar() const { return ops_.hbar; }
  const PhaseSpaceOperators& phase_space() const { return ops_; }
  const PositionQuadrature& quadrature() const { return quad_; }
  OperatorPair position() const { return ops_.position(); }
  OperatorPair momentum() const { return ops_.momentum(); }

  /// u . v = u_x v_x + u_y v_y.
  static ComplexMatrix dot(const OperatorPair& u, const OperatorPair& v);
  /// Components x_k (x . u) + (u . x) x_k.
  OperatorPair radial_symmetrized(const OperatorPair& u) const;
  /// x u_y - y u_x.
  ComplexMatrix angular(const OperatorPair& u) const;
  /// pi_k = u_k + (lambda/2) [x_k (x . u) + (u . x) x_k].
  OperatorPair symmetrized_momentum(const OperatorPair& u, double lambda) const;
  /// (1/2)(pi . pi + lambda L^2) with pi and L built from the momentum `u`.
  ComplexMatrix kinetic(const OperatorPair& u, double lambda) const;
  /// (1/2)(x^2 + y^2).
  ComplexMatrix potential() const;
  /// Multiplication operator by quadrature.
  ComplexMatrix position_function(const std::function<double(double, double)>& f) const;

  ComplexMatrix to_core(const ComplexMatrix& padded) const;

 private:
  PhaseSpaceOperators ops_;
  PositionQuadrature quad_;
};

struct PadConvergence {
  int pad_low = 0;
  int pad_high = 0;
  // Largest absolute change among states with total quanta <= n_max - 2.
  double h0 = 0.0;
  double v1 = 0.0;
  double v1_tilde = 0.0;
};

/// All static operators of the oscillator on a sphere of curvature lambda0,
/// restricted to the core basis.
struct HiggsOperatorSet {
  double lambda0 = 0.0;
  double hbar = 1.0;
  BasisSpec basis;
  CouplingConvention convention = CouplingConvention::consistent;
  OperatorMatrix h0, pi2, l2, lz, mx, my, v1, v1_tilde;
  std::optional<PadConvergence> assembly_report;
};

OperatorMatrix build_Lz(const BasisSpec& spec, double hbar = 1.0);
/// L^2 = (1/2) L_ij L_ij, which is Lz^2 in two dimensions.
OperatorMatrix build_L2(const BasisSpec& spec, double hbar = 1.0);
/// Symmetrized momentum pi = p + (lambda/2)[x (x.p) + (p.x) x].
std::pair<OperatorMatrix, OperatorMatrix> build_pi(const BasisSpec& spec, double lambda,
                                                   double hbar = 1.0);
/// pi_x^2 + pi_y^2 formed in the padded basis.
OperatorMatrix build_Pi2(const BasisSpec& spec, double lambda, double hbar = 1.0);
/// H0 = (1/2)(pi^2 + lambda L^2) + (1/2)(x^2 + y^2).
OperatorMatrix build_H0(const BasisSpec& spec, double lambda, double hbar = 1.0);
/// m = x / (1 + lambda0 x.x)^2, assembled as a multiplication operator.
std::pair<OperatorMatrix, OperatorMatrix> build_m(const BasisSpec& spec, double lambda0,
                                                  double hbar = 1.0);
OperatorMatrix build_V1(const BasisSpec& spec, double lambda0, double hbar = 1.0,
                        CouplingConvention convention = CouplingConvention::consistent);
OperatorMatrix build_V1_tilde(const BasisSpec& spec, double lambda0, double hbar = 1.0,
                              CouplingConvention convention = CouplingConvention::consistent);

/// Padded-basis V1 from a given curvature direction m. Each term group is
/// checked for hermiticity before it is summed.
ComplexMatrix assemble_V1(const OperatorAlgebra& algebra, const OperatorPair& m, double lambda0,
                          CouplingConvention convention);
ComplexMatrix assemble_V1_tilde(const OperatorAlgebra& algebra, double lambda0,
                                CouplingConvention convention);

HiggsOperatorSet build_operator_set(const BasisSpec& spec, double lambda0, double hbar = 1.0,
                                    CouplingConvention convention = CouplingConvention::consistent,
                                    bool with_pad_report = false);

/// Rebuilds H0, V1 and V1tilde with a larger pad and reports the change on
/// the well-converged core states.
PadConvergence measure_pad_convergence(const BasisSpec& spec, double lambda0, double hbar,
                                       CouplingConvention convention, int pad_high);

/// H0 + v0(t) V1 + v0_tilde(t) V1tilde.
OperatorMatrix build_H_first_order(const HiggsOperatorSet& ops, const BackgroundModel& model,
                                   double t);

/// H0(x, p - A(t, x); lambda(t)) + phi(t, x) with the exact geometry and lambda = 1/R(t)^2.
OperatorMatrix build_H_exact(const BasisSpec& spec, const BackgroundModel& model, double t,
                             double hbar = 1.0);
/// Core-basis exact Hamiltonian for a given radius and radius rate.
ComplexMatrix exact_hamiltonian_at(const OperatorAlgebra& algebra, double radius,
                                   double radius_rate);

/// Exact Hamiltonian cached for propagation.
///
/// H_exact depends on t only through R(t) and dR/dt, and is quadratic in
/// dR/dt: H = H0(1/R^2) + Rdot F1(R) + Rdot^2 F2(R). H0 is stored as its exact
/// quadratic polynomial in lambda; F1 and F2 are interpolated on Chebyshev
/// points spanning the radius range of the model.
class ExactHamiltonianCache {
 public:
  ExactHamiltonianCache(const OperatorAlgebra& algebra, const BackgroundModel& model,
                        int chebyshev_degree = 8);

  /// Core-basis matrix at time t.
  ComplexMatrix at(double t) const;
  /// Re-expresses every cached matrix as S^dagger M S.
  void change_basis(const ComplexMatrix& s);

 private:
  ComplexMatrix interpolate(const std::vector<ComplexMatrix>& values, double radius) const;

  BackgroundModel model_;
  ComplexMatrix h0_const_, h0_linear_, h0_quadratic_;
  double r_lo_ = 0.0;
  double r_hi_ = 0.0;
  std::vector<double> nodes_;
  std::vector<ComplexMatrix> f1_, f2_;
};

/// max|AB - BA| / (max|A| max|B|).
double commutator_defect(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace sphereosc
