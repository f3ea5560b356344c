#pragma once

#include <array>
#include <functional>
#include <string_view>
#include <vector>

#include "sphereosc/kernels.hpp"
#include "sphereosc/quadrature.hpp"
#include "sphereosc/types.hpp"

namespace sphereosc {

/// Number of 2D Fock states with nx + ny <= n_max.
constexpr int level_dimension(int n_max) { return (n_max + 1) * (n_max + 2) / 2; }

/// Total-quanta truncated 2D oscillator basis.
///
/// Operator products are formed over the padded basis (nx + ny <= n_max + pad)
/// and restricted to the core (nx + ny <= n_max) afterwards.
struct BasisSpec {
  int n_max = 0;
  int pad = 4;
  int quad_order = 0;  // Gauss-Hermite nodes per axis; 0 selects n_max + pad + 12

  int padded_n_max() const { return n_max + pad; }
  int core_dim() const { return level_dimension(n_max); }
  int padded_dim() const { return level_dimension(padded_n_max()); }
  int quadrature_order() const { return quad_order > 0 ? quad_order : n_max + pad + 12; }
  BasisSpec with_pad(int new_pad) const;
  BasisSpec with_n_max(int new_n_max) const;

  /// Throws ConfigError / QuadratureOrderError.
  void validate() const;
};

/// Bijection (nx, ny) <-> linear index, ordered by total quanta, then nx.
class BasisIndex {
 public:
  explicit BasisIndex(int n_max);

  int n_max() const { return n_max_; }
  int size() const { return static_cast<int>(quanta_.size()); }
  /// -1 when the state lies outside the truncation.
  int index(int nx, int ny) const;
  int nx(int i) const { return quanta_[static_cast<std::size_t>(i)][0]; }
  int ny(int i) const { return quanta_[static_cast<std::size_t>(i)][1]; }
  int level(int i) const { return nx(i) + ny(i); }

 private:
  int n_max_;
  std::vector<std::array<int, 2>> quanta_;
  std::vector<int> lookup_;
};

BasisIndex enumerate_basis(const BasisSpec& spec);

/// Dense operator over the core or padded basis.
struct OperatorMatrix {
  ComplexMatrix entries;
  BasisSpec basis;
  bool padded = false;
  bool hermitian = true;
  double herm_tol = 1e-12;

  Eigen::Index dim() const { return entries.rows(); }
  /// max|A - A^dagger| / max|A| (0 for the zero matrix).
  double hermiticity_defect() const;
  /// Throws HermiticityError naming `what` when the flag is set and the defect exceeds herm_tol.
  void check_hermitian(std::string_view what) const;
};

double hermiticity_defect(const ComplexMatrix& a);
/// Largest entry magnitude.
double max_abs(const ComplexMatrix& a);

/// Position and momentum matrices over the padded basis, m = omega = 1:
/// X = sqrt(hbar/2)(a + a^dagger), Px = i sqrt(hbar/2)(a^dagger - a), same for y.
struct PhaseSpaceOperators {
  BasisSpec basis;
  double hbar = 1.0;
  ComplexMatrix x, y, px, py;

  OperatorPair position() const { return {x, y}; }
  OperatorPair momentum() const { return {px, py}; }
};

PhaseSpaceOperators build_xy_ops(const BasisSpec& spec, double hbar = 1.0);

/// Gauss-Hermite tensor quadrature for multiplication operators f(x, y) over
/// the padded basis. Holds the rule and the Hermite-function table so many
/// functions can be assembled against the same basis.
class PositionQuadrature {
 public:
  PositionQuadrature(const BasisSpec& spec, double hbar = 1.0);

  const BasisSpec& basis() const { return spec_; }
  double hbar() const { return hbar_; }
  int order() const { return static_cast<int>(rule_.nodes.size()); }
  /// Physical coordinate of node q.
  double coordinate(int q) const;

  RealMatrix assemble(const std::function<double(double, double)>& f,
                      Execution exec = Execution::parallel) const;
  /// Same, from function values f(coordinate(q), coordinate(r)) laid out (q, r).
  RealMatrix assemble_values(const RealMatrix& values, Execution exec = Execution::parallel) const;

 private:
  BasisSpec spec_;
  double hbar_;
  BasisIndex index_;
  GaussHermiteRule rule_;
  RealMatrix hermite_;
};

OperatorMatrix build_position_function(const BasisSpec& spec,
                                       const std::function<double(double, double)>& f,
                                       double hbar = 1.0);

/// <n'x n'y| g(x^2 + y^2) |nx ny> over the padded basis.
OperatorMatrix build_scalar_r2_function(const BasisSpec& spec,
                                        const std::function<double(double)>& g,
                                        double hbar = 1.0);

/// Restriction to core indices; core states are a prefix of the padded ordering.
OperatorMatrix project_to_core(const OperatorMatrix& a);
ComplexMatrix project_to_core(const ComplexMatrix& a, const BasisSpec& spec);

}  // namespace sphereosc
