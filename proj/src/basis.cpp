#include "sphereosc/basis.hpp"

#include <cmath>
#include <string>

#include "sphereosc/errors.hpp"

namespace sphereosc {

BasisSpec BasisSpec::with_pad(int new_pad) const {
  BasisSpec s = *this;
  s.pad = new_pad;
  if (quad_order > 0) s.quad_order = quad_order + (new_pad - pad);
  return s;
}

BasisSpec BasisSpec::with_n_max(int new_n_max) const {
  BasisSpec s = *this;
  s.n_max = new_n_max;
  if (quad_order > 0) s.quad_order = quad_order + (new_n_max - n_max);
  return s;
}

void BasisSpec::validate() const {
  if (n_max < 0) throw ConfigError("basis.n_max must be >= 0");
  if (pad < 0) throw ConfigError("basis.pad must be >= 0");
  if (quad_order < 0) throw ConfigError("basis.quad_order must be > 0");
  if (quadrature_order() < padded_n_max() + 1) {
    throw QuadratureOrderError("basis.quad_order = " + std::to_string(quadrature_order()) +
                               " is below the exactness floor n_max + pad + 1 = " +
                               std::to_string(padded_n_max() + 1));
  }
}

BasisIndex::BasisIndex(int n_max) : n_max_(n_max) {
  if (n_max < 0) throw ConfigError("basis.n_max must be >= 0");
  const int side = n_max + 1;
  lookup_.assign(static_cast<std::size_t>(side * side), -1);
  quanta_.reserve(static_cast<std::size_t>(level_dimension(n_max)));
  for (int n = 0; n <= n_max; ++n) {
    for (int nx = 0; nx <= n; ++nx) {
      lookup_[static_cast<std::size_t>(nx * side + (n - nx))] = static_cast<int>(quanta_.size());
      quanta_.push_back({nx, n - nx});
    }
  }
}

int BasisIndex::index(int nx, int ny) const {
  if (nx < 0 || ny < 0 || nx + ny > n_max_) return -1;
  return lookup_[static_cast<std::size_t>(nx * (n_max_ + 1) + ny)];
}

BasisIndex enumerate_basis(const BasisSpec& spec) { return BasisIndex(spec.n_max); }

double max_abs(const ComplexMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const ComplexMatrix& a) {
  const double scale = max_abs(a);
  if (scale == 0.0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() / scale;
}

double OperatorMatrix::hermiticity_defect() const { return sphereosc::hermiticity_defect(entries); }

void OperatorMatrix::check_hermitian(std::string_view what) const {
  if (!hermitian) return;
  const double defect = hermiticity_defect();
  if (!(defect <= herm_tol)) {
    throw HermiticityError(std::string(what) + ": hermiticity defect " + std::to_string(defect) +
                           " exceeds tolerance " + std::to_string(herm_tol));
  }
}

PhaseSpaceOperators build_xy_ops(const BasisSpec& spec, double hbar) {
  spec.validate();
  const BasisIndex index(spec.padded_n_max());
  const Eigen::Index dim = index.size();
  const double s = std::sqrt(hbar / 2.0);

  PhaseSpaceOperators ops;
  ops.basis = spec;
  ops.hbar = hbar;
  ops.x = ComplexMatrix::Zero(dim, dim);
  ops.y = ComplexMatrix::Zero(dim, dim);
  ops.px = ComplexMatrix::Zero(dim, dim);
  ops.py = ComplexMatrix::Zero(dim, dim);
  for (int col = 0; col < dim; ++col) {
    const int nx = index.nx(col);
    const int ny = index.ny(col);
    // a|nx> = sqrt(nx)|nx-1>, a^dagger|nx> = sqrt(nx+1)|nx+1>
    if (const int lo = index.index(nx - 1, ny); lo >= 0) {
      const double v = s * std::sqrt(double(nx));
      ops.x(lo, col) += v;
      ops.px(lo, col) += Complex(0.0, -v);
    }
    if (const int hi = index.index(nx + 1, ny); hi >= 0) {
      const double v = s * std::sqrt(double(nx + 1));
      ops.x(hi, col) += v;
      ops.px(hi, col) += Complex(0.0, v);
    }
    if (const int lo = index.index(nx, ny - 1); lo >= 0) {
      const double v = s * std::sqrt(double(ny));
      ops.y(lo, col) += v;
      ops.py(lo, col) += Complex(0.0, -v);
    }
    if (const int hi = index.index(nx, ny + 1); hi >= 0) {
      const double v = s * std::sqrt(double(ny + 1));
      ops.y(hi, col) += v;
      ops.py(hi, col) += Complex(0.0, v);
    }
  }
  return ops;
}

PositionQuadrature::PositionQuadrature(const BasisSpec& spec, double hbar)
    : spec_(spec), hbar_(hbar), index_(spec.padded_n_max()) {
  spec.validate();
  rule_ = gauss_hermite(spec.quadrature_order());
  hermite_ = hermite_function_table(rule_.nodes, spec.padded_n_max());
}

double PositionQuadrature::coordinate(int q) const { return std::sqrt(hbar_) * rule_.nodes(q); }

RealMatrix PositionQuadrature::assemble_values(const RealMatrix& values, Execution exec) const {
  const Eigen::Index q = rule_.nodes.size();
  RealMatrix weighted(q, q);
  for (Eigen::Index r = 0; r < q; ++r)
    for (Eigen::Index p = 0; p < q; ++p)
      weighted(p, r) = rule_.weights(p) * rule_.weights(r) * values(p, r);
  return kernels::assemble_position_function(index_, hermite_, weighted, exec);
}

RealMatrix PositionQuadrature::assemble(const std::function<double(double, double)>& f,
                                        Execution exec) const {
  const int q = order();
  RealMatrix values(q, q);
  for (int r = 0; r < q; ++r)
    for (int p = 0; p < q; ++p) values(p, r) = f(coordinate(p), coordinate(r));
  return assemble_values(values, exec);
}

OperatorMatrix build_position_function(const BasisSpec& spec,
                                       const std::function<double(double, double)>& f,
                                       double hbar) {
  const PositionQuadrature quad(spec, hbar);
  OperatorMatrix out;
  out.entries = quad.assemble(f).cast<Complex>();
  out.basis = spec;
  out.padded = true;
  out.hermitian = true;
  return out;
}

OperatorMatrix build_scalar_r2_function(const BasisSpec& spec,
                                        const std::function<double(double)>& g, double hbar) {
  return build_position_function(spec, [&g](double x, double y) { return g(x * x + y * y); }, hbar);
}

ComplexMatrix project_to_core(const ComplexMatrix& a, const BasisSpec& spec) {
  const Eigen::Index core = spec.core_dim();
  return a.topLeftCorner(core, core);
}

OperatorMatrix project_to_core(const OperatorMatrix& a) {
  OperatorMatrix out = a;
  if (a.padded) {
    out.entries = project_to_core(a.entries, a.basis);
    out.padded = false;
  }
  return out;
}

}  // namespace sphereosc
