#include "sphereosc/hamiltonian.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sphereosc/errors.hpp"
#include "sphereosc/geometry.hpp"

namespace sphereosc {
namespace {

OperatorMatrix core_operator(const OperatorAlgebra& algebra, const ComplexMatrix& padded,
                             std::string_view name, bool hermitian = true) {
  OperatorMatrix out;
  out.entries = algebra.to_core(padded);
  out.basis = algebra.basis();
  out.padded = false;
  out.hermitian = hermitian;
  out.check_hermitian(name);
  return out;
}

void check_group(const ComplexMatrix& group, std::string_view name) {
  constexpr double tol = 1e-12;
  const double defect = hermiticity_defect(group);
  if (!(defect <= tol)) {
    throw HermiticityError(std::string(name) + ": term group is not Hermitian (defect " +
                           std::to_string(defect) + "); operator ordering is wrong");
  }
}

OperatorPair curvature_direction_ops(const OperatorAlgebra& algebra, double lambda0) {
  const auto mx = algebra.position_function([lambda0](double x, double y) {
    const double s = 1.0 + lambda0 * (x * x + y * y);
    return x / (s * s);
  });
  const auto my = algebra.position_function([lambda0](double x, double y) {
    const double s = 1.0 + lambda0 * (x * x + y * y);
    return y / (s * s);
  });
  return {mx, my};
}

}  // namespace

OperatorAlgebra::OperatorAlgebra(const BasisSpec& spec, double hbar)
    : ops_(build_xy_ops(spec, hbar)), quad_(spec, hbar) {}

ComplexMatrix OperatorAlgebra::dot(const OperatorPair& u, const OperatorPair& v) {
  return u[0] * v[0] + u[1] * v[1];
}

OperatorPair OperatorAlgebra::radial_symmetrized(const OperatorPair& u) const {
  const OperatorPair x = position();
  const ComplexMatrix x_dot_u = dot(x, u);
  const ComplexMatrix u_dot_x = dot(u, x);
  return {x[0] * x_dot_u + u_dot_x * x[0], x[1] * x_dot_u + u_dot_x * x[1]};
}

ComplexMatrix OperatorAlgebra::angular(const OperatorPair& u) const {
  return ops_.x * u[1] - ops_.y * u[0];
}

OperatorPair OperatorAlgebra::symmetrized_momentum(const OperatorPair& u, double lambda) const {
  if (lambda == 0.0) return u;
  const OperatorPair s = radial_symmetrized(u);
  return {u[0] + (0.5 * lambda) * s[0], u[1] + (0.5 * lambda) * s[1]};
}

ComplexMatrix OperatorAlgebra::kinetic(const OperatorPair& u, double lambda) const {
  const OperatorPair pi = symmetrized_momentum(u, lambda);
  ComplexMatrix out = dot(pi, pi);
  if (lambda != 0.0) {
    const ComplexMatrix l = angular(u);
    out += lambda * (l * l);
  }
  return 0.5 * out;
}

ComplexMatrix OperatorAlgebra::potential() const {
  return 0.5 * (ops_.x * ops_.x + ops_.y * ops_.y);
}

ComplexMatrix OperatorAlgebra::position_function(
    const std::function<double(double, double)>& f) const {
  return quad_.assemble(f).cast<Complex>();
}

ComplexMatrix OperatorAlgebra::to_core(const ComplexMatrix& padded) const {
  return project_to_core(padded, ops_.basis);
}

OperatorMatrix build_Lz(const BasisSpec& spec, double hbar) {
  const OperatorAlgebra algebra(spec, hbar);
  return core_operator(algebra, algebra.angular(algebra.momentum()), "Lz");
}

OperatorMatrix build_L2(const BasisSpec& spec, double hbar) {
  const OperatorAlgebra algebra(spec, hbar);
  const ComplexMatrix lz = algebra.angular(algebra.momentum());
  return core_operator(algebra, lz * lz, "L2");
}

std::pair<OperatorMatrix, OperatorMatrix> build_pi(const BasisSpec& spec, double lambda,
                                                   double hbar) {
  if (lambda < 0.0) throw ConfigError("build_pi: lambda must be >= 0");
  const OperatorAlgebra algebra(spec, hbar);
  const OperatorPair pi = algebra.symmetrized_momentum(algebra.momentum(), lambda);
  return {core_operator(algebra, pi[0], "Pi_x"), core_operator(algebra, pi[1], "Pi_y")};
}

OperatorMatrix build_Pi2(const BasisSpec& spec, double lambda, double hbar) {
  if (lambda < 0.0) throw ConfigError("build_Pi2: lambda must be >= 0");
  const OperatorAlgebra algebra(spec, hbar);
  const OperatorPair pi = algebra.symmetrized_momentum(algebra.momentum(), lambda);
  return core_operator(algebra, OperatorAlgebra::dot(pi, pi), "Pi2");
}

OperatorMatrix build_H0(const BasisSpec& spec, double lambda, double hbar) {
  if (lambda < 0.0) throw ConfigError("build_H0: lambda must be >= 0");
  const OperatorAlgebra algebra(spec, hbar);
  return core_operator(algebra, algebra.kinetic(algebra.momentum(), lambda) + algebra.potential(),
                       "H0");
}

std::pair<OperatorMatrix, OperatorMatrix> build_m(const BasisSpec& spec, double lambda0,
                                                  double hbar) {
  if (lambda0 < 0.0) throw ConfigError("build_m: lambda0 must be >= 0");
  const OperatorAlgebra algebra(spec, hbar);
  const OperatorPair m = curvature_direction_ops(algebra, lambda0);
  return {core_operator(algebra, m[0], "Mx"), core_operator(algebra, m[1], "My")};
}

ComplexMatrix assemble_V1(const OperatorAlgebra& algebra, const OperatorPair& m, double lambda0,
                          CouplingConvention convention) {
  using A = OperatorAlgebra;
  const OperatorPair p = algebra.momentum();
  const OperatorPair s_p = algebra.radial_symmetrized(p);
  const OperatorPair s_m = algebra.radial_symmetrized(m);

  // {p, m}
  const ComplexMatrix g_pm = A::dot(p, m) + A::dot(m, p);
  check_group(g_pm, "V1 {p,m} group");
  // p.S(m) + m.S(p) and their adjoints
  const ComplexMatrix g_radial =
      0.5 * (A::dot(p, s_m) + A::dot(s_m, p) + A::dot(m, s_p) + A::dot(s_p, m));
  check_group(g_radial, "V1 radial group");
  // Lz (x m_y - y m_x) + h.c.
  const ComplexMatrix lz = algebra.angular(p);
  const ComplexMatrix lm_raw = algebra.angular(m);
  const ComplexMatrix lm = 0.5 * (lm_raw + lm_raw.adjoint());
  const ComplexMatrix g_angular = lz * lm + lm * lz;
  check_group(g_angular, "V1 angular group");
  // S(p).S(m) + S(m).S(p)
  const ComplexMatrix g_quartic = A::dot(s_p, s_m) + A::dot(s_m, s_p);
  check_group(g_quartic, "V1 quartic group");

  const double l = lambda0;
  if (convention == CouplingConvention::as_printed) {
    return g_pm + (0.5 * l) * g_radial + l * g_angular + (0.5 * l * l) * g_quartic;
  }
  return 0.5 * g_pm + (0.5 * l) * g_radial + (0.5 * l) * g_angular + (0.125 * l * l) * g_quartic;
}

ComplexMatrix assemble_V1_tilde(const OperatorAlgebra& algebra, double lambda0,
                                CouplingConvention convention) {
  using A = OperatorAlgebra;
  const OperatorPair p = algebra.momentum();
  const OperatorPair s_p = algebra.radial_symmetrized(p);
  const ComplexMatrix lz = algebra.angular(p);

  const ComplexMatrix g_l2 = lz * lz;
  check_group(g_l2, "V1tilde L^2 group");
  const ComplexMatrix g_radial = 0.5 * (A::dot(p, s_p) + A::dot(s_p, p));
  check_group(g_radial, "V1tilde radial group");
  const ComplexMatrix g_quartic = A::dot(s_p, s_p);
  check_group(g_quartic, "V1tilde quartic group");

  const ComplexMatrix printed = -(g_l2 + g_radial) - (0.5 * lambda0) * g_quartic;
  if (convention == CouplingConvention::as_printed) return printed;
  return lambda0 * printed;
}

OperatorMatrix build_V1(const BasisSpec& spec, double lambda0, double hbar,
                        CouplingConvention convention) {
  if (lambda0 < 0.0) throw ConfigError("build_V1: lambda0 must be >= 0");
  const OperatorAlgebra algebra(spec, hbar);
  const OperatorPair m = curvature_direction_ops(algebra, lambda0);
  return core_operator(algebra, assemble_V1(algebra, m, lambda0, convention), "V1");
}

OperatorMatrix build_V1_tilde(const BasisSpec& spec, double lambda0, double hbar,
                              CouplingConvention convention) {
  if (lambda0 < 0.0) throw ConfigError("build_V1_tilde: lambda0 must be >= 0");
  const OperatorAlgebra algebra(spec, hbar);
  return core_operator(algebra, assemble_V1_tilde(algebra, lambda0, convention), "V1tilde");
}

HiggsOperatorSet build_operator_set(const BasisSpec& spec, double lambda0, double hbar,
                                    CouplingConvention convention, bool with_pad_report) {
  if (lambda0 < 0.0) throw ConfigError("lambda0 must be >= 0");
  const OperatorAlgebra algebra(spec, hbar);
  const OperatorPair p = algebra.momentum();
  const OperatorPair pi = algebra.symmetrized_momentum(p, lambda0);
  const ComplexMatrix lz = algebra.angular(p);
  const OperatorPair m = curvature_direction_ops(algebra, lambda0);

  HiggsOperatorSet set;
  set.lambda0 = lambda0;
  set.hbar = hbar;
  set.basis = spec;
  set.convention = convention;
  set.h0 = core_operator(algebra, algebra.kinetic(p, lambda0) + algebra.potential(), "H0");
  set.pi2 = core_operator(algebra, OperatorAlgebra::dot(pi, pi), "Pi2");
  set.l2 = core_operator(algebra, lz * lz, "L2");
  set.lz = core_operator(algebra, lz, "Lz");
  set.mx = core_operator(algebra, m[0], "Mx");
  set.my = core_operator(algebra, m[1], "My");
  set.v1 = core_operator(algebra, assemble_V1(algebra, m, lambda0, convention), "V1");
  set.v1_tilde = core_operator(algebra, assemble_V1_tilde(algebra, lambda0, convention), "V1tilde");
  if (with_pad_report) {
    set.assembly_report = measure_pad_convergence(spec, lambda0, hbar, convention, 2 * spec.pad);
  }
  return set;
}

PadConvergence measure_pad_convergence(const BasisSpec& spec, double lambda0, double hbar,
                                       CouplingConvention convention, int pad_high) {
  const BasisSpec high_spec = spec.with_pad(pad_high);
  const OperatorAlgebra low(spec, hbar);
  const OperatorAlgebra high(high_spec, hbar);

  const int n_ok = std::max(spec.n_max - 2, 0);
  const Eigen::Index k = level_dimension(n_ok);
  auto change = [k](const ComplexMatrix& a, const ComplexMatrix& b) {
    return (a.topLeftCorner(k, k) - b.topLeftCorner(k, k)).cwiseAbs().maxCoeff();
  };
  auto h0 = [lambda0](const OperatorAlgebra& alg) {
    return alg.to_core(alg.kinetic(alg.momentum(), lambda0) + alg.potential());
  };
  auto v1 = [lambda0, convention](const OperatorAlgebra& alg) {
    return alg.to_core(assemble_V1(alg, curvature_direction_ops(alg, lambda0), lambda0, convention));
  };
  auto v1t = [lambda0, convention](const OperatorAlgebra& alg) {
    return alg.to_core(assemble_V1_tilde(alg, lambda0, convention));
  };

  PadConvergence report;
  report.pad_low = spec.pad;
  report.pad_high = pad_high;
  report.h0 = change(h0(low), h0(high));
  report.v1 = change(v1(low), v1(high));
  report.v1_tilde = change(v1t(low), v1t(high));
  return report;
}

OperatorMatrix build_H_first_order(const HiggsOperatorSet& ops, const BackgroundModel& model,
                                   double t) {
  OperatorMatrix out = ops.h0;
  out.entries += model.v0(t) * ops.v1.entries + model.v0_tilde(t) * ops.v1_tilde.entries;
  out.check_hermitian("H_first_order");
  return out;
}

ComplexMatrix exact_hamiltonian_at(const OperatorAlgebra& algebra, double radius,
                                   double radius_rate) {
  const double lambda = std::isinf(radius) ? 0.0 : 1.0 / (radius * radius);
  if (radius_rate == 0.0 || lambda == 0.0) {
    return algebra.to_core(algebra.kinetic(algebra.momentum(), lambda) + algebra.potential());
  }

  const PositionQuadrature& quad = algebra.quadrature();
  const int q = quad.order();
  RealMatrix ax(q, q), ay(q, q), phi(q, q);
  for (int r = 0; r < q; ++r) {
    for (int s = 0; s < q; ++s) {
      const ChartPoint p{quad.coordinate(s), quad.coordinate(r)};
      const auto d = geometry_derivatives(p, radius, radius_rate);
      ax(s, r) = d.rt.dot(d.rx);
      ay(s, r) = d.rt.dot(d.ry);
      phi(s, r) = -d.rt.squaredNorm();
    }
  }
  const OperatorPair p = algebra.momentum();
  const OperatorPair shifted{p[0] - quad.assemble_values(ax).cast<Complex>(),
                             p[1] - quad.assemble_values(ay).cast<Complex>()};
  ComplexMatrix h = algebra.kinetic(shifted, lambda) + algebra.potential();
  h += quad.assemble_values(phi).cast<Complex>();
  return algebra.to_core(h);
}

OperatorMatrix build_H_exact(const BasisSpec& spec, const BackgroundModel& model, double t,
                             double hbar) {
  const OperatorAlgebra algebra(spec, hbar);
  OperatorMatrix out;
  out.entries = exact_hamiltonian_at(algebra, model.radius_at(t), model.radius_rate(t));
  out.basis = spec;
  out.check_hermitian("H_exact");
  return out;
}

ExactHamiltonianCache::ExactHamiltonianCache(const OperatorAlgebra& algebra,
                                             const BackgroundModel& model, int chebyshev_degree)
    : model_(model) {
  using A = OperatorAlgebra;
  const OperatorPair p = algebra.momentum();
  const OperatorPair s_p = algebra.radial_symmetrized(p);
  const ComplexMatrix lz = algebra.angular(p);
  h0_const_ = algebra.to_core(0.5 * A::dot(p, p) + algebra.potential());
  h0_linear_ = algebra.to_core(0.25 * (A::dot(p, s_p) + A::dot(s_p, p)) + 0.5 * (lz * lz));
  h0_quadratic_ = algebra.to_core(0.125 * A::dot(s_p, s_p));

  const double spread = model.amplitude_sum();
  if (spread == 0.0 || model.lambda0() == 0.0) return;

  double rate_scale = 0.0;
  for (const auto& m : model.modes()) rate_scale += m.alpha * m.omega;

  r_lo_ = model.r0() - spread;
  r_hi_ = model.r0() + spread;
  const int n = std::max(chebyshev_degree, 1);
  for (int k = 0; k <= n; ++k) {
    const double c = std::cos(std::numbers::pi * k / n);
    const double radius = 0.5 * (r_lo_ + r_hi_) + 0.5 * (r_hi_ - r_lo_) * c;
    const ComplexMatrix h0 = exact_hamiltonian_at(algebra, radius, 0.0);
    const ComplexMatrix plus = exact_hamiltonian_at(algebra, radius, rate_scale);
    const ComplexMatrix minus = exact_hamiltonian_at(algebra, radius, -rate_scale);
    nodes_.push_back(c);
    f1_.push_back((plus - minus) / (2.0 * rate_scale));
    f2_.push_back((0.5 * (plus + minus) - h0) / (rate_scale * rate_scale));
  }
}

ComplexMatrix ExactHamiltonianCache::interpolate(const std::vector<ComplexMatrix>& values,
                                                 double radius) const {
  // Barycentric formula on Chebyshev-Lobatto points.
  const double u = (2.0 * radius - (r_lo_ + r_hi_)) / (r_hi_ - r_lo_);
  const std::size_t n = nodes_.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (u == nodes_[k]) return values[k];
  }
  ComplexMatrix num = ComplexMatrix::Zero(values[0].rows(), values[0].cols());
  double den = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double w = (k % 2 == 0) ? 1.0 : -1.0;
    if (k == 0 || k + 1 == n) w *= 0.5;
    const double c = w / (u - nodes_[k]);
    num += c * values[k];
    den += c;
  }
  return num / den;
}

ComplexMatrix ExactHamiltonianCache::at(double t) const {
  const double lambda = model_.curvature_exact(t);
  ComplexMatrix h = h0_const_ + lambda * h0_linear_ + lambda * lambda * h0_quadratic_;
  if (nodes_.empty()) return h;
  const double radius = model_.radius_at(t);
  const double rate = model_.radius_rate(t);
  h += rate * interpolate(f1_, radius) + (rate * rate) * interpolate(f2_, radius);
  return h;
}

void ExactHamiltonianCache::change_basis(const ComplexMatrix& s) {
  auto rotate = [&s](ComplexMatrix& m) { m = s.adjoint() * m * s; };
  rotate(h0_const_);
  rotate(h0_linear_);
  rotate(h0_quadratic_);
  for (auto& m : f1_) rotate(m);
  for (auto& m : f2_) rotate(m);
}

double commutator_defect(const ComplexMatrix& a, const ComplexMatrix& b) {
  const double scale = max_abs(a) * max_abs(b);
  if (scale == 0.0) return 0.0;
  return max_abs(a * b - b * a) / scale;
}

}  // namespace sphereosc
