#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <spdlog/spdlog.h>

#include "sphereosc/dynamics.hpp"
#include "sphereosc/errors.hpp"

namespace sphereosc {

namespace {

constexpr double kCommutatorTol = 1e-9;
constexpr double kIntegerTol = 1e-8;

void fix_phase(Eigen::Ref<ComplexVector> v) {
  double best = 0.0;
  for (Eigen::Index k = 0; k < v.size(); ++k) best = std::max(best, std::abs(v[k]));
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (std::abs(v[k]) >= best * (1.0 - 1e-10)) {
      v *= std::conj(v[k]) / std::abs(v[k]);
      v[k] = Complex(std::abs(v[k]), 0.0);
      return;
    }
  }
}

}  // namespace

SpectrumResult diagonalize(const ComplexMatrix& h0, const ComplexMatrix& lz, double hbar,
                           double cluster_rel_tol) {
  if (h0.rows() != h0.cols() || lz.rows() != h0.rows() || lz.cols() != h0.cols())
    throw ConfigError("diagonalize: H0 and Lz must be square and of equal size");
  const Eigen::Index n = h0.rows();
  const double defect = commutator_defect(h0, lz);
  if (defect > kCommutatorTol) {
    std::ostringstream msg;
    msg << "[H0, Lz] defect " << defect << " exceeds " << kCommutatorTol;
    throw SymmetryError(msg.str());
  }

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> lz_solver(lz);
  if (lz_solver.info() != Eigen::Success) throw NumericalError("Lz eigensolver failed");
  const RealVector lz_vals = lz_solver.eigenvalues() / hbar;

  // Group eigenvectors of Lz by integer m.
  std::vector<int> m_of(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    const double m = std::round(lz_vals[k]);
    if (std::abs(lz_vals[k] - m) > kIntegerTol) {
      std::ostringstream msg;
      msg << "Lz eigenvalue " << lz_vals[k] << " hbar is not an integer multiple of hbar";
      throw SymmetryError(msg.str());
    }
    m_of[std::size_t(k)] = static_cast<int>(m);
  }

  struct State {
    double energy;
    int m;
    ComplexVector vec;
  };
  std::vector<State> states;
  states.reserve(std::size_t(n));
  for (Eigen::Index start = 0; start < n;) {
    Eigen::Index stop = start;
    while (stop < n && m_of[std::size_t(stop)] == m_of[std::size_t(start)]) ++stop;
    const ComplexMatrix q = lz_solver.eigenvectors().middleCols(start, stop - start);
    ComplexMatrix block = q.adjoint() * h0 * q;
    block = 0.5 * (block + block.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(block);
    if (solver.info() != Eigen::Success) throw NumericalError("H0 block eigensolver failed");
    const ComplexMatrix vecs = q * solver.eigenvectors();
    for (Eigen::Index k = 0; k < vecs.cols(); ++k) {
      states.push_back({solver.eigenvalues()[k], m_of[std::size_t(start)], vecs.col(k)});
    }
    start = stop;
  }

  std::sort(states.begin(), states.end(),
            [](const State& a, const State& b) { return a.energy < b.energy; });
  // Exactly degenerate +-m partners come out in arbitrary order; order them by m.
  const double range = n > 0 ? states.back().energy - states.front().energy : 0.0;
  const double tie = 1e-12 * std::max(1.0, std::abs(range));
  for (std::size_t a = 0; a < states.size();) {
    std::size_t b = a + 1;
    while (b < states.size() && states[b].energy - states[b - 1].energy <= tie) ++b;
    std::sort(states.begin() + long(a), states.begin() + long(b),
              [](const State& x, const State& y) { return x.m < y.m; });
    a = b;
  }

  SpectrumResult out;
  out.hbar = hbar;
  out.states.resize(n, n);
  out.energies.resize(std::size_t(n));
  out.m_labels.resize(std::size_t(n));
  out.m_values.resize(std::size_t(n));
  out.parity.resize(std::size_t(n));
  out.cluster_id.resize(std::size_t(n));

  // Parity of a Fock state is (-1)^(nx + ny). Total-quanta ordering lets the
  // level be read off the index.
  std::vector<int> level_sign(static_cast<std::size_t>(n));
  {
    int level = 0;
    Eigen::Index first = 0;
    for (Eigen::Index k = 0; k < n; ++k) {
      while (k >= first + level + 1) {
        first += level + 1;
        ++level;
      }
      level_sign[std::size_t(k)] = (level % 2 == 0) ? 1 : -1;
    }
  }

  for (Eigen::Index k = 0; k < n; ++k) {
    auto& s = states[std::size_t(k)];
    fix_phase(s.vec);
    out.states.col(k) = s.vec;
    out.energies[std::size_t(k)] = s.energy;
    out.m_labels[std::size_t(k)] = s.m;
    out.m_values[std::size_t(k)] = (s.vec.adjoint() * lz * s.vec)(0, 0).real() / hbar;
    double p = 0.0;
    for (Eigen::Index r = 0; r < n; ++r) p += level_sign[std::size_t(r)] * std::norm(s.vec[r]);
    out.parity[std::size_t(k)] = p >= 0.0 ? 1 : -1;
  }

  out.cluster_tol = cluster_rel_tol * std::max(range, 1e-300);
  int cluster = -1;
  for (std::size_t k = 0; k < out.energies.size(); ++k) {
    if (k == 0 || out.energies[k] - out.energies[k - 1] > out.cluster_tol) {
      ++cluster;
      out.clusters.emplace_back();
    }
    out.cluster_id[k] = cluster;
    out.clusters.back().push_back(static_cast<int>(k));
  }

  const ComplexMatrix gram = out.states.adjoint() * out.states;
  out.orthonormality_defect = (gram - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  const ComplexMatrix hs = h0 * out.states;
  double residual = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    residual = std::max(residual,
                        (hs.col(k) - out.energies[std::size_t(k)] * out.states.col(k)).norm());
  }
  out.max_residual = residual;
  spdlog::debug("diagonalize: dim {} clusters {} orthonormality {:.2e} residual {:.2e}", n,
                out.clusters.size(), out.orthonormality_defect, out.max_residual);
  return out;
}

SpectrumResult diagonalize(const HiggsOperatorSet& ops, double cluster_rel_tol) {
  return diagonalize(ops.h0.entries, ops.lz.entries, ops.hbar, cluster_rel_tol);
}

EigenCouplings eigen_couplings(const HiggsOperatorSet& ops, const SpectrumResult& spectrum) {
  EigenCouplings c;
  c.energies = spectrum.energies;
  c.m_labels = spectrum.m_labels;
  c.parity = spectrum.parity;
  c.lambda0 = ops.lambda0;
  c.hbar = ops.hbar;
  const ComplexMatrix& s = spectrum.states;
  c.v1 = s.adjoint() * ops.v1.entries * s;
  c.v1_tilde = s.adjoint() * ops.v1_tilde.entries * s;
  return c;
}

}  // namespace sphereosc
