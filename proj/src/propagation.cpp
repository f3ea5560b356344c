#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

#include <spdlog/spdlog.h>

#include "sphereosc/dynamics.hpp"
#include "sphereosc/errors.hpp"

namespace sphereosc {

std::string_view integrator_name(Integrator i) {
  return i == Integrator::rk4 ? "rk4" : "expm_midpoint";
}

std::string_view mode_name(PropagationMode m) {
  return m == PropagationMode::first_order ? "first_order" : "exact";
}

EigenbasisDrive first_order_drive(const EigenCouplings& couplings, const BackgroundModel& model) {
  EigenbasisDrive d;
  d.energies = couplings.energies;
  d.hbar = couplings.hbar;
  auto v1 = std::make_shared<const ComplexMatrix>(couplings.v1);
  auto v1t = std::make_shared<const ComplexMatrix>(couplings.v1_tilde);
  d.perturbation = [v1, v1t, model](double t) -> ComplexMatrix {
    return model.v0(t) * *v1 + model.v0_tilde(t) * *v1t;
  };
  return d;
}

EigenbasisDrive exact_drive(const HiggsOperatorSet& ops, const SpectrumResult& spectrum,
                            const BackgroundModel& model) {
  const OperatorAlgebra algebra(ops.basis, ops.hbar);
  auto cache = std::make_shared<ExactHamiltonianCache>(algebra, model);
  cache->change_basis(spectrum.states);
  EigenbasisDrive d;
  d.energies = spectrum.energies;
  d.hbar = ops.hbar;
  auto diag = std::make_shared<const RealVector>(
      Eigen::Map<const RealVector>(spectrum.energies.data(), Eigen::Index(spectrum.energies.size())));
  d.perturbation = [cache, diag](double t) -> ComplexMatrix {
    ComplexMatrix h = cache->at(t);
    h.diagonal() -= diag->cast<Complex>();
    return h;
  };
  return d;
}

namespace {

class Recorder {
 public:
  Recorder(long steps, int max_records, bool keep_amplitudes, PropagationResult& out)
      : stride_(std::max(1L, (steps + std::max(1, max_records) - 1) / std::max(1, max_records))),
        steps_(steps),
        keep_(keep_amplitudes),
        out_(out) {}

  /// Non-empty `energies` marks interaction-picture input, rotated back before storing.
  void maybe_record(long step, double t, const ComplexVector& amps, const RealVector& energies = {},
                    double hbar = 1.0) {
    if (step % stride_ != 0 && step != steps_) return;
    if (keep_) {
      ComplexVector c = amps;
      for (Eigen::Index k = 0; k < energies.size(); ++k) c[k] *= std::polar(1.0, -energies[k] * t / hbar);
      out_.amplitudes.push_back(std::move(c));
    }
    out_.times.push_back(t);
    std::vector<double> pops(std::size_t(amps.size()));
    for (Eigen::Index k = 0; k < amps.size(); ++k) pops[std::size_t(k)] = std::norm(amps[k]);
    out_.populations.push_back(std::move(pops));
    out_.norm_error.push_back(std::abs(amps.norm() - 1.0));
  }

 private:
  long stride_;
  long steps_;
  bool keep_;
  PropagationResult& out_;
};

void check_norm(double drift, double tol, double t, double dt) {
  if (drift > tol) {
    std::ostringstream msg;
    msg << "norm drift " << drift << " exceeds " << tol << " at t = " << t
        << "; reduce dt (try dt = " << dt / 2 << ")";
    throw NormDriftError(msg.str());
  }
}

}  // namespace

PropagationResult propagate(const ComplexVector& psi0, const EigenbasisDrive& drive,
                            const PropagationOptions& options) {
  const Eigen::Index n = Eigen::Index(drive.energies.size());
  if (psi0.size() != n)
    throw ConfigError("psi0 has " + std::to_string(psi0.size()) + " entries, expected " +
                      std::to_string(n));
  if (std::abs(psi0.norm() - 1.0) > 1e-10) throw ConfigError("psi0 must be normalized");
  if (!(options.t_final > 0.0) || !std::isfinite(options.t_final))
    throw ConfigError("propagation t_final must be finite and > 0");
  if (!(options.dt > 0.0) || !std::isfinite(options.dt))
    throw ConfigError("propagation dt must be finite and > 0");

  const double hbar = drive.hbar;
  double spectral = 0.0;
  for (double e : drive.energies) spectral = std::max(spectral, std::abs(e) / hbar);
  const double fastest = std::max(spectral, options.max_drive_omega);
  const double dt_limit = 2.0 * std::numbers::pi / (20.0 * fastest);
  if (options.dt > dt_limit * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "propagation dt = " << options.dt << " resolves fewer than 20 steps per period of the "
        << "fastest frequency " << fastest << "; need dt <= " << dt_limit;
    throw ConfigError(msg.str());
  }

  const long steps = std::max(1L, static_cast<long>(std::ceil(options.t_final / options.dt - 1e-9)));
  const double dt = options.t_final / double(steps);

  PropagationResult out;
  out.integrator = options.integrator;
  out.dt = dt;
  out.steps = steps;
  Recorder recorder(steps, options.max_records, options.record_amplitudes, out);

  RealVector energies(n);
  for (Eigen::Index k = 0; k < n; ++k) energies[k] = drive.energies[std::size_t(k)];

  if (options.integrator == Integrator::rk4) {
    // Interaction picture: b = exp(i E t / hbar) c, i hbar b' = W(t) b with
    // W = diag(phase) V(t) diag(phase)^*.
    auto rhs = [&](double t, const ComplexVector& b) -> ComplexVector {
      ComplexVector phase(n);
      for (Eigen::Index k = 0; k < n; ++k) phase[k] = std::polar(1.0, energies[k] * t / hbar);
      const ComplexVector inner = drive.perturbation(t) * phase.conjugate().cwiseProduct(b);
      return (-kI / hbar) * phase.cwiseProduct(inner);
    };
    ComplexVector b = psi0;
    recorder.maybe_record(0, 0.0, b, energies, hbar);
    for (long s = 0; s < steps; ++s) {
      const double t = dt * double(s);
      const ComplexVector k1 = rhs(t, b);
      const ComplexVector k2 = rhs(t + 0.5 * dt, b + 0.5 * dt * k1);
      const ComplexVector k3 = rhs(t + 0.5 * dt, b + 0.5 * dt * k2);
      const ComplexVector k4 = rhs(t + dt, b + dt * k3);
      b += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      const double t_next = dt * double(s + 1);
      out.norm_drift = std::max(out.norm_drift, std::abs(b.norm() - 1.0));
      check_norm(out.norm_drift, options.norm_tol, t_next, dt);
      recorder.maybe_record(s + 1, t_next, b, energies, hbar);
    }
    ComplexVector c(n);
    for (Eigen::Index k = 0; k < n; ++k)
      c[k] = std::polar(1.0, -energies[k] * options.t_final / hbar) * b[k];
    out.final_amplitudes = c;
  } else {
    ComplexVector c = psi0;
    recorder.maybe_record(0, 0.0, c);
    for (long s = 0; s < steps; ++s) {
      const double t_mid = dt * (double(s) + 0.5);
      ComplexMatrix h = drive.perturbation(t_mid);
      h.diagonal() += energies.cast<Complex>();
      h = 0.5 * (h + h.adjoint()).eval();
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
      if (solver.info() != Eigen::Success) throw NumericalError("midpoint eigensolver failed");
      ComplexVector rotated = solver.eigenvectors().adjoint() * c;
      for (Eigen::Index k = 0; k < n; ++k)
        rotated[k] *= std::polar(1.0, -solver.eigenvalues()[k] * dt / hbar);
      c = solver.eigenvectors() * rotated;
      const double t_next = dt * double(s + 1);
      out.norm_drift = std::max(out.norm_drift, std::abs(c.norm() - 1.0));
      check_norm(out.norm_drift, options.norm_tol, t_next, dt);
      recorder.maybe_record(s + 1, t_next, c);
    }
    out.final_amplitudes = c;
  }
  spdlog::debug("propagate: {} steps of {:.3e} with {}, norm drift {:.2e}", steps, dt,
                integrator_name(options.integrator), out.norm_drift);
  return out;
}

PropagationResult propagate(const ComplexVector& psi0, PropagationMode mode,
                            const BackgroundModel& model, const HiggsOperatorSet& ops,
                            const SpectrumResult& spectrum, PropagationOptions options) {
  for (const auto& m : model.modes()) options.max_drive_omega = std::max(options.max_drive_omega, m.omega);
  if (mode == PropagationMode::first_order) {
    return propagate(psi0, first_order_drive(eigen_couplings(ops, spectrum), model), options);
  }
  return propagate(psi0, exact_drive(ops, spectrum, model), options);
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("log_log_slope needs >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double lx = std::log(x[k]);
    const double ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

struct ExponentFit {
  double exponent = 0.0;
  double low = 0.0;
  double high = 0.0;
};

// Slope of log(max_t curve) against log(alpha), with a percentile bootstrap
// over the recorded times.
ExponentFit fit_exponent(const std::vector<double>& alphas,
                         const std::vector<std::vector<double>>& curves, int samples,
                         std::uint64_t seed) {
  std::vector<double> maxima(alphas.size());
  for (std::size_t a = 0; a < alphas.size(); ++a)
    maxima[a] = *std::max_element(curves[a].begin(), curves[a].end());
  ExponentFit fit;
  fit.exponent = log_log_slope(alphas, maxima);

  std::mt19937_64 rng(seed);
  const std::size_t nt = curves.front().size();
  std::uniform_int_distribution<std::size_t> pick(0, nt - 1);
  std::vector<std::size_t> sample(nt);
  std::vector<double> slopes;
  for (int b = 0; b < samples; ++b) {
    for (auto& k : sample) k = pick(rng);
    bool usable = true;
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      double m = 0.0;
      for (std::size_t k : sample) m = std::max(m, curves[a][k]);
      maxima[a] = m;
      usable = usable && m > 0.0;
    }
    if (usable) slopes.push_back(log_log_slope(alphas, maxima));
  }
  if (slopes.empty()) {
    fit.low = fit.high = fit.exponent;
    return fit;
  }
  std::sort(slopes.begin(), slopes.end());
  const auto quantile = [&](double q) {
    const double pos = q * double(slopes.size() - 1);
    const auto lo = std::size_t(std::floor(pos));
    const auto hi = std::min(lo + 1, slopes.size() - 1);
    return slopes[lo] + (pos - double(lo)) * (slopes[hi] - slopes[lo]);
  };
  fit.low = quantile(0.025);
  fit.high = quantile(0.975);
  return fit;
}

}  // namespace

DiscrepancyReport compare_first_order_vs_exact(int i, int j, const HiggsOperatorSet& ops,
                                               const SpectrumResult& spectrum,
                                               const BackgroundModel& model,
                                               const PropagationOptions& options,
                                               const std::vector<double>& scales,
                                               int bootstrap_samples, std::uint64_t seed) {
  const int n = spectrum.size();
  if (i < 0 || j < 0 || i >= n || j >= n) throw ConfigError("state index out of range");
  if (model.modes().empty()) throw ConfigError("compare_first_order_vs_exact needs a mode");
  if (scales.size() < 2) throw ConfigError("compare_first_order_vs_exact needs >= 2 scales");

  const EigenCouplings couplings = eigen_couplings(ops, spectrum);
  ComplexVector psi0 = ComplexVector::Zero(n);
  psi0[i] = 1.0;

  DiscrepancyReport report;
  for (double scale : scales) {
    std::vector<FluctuationMode> modes = model.modes();
    for (auto& m : modes) m.alpha *= scale;
    const BackgroundModel scaled = model.with_modes(modes);
    PropagationOptions opt = options;
    opt.record_amplitudes = true;
    for (const auto& m : modes) opt.max_drive_omega = std::max(opt.max_drive_omega, m.omega);
    const auto first = propagate(psi0, first_order_drive(couplings, scaled), opt);
    const auto exact = propagate(psi0, exact_drive(ops, spectrum, scaled), opt);
    if (report.times.empty()) report.times = first.times;

    const std::size_t nt = first.times.size();
    std::vector<double> disc(nt), dist(nt);
    double peak_p = 0.0;
    for (std::size_t k = 0; k < nt; ++k) {
      const double pf = first.populations[k][std::size_t(j)];
      disc[k] = std::abs(exact.populations[k][std::size_t(j)] - pf);
      dist[k] = (exact.amplitudes[k] - first.amplitudes[k]).norm();
      peak_p = std::max(peak_p, pf);
    }
    const double worst = *std::max_element(disc.begin(), disc.end());
    report.alphas.push_back(modes.front().alpha);
    report.max_discrepancy.push_back(worst);
    report.max_relative.push_back(peak_p > 0.0 ? worst / peak_p : 0.0);
    report.max_state_distance.push_back(*std::max_element(dist.begin(), dist.end()));
    report.discrepancy.push_back(std::move(disc));
    report.state_distance.push_back(std::move(dist));
  }

  const auto pop = fit_exponent(report.alphas, report.discrepancy, bootstrap_samples, seed);
  report.exponent = pop.exponent;
  report.ci_low = pop.low;
  report.ci_high = pop.high;
  const auto state = fit_exponent(report.alphas, report.state_distance, bootstrap_samples, seed);
  report.state_exponent = state.exponent;
  report.state_ci_low = state.low;
  report.state_ci_high = state.high;
  return report;
}

}  // namespace sphereosc
