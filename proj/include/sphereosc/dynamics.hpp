#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "sphereosc/background.hpp"
#include "sphereosc/hamiltonian.hpp"
#include "sphereosc/kernels.hpp"

namespace sphereosc {

// ---------------------------------------------------------------------------
// Spectrum

/// Simultaneous eigenbasis of H0 and Lz, ordered by energy then m.
struct SpectrumResult {
  std::vector<double> energies;
  ComplexMatrix states;  // columns, core Fock basis
  std::vector<int> m_labels;
  std::vector<double> m_values;  // measured Lz eigenvalue / hbar
  std::vector<int> parity;       // (-1)^(nx+ny)
  std::vector<int> cluster_id;
  std::vector<std::vector<int>> clusters;
  double cluster_tol = 0.0;
  double orthonormality_defect = 0.0;
  double max_residual = 0.0;
  double hbar = 1.0;

  int size() const { return static_cast<int>(energies.size()); }
};

/// Diagonalizes Lz first, then H0 inside each m sector, so states are exact
/// simultaneous eigenvectors even inside near-degenerate clusters. Clusters
/// group consecutive energies closer than cluster_rel_tol times the spectral
/// range. Phases: the largest-magnitude component of each vector is real and
/// positive. Throws SymmetryError when [H0, Lz] != 0 or Lz has non-integer
/// eigenvalues.
SpectrumResult diagonalize(const ComplexMatrix& h0, const ComplexMatrix& lz, double hbar = 1.0,
                           double cluster_rel_tol = 1e-8);
SpectrumResult diagonalize(const HiggsOperatorSet& ops, double cluster_rel_tol = 1e-8);

// ---------------------------------------------------------------------------
// First-order perturbation theory

/// V1 and V1tilde in the eigenbasis: v1(j, i) = <j|V1|i>.
struct EigenCouplings {
  std::vector<double> energies;
  ComplexMatrix v1;
  ComplexMatrix v1_tilde;
  std::vector<int> m_labels;
  std::vector<int> parity;
  double lambda0 = 0.0;
  double hbar = 1.0;

  int size() const { return static_cast<int>(energies.size()); }
  double omega(int j, int i) const { return (energies[std::size_t(j)] - energies[std::size_t(i)]) / hbar; }
};

EigenCouplings eigen_couplings(const HiggsOperatorSet& ops, const SpectrumResult& spectrum);

/// emission: E_j ~ E_i - hbar omega_n (amplitude A+); absorption: E_j ~ E_i + hbar omega_n (A-).
enum class Channel { emission, absorption };
std::string_view channel_name(Channel c);

struct ChannelEntry {
  std::size_t mode = 0;
  Channel channel = Channel::absorption;
  double detuning = 0.0;  // omega_ji + omega_n (emission) or omega_ji - omega_n (absorption)
  double weight = 0.0;    // |omega_n V1_ji -+ i V1t_ji|^2
};

struct TransitionRecord {
  int i = 0;
  int j = 0;
  double omega_ji = 0.0;
  Complex v1_ji;
  Complex v1t_ji;
  std::vector<ChannelEntry> channels;
};

TransitionRecord transition_record(int i, int j, const EigenCouplings& couplings,
                                   const BackgroundModel& model);

/// A_n^{+-}(t) = alpha e^{i D t/2} sin(D t/2) / (D/2), D = omega_ji +- omega_n.
/// Below |D| t = 1e-6 a series replaces the quotient; at D = 0 it is alpha t.
Complex a_n_pm(double t, double omega_ji, const FluctuationMode& mode, int sign);

/// (lambda0 / 4 hbar^2) |sum_n A+ (w V1 - i V1t) + A- (w V1 + i V1t)|^2, cross terms kept.
double tdpt_probability_full(int i, int j, double t, const EigenCouplings& couplings,
                             const BackgroundModel& model);
/// Same with all cross terms between modes and channels dropped.
double tdpt_probability_rw(int i, int j, double t, const EigenCouplings& couplings,
                           const BackgroundModel& model);

/// Normalized surrogate for delta(E). `param` is t_probe for sinc2, the half
/// width eta for lorentzian and the standard deviation sigma for gaussian;
/// eta and sigma are energies.
struct DeltaKernel {
  enum class Kind { sinc2, lorentzian, gaussian };
  Kind kind = Kind::sinc2;
  double param = 1.0;

  /// Throws ConfigError on an unknown name or a non-positive parameter.
  static DeltaKernel parse(std::string_view name, double param);
  std::string_view name() const;
  double operator()(double energy, double hbar) const;
};

struct RateEntry {
  std::size_t mode = 0;
  Channel channel = Channel::absorption;
  double detuning = 0.0;
  double gamma = 0.0;
};

struct RateTable {
  int i = 0;
  int j = 0;
  std::vector<RateEntry> entries;
  double total = 0.0;
};

/// Gamma_{i->j} = (2 pi / hbar)(lambda0 / 4) sum_n alpha_n^2
///   [ |w V1 - i V1t|^2 K(E_j - E_i + hbar w) + |w V1 + i V1t|^2 K(E_j - E_i - hbar w) ].
/// Pairs with different m labels or parities get exactly zero.
RateTable golden_rule_rate(int i, int j, const EigenCouplings& couplings,
                           const BackgroundModel& model, const DeltaKernel& kernel);

/// Rates for many pairs; parallel over pairs.
std::vector<RateTable> golden_rule_table(const std::vector<std::pair<int, int>>& pairs,
                                         const EigenCouplings& couplings,
                                         const BackgroundModel& model, const DeltaKernel& kernel,
                                         Execution exec = Execution::parallel);

// ---------------------------------------------------------------------------
// Propagation

enum class PropagationMode { first_order, exact };
enum class Integrator { rk4, expm_midpoint };

std::string_view integrator_name(Integrator i);
std::string_view mode_name(PropagationMode m);

/// Hamiltonian in the H0 eigenbasis: diag(energies) + perturbation(t).
struct EigenbasisDrive {
  std::vector<double> energies;
  double hbar = 1.0;
  std::function<ComplexMatrix(double)> perturbation;
};

EigenbasisDrive first_order_drive(const EigenCouplings& couplings, const BackgroundModel& model);
EigenbasisDrive exact_drive(const HiggsOperatorSet& ops, const SpectrumResult& spectrum,
                            const BackgroundModel& model);

struct PropagationOptions {
  double t_final = 1.0;
  double dt = 1e-2;
  Integrator integrator = Integrator::rk4;
  int max_records = 1000;  // recorded rows, t = 0 and t_final always included
  double norm_tol = 1e-8;
  /// Fastest drive frequency; dt must give at least 20 steps per period of
  /// max(this, spectral radius / hbar).
  double max_drive_omega = 0.0;
  bool record_amplitudes = false;
};

struct PropagationResult {
  std::vector<double> times;
  std::vector<std::vector<double>> populations;  // populations[k][j] = |<j|psi(times[k])>|^2
  std::vector<double> norm_error;                // |norm - 1| at times[k]
  double norm_drift = 0.0;                       // max over all steps
  Integrator integrator = Integrator::rk4;
  double dt = 0.0;
  long steps = 0;
  bool valid = true;
  ComplexVector final_amplitudes;  // <j|psi(t_final)>, Schroedinger picture
  std::vector<ComplexVector> amplitudes;  // at each recorded time when requested
};

/// Solves i hbar d/dt psi = H(t) psi for amplitudes in the H0 eigenbasis.
/// rk4 integrates the interaction-picture equation; expm_midpoint applies
/// exp(-i H(t + dt/2) dt / hbar) per step. Throws NormDriftError when the norm
/// drifts beyond norm_tol, ConfigError for a bad psi0 or an unresolved dt.
PropagationResult propagate(const ComplexVector& psi0, const EigenbasisDrive& drive,
                            const PropagationOptions& options);

PropagationResult propagate(const ComplexVector& psi0, PropagationMode mode,
                            const BackgroundModel& model, const HiggsOperatorSet& ops,
                            const SpectrumResult& spectrum, PropagationOptions options);

// ---------------------------------------------------------------------------
// Resonance scans and validation of the first-order Hamiltonian

struct ResonancePeak {
  double center = 0.0;
  double height = 0.0;
  double fwhm = 0.0;
};

struct ResonanceScan {
  int source = 0;
  std::vector<int> targets;
  double t_probe = 0.0;
  double alpha = 0.0;
  std::vector<double> omega;
  std::vector<std::vector<double>> rate;  // rate[target slot][grid point] = P_rw(t_probe)/t_probe
  std::vector<std::vector<ResonancePeak>> peaks;
};

/// For each grid frequency, a single mode (alpha, omega) drives i -> j.
/// Parallel over the grid; throws ConfigError on an empty grid.
ResonanceScan scan_resonances(int i, const std::vector<int>& targets,
                              const std::vector<double>& omega_grid, double t_probe, double alpha,
                              const EigenCouplings& couplings, const BackgroundModel& base,
                              Execution exec = Execution::parallel);

/// Local maxima that dominate a window of +-2 (2 pi / t_probe) lying inside the grid and
/// exceed 1e-6 of the curve maximum. Centers and heights are refined by a
/// parabola through the three samples; widths are full widths at half maximum.
std::vector<ResonancePeak> detect_peaks(const std::vector<double>& omega,
                                        const std::vector<double>& values, double t_probe);

/// Trapezoidal integral of a scan curve over [center - half_window, center + half_window].
double integrate_peak(const std::vector<double>& omega, const std::vector<double>& values,
                      double center, double half_window);

struct DiscrepancyReport {
  std::vector<double> alphas;   // amplitude of the first mode at each sweep point
  std::vector<double> times;
  std::vector<std::vector<double>> discrepancy;  // |P_exact - P_first_order|, [alpha][time]
  std::vector<double> max_discrepancy;
  std::vector<double> max_relative;  // max |P_exact - P_first| / max P_first
  double exponent = 0.0;             // fitted slope of log max_discrepancy vs log alpha
  double ci_low = 0.0;
  double ci_high = 0.0;

  /// Same analysis for the state distance |psi_exact(t) - psi_first_order(t)|.
  std::vector<std::vector<double>> state_distance;
  std::vector<double> max_state_distance;
  double state_exponent = 0.0;
  double state_ci_low = 0.0;
  double state_ci_high = 0.0;
};

/// Propagates i with the exact-geometry and the first-order Hamiltonians for
/// the model's modes scaled by each factor in `scales`, records the
/// population of j, and fits the discrepancy exponent in alpha with a 95%
/// bootstrap interval over the time grid.
DiscrepancyReport compare_first_order_vs_exact(int i, int j, const HiggsOperatorSet& ops,
                                               const SpectrumResult& spectrum,
                                               const BackgroundModel& model,
                                               const PropagationOptions& options,
                                               const std::vector<double>& scales = {1.0, 0.5, 0.25},
                                               int bootstrap_samples = 1000,
                                               std::uint64_t seed = 20240607);

/// Least-squares slope of log(y) against log(x).
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace sphereosc
