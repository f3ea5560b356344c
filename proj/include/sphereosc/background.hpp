#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace sphereosc {

/// One sinusoidal component of the radius fluctuation.
struct FluctuationMode {
  double alpha = 0.0;  // amplitude, same length unit as R0
  double omega = 1.0;  // angular frequency, > 0
};

/// Sphere of radius R(t) = R0 + sum_n alpha_n sin(omega_n t).
///
/// The static curvature lambda0 = 1/R0^2 is derived, never configured. R0 may
/// be +infinity, which gives the flat plane (lambda0 = 0). Construction fails
/// with ConfigError when sum_n alpha_n / R0 exceeds the small-amplitude guard.
class BackgroundModel {
 public:
  BackgroundModel(double r0, std::vector<FluctuationMode> modes, double hbar = 1.0,
                  double small_amplitude_guard = 0.1);

  double r0() const { return r0_; }
  double lambda0() const { return lambda0_; }
  double hbar() const { return hbar_; }
  double small_amplitude_guard() const { return guard_; }
  const std::vector<FluctuationMode>& modes() const { return modes_; }

  /// Same R0, hbar and guard with a different set of modes.
  BackgroundModel with_modes(std::vector<FluctuationMode> modes) const;

  double radius_at(double t) const;
  /// dR/dt.
  double radius_rate(double t) const;
  /// 1/R(t)^2 without expansion.
  double curvature_exact(double t) const;
  /// lambda0 [1 - 2 sqrt(lambda0) sum alpha_n sin(omega_n t)]; the dropped
  /// remainder is O(lambda0^2 alpha^2).
  double curvature_first_order(double t) const;

  /// Signal multiplying V1: sqrt(lambda0) sum alpha_n omega_n cos(omega_n t).
  double v0(double t) const;
  /// Signal multiplying V1tilde: sqrt(lambda0) sum alpha_n sin(omega_n t).
  double v0_tilde(double t) const;
  /// Amplitude f(t) of the first-order vector potential A = f(t) m(x); f = -v0.
  double vector_potential_amplitude(double t) const;

  double amplitude_sum() const;

  /// Mode pairs closer than 2 pi / t_probe. Each pair is also logged as a
  /// warning: the non-interference approximation assumes separated resonances.
  std::vector<std::pair<std::size_t, std::size_t>> close_mode_pairs(double t_probe) const;

 private:
  double r0_;
  double lambda0_;
  double hbar_;
  double guard_;
  std::vector<FluctuationMode> modes_;
};

}  // namespace sphereosc
