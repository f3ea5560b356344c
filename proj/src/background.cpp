#include "sphereosc/background.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <spdlog/spdlog.h>

#include "sphereosc/errors.hpp"

namespace sphereosc {

BackgroundModel::BackgroundModel(double r0, std::vector<FluctuationMode> modes, double hbar,
                                 double small_amplitude_guard)
    : r0_(r0), hbar_(hbar), guard_(small_amplitude_guard), modes_(std::move(modes)) {
  if (!(r0_ > 0.0)) throw ConfigError("background.R0 must be > 0");
  if (!(hbar_ > 0.0) || !std::isfinite(hbar_)) throw ConfigError("hbar must be finite and > 0");
  if (!(guard_ > 0.0)) throw ConfigError("small_amplitude_guard must be > 0");
  for (std::size_t n = 0; n < modes_.size(); ++n) {
    const auto& m = modes_[n];
    if (!(m.alpha >= 0.0) || !std::isfinite(m.alpha))
      throw ConfigError("background.modes[" + std::to_string(n) + "].alpha must be >= 0");
    if (!(m.omega > 0.0) || !std::isfinite(m.omega))
      throw ConfigError("background.modes[" + std::to_string(n) + "].omega must be > 0");
  }
  lambda0_ = std::isinf(r0_) ? 0.0 : 1.0 / (r0_ * r0_);
  const double ratio = std::isinf(r0_) ? 0.0 : amplitude_sum() / r0_;
  if (ratio > guard_) {
    throw ConfigError("background.modes: sum(alpha)/R0 = " + std::to_string(ratio) +
                      " exceeds small_amplitude_guard " + std::to_string(guard_));
  }
}

BackgroundModel BackgroundModel::with_modes(std::vector<FluctuationMode> modes) const {
  return BackgroundModel(r0_, std::move(modes), hbar_, guard_);
}

double BackgroundModel::amplitude_sum() const {
  double s = 0.0;
  for (const auto& m : modes_) s += m.alpha;
  return s;
}

double BackgroundModel::radius_at(double t) const {
  double r = r0_;
  for (const auto& m : modes_) r += m.alpha * std::sin(m.omega * t);
  return r;
}

double BackgroundModel::radius_rate(double t) const {
  double r = 0.0;
  for (const auto& m : modes_) r += m.alpha * m.omega * std::cos(m.omega * t);
  return r;
}

double BackgroundModel::curvature_exact(double t) const {
  const double r = radius_at(t);
  return std::isinf(r) ? 0.0 : 1.0 / (r * r);
}

double BackgroundModel::curvature_first_order(double t) const {
  double s = 0.0;
  for (const auto& m : modes_) s += m.alpha * std::sin(m.omega * t);
  return lambda0_ * (1.0 - 2.0 * std::sqrt(lambda0_) * s);
}

double BackgroundModel::v0(double t) const { return std::sqrt(lambda0_) * radius_rate(t); }

double BackgroundModel::v0_tilde(double t) const {
  double s = 0.0;
  for (const auto& m : modes_) s += m.alpha * std::sin(m.omega * t);
  return std::sqrt(lambda0_) * s;
}

double BackgroundModel::vector_potential_amplitude(double t) const { return -v0(t); }

std::vector<std::pair<std::size_t, std::size_t>> BackgroundModel::close_mode_pairs(
    double t_probe) const {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (!(t_probe > 0.0)) return pairs;
  const double resolution = 2.0 * std::numbers::pi / t_probe;
  for (std::size_t a = 0; a < modes_.size(); ++a) {
    for (std::size_t b = a + 1; b < modes_.size(); ++b) {
      if (std::abs(modes_[a].omega - modes_[b].omega) < resolution) {
        spdlog::warn("modes {} and {} are closer than 2*pi/t_probe = {:.3e}; "
                     "their resonances overlap",
                     a, b, resolution);
        pairs.emplace_back(a, b);
      }
    }
  }
  return pairs;
}

}  // namespace sphereosc
