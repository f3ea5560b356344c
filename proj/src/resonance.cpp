#include <algorithm>
#include <cmath>
#include <numbers>

#include "sphereosc/dynamics.hpp"
#include "sphereosc/errors.hpp"

namespace sphereosc {

ResonanceScan scan_resonances(int i, const std::vector<int>& targets,
                              const std::vector<double>& omega_grid, double t_probe, double alpha,
                              const EigenCouplings& couplings, const BackgroundModel& base,
                              Execution exec) {
  if (omega_grid.empty()) throw ConfigError("scan: omega grid is empty");
  if (targets.empty()) throw ConfigError("scan: no target states");
  if (!(t_probe > 0.0)) throw ConfigError("scan: t_probe must be > 0");
  for (double w : omega_grid) {
    if (!(w > 0.0) || !std::isfinite(w)) throw ConfigError("scan: grid frequencies must be > 0");
  }
  for (int j : targets) {
    if (j == i || j < 0 || j >= couplings.size() || i < 0 || i >= couplings.size())
      throw ConfigError("scan: invalid transition " + std::to_string(i) + " -> " + std::to_string(j));
  }
  // Validates alpha against the guard once, outside the parallel region.
  const BackgroundModel probe = base.with_modes({{alpha, omega_grid.front()}});

  ResonanceScan scan;
  scan.source = i;
  scan.targets = targets;
  scan.t_probe = t_probe;
  scan.alpha = alpha;
  scan.omega = omega_grid;
  scan.rate.assign(targets.size(), std::vector<double>(omega_grid.size(), 0.0));

  kernels::for_each_index(omega_grid.size(), exec, [&](std::size_t g) {
    const BackgroundModel single = probe.with_modes({{alpha, omega_grid[g]}});
    for (std::size_t slot = 0; slot < targets.size(); ++slot) {
      scan.rate[slot][g] = tdpt_probability_rw(i, targets[slot], t_probe, couplings, single) / t_probe;
    }
  });

  for (const auto& curve : scan.rate) scan.peaks.push_back(detect_peaks(scan.omega, curve, t_probe));
  return scan;
}

std::vector<ResonancePeak> detect_peaks(const std::vector<double>& omega,
                                        const std::vector<double>& values, double t_probe) {
  std::vector<ResonancePeak> peaks;
  const std::size_t n = values.size();
  if (n == 0 || omega.size() != n) return peaks;
  const double top = *std::max_element(values.begin(), values.end());
  if (!(top > 0.0)) return peaks;
  const double floor = 1e-6 * top;
  const double window = 2.0 * (2.0 * std::numbers::pi / t_probe);

  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double v = values[k];
    if (v < floor) continue;
    if (omega[k] - window < omega.front() || omega[k] + window > omega.back()) continue;
    if (!(values[k - 1] < v && values[k + 1] <= v)) continue;
    bool dominant = true;
    for (std::size_t q = k; q > 0 && dominant && omega[k] - omega[q - 1] <= window; --q)
      dominant = values[q - 1] < v;
    for (std::size_t q = k + 1; q < n && dominant && omega[q] - omega[k] <= window; ++q)
      dominant = values[q] <= v;
    if (!dominant) continue;

    ResonancePeak p;
    p.center = omega[k];
    p.height = v;
    {
      // Parabola through the three samples around the maximum.
      const double x0 = omega[k - 1], x1 = omega[k], x2 = omega[k + 1];
      const double y0 = values[k - 1], y1 = values[k], y2 = values[k + 1];
      const double d1 = (y1 - y0) / (x1 - x0);
      const double d2 = (y2 - y1) / (x2 - x1);
      const double c2 = (d2 - d1) / (x2 - x0);
      if (c2 < 0.0) {
        const double c1 = d1 - c2 * (x0 + x1);
        const double xv = -c1 / (2.0 * c2);
        if (xv > x0 && xv < x2) {
          p.center = xv;
          p.height = y1 + c1 * (xv - x1) + c2 * (xv * xv - x1 * x1);
        }
      }
    }
    const double half = 0.5 * p.height;
    double left = omega.front();
    for (std::size_t q = k; q > 0; --q) {
      if (values[q - 1] < half) {
        left = omega[q - 1] + (half - values[q - 1]) * (omega[q] - omega[q - 1]) /
                                  (values[q] - values[q - 1]);
        break;
      }
    }
    double right = omega.back();
    for (std::size_t q = k; q + 1 < n; ++q) {
      if (values[q + 1] < half) {
        right = omega[q] + (values[q] - half) * (omega[q + 1] - omega[q]) /
                               (values[q] - values[q + 1]);
        break;
      }
    }
    p.fwhm = right - left;
    peaks.push_back(p);
  }
  return peaks;
}

double integrate_peak(const std::vector<double>& omega, const std::vector<double>& values,
                      double center, double half_window) {
  const double lo = center - half_window;
  const double hi = center + half_window;
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < omega.size() && k + 1 < values.size(); ++k) {
    const double a = std::max(omega[k], lo);
    const double b = std::min(omega[k + 1], hi);
    if (b <= a) continue;
    const double span = omega[k + 1] - omega[k];
    const auto interp = [&](double x) {
      return values[k] + (values[k + 1] - values[k]) * (x - omega[k]) / span;
    };
    sum += 0.5 * (interp(a) + interp(b)) * (b - a);
  }
  return sum;
}

}  // namespace sphereosc
