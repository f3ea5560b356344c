#include <cmath>
#include <numbers>
#include <string>

#include "sphereosc/dynamics.hpp"
#include "sphereosc/errors.hpp"

namespace sphereosc {

namespace {

void check_pair(int i, int j, int size) {
  if (i < 0 || j < 0 || i >= size || j >= size) {
    throw ConfigError("state index out of range: (" + std::to_string(i) + ", " +
                      std::to_string(j) + ") with " + std::to_string(size) + " states");
  }
  if (i == j) throw ConfigError("transition requires i != j");
}

// omega V1 - i V1t for emission, omega V1 + i V1t for absorption.
Complex channel_coupling(Channel c, double omega, Complex v1, Complex v1t) {
  return c == Channel::emission ? omega * v1 - kI * v1t : omega * v1 + kI * v1t;
}

bool forbidden(const EigenCouplings& c, int i, int j) {
  const auto a = std::size_t(i), b = std::size_t(j);
  if (c.m_labels.size() == std::size_t(c.size()) && c.m_labels[a] != c.m_labels[b]) return true;
  return c.parity.size() == std::size_t(c.size()) && c.parity[a] != c.parity[b];
}

}  // namespace

std::string_view channel_name(Channel c) {
  return c == Channel::emission ? "emission" : "absorption";
}

TransitionRecord transition_record(int i, int j, const EigenCouplings& couplings,
                                   const BackgroundModel& model) {
  check_pair(i, j, couplings.size());
  TransitionRecord r;
  r.i = i;
  r.j = j;
  r.omega_ji = couplings.omega(j, i);
  r.v1_ji = couplings.v1(j, i);
  r.v1t_ji = couplings.v1_tilde(j, i);
  for (std::size_t n = 0; n < model.modes().size(); ++n) {
    const double w = model.modes()[n].omega;
    for (Channel c : {Channel::emission, Channel::absorption}) {
      ChannelEntry e;
      e.mode = n;
      e.channel = c;
      e.detuning = c == Channel::emission ? r.omega_ji + w : r.omega_ji - w;
      e.weight = std::norm(channel_coupling(c, w, r.v1_ji, r.v1t_ji));
      r.channels.push_back(e);
    }
  }
  return r;
}

Complex a_n_pm(double t, double omega_ji, const FluctuationMode& mode, int sign) {
  const double delta = omega_ji + (sign >= 0 ? mode.omega : -mode.omega);
  const double x = 0.5 * delta * t;
  const Complex phase = std::polar(1.0, x);
  if (std::abs(delta) * t < 1e-6) return mode.alpha * phase * t * (1.0 - x * x / 6.0);
  return mode.alpha * phase * std::sin(x) / (0.5 * delta);
}

double tdpt_probability_full(int i, int j, double t, const EigenCouplings& couplings,
                             const BackgroundModel& model) {
  check_pair(i, j, couplings.size());
  const double w_ji = couplings.omega(j, i);
  const Complex v = couplings.v1(j, i);
  const Complex vt = couplings.v1_tilde(j, i);
  Complex amp = 0.0;
  for (const auto& mode : model.modes()) {
    amp += a_n_pm(t, w_ji, mode, +1) * channel_coupling(Channel::emission, mode.omega, v, vt);
    amp += a_n_pm(t, w_ji, mode, -1) * channel_coupling(Channel::absorption, mode.omega, v, vt);
  }
  const double hbar = couplings.hbar;
  return couplings.lambda0 / (4.0 * hbar * hbar) * std::norm(amp);
}

double tdpt_probability_rw(int i, int j, double t, const EigenCouplings& couplings,
                           const BackgroundModel& model) {
  check_pair(i, j, couplings.size());
  const double w_ji = couplings.omega(j, i);
  const Complex v = couplings.v1(j, i);
  const Complex vt = couplings.v1_tilde(j, i);
  double sum = 0.0;
  for (const auto& mode : model.modes()) {
    sum += std::norm(a_n_pm(t, w_ji, mode, +1)) *
           std::norm(channel_coupling(Channel::emission, mode.omega, v, vt));
    sum += std::norm(a_n_pm(t, w_ji, mode, -1)) *
           std::norm(channel_coupling(Channel::absorption, mode.omega, v, vt));
  }
  const double hbar = couplings.hbar;
  return couplings.lambda0 / (4.0 * hbar * hbar) * sum;
}

DeltaKernel DeltaKernel::parse(std::string_view name, double param) {
  DeltaKernel k;
  if (name == "sinc2") {
    k.kind = Kind::sinc2;
  } else if (name == "lorentzian") {
    k.kind = Kind::lorentzian;
  } else if (name == "gaussian") {
    k.kind = Kind::gaussian;
  } else {
    throw ConfigError("unknown delta kernel '" + std::string(name) +
                      "' (expected sinc2, lorentzian or gaussian)");
  }
  if (!(param > 0.0) || !std::isfinite(param))
    throw ConfigError("delta kernel parameter must be finite and > 0");
  k.param = param;
  return k;
}

std::string_view DeltaKernel::name() const {
  switch (kind) {
    case Kind::sinc2: return "sinc2";
    case Kind::lorentzian: return "lorentzian";
    case Kind::gaussian: return "gaussian";
  }
  return "";
}

double DeltaKernel::operator()(double energy, double hbar) const {
  constexpr double pi = std::numbers::pi;
  switch (kind) {
    case Kind::sinc2: {
      const double t = param;
      const double half = 0.5 * energy / hbar;
      const double s = std::abs(half) * t < 1e-8 ? t : std::sin(half * t) / half;
      return s * s / (2.0 * pi * t * hbar);
    }
    case Kind::lorentzian:
      return param / pi / (energy * energy + param * param);
    case Kind::gaussian:
      return std::exp(-0.5 * energy * energy / (param * param)) / (param * std::sqrt(2.0 * pi));
  }
  return 0.0;
}

RateTable golden_rule_rate(int i, int j, const EigenCouplings& couplings,
                           const BackgroundModel& model, const DeltaKernel& kernel) {
  const TransitionRecord rec = transition_record(i, j, couplings, model);
  const double hbar = couplings.hbar;
  const double prefactor = 2.0 * std::numbers::pi / hbar * couplings.lambda0 / 4.0;
  RateTable table;
  table.i = i;
  table.j = j;
  const bool allowed = !forbidden(couplings, i, j);
  for (const auto& ch : rec.channels) {
    const double alpha = model.modes()[ch.mode].alpha;
    RateEntry e;
    e.mode = ch.mode;
    e.channel = ch.channel;
    e.detuning = ch.detuning;
    e.gamma = allowed ? prefactor * alpha * alpha * ch.weight * kernel(hbar * ch.detuning, hbar)
                      : 0.0;
    table.total += e.gamma;
    table.entries.push_back(e);
  }
  return table;
}

std::vector<RateTable> golden_rule_table(const std::vector<std::pair<int, int>>& pairs,
                                         const EigenCouplings& couplings,
                                         const BackgroundModel& model, const DeltaKernel& kernel,
                                         Execution exec) {
  for (const auto& [i, j] : pairs) check_pair(i, j, couplings.size());
  std::vector<RateTable> out(pairs.size());
  kernels::for_each_index(pairs.size(), exec, [&](std::size_t k) {
    out[k] = golden_rule_rate(pairs[k].first, pairs[k].second, couplings, model, kernel);
  });
  return out;
}

}  // namespace sphereosc
