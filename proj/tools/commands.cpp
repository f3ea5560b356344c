#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <omp.h>
#include <spdlog/spdlog.h>

#include "output.hpp"
#include "sphereosc/errors.hpp"
#include "sphereosc/geometry.hpp"

namespace sphereosc::cli {

namespace {

constexpr double kElementFloor = 1e-14;

struct System {
  BackgroundModel model;
  HiggsOperatorSet ops;
  SpectrumResult spectrum;
  EigenCouplings couplings;
};

System build_system(const RunConfig& cfg) {
  BackgroundModel model = cfg.background();
  HiggsOperatorSet ops = build_operator_set(cfg.basis, model.lambda0(), cfg.hbar, cfg.coupling);
  SpectrumResult spectrum = diagonalize(ops);
  EigenCouplings couplings = eigen_couplings(ops, spectrum);
  return {std::move(model), std::move(ops), std::move(spectrum), std::move(couplings)};
}

bool coupled(const EigenCouplings& c, int i, int j) {
  return std::abs(c.v1(j, i)) > kElementFloor || std::abs(c.v1_tilde(j, i)) > kElementFloor;
}

std::vector<std::pair<int, int>> coupled_pairs(const EigenCouplings& c) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < c.size(); ++i)
    for (int j = 0; j < c.size(); ++j)
      if (i != j && coupled(c, i, j)) pairs.emplace_back(i, j);
  return pairs;
}

Table spectrum_table(const SpectrumResult& s) {
  Table t{"spectrum", {"index", "energy", "m_label", "cluster_id"}, {}};
  for (int k = 0; k < s.size(); ++k) {
    const auto u = std::size_t(k);
    t.add_row({(long long)k, s.energies[u], (long long)s.m_labels[u], (long long)s.cluster_id[u]});
  }
  return t;
}

Table melem_table(const EigenCouplings& c) {
  Table t{"melem", {"i", "j", "omega_ji", "re_v1", "im_v1", "re_v1t", "im_v1t"}, {}};
  for (const auto& [i, j] : coupled_pairs(c)) {
    const Complex v = c.v1(j, i);
    const Complex vt = c.v1_tilde(j, i);
    t.add_row({(long long)i, (long long)j, c.omega(j, i), v.real(), v.imag(), vt.real(), vt.imag()});
  }
  return t;
}

Table rates_table(const System& sys, const DeltaKernel& kernel) {
  Table t{"rates", {"i", "j", "mode", "channel", "detuning", "gamma"}, {}};
  const auto pairs = coupled_pairs(sys.couplings);
  const auto tables = golden_rule_table(pairs, sys.couplings, sys.model, kernel);
  for (const auto& rt : tables) {
    for (const auto& e : rt.entries) {
      t.add_row({(long long)rt.i, (long long)rt.j, (long long)e.mode,
                 std::string(channel_name(e.channel)), e.detuning, e.gamma});
    }
  }
  return t;
}

Table propagate_table(const System& sys, const RunConfig& cfg) {
  const auto& pc = cfg.propagation;
  ComplexVector psi0 = ComplexVector::Zero(sys.spectrum.size());
  psi0[pc.initial_state_index] = 1.0;
  PropagationOptions opt;
  opt.t_final = pc.t_final;
  opt.dt = pc.dt;
  opt.integrator = pc.integrator;
  const auto r = propagate(psi0, pc.mode, sys.model, sys.ops, sys.spectrum, opt);

  Table t{"propagate", {"t"}, {}};
  for (int k = 0; k < sys.spectrum.size(); ++k) t.columns.push_back("pop_" + std::to_string(k));
  t.columns.push_back("norm_drift");
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    std::vector<Cell> row{r.times[k]};
    for (double p : r.populations[k]) row.emplace_back(p);
    row.emplace_back(r.norm_error[k]);
    t.add_row(std::move(row));
  }
  spdlog::info("propagate: {} steps, max norm drift {:.3e}", r.steps, r.norm_drift);
  return t;
}

std::pair<Table, Table> scan_tables(const System& sys, const RunConfig& cfg) {
  const auto& sc = cfg.scan;
  std::vector<int> targets = sc.target_states;
  if (targets.empty()) {
    for (int j = 0; j < sys.couplings.size(); ++j)
      if (j != sc.source_state && coupled(sys.couplings, sc.source_state, j)) targets.push_back(j);
  }
  if (targets.empty()) throw ConfigError("scan: the source state couples to no other state");
  const auto scan = scan_resonances(sc.source_state, targets, sc.grid(), sc.t_probe,
                                    sc.alpha_probe, sys.couplings, sys.model);
  Table curve{"scan", {"omega"}, {}};
  for (int j : targets) curve.columns.push_back("p_over_t_" + std::to_string(j));
  for (std::size_t g = 0; g < scan.omega.size(); ++g) {
    std::vector<Cell> row{scan.omega[g]};
    for (const auto& r : scan.rate) row.emplace_back(r[g]);
    curve.add_row(std::move(row));
  }
  Table peaks{"scan_peaks", {"target", "center", "height", "fwhm"}, {}};
  for (std::size_t s = 0; s < targets.size(); ++s) {
    for (const auto& p : scan.peaks[s]) peaks.add_row({(long long)targets[s], p.center, p.height, p.fwhm});
  }
  return {std::move(curve), std::move(peaks)};
}

ValidationCheck at_most(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, value <= threshold};
}

double relative_error(const Vec3& a, const Vec3& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"spectrum", "melem", "rates",
                                              "propagate", "scan", "validate"};
  return names;
}

std::vector<ValidationCheck> run_validation(const RunConfig& cfg) {
  std::vector<ValidationCheck> checks;
  const System sys = build_system(cfg);
  const auto& ops = sys.ops;
  const double herm_tol = 1e-12;

  checks.push_back(at_most("hermiticity.H0", ops.h0.hermiticity_defect(), herm_tol));
  checks.push_back(at_most("hermiticity.Pi2", ops.pi2.hermiticity_defect(), herm_tol));
  checks.push_back(at_most("hermiticity.L2", ops.l2.hermiticity_defect(), herm_tol));
  checks.push_back(at_most("hermiticity.V1", ops.v1.hermiticity_defect(), herm_tol));
  checks.push_back(at_most("hermiticity.V1tilde", ops.v1_tilde.hermiticity_defect(), herm_tol));

  std::mt19937_64 rng(12345);
  double period = 2.0 * std::numbers::pi;
  for (const auto& m : sys.model.modes()) period = std::max(period, 2.0 * std::numbers::pi / m.omega);
  std::uniform_real_distribution<double> when(0.0, period);
  {
    const OperatorAlgebra algebra(cfg.basis, cfg.hbar);
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
      const double t = when(rng);
      worst = std::max(worst, hermiticity_defect(exact_hamiltonian_at(
                                  algebra, sys.model.radius_at(t), sys.model.radius_rate(t))));
    }
    checks.push_back(at_most("hermiticity.H_exact", worst, herm_tol));
  }

  checks.push_back(at_most("symmetry.commutator_H0_Lz", commutator_defect(ops.h0.entries, ops.lz.entries), 1e-12));
  checks.push_back(at_most("symmetry.commutator_V1_Lz", commutator_defect(ops.v1.entries, ops.lz.entries), 1e-10));
  checks.push_back(
      at_most("symmetry.commutator_V1tilde_Lz", commutator_defect(ops.v1_tilde.entries, ops.lz.entries), 1e-10));

  const auto& sp = sys.spectrum;
  double e_scale = 0.0;
  for (double e : sp.energies) e_scale = std::max(e_scale, std::abs(e));
  checks.push_back(at_most("spectrum.orthonormality", sp.orthonormality_defect, 1e-12));
  checks.push_back(at_most("spectrum.residual", sp.max_residual, 1e-10 * std::max(1.0, e_scale)));
  double m_dev = 0.0;
  for (int k = 0; k < sp.size(); ++k)
    m_dev = std::max(m_dev, std::abs(sp.m_values[std::size_t(k)] - sp.m_labels[std::size_t(k)]));
  checks.push_back(at_most("spectrum.integer_m", m_dev, 1e-8));

  {
    const auto& c = sys.couplings;
    const double largest = std::max(c.v1.cwiseAbs().maxCoeff(), c.v1_tilde.cwiseAbs().maxCoeff());
    double leak = 0.0;
    for (int i = 0; i < c.size(); ++i)
      for (int j = 0; j < c.size(); ++j)
        if (c.m_labels[std::size_t(i)] != c.m_labels[std::size_t(j)] ||
            c.parity[std::size_t(i)] != c.parity[std::size_t(j)])
          leak = std::max({leak, std::abs(c.v1(j, i)), std::abs(c.v1_tilde(j, i))});
    checks.push_back(at_most("selection_rules.leak", largest > 0.0 ? leak / largest : 0.0, 1e-10));
    double conj = 0.0;
    for (int i = 0; i < c.size(); ++i)
      for (int j = 0; j < c.size(); ++j)
        conj = std::max(conj, std::abs(c.v1(j, i) - std::conj(c.v1(i, j))));
    checks.push_back(at_most("melem.conjugate_pairs", conj, 1e-12 * std::max(1.0, largest)));
  }

  {
    const auto pad = measure_pad_convergence(cfg.basis, sys.model.lambda0(), cfg.hbar, cfg.coupling,
                                             2 * cfg.basis.pad);
    checks.push_back(at_most("padding.H0", pad.h0, 1e-10));
    checks.push_back(at_most("padding.V1", pad.v1, 1e-10));
    checks.push_back(at_most("padding.V1tilde", pad.v1_tilde, 1e-10));
  }

  if (sys.model.lambda0() > 0.0) {
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    const double h = 1e-4;
    const double ht = 1e-2;
    double worst_fd = 0.0;
    double worst_norm = 0.0;
    for (int k = 0; k < 100; ++k) {
      const ChartPoint p{coord(rng), coord(rng), 1};
      const double t = when(rng);
      const auto d = geometry_derivatives(p, sys.model, t);
      const double lam = sys.model.curvature_exact(t);
      const Vec3 fx = (embed({p.x + h, p.y, 1}, lam) - embed({p.x - h, p.y, 1}, lam)) / (2 * h);
      const Vec3 fy = (embed({p.x, p.y + h, 1}, lam) - embed({p.x, p.y - h, 1}, lam)) / (2 * h);
      const auto at = [&](double s) { return embed(p, sys.model.curvature_exact(t + s)); };
      const Vec3 ft = (45.0 * (at(ht) - at(-ht)) - 9.0 * (at(2 * ht) - at(-2 * ht)) +
                       (at(3 * ht) - at(-3 * ht))) / (60.0 * ht);
      worst_fd = std::max({worst_fd, relative_error(d.rx, fx), relative_error(d.ry, fy)});
      if (d.rt.norm() > 0.0) worst_fd = std::max(worst_fd, relative_error(d.rt, ft));
      const double r = sys.model.radius_at(t);
      worst_norm = std::max(worst_norm, std::abs(embed(p, lam).squaredNorm() - r * r) / (r * r));
    }
    checks.push_back(at_most("geometry.finite_difference", worst_fd, 1e-7));
    checks.push_back(at_most("geometry.embedding_radius", worst_norm, 1e-12));
  }

  // sinc2 golden rule against the rotating-wave probability at resonance.
  if (sys.model.lambda0() > 0.0) {
    const auto pairs = coupled_pairs(sys.couplings);
    const auto it = std::find_if(pairs.begin(), pairs.end(), [&](const auto& pr) {
      return sys.couplings.omega(pr.second, pr.first) > 0.0;
    });
    if (it != pairs.end()) {
      const double t_probe = 100.0;
      const double w = sys.couplings.omega(it->second, it->first);
      const BackgroundModel probe = sys.model.with_modes({{1e-3 * sys.model.r0(), w}});
      const double gamma =
          golden_rule_rate(it->first, it->second, sys.couplings, probe,
                           DeltaKernel::parse("sinc2", t_probe)).total;
      const double p = tdpt_probability_rw(it->first, it->second, t_probe, sys.couplings, probe);
      checks.push_back(at_most("goldenrule.sinc2_consistency", std::abs(gamma - p / t_probe) / gamma, 1e-10));
    }
  }

  // Static background: populations stay put; norm drift bounded.
  {
    ComplexVector psi0 = ComplexVector::Zero(sp.size());
    psi0[0] = 1.0 / std::sqrt(2.0);
    psi0[sp.size() - 1] = 1.0 / std::sqrt(2.0);
    double fastest = 0.0;
    for (double e : sp.energies) fastest = std::max(fastest, std::abs(e) / cfg.hbar);
    for (const auto& m : sys.model.modes()) fastest = std::max(fastest, m.omega);
    PropagationOptions opt;
    opt.dt = 2.0 * std::numbers::pi / (40.0 * fastest);
    opt.t_final = 200 * opt.dt;
    const auto fixed = propagate(psi0, PropagationMode::first_order, sys.model.with_modes({}), ops, sp, opt);
    double change = 0.0;
    for (const auto& row : fixed.populations)
      for (std::size_t k = 0; k < row.size(); ++k)
        change = std::max(change, std::abs(row[k] - fixed.populations.front()[k]));
    checks.push_back(at_most("propagation.static_populations", change, 1e-12));
    const auto driven = propagate(psi0, PropagationMode::first_order, sys.model, ops, sp, opt);
    checks.push_back(at_most("propagation.norm_drift", driven.norm_drift, 1e-8));
  }
  return checks;
}

std::vector<std::filesystem::path> run_subcommand(const std::string& command, const RunConfig& cfg,
                                                  const std::filesystem::path& dir,
                                                  OutputFormat format, bool* failed) {
  std::vector<std::filesystem::path> files;
  if (failed) *failed = false;
  auto write = [&](const Table& t) { files.push_back(write_table(t, dir, format, cfg, command)); };

  if (command == "validate") {
    const auto checks = run_validation(cfg);
    Table t{"validate", {"check", "value", "threshold", "status"}, {}};
    bool any_failed = false;
    for (const auto& c : checks) {
      t.add_row({c.name, c.value, c.threshold, std::string(c.pass ? "pass" : "fail")});
      if (!c.pass) {
        any_failed = true;
        spdlog::error("validate: {} = {:.3e} exceeds {:.1e}", c.name, c.value, c.threshold);
      }
    }
    write(t);
    if (failed) *failed = any_failed;
  } else {
    const System sys = build_system(cfg);
    if (command == "spectrum") {
      write(spectrum_table(sys.spectrum));
    } else if (command == "melem") {
      write(melem_table(sys.couplings));
    } else if (command == "rates") {
      write(rates_table(sys, cfg.kernel));
    } else if (command == "propagate") {
      write(propagate_table(sys, cfg));
    } else if (command == "scan") {
      auto [curve, peaks] = scan_tables(sys, cfg);
      write(curve);
      write(peaks);
    } else {
      throw ConfigError("unknown subcommand '" + command + "'");
    }
  }
  write_manifest(dir, cfg, command, files);
  return files;
}

int execute(const Invocation& inv) {
  try {
    if (inv.threads < 0) throw ConfigError("--threads must be >= 1");
    if (inv.threads > 0) omp_set_num_threads(inv.threads);
    const RunConfig cfg = load_config(inv.config);
    const auto dir = inv.output.value_or(cfg.output_directory);
    const auto format = inv.format.value_or(cfg.format);
    bool failed = false;
    const auto files = run_subcommand(inv.command, cfg, dir, format, &failed);
    for (const auto& f : files) spdlog::info("wrote {}", f.string());
    return failed ? kExitNumerical : kExitOk;
  } catch (const ConfigError& e) {
    spdlog::error("configuration error: {}", e.what());
    return kExitConfig;
  } catch (const NumericalError& e) {
    spdlog::error("numerical error: {}", e.what());
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    spdlog::error("output error: {}", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    spdlog::error("numerical error: {}", e.what());
    return kExitNumerical;
  }
}

}  // namespace sphereosc::cli
