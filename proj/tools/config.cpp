#include "config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <set>
#include <string_view>

#include "sphereosc/errors.hpp"

namespace sphereosc::cli {

namespace {

using nlohmann::json;

void require_object(const json& node, const std::string& where) {
  if (!node.is_object()) throw ConfigError(where + " must be an object");
}

void reject_unknown(const json& node, const std::string& where,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : node.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) {
      throw ConfigError("unknown field '" + (where.empty() ? key : where + "." + key) + "'");
    }
  }
}

std::string field(const std::string& where, const char* key) {
  return where.empty() ? std::string(key) : where + "." + key;
}

double number(const json& node, const std::string& where, const char* key, double fallback) {
  if (!node.contains(key)) return fallback;
  const auto& v = node.at(key);
  if (!v.is_number()) throw ConfigError(field(where, key) + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(field(where, key) + " must be finite");
  return d;
}

double required_number(const json& node, const std::string& where, const char* key) {
  if (!node.contains(key)) throw ConfigError(field(where, key) + " is required");
  return number(node, where, key, 0.0);
}

int integer(const json& node, const std::string& where, const char* key, int fallback) {
  if (!node.contains(key)) return fallback;
  const auto& v = node.at(key);
  if (!v.is_number_integer()) throw ConfigError(field(where, key) + " must be an integer");
  return v.get<int>();
}

std::string text(const json& node, const std::string& where, const char* key,
                 const std::string& fallback) {
  if (!node.contains(key)) return fallback;
  const auto& v = node.at(key);
  if (!v.is_string()) throw ConfigError(field(where, key) + " must be a string");
  return v.get<std::string>();
}

void positive(double v, const std::string& name) {
  if (!(v > 0.0)) throw ConfigError(name + " must be > 0");
}

void state_in_range(int k, int dim, const std::string& name) {
  if (k < 0 || k >= dim) {
    throw ConfigError(name + " = " + std::to_string(k) + " is outside [0, " +
                      std::to_string(dim - 1) + "]");
  }
}

}  // namespace

std::vector<double> ScanConfig::grid() const {
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) {
    g[std::size_t(k)] = points == 1 ? omega_min
                                    : omega_min + (omega_max - omega_min) * k / double(points - 1);
  }
  return g;
}

std::uint64_t config_hash(const json& doc) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : doc.dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

RunConfig parse_config(const json& doc) {
  require_object(doc, "config");
  reject_unknown(doc, "", {"hbar", "background", "basis", "coupling", "propagation", "scan",
                           "goldenrule", "output"});
  RunConfig cfg;
  cfg.source = doc;
  cfg.hash = config_hash(doc);

  cfg.hbar = number(doc, "", "hbar", 1.0);
  positive(cfg.hbar, "hbar");

  if (!doc.contains("background")) throw ConfigError("background is required");
  const auto& bg = doc.at("background");
  require_object(bg, "background");
  reject_unknown(bg, "background", {"R0", "modes", "small_amplitude_guard"});
  if (!bg.contains("R0")) throw ConfigError("background.R0 is required");
  const auto& r0 = bg.at("R0");
  if (r0.is_string() && r0.get<std::string>() == "inf") {
    cfg.r0 = std::numeric_limits<double>::infinity();
  } else if (r0.is_number()) {
    cfg.r0 = r0.get<double>();
  } else {
    throw ConfigError("background.R0 must be a number or \"inf\"");
  }
  cfg.small_amplitude_guard = number(bg, "background", "small_amplitude_guard", 0.1);
  if (bg.contains("modes")) {
    const auto& modes = bg.at("modes");
    if (!modes.is_array()) throw ConfigError("background.modes must be an array");
    for (std::size_t n = 0; n < modes.size(); ++n) {
      const std::string where = "background.modes[" + std::to_string(n) + "]";
      require_object(modes[n], where);
      reject_unknown(modes[n], where, {"alpha", "omega"});
      cfg.modes.push_back(
          {required_number(modes[n], where, "alpha"), required_number(modes[n], where, "omega")});
    }
  }
  (void)cfg.background();  // runs the model's own validation

  if (!doc.contains("basis")) throw ConfigError("basis is required");
  const auto& basis = doc.at("basis");
  require_object(basis, "basis");
  reject_unknown(basis, "basis", {"n_max", "pad", "quad_order"});
  if (!basis.contains("n_max")) throw ConfigError("basis.n_max is required");
  cfg.basis.n_max = integer(basis, "basis", "n_max", 0);
  cfg.basis.pad = integer(basis, "basis", "pad", 4);
  cfg.basis.quad_order = integer(basis, "basis", "quad_order", 0);
  cfg.basis.validate();
  const int dim = cfg.basis.core_dim();

  const std::string coupling = text(doc, "", "coupling", "consistent");
  if (coupling == "consistent") {
    cfg.coupling = CouplingConvention::consistent;
  } else if (coupling == "as_printed") {
    cfg.coupling = CouplingConvention::as_printed;
  } else {
    throw ConfigError("coupling must be \"consistent\" or \"as_printed\"");
  }

  if (doc.contains("propagation")) {
    const auto& p = doc.at("propagation");
    require_object(p, "propagation");
    reject_unknown(p, "propagation",
                   {"t_final", "dt", "integrator", "initial_state_index", "mode"});
    auto& pc = cfg.propagation;
    pc.t_final = number(p, "propagation", "t_final", pc.t_final);
    positive(pc.t_final, "propagation.t_final");
    pc.dt = number(p, "propagation", "dt", pc.dt);
    positive(pc.dt, "propagation.dt");
    const std::string integ = text(p, "propagation", "integrator", "rk4");
    if (integ == "rk4") {
      pc.integrator = Integrator::rk4;
    } else if (integ == "expm_midpoint") {
      pc.integrator = Integrator::expm_midpoint;
    } else {
      throw ConfigError("propagation.integrator must be \"rk4\" or \"expm_midpoint\"");
    }
    const std::string mode = text(p, "propagation", "mode", "first_order");
    if (mode == "first_order") {
      pc.mode = PropagationMode::first_order;
    } else if (mode == "exact") {
      pc.mode = PropagationMode::exact;
    } else {
      throw ConfigError("propagation.mode must be \"first_order\" or \"exact\"");
    }
    pc.initial_state_index = integer(p, "propagation", "initial_state_index", 0);
    state_in_range(pc.initial_state_index, dim, "propagation.initial_state_index");
  }

  if (doc.contains("scan")) {
    const auto& s = doc.at("scan");
    require_object(s, "scan");
    reject_unknown(s, "scan", {"omega_min", "omega_max", "points", "t_probe", "alpha_probe",
                               "source_state", "target_states"});
    auto& sc = cfg.scan;
    sc.omega_min = number(s, "scan", "omega_min", sc.omega_min);
    positive(sc.omega_min, "scan.omega_min");
    sc.omega_max = number(s, "scan", "omega_max", sc.omega_max);
    if (!(sc.omega_max >= sc.omega_min)) throw ConfigError("scan.omega_max must be >= scan.omega_min");
    sc.points = integer(s, "scan", "points", sc.points);
    if (sc.points < 1) throw ConfigError("scan.points must be >= 1");
    sc.t_probe = number(s, "scan", "t_probe", sc.t_probe);
    positive(sc.t_probe, "scan.t_probe");
    sc.alpha_probe = number(s, "scan", "alpha_probe", sc.alpha_probe);
    if (!(sc.alpha_probe >= 0.0)) throw ConfigError("scan.alpha_probe must be >= 0");
    if (!std::isinf(cfg.r0) && sc.alpha_probe / cfg.r0 > cfg.small_amplitude_guard)
      throw ConfigError("scan.alpha_probe exceeds the small-amplitude guard");
    sc.source_state = integer(s, "scan", "source_state", 0);
    state_in_range(sc.source_state, dim, "scan.source_state");
    if (s.contains("target_states")) {
      const auto& t = s.at("target_states");
      if (!t.is_array()) throw ConfigError("scan.target_states must be an array");
      for (std::size_t k = 0; k < t.size(); ++k) {
        const std::string name = "scan.target_states[" + std::to_string(k) + "]";
        if (!t[k].is_number_integer()) throw ConfigError(name + " must be an integer");
        const int j = t[k].get<int>();
        state_in_range(j, dim, name);
        if (j == sc.source_state) throw ConfigError(name + " equals scan.source_state");
        sc.target_states.push_back(j);
      }
    }
  }

  std::string kernel = "sinc2";
  double kernel_param = cfg.scan.t_probe;
  if (doc.contains("goldenrule")) {
    const auto& g = doc.at("goldenrule");
    require_object(g, "goldenrule");
    reject_unknown(g, "goldenrule", {"kernel", "kernel_param"});
    kernel = text(g, "goldenrule", "kernel", kernel);
    kernel_param = number(g, "goldenrule", "kernel_param", kernel_param);
  }
  try {
    cfg.kernel = DeltaKernel::parse(kernel, kernel_param);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("goldenrule: ") + e.what());
  }

  if (doc.contains("output")) {
    const auto& o = doc.at("output");
    require_object(o, "output");
    reject_unknown(o, "output", {"directory", "format"});
    cfg.output_directory = text(o, "output", "directory", ".");
    const std::string format = text(o, "output", "format", "csv");
    if (format == "csv") {
      cfg.format = OutputFormat::csv;
    } else if (format == "json") {
      cfg.format = OutputFormat::json;
    } else {
      throw ConfigError("output.format must be \"csv\" or \"json\"");
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return parse_config(doc);
}

}  // namespace sphereosc::cli
