#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "sphereosc/background.hpp"
#include "sphereosc/basis.hpp"
#include "sphereosc/dynamics.hpp"
#include "sphereosc/hamiltonian.hpp"

namespace sphereosc::cli {

inline constexpr const char* kToolName = "sphereosc";
inline constexpr const char* kToolVersion = "0.1.0";

struct PropagationConfig {
  double t_final = 10.0;
  double dt = 0.01;
  Integrator integrator = Integrator::rk4;
  int initial_state_index = 0;
  PropagationMode mode = PropagationMode::first_order;
};

struct ScanConfig {
  double omega_min = 0.5;
  double omega_max = 3.0;
  int points = 501;
  double t_probe = 100.0;
  double alpha_probe = 1e-3;
  int source_state = 0;
  std::vector<int> target_states;

  std::vector<double> grid() const;
};

enum class OutputFormat { csv, json };

struct RunConfig {
  double hbar = 1.0;
  double r0 = 1.0;
  std::vector<FluctuationMode> modes;
  double small_amplitude_guard = 0.1;
  BasisSpec basis;
  CouplingConvention coupling = CouplingConvention::consistent;
  PropagationConfig propagation;
  ScanConfig scan;
  DeltaKernel kernel;
  std::filesystem::path output_directory = ".";
  OutputFormat format = OutputFormat::csv;

  nlohmann::json source;  // parsed document, for hashing and manifests
  std::uint64_t hash = 0;

  BackgroundModel background() const { return {r0, modes, hbar, small_amplitude_guard}; }
};

/// Parses and validates a configuration document. Unknown fields and
/// out-of-range values throw ConfigError naming the field.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

/// FNV-1a over the compact serialization of the document.
std::uint64_t config_hash(const nlohmann::json& doc);

}  // namespace sphereosc::cli
