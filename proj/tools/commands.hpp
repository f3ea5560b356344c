#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace sphereosc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

const std::vector<std::string>& subcommands();

struct ValidationCheck {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

/// Runs every module invariant for the configured system.
std::vector<ValidationCheck> run_validation(const RunConfig& cfg);

/// Executes one subcommand and writes its outputs under `dir`. Returns the written files.
std::vector<std::filesystem::path> run_subcommand(const std::string& command, const RunConfig& cfg,
                                                  const std::filesystem::path& dir,
                                                  OutputFormat format, bool* failed = nullptr);

struct Invocation {
  std::string command;
  std::filesystem::path config;
  std::optional<std::filesystem::path> output;
  std::optional<OutputFormat> format;
  int threads = 0;  // 0 keeps the OpenMP default
};

/// Loads the config, runs the command, maps errors to exit codes.
int execute(const Invocation& inv);

}  // namespace sphereosc::cli
