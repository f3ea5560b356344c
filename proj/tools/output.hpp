#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "config.hpp"

namespace sphereosc::cli {

using Cell = std::variant<long long, double, std::string>;

struct Table {
  std::string name;  // file stem, e.g. "spectrum"
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

/// Scientific notation with 17 significant digits; parses back to the same double.
std::string format_number(double v);

/// First line of every output file.
std::string header_comment(const RunConfig& cfg, const std::string& command);

/// Writes <dir>/<name>.csv or .json and returns the path.
std::filesystem::path write_table(const Table& table, const std::filesystem::path& dir,
                                  OutputFormat format, const RunConfig& cfg,
                                  const std::string& command);

void write_manifest(const std::filesystem::path& dir, const RunConfig& cfg,
                    const std::string& command, const std::vector<std::filesystem::path>& files);

}  // namespace sphereosc::cli
