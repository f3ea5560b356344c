#include "output.hpp"

#include <cstdio>
#include <fstream>

#include "sphereosc/errors.hpp"

namespace sphereosc::cli {

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string cell_text(const Cell& c) {
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + "\"";
}

nlohmann::json cell_json(const Cell& c) {
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  if (const auto* d = std::get_if<double>(&c)) return *d;
  return std::get<std::string>(c);
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write output file " + path.string());
  return out;
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string header_comment(const RunConfig& cfg, const std::string& command) {
  return std::string("# ") + kToolName + " " + kToolVersion + " command=" + command +
         " config_fnv1a64=" + hex64(cfg.hash);
}

std::filesystem::path write_table(const Table& table, const std::filesystem::path& dir,
                                  OutputFormat format, const RunConfig& cfg,
                                  const std::string& command) {
  std::filesystem::create_directories(dir);
  if (format == OutputFormat::csv) {
    const auto path = dir / (table.name + ".csv");
    auto out = open_output(path);
    out << header_comment(cfg, command) << '\n';
    for (std::size_t c = 0; c < table.columns.size(); ++c)
      out << (c ? "," : "") << table.columns[c];
    out << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << cell_text(row[c]);
      out << '\n';
    }
    return path;
  }

  const auto path = dir / (table.name + ".json");
  auto out = open_output(path);
  nlohmann::json meta = {{"tool", kToolName},
                         {"version", kToolVersion},
                         {"command", command},
                         {"config_fnv1a64", hex64(cfg.hash)}};
  out << "{\"meta\": " << meta.dump() << ",\n";
  out << "\"columns\": " << nlohmann::json(table.columns).dump() << ",\n";
  out << "\"rows\": [";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& cell : table.rows[r]) row.push_back(cell_json(cell));
    out << (r ? ",\n" : "\n") << row.dump();
  }
  out << "\n]}\n";
  return path;
}

void write_manifest(const std::filesystem::path& dir, const RunConfig& cfg,
                    const std::string& command, const std::vector<std::filesystem::path>& files) {
  nlohmann::json m;
  m["tool"] = kToolName;
  m["version"] = kToolVersion;
  m["command"] = command;
  m["config_fnv1a64"] = hex64(cfg.hash);
  m["config"] = cfg.source;
  m["outputs"] = nlohmann::json::array();
  for (const auto& f : files) m["outputs"].push_back(f.filename().string());
  auto out = open_output(dir / ("manifest_" + command + ".json"));
  out << m.dump(2) << '\n';
}

}  // namespace sphereosc::cli
