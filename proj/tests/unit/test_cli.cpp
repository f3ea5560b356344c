#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "output.hpp"
#include "sphereosc/errors.hpp"

using namespace sphereosc;
using namespace sphereosc::cli;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json default_doc() {
  std::ifstream in(SPHEREOSC_DEFAULT_CONFIG);
  return json::parse(in);
}

json flat_doc(int n_max) {
  json d = default_doc();
  d["background"]["R0"] = "inf";
  d["background"]["modes"] = json::array();
  d["basis"]["n_max"] = n_max;
  return d;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("sphereosc_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Csv {
  std::string comment;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int col(const std::string& name) const {
    for (std::size_t k = 0; k < header.size(); ++k)
      if (header[k] == name) return int(k);
    FAIL("missing column " << name);
    return -1;
  }
  double num(std::size_t r, const std::string& name) const { return std::stod(rows[r][std::size_t(col(name))]); }
  long long integer(std::size_t r, const std::string& name) const { return std::stoll(rows[r][std::size_t(col(name))]); }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream s(line);
  std::string cell;
  while (std::getline(s, cell, ',')) out.push_back(cell);
  return out;
}

Csv read_csv(const fs::path& p) {
  std::ifstream in(p);
  Csv c;
  std::string line;
  std::getline(in, c.comment);
  std::getline(in, line);
  c.header = split(line);
  while (std::getline(in, line)) c.rows.push_back(split(line));
  return c;
}

std::string header_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  return line;
}

void expect_config_error(const json& doc, const std::string& field) {
  try {
    parse_config(doc);
    FAIL("accepted an invalid config; expected an error naming " << field);
  } catch (const ConfigError& e) {
    CHECK_MESSAGE(std::string(e.what()).find(field) != std::string::npos, e.what());
  }
}

int run_exe(const std::string& args) {
  const std::string cmd = std::string("\"") + SPHEREOSC_EXE + "\" " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_doc(const json& doc, const fs::path& dir) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << doc.dump(2);
  return p;
}

}  // namespace

TEST_CASE("config validation names the offending field") {
  CHECK_NOTHROW(parse_config(default_doc()));
  json d = default_doc();
  d["colour"] = 1;
  expect_config_error(d, "colour");
  d = default_doc();
  d["background"]["modes"][0]["phase"] = 0.0;
  expect_config_error(d, "background.modes[0].phase");
  d = default_doc();
  d["basis"].erase("n_max");
  expect_config_error(d, "basis.n_max");
  d = default_doc();
  d["propagation"]["dt"] = -0.1;
  expect_config_error(d, "propagation.dt");
  d = default_doc();
  d["propagation"]["integrator"] = "euler";
  expect_config_error(d, "propagation.integrator");
  d = default_doc();
  d["output"]["format"] = "xml";
  expect_config_error(d, "output.format");
  d = default_doc();
  d["goldenrule"]["kernel"] = "boxcar";
  expect_config_error(d, "goldenrule");
  d = default_doc();
  d["background"]["modes"][0]["alpha"] = 1.0;
  expect_config_error(d, "background");
  d = default_doc();
  d["scan"]["target_states"] = json::array({0});
  expect_config_error(d, "scan.target_states");
  d = default_doc();
  d["hbar"] = "one";
  expect_config_error(d, "hbar");
}

TEST_CASE("config hash follows the document") {
  const auto a = parse_config(default_doc());
  const auto b = parse_config(default_doc());
  CHECK(a.hash == b.hash);
  json d = default_doc();
  d["propagation"]["t_final"] = 51.0;
  CHECK(parse_config(d).hash != a.hash);
  const std::string line = header_comment(a, "spectrum");
  CHECK(line.rfind("# sphereosc 0.1.0 command=spectrum config_fnv1a64=", 0) == 0);
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.0, 1.0, -2.5e-300, 1.0 / 3.0, 6.02214076e23}) {
    const std::string s = format_number(v);
    CHECK(std::stod(s) == v);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    CHECK(s == buf);
  }
}

TEST_CASE("flat spectrum output") {
  const auto dir = scratch("flat");
  const auto cfg = parse_config(flat_doc(12));
  run_subcommand("spectrum", cfg, dir, OutputFormat::csv);
  CHECK(header_line(dir / "spectrum.csv") == "index,energy,m_label,cluster_id");
  const auto c = read_csv(dir / "spectrum.csv");
  CHECK(c.comment == header_comment(cfg, "spectrum"));
  REQUIRE(c.rows.size() == 91);
  const double expect[] = {1, 2, 2, 3, 3, 3};
  for (std::size_t k = 0; k < 6; ++k) CHECK(std::abs(c.num(k, "energy") - expect[k]) <= 1e-10);
  for (std::size_t k = 0; k < c.rows.size(); ++k) CHECK(c.integer(k, "index") == (long long)k);
  CHECK(c.integer(0, "cluster_id") == 0);
  CHECK(c.integer(1, "cluster_id") == c.integer(2, "cluster_id"));
}

TEST_CASE("outputs are byte-identical across runs") {
  const auto cfg = parse_config(default_doc());
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  for (const char* cmd : {"spectrum", "melem", "rates"}) {
    const auto files = run_subcommand(cmd, cfg, a, OutputFormat::csv);
    run_subcommand(cmd, cfg, b, OutputFormat::csv);
    for (const auto& f : files) CHECK_MESSAGE(slurp(f) == slurp(b / f.filename()), f.string());
  }
}

TEST_CASE("json output carries the same table") {
  const auto cfg = parse_config(default_doc());
  const auto dir = scratch("json");
  run_subcommand("spectrum", cfg, dir, OutputFormat::csv);
  run_subcommand("spectrum", cfg, dir, OutputFormat::json);
  const auto c = read_csv(dir / "spectrum.csv");
  std::ifstream in(dir / "spectrum.json");
  const json j = json::parse(in);
  CHECK(j["meta"]["command"] == "spectrum");
  CHECK(j["columns"] == json(c.header));
  REQUIRE(j["rows"].size() == c.rows.size());
  for (std::size_t r = 0; r < c.rows.size(); ++r)
    CHECK(j["rows"][r][1].get<double>() == c.num(r, "energy"));
}

TEST_CASE("matrix elements obey selection rules and conjugation") {
  const auto cfg = parse_config(default_doc());
  const auto dir = scratch("melem");
  run_subcommand("spectrum", cfg, dir, OutputFormat::csv);
  run_subcommand("melem", cfg, dir, OutputFormat::csv);
  CHECK(header_line(dir / "melem.csv") == "i,j,omega_ji,re_v1,im_v1,re_v1t,im_v1t");
  const auto spec = read_csv(dir / "spectrum.csv");
  const auto m = read_csv(dir / "melem.csv");
  REQUIRE(!m.rows.empty());
  std::map<std::pair<long long, long long>, std::size_t> at;
  for (std::size_t r = 0; r < m.rows.size(); ++r) {
    const auto i = m.integer(r, "i"), j = m.integer(r, "j");
    CHECK(spec.integer(std::size_t(i), "m_label") == spec.integer(std::size_t(j), "m_label"));
    at[{i, j}] = r;
  }
  for (const auto& [key, r] : at) {
    const auto it = at.find({key.second, key.first});
    REQUIRE(it != at.end());
    const std::size_t s = it->second;
    CHECK(m.num(r, "re_v1") == doctest::Approx(m.num(s, "re_v1")).epsilon(1e-12).scale(1e-14));
    CHECK(m.num(r, "im_v1") == doctest::Approx(-m.num(s, "im_v1")).epsilon(1e-12).scale(1e-14));
    CHECK(m.num(r, "re_v1t") == doctest::Approx(m.num(s, "re_v1t")).epsilon(1e-12).scale(1e-14));
    CHECK(m.num(r, "im_v1t") == doctest::Approx(-m.num(s, "im_v1t")).epsilon(1e-12).scale(1e-14));
    CHECK(m.num(r, "omega_ji") == doctest::Approx(-m.num(s, "omega_ji")).epsilon(1e-12).scale(1e-14));
  }
}

TEST_CASE("flat matrix element matches the ladder algebra") {
  // At zero curvature V1 = (1/2)({X,Px} + {Y,Py}) couples |0> to the m = 0
  // state (|2,0> + |0,2>)/sqrt 2 with modulus hbar.
  for (double hbar : {1.0, 0.5}) {
    json d = flat_doc(4);
    d["hbar"] = hbar;
    const auto cfg = parse_config(d);
    const auto dir = scratch("flat_melem");
    run_subcommand("spectrum", cfg, dir, OutputFormat::csv);
    run_subcommand("melem", cfg, dir, OutputFormat::csv);
    const auto spec = read_csv(dir / "spectrum.csv");
    const auto m = read_csv(dir / "melem.csv");
    bool found = false;
    for (std::size_t r = 0; r < m.rows.size(); ++r) {
      if (m.integer(r, "i") != 0) continue;
      const auto j = std::size_t(m.integer(r, "j"));
      const double mod = std::hypot(m.num(r, "re_v1"), m.num(r, "im_v1"));
      if (mod < 1e-12) continue;
      CHECK(spec.num(j, "energy") == doctest::Approx(3.0 * hbar).epsilon(1e-12));
      CHECK(spec.integer(j, "m_label") == 0);
      CHECK(mod == doctest::Approx(hbar).epsilon(1e-12));
      found = true;
    }
    CHECK(found);
  }
}

TEST_CASE("rates table") {
  const auto cfg = parse_config(default_doc());
  const auto dir = scratch("rates");
  run_subcommand("rates", cfg, dir, OutputFormat::csv);
  CHECK(header_line(dir / "rates.csv") == "i,j,mode,channel,detuning,gamma");
  const auto c = read_csv(dir / "rates.csv");
  REQUIRE(!c.rows.empty());
  for (std::size_t r = 0; r < c.rows.size(); ++r) {
    const auto& ch = c.rows[r][std::size_t(c.col("channel"))];
    CHECK((ch == "emission" || ch == "absorption"));
    CHECK(c.num(r, "gamma") >= 0.0);
  }
}

TEST_CASE("propagation without modes keeps populations") {
  json d = default_doc();
  d["background"]["modes"] = json::array();
  d["propagation"]["t_final"] = 5.0;
  d["propagation"]["initial_state_index"] = 3;
  const auto cfg = parse_config(d);
  const auto dir = scratch("prop");
  run_subcommand("propagate", cfg, dir, OutputFormat::csv);
  const auto c = read_csv(dir / "propagate.csv");
  CHECK(c.header.front() == "t");
  CHECK(c.header[1] == "pop_0");
  CHECK(c.header.back() == "norm_drift");
  REQUIRE(c.rows.size() > 2);
  for (std::size_t col = 1; col + 1 < c.header.size(); ++col)
    for (const auto& row : c.rows)
      CHECK(std::abs(std::stod(row[col]) - std::stod(c.rows[0][col])) <= 1e-12);
  CHECK(c.num(0, "pop_3") == 1.0);
  CHECK(c.num(c.rows.size() - 1, "t") == 5.0);
}

TEST_CASE("scan peaks sit on spectral gaps") {
  const auto cfg = parse_config(default_doc());
  const auto dir = scratch("scan");
  run_subcommand("spectrum", cfg, dir, OutputFormat::csv);
  run_subcommand("scan", cfg, dir, OutputFormat::csv);
  const auto spec = read_csv(dir / "spectrum.csv");
  const auto scan = read_csv(dir / "scan.csv");
  const auto peaks = read_csv(dir / "scan_peaks.csv");
  CHECK(scan.header.front() == "omega");
  CHECK(scan.header[1].rfind("p_over_t_", 0) == 0);
  CHECK(scan.rows.size() == std::size_t(cfg.scan.points));
  const double step = (cfg.scan.omega_max - cfg.scan.omega_min) / (cfg.scan.points - 1);
  REQUIRE(!peaks.rows.empty());
  const double e0 = spec.num(std::size_t(cfg.scan.source_state), "energy");
  for (std::size_t r = 0; r < peaks.rows.size(); ++r) {
    const auto j = std::size_t(peaks.integer(r, "target"));
    const double gap = (spec.num(j, "energy") - e0) / cfg.hbar;
    CHECK(std::abs(peaks.num(r, "center") - gap) <= step);
  }
}

TEST_CASE("validate passes on the default config") {
  const auto cfg = parse_config(default_doc());
  bool failed = true;
  const auto dir = scratch("validate");
  run_subcommand("validate", cfg, dir, OutputFormat::csv, &failed);
  CHECK_FALSE(failed);
  const auto c = read_csv(dir / "validate.csv");
  CHECK(c.header == std::vector<std::string>{"check", "value", "threshold", "status"});
  for (std::size_t r = 0; r < c.rows.size(); ++r)
    CHECK_MESSAGE(c.rows[r][3] == "pass", c.rows[r][0]);
  CHECK(fs::exists(dir / "manifest_validate.json"));
}

TEST_CASE("executable exit codes") {
  const auto dir = scratch("exe");
  const std::string out = " --output \"" + (dir / "out").string() + "\"";
  CHECK(run_exe("spectrum --config \"" SPHEREOSC_DEFAULT_CONFIG "\"" + out) == 0);
  CHECK(run_exe("spectrum --config \"" + (dir / "missing.json").string() + "\"" + out) == 2);
  json bad = default_doc();
  bad["basis"]["n_max"] = -1;
  CHECK(run_exe("spectrum --config \"" + write_doc(bad, dir).string() + "\"" + out) == 2);
  CHECK(run_exe("spectrum --config \"" SPHEREOSC_DEFAULT_CONFIG "\" --format yaml" + out) == 2);
  CHECK(run_exe("spectrum --config \"" SPHEREOSC_DEFAULT_CONFIG "\" --threads -2" + out) == 2);
  CHECK(run_exe("nonsense --config \"" SPHEREOSC_DEFAULT_CONFIG "\"" + out) == 2);

  // A coarse quadrature on a strongly curved sphere breaks the selection rules.
  json coarse = default_doc();
  coarse["background"]["R0"] = 2.0;
  coarse["background"]["modes"] = json::array();
  coarse["basis"]["quad_order"] = 0;
  CHECK(run_exe("validate --config \"" + write_doc(coarse, dir).string() + "\"" + out) == 3);
}
