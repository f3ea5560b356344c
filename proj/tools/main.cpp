#include <CLI11.hpp>

#include "commands.hpp"
#include "sphereosc/logging.hpp"

int main(int argc, char** argv) {
  using namespace sphereosc::cli;
  sphereosc::init_logging();

  CLI::App app{"Oscillator on a sphere with a fluctuating radius"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  Invocation inv;
  std::string config;
  std::string output;
  std::string format;
  int threads = 0;
  for (const auto& name : subcommands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "JSON run configuration")->required();
    sub->add_option("--output", output, "output directory (overrides output.directory)");
    sub->add_option("--format", format, "csv or json (overrides output.format)")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    sub->callback([&inv, name] { inv.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  inv.config = config;
  if (!output.empty()) inv.output = output;
  if (!format.empty()) inv.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
  inv.threads = threads;
  return execute(inv);
}
