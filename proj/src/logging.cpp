#include "sphereosc/logging.hpp"

#include <cstdlib>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace sphereosc {

void init_logging() {
  auto logger = spdlog::get("sphereosc");
  if (!logger) logger = spdlog::stderr_color_mt("sphereosc");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%H:%M:%S.%e] [%^%l%$] %v");
  auto level = spdlog::level::warn;
  if (const char* env = std::getenv("SPHEREOSC_LOG")) {
    const auto parsed = spdlog::level::from_str(env);
    // from_str maps unknown names to off; only accept it when asked for.
    if (parsed != spdlog::level::off || std::string(env) == "off") level = parsed;
  }
  spdlog::set_level(level);
}

}  // namespace sphereosc
