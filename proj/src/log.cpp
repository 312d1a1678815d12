#include "fpklab/log.hpp"

#include <cstdlib>
#include <memory>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace fpk {

spdlog::logger& logger() {
  static std::shared_ptr<spdlog::logger> instance = [] {
    auto l = spdlog::stderr_color_mt("fpklab");
    const char* env = std::getenv("FPKLAB_LOG");
    l->set_level(env != nullptr ? spdlog::level::from_str(env) : spdlog::level::off);
    return l;
  }();
  return *instance;
}

}  // namespace fpk
