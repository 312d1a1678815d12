#pragma once

#include <spdlog/logger.h>

namespace fpk {

/// Library logger ("fpklab"). Silent unless FPKLAB_LOG names a level
/// (trace, debug, info, warn, err) or a caller raises it.
spdlog::logger& logger();

}  // namespace fpk
