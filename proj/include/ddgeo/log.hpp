#pragma once

#include <string_view>

namespace ddgeo {

enum class LogLevel { Quiet = 0, Info = 1, Debug = 2 };

/// Level from DDGEO_LOG ("quiet", "info", "debug" or 0..2); read once.
[[nodiscard]] LogLevel log_level();
void set_log_level(LogLevel level);

void log_info(std::string_view message);
void log_debug(std::string_view message);

}  // namespace ddgeo
