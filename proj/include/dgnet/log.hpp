// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdlib>
#include <iostream>
#include <string>

namespace dgnet {

enum class LogLevel { Quiet = 0, Info = 1, Debug = 2 };

inline LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("DGNET_LOG");
    if (!env) return LogLevel::Info;
    const std::string v(env);
    if (v == "quiet" || v == "0") return LogLevel::Quiet;
    if (v == "debug" || v == "2") return LogLevel::Debug;
    return LogLevel::Info;
  }();
  return level;
}

inline void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::Info) std::cerr << "[dgnet] " << msg << "\n";
}

inline void log_debug(const std::string& msg) {
  if (log_level() >= LogLevel::Debug) std::cerr << "[dgnet:debug] " << msg << "\n";
}

inline void log_warn(const std::string& msg) {
  if (log_level() >= LogLevel::Info) std::cerr << "[dgnet:warn] " << msg << "\n";
}

}  // namespace dgnet
