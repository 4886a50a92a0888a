#pragma once

#include <cstdlib>
#include <iostream>
#include <string>

namespace exogate::cli {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

// EXOGATE_LOG_LEVEL = error | warn | info | debug (default warn).
inline LogLevel log_level_from_env() {
  const char* v = std::getenv("EXOGATE_LOG_LEVEL");
  if (!v) return LogLevel::Warn;
  const std::string s(v);
  if (s == "error") return LogLevel::Error;
  if (s == "info") return LogLevel::Info;
  if (s == "debug") return LogLevel::Debug;
  return LogLevel::Warn;
}

inline void log(LogLevel level, const std::string& msg) {
  static const LogLevel threshold = log_level_from_env();
  if (level > threshold) return;
  static constexpr const char* names[] = {"error", "warn", "info", "debug"};
  std::cerr << "[exogate " << names[static_cast<int>(level)] << "] " << msg << '\n';
}

}  // namespace exogate::cli
