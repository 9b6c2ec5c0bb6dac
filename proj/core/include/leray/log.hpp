#pragma once

#include <sstream>
#include <string>

namespace leray {

enum class LogLevel { kError = 0, kInfo = 1, kDebug = 2 };

// Current threshold, read once from LERAY_STRIP_LOG (error|info|debug,
// default error).  Unrecognized values fall back to the default.
LogLevel log_level();

// Override the environment-derived level (used by tests).
void set_log_level(LogLevel level);

// Write one line "[level] message" to stderr if level passes the threshold.
void log_line(LogLevel level, const std::string& message);

namespace detail {
template <typename... Args>
std::string format_parts(Args&&... args) {
  std::ostringstream os;
  (os << ... << args);
  return os.str();
}
}  // namespace detail

template <typename... Args>
void log_error(Args&&... args) {
  log_line(LogLevel::kError, detail::format_parts(std::forward<Args>(args)...));
}

template <typename... Args>
void log_info(Args&&... args) {
  if (log_level() >= LogLevel::kInfo)
    log_line(LogLevel::kInfo, detail::format_parts(std::forward<Args>(args)...));
}

template <typename... Args>
void log_debug(Args&&... args) {
  if (log_level() >= LogLevel::kDebug)
    log_line(LogLevel::kDebug, detail::format_parts(std::forward<Args>(args)...));
}

}  // namespace leray
